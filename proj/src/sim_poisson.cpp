#include "dig/sim_poisson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dig/rng.hpp"

namespace dig {

namespace {

double phase_mean(std::size_t t, int period, double high, double low) {
    return ((t / static_cast<std::size_t>(period)) % 2 == 0) ? high : low;
}

void check_common(std::size_t n, double high, double low, int period, double noise_mean) {
    if (n == 0) throw std::invalid_argument("need at least one sample");
    if (high < 0.0 || low < 0.0) throw std::invalid_argument("input means must be non-negative");
    if (period < 1) throw std::invalid_argument("phase period must be positive");
    if (noise_mean < 0.0) throw std::invalid_argument("noise mean must be non-negative");
}

std::vector<FlowSeries> make_series(int count, std::size_t n) {
    std::vector<FlowSeries> out(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        out[static_cast<std::size_t>(j)].node_id = "s" + std::to_string(j + 1);
        out[static_cast<std::size_t>(j)].samples.reserve(n);
    }
    return out;
}

}  // namespace

std::vector<FlowSeries> generate_chain(const PoissonChainConfig& config) {
    check_common(config.n, config.lambda_high, config.lambda_low, config.period,
                 config.noise_mean);
    if (config.num_sensors < 2) throw std::invalid_argument("chain needs at least 2 sensors");
    if (config.p_fast < 0.0 || config.p_fast > 1.0)
        throw std::invalid_argument("p_fast must lie in [0, 1]");

    int m = config.num_sensors;
    Rng input = Rng::derive(config.seed, "chain.input");
    std::vector<Rng> noise, split;
    for (int j = 0; j < m; ++j)
        noise.push_back(Rng::derive(config.seed, "chain.noise." + std::to_string(j + 1)));
    if (config.instantaneous)
        for (int j = 0; j < m; ++j)
            split.push_back(Rng::derive(config.seed, "chain.split." + std::to_string(j + 1)));

    std::vector<FlowSeries> out = make_series(m, config.n);

    // present[j] = cars physically at sensor j this step; slow_prev[j] =
    // cars that left sensor j last step but travel at ordinary speed.
    std::vector<long> present(static_cast<std::size_t>(m), 0);
    std::vector<long> prev_present(static_cast<std::size_t>(m), 0);
    std::vector<long> slow_prev(static_cast<std::size_t>(m), 0);

    for (std::size_t t = 0; t < config.n; ++t) {
        double lambda = phase_mean(t, config.period, config.lambda_high, config.lambda_low);
        if (config.instantaneous) {
            std::vector<long> slow_curr(static_cast<std::size_t>(m), 0);
            for (int j = 0; j < m; ++j) {
                long arrivals;
                if (j == 0) {
                    arrivals = input.poisson(lambda);
                } else {
                    // Fast movers from the upstream sensor this same step
                    // plus its ordinary movers from the previous step.
                    long upstream = present[static_cast<std::size_t>(j - 1)];
                    long fast = split[static_cast<std::size_t>(j - 1)].binomial(upstream,
                                                                                config.p_fast);
                    slow_curr[static_cast<std::size_t>(j - 1)] = upstream - fast;
                    arrivals = fast + slow_prev[static_cast<std::size_t>(j - 1)];
                }
                present[static_cast<std::size_t>(j)] = arrivals;
            }
            slow_prev = slow_curr;
        } else {
            for (int j = m - 1; j >= 1; --j)
                present[static_cast<std::size_t>(j)] = prev_present[static_cast<std::size_t>(j - 1)];
            present[0] = input.poisson(lambda);
            prev_present = present;
        }
        for (int j = 0; j < m; ++j) {
            long reading = present[static_cast<std::size_t>(j)] +
                           noise[static_cast<std::size_t>(j)].poisson(config.noise_mean);
            out[static_cast<std::size_t>(j)].samples.push_back(reading);
        }
    }
    return out;
}

std::vector<FlowSeries> generate_merge(const PoissonMergeConfig& config) {
    check_common(config.n, config.lambda_high, config.lambda_low, config.period,
                 config.noise_mean);
    if (config.p_fast < 0.0 || config.p_fast > 1.0)
        throw std::invalid_argument("p_fast must lie in [0, 1]");

    Rng in1 = Rng::derive(config.seed, "merge.input.1");
    Rng in2 = Rng::derive(config.seed, "merge.input.2");
    Rng splitter = Rng::derive(config.seed, "merge.split");
    Rng n1 = Rng::derive(config.seed, "merge.noise.1");
    Rng n2 = Rng::derive(config.seed, "merge.noise.2");
    Rng n3 = Rng::derive(config.seed, "merge.noise.3");

    std::vector<FlowSeries> out = make_series(3, config.n);

    long slow1_prev = 0;  // first input's ordinary movers from last step
    long cars2_prev = 0;  // second input's cars, always one step behind
    for (std::size_t t = 0; t < config.n; ++t) {
        double lambda = phase_mean(t, config.period, config.lambda_high, config.lambda_low);
        long cars1 = in1.poisson(lambda);
        long cars2 = in2.poisson(lambda);
        long fast1 = splitter.binomial(cars1, config.p_fast);
        long at_merge = fast1 + slow1_prev + cars2_prev;
        slow1_prev = cars1 - fast1;
        cars2_prev = cars2;

        out[0].samples.push_back(cars1 + n1.poisson(config.noise_mean));
        out[1].samples.push_back(cars2 + n2.poisson(config.noise_mean));
        out[2].samples.push_back(at_merge + n3.poisson(config.noise_mean));
    }
    return out;
}

LinearPoissonOutput generate_linear_model(const LinearPoissonCoeffs& coeffs) {
    if (coeffs.n == 0) throw std::invalid_argument("need at least one sample");
    if (std::abs(coeffs.a4) >= 1.0)
        throw std::invalid_argument("|a4| must be below 1 for a stable recursion");
    if (coeffs.a1 < 0.0 || coeffs.a2 < 0.0 || coeffs.a3 < 0.0 || coeffs.a4 < 0.0)
        throw std::invalid_argument("coefficients must be non-negative to keep counts non-negative");
    if (coeffs.noise_mean_x < 0.0 || coeffs.noise_mean_y < 0.0 || coeffs.noise_mean_z < 0.0)
        throw std::invalid_argument("noise means must be non-negative");

    Rng nx = Rng::derive(coeffs.seed, "linear.noise.x");
    Rng ny = Rng::derive(coeffs.seed, "linear.noise.y");
    Rng nz = Rng::derive(coeffs.seed, "linear.noise.z");

    LinearPoissonOutput out;
    out.raw.assign(3, {});
    for (auto& r : out.raw) r.reserve(coeffs.n);

    double z1 = 0.0, z2 = 0.0;  // z_{i-1}, z_{i-2}
    double x1 = 0.0;            // x_{i-1}
    for (std::size_t i = 0; i < coeffs.n; ++i) {
        double z = coeffs.a4 * z2 + static_cast<double>(nz.poisson(coeffs.noise_mean_z));
        double x = coeffs.a1 * z1 + static_cast<double>(nx.poisson(coeffs.noise_mean_x));
        double y = coeffs.a2 * x1 + coeffs.a3 * z +
                   static_cast<double>(ny.poisson(coeffs.noise_mean_y));
        out.raw[0].push_back(x);
        out.raw[1].push_back(y);
        out.raw[2].push_back(z);
        z2 = z1;
        z1 = z;
        x1 = x;
    }

    const char* names[3] = {"x", "y", "z"};
    out.rounded.resize(3);
    for (int k = 0; k < 3; ++k) {
        out.rounded[static_cast<std::size_t>(k)].node_id = names[k];
        auto& samples = out.rounded[static_cast<std::size_t>(k)].samples;
        samples.reserve(coeffs.n);
        for (double v : out.raw[static_cast<std::size_t>(k)]) samples.push_back(std::llround(v));
    }
    return out;
}

std::vector<FlowSeries> generate_shifted_copies(const ShiftedCopiesConfig& config) {
    if (config.n == 0) throw std::invalid_argument("need at least one sample");
    if (config.innovation_mean <= 0.0)
        throw std::invalid_argument("innovation mean must be positive");
    if (config.noise_mean < 0.0) throw std::invalid_argument("noise mean must be non-negative");
    if (config.shifts.size() < 2) throw std::invalid_argument("need at least 2 shifted outputs");
    int max_shift = config.shifts.front();
    int min_shift = config.shifts.front();
    for (int s : config.shifts) {
        if (s < 0) throw std::invalid_argument("shifts must be non-negative");
        max_shift = std::max(max_shift, s);
        min_shift = std::min(min_shift, s);
    }
    if (config.n <= static_cast<std::size_t>(max_shift))
        throw std::invalid_argument("series shorter than the largest shift");
    if (config.window <= max_shift - min_shift)
        throw std::invalid_argument("smoothing window must exceed the shift spread");

    // One long source track; output j reads it `max_shift - shifts[j]`
    // samples in, so every output is a fully overlapping view and pairwise
    // relations hold from the first sample.
    std::size_t width = static_cast<std::size_t>(config.window);
    std::size_t span = config.n + static_cast<std::size_t>(max_shift);
    Rng src_rng = Rng::derive(config.seed, "shift.source");
    std::vector<long> innovations(span + width - 1);
    for (auto& e : innovations) e = src_rng.poisson(config.innovation_mean);
    std::vector<long> source(span);
    long acc = 0;
    for (std::size_t k = 0; k + 1 < width; ++k) acc += innovations[k];
    for (std::size_t t = 0; t < span; ++t) {
        acc += innovations[t + width - 1];
        source[t] = acc;
        acc -= innovations[t];
    }

    std::vector<FlowSeries> out = make_series(static_cast<int>(config.shifts.size()), config.n);
    for (std::size_t j = 0; j < config.shifts.size(); ++j) {
        Rng noise = Rng::derive(config.seed, "shift.noise." + std::to_string(j + 1));
        std::size_t offset = static_cast<std::size_t>(max_shift - config.shifts[j]);
        for (std::size_t t = 0; t < config.n; ++t)
            out[j].samples.push_back(source[offset + t] + noise.poisson(config.noise_mean));
    }
    return out;
}

std::vector<FlowSeries> generate_hidden_driver(const HiddenDriverConfig& config) {
    check_common(config.n, config.lambda_high, config.lambda_low, config.period,
                 config.noise_mean);
    if (config.n < 3) throw std::invalid_argument("need at least 3 samples");

    Rng driver_rng = Rng::derive(config.seed, "hidden.driver");
    std::vector<long> driver(config.n);
    for (std::size_t t = 0; t < config.n; ++t)
        driver[t] = driver_rng.poisson(
            phase_mean(t, config.period, config.lambda_high, config.lambda_low));

    std::vector<FlowSeries> out = make_series(7, config.n);
    // Sensors s4, s7, s6 see the driver at delays 0, 1, 2; everything
    // else is unrelated traffic with a flat mean.
    double flat = 0.5 * (config.lambda_high + config.lambda_low);
    for (int j = 0; j < 7; ++j) {
        Rng noise = Rng::derive(config.seed, "hidden.noise." + std::to_string(j + 1));
        int delay = -1;
        if (j + 1 == 4) delay = 0;
        if (j + 1 == 7) delay = 1;
        if (j + 1 == 6) delay = 2;
        for (std::size_t t = 0; t < config.n; ++t) {
            long value;
            if (delay < 0) {
                value = noise.poisson(flat);
            } else {
                long base = (t >= static_cast<std::size_t>(delay))
                                ? driver[t - static_cast<std::size_t>(delay)]
                                : 0;
                value = base + noise.poisson(config.noise_mean);
            }
            out[static_cast<std::size_t>(j)].samples.push_back(value);
        }
    }
    return out;
}

}  // namespace dig
