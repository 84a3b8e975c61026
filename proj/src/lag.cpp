#include "dig/lag.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace dig {

namespace {

double mean_of(const std::vector<std::int64_t>& v, std::size_t begin, std::size_t count) {
    double sum = 0.0;
    for (std::size_t i = begin; i < begin + count; ++i) sum += static_cast<double>(v[i]);
    return sum / static_cast<double>(count);
}

}  // namespace

LagProfile cross_covariance(const FlowSeries& x, const FlowSeries& y, int tau_max) {
    validate(x);
    validate(y);
    if (x.size() != y.size())
        throw std::invalid_argument("cross_covariance: series lengths differ (" +
                                    std::to_string(x.size()) + " vs " + std::to_string(y.size()) +
                                    ")");
    std::size_t n = x.size();
    if (tau_max < 0 || static_cast<std::size_t>(tau_max) >= n)
        throw std::invalid_argument("cross_covariance: tau_max must lie in [0, n)");

    LagProfile profile;
    profile.from_id = x.node_id;
    profile.to_id = y.node_id;
    profile.values.assign(static_cast<std::size_t>(tau_max) + 1, 0.0);

    double mu_x = mean_of(x.samples, 0, n);
    double mu_y = mean_of(y.samples, 0, n);

    for (int tau = 0; tau <= tau_max; ++tau) {
        std::size_t window = n - static_cast<std::size_t>(tau);
        double sum = 0.0;
        for (std::size_t i = 0; i < window; ++i) {
            sum += (static_cast<double>(x.samples[i]) - mu_x) *
                   (static_cast<double>(y.samples[i + static_cast<std::size_t>(tau)]) - mu_y);
        }
        profile.values[static_cast<std::size_t>(tau)] = sum / static_cast<double>(window);
    }

    profile.peak_lag = 0;
    double best = std::abs(profile.values[0]);
    for (int tau = 1; tau <= tau_max; ++tau) {
        double mag = std::abs(profile.values[static_cast<std::size_t>(tau)]);
        if (mag > best) {
            best = mag;
            profile.peak_lag = tau;
        }
    }
    return profile;
}

int estimate_depth(std::span<const FlowSeries> series, int tau_max) {
    if (series.size() < 2) throw std::invalid_argument("estimate_depth needs at least 2 series");
    int depth = 0;
    for (std::size_t m = 0; m < series.size(); ++m) {
        for (std::size_t l = 0; l < series.size(); ++l) {
            if (m == l) continue;
            LagProfile profile = cross_covariance(series[m], series[l], tau_max);
            depth = std::max(depth, profile.peak_lag);
        }
    }
    return depth;
}

double coefficient_of_determination(const FlowSeries& x, const FlowSeries& y, int tau) {
    validate(x);
    validate(y);
    if (x.size() != y.size())
        throw std::invalid_argument("coefficient_of_determination: series lengths differ");
    std::size_t n = x.size();
    if (tau < 0 || static_cast<std::size_t>(tau) >= n)
        throw std::invalid_argument("coefficient_of_determination: tau must lie in [0, n)");

    std::size_t window = n - static_cast<std::size_t>(tau);
    double mu_x = mean_of(x.samples, 0, window);
    double mu_y = mean_of(y.samples, static_cast<std::size_t>(tau), window);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < window; ++i) {
        double dx = static_cast<double>(x.samples[i]) - mu_x;
        double dy = static_cast<double>(y.samples[i + static_cast<std::size_t>(tau)]) - mu_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument(
            "coefficient_of_determination: zero standard deviation in the overlap window");
    double r = sxy / std::sqrt(sxx * syy);
    double cod = r * r;
    // Rounding can push r*r a hair above 1.
    if (cod > 1.0) cod = 1.0;
    return cod;
}

}  // namespace dig
