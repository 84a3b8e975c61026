#ifndef DIG_SIM_POISSON_HPP
#define DIG_SIM_POISSON_HPP

#include <cstdint>
#include <vector>

#include "dig/series.hpp"

namespace dig {

/// Queue of sensors in sequence fed by a Poisson input whose mean
/// alternates between two levels.  With `instantaneous` unset every car
/// reaches the next sensor one step later; set, each car independently
/// skips ahead within the same step with probability p_fast (and may
/// cascade through several sensors).
struct PoissonChainConfig {
    int num_sensors = 4;
    std::size_t n = 100000;
    double lambda_high = 5.0;
    double lambda_low = 1.0;
    int period = 20;  // samples per mean phase
    double noise_mean = 1.0;
    bool instantaneous = false;
    double p_fast = 0.5;
    std::uint64_t seed = 1;
};

std::vector<FlowSeries> generate_chain(const PoissonChainConfig& config);

/// Two independent alternating-mean Poisson inputs joining at a third
/// sensor.  Cars from the first input arrive instantaneously with
/// probability p_fast (else one step late); cars from the second always
/// take one step.
struct PoissonMergeConfig {
    std::size_t n = 100000;
    double lambda_high = 5.0;
    double lambda_low = 1.0;
    int period = 20;
    double noise_mean = 1.0;
    double p_fast = 0.5;
    std::uint64_t seed = 1;
};

std::vector<FlowSeries> generate_merge(const PoissonMergeConfig& config);

/// Coupled linear recursions driven by Poisson noise:
///   x_i = a1 * z_{i-1} + N_i
///   y_i = a2 * x_{i-1} + a3 * z_i + N'_i
///   z_i = a4 * z_{i-2} + N''_i
/// Run in reals; the FlowSeries outputs are rounded to nearest integer.
struct LinearPoissonCoeffs {
    double a1 = 0.5, a2 = 0.5, a3 = 0.5, a4 = 0.4;  // need |a4| < 1
    double noise_mean_x = 1.0;
    double noise_mean_y = 1.0;
    double noise_mean_z = 1.0;
    std::size_t n = 100000;
    std::uint64_t seed = 1;
};

struct LinearPoissonOutput {
    std::vector<FlowSeries> rounded;          // order x, y, z
    std::vector<std::vector<double>> raw;     // same order, pre-rounding
};

LinearPoissonOutput generate_linear_model(const LinearPoissonCoeffs& coeffs);

/// Noisy delayed reads of one smoothed Poisson source: output j is the
/// source delayed by shifts[j] plus fresh Poisson noise.  The source is a
/// `window`-wide moving sum of i.i.d. Poisson draws, so its autocovariance
/// is a strict triangle vanishing beyond `window`: the cross-covariance of
/// an ordered output pair peaks at exactly max(shifts[k]-shifts[j], 0).
/// A lag scan over all ordered pairs therefore lands on the spread of
/// `shifts` at any scan horizon; a periodic source would not give that,
/// because reversed pairs re-align where the wave repeats.
struct ShiftedCopiesConfig {
    std::vector<int> shifts = {0, 1, 5};  // non-negative, per output
    std::size_t n = 20000;
    double innovation_mean = 1.0;  // mean of each smoothed draw
    int window = 8;                // moving-sum width, > spread of shifts
    double noise_mean = 1.0;
    std::uint64_t seed = 1;
};

std::vector<FlowSeries> generate_shifted_copies(const ShiftedCopiesConfig& config);

/// Seven-sensor fixture with a hidden common driver: s4 reads the driver
/// immediately, s7 one step later, s6 two steps later; the rest are
/// independent noise.  With s7 observed it soaks up the driver's
/// influence on s6; dropping s7 makes a spurious s4 -> s6 link appear.
struct HiddenDriverConfig {
    std::size_t n = 100000;
    double lambda_high = 5.0;
    double lambda_low = 1.0;
    int period = 20;
    double noise_mean = 1.0;
    std::uint64_t seed = 1;
};

std::vector<FlowSeries> generate_hidden_driver(const HiddenDriverConfig& config);

}  // namespace dig

#endif  // DIG_SIM_POISSON_HPP
