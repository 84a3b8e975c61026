#ifndef DIG_EMPIRICAL_HPP
#define DIG_EMPIRICAL_HPP

#include <cstdint>
#include <span>
#include <unordered_map>

#include "dig/series.hpp"

namespace dig {

/// Sparse joint counts of length-(d+1) windows of combined symbols
/// w_j = combine(x_j, y_j, z_j).  Window keys are mixed-radix in base
/// x_size*y_size*z_size with the oldest step least significant.
struct BlockCountTable {
    int depth = 0;
    int x_size = 2;
    int y_size = 2;
    int z_size = 1;  // product of conditioned alphabets; 1 when unconditioned
    std::unordered_map<std::uint64_t, long long> counts;
    long long total = 0;
};

/// Count every window (w_{i-d}, ..., w_i); z is the per-step combination
/// of all conditioned series (unit alphabet when empty).  Needs n > d.
BlockCountTable count_blocks(const QuantizedSeries& x, const QuantizedSeries& y,
                             std::span<const QuantizedSeries> z, int depth);

/// Plug-in estimate of I(Y_{d+1}; X^{d+1} | Y^d, Z^{d+1}) in bits.
/// Always >= 0 and never exceeds causally_conditioned_entropy_emp of the
/// same table, exactly as computed.
double conditional_directed_info_emp(const BlockCountTable& table);

/// Plug-in estimate of H(Y_{d+1} | Y^d, Z^{d+1}) in bits, >= 0.
double causally_conditioned_entropy_emp(const BlockCountTable& table);

}  // namespace dig

#endif  // DIG_EMPIRICAL_HPP
