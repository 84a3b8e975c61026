#ifndef DIG_LAG_HPP
#define DIG_LAG_HPP

#include <span>
#include <string>
#include <vector>

#include "dig/series.hpp"

namespace dig {

/// Lagged covariance profile between an ordered sensor pair.
struct LagProfile {
    std::string from_id;
    std::string to_id;
    std::vector<double> values;  // indexed by lag tau = 0..tau_max
    int peak_lag = 0;            // smallest tau achieving max |values|
};

/// values[tau] = (1/(n-tau)) * sum_i (x_i - mu_x)(y_{i+tau} - mu_y) with
/// full-series sample means, so a copy of x delayed by d in y peaks at
/// tau = d.  Constant inputs give an all-zero profile with peak_lag 0.
LagProfile cross_covariance(const FlowSeries& x, const FlowSeries& y, int tau_max);

/// Maximum peak lag over all ordered pairs (m, l), m != l.  Scanning both
/// directions stands in for negative lags.
int estimate_depth(std::span<const FlowSeries> series, int tau_max);

/// Squared lag-tau Pearson correlation between x_i and y_{i+tau}, moments
/// taken over the overlapping window of length n-tau.  Throws if either
/// windowed slice has zero standard deviation.
double coefficient_of_determination(const FlowSeries& x, const FlowSeries& y, int tau);

}  // namespace dig

#endif  // DIG_LAG_HPP
