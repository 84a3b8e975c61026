#ifndef DIG_GRAPH_HPP
#define DIG_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dig/series.hpp"

namespace dig {

enum class Estimator { empirical, context_tree };

struct DigConfig {
    int levels = 2;
    double alpha = 0.4;
    Estimator estimator = Estimator::context_tree;
    std::optional<int> depth_override;
    int tau_max = 48;  // clipped to n-1
    std::vector<std::string> excluded_nodes;
    QuantizerStrategy strategy = QuantizerStrategy::equal_width;
    long long ct_burn_in = -1;  // <0 selects the built-in default
    // Hard cap on the combined conditioning alphabet; exceeding it is an
    // error telling the user to exclude nodes or lower `levels` rather
    // than silently approximating.
    std::uint64_t max_hypernode_alphabet = 4096;
    // Finite-sample estimates are never exactly zero even for unrelated
    // inputs; without a floor the largest bias term would normalize to
    // 1.0 and always produce an edge.  Gains below the floor are treated
    // as no information.  Set to 0 to disable.
    double gain_floor = 0.01;
};

struct CausalGraphResult {
    std::vector<std::string> node_ids;  // non-excluded nodes, input order
    int depth = 0;
    Estimator estimator = Estimator::context_tree;
    double alpha = 0.4;
    // All matrices are indexed [from][to] over node_ids; diagonals 0.
    std::vector<std::vector<double>> info;       // bits
    std::vector<std::vector<double>> entropy;    // bits
    std::vector<std::vector<double>> gain;       // info/entropy per pair
    std::vector<std::vector<double>> gain_nor;   // |gain| / max |gain|
    std::vector<std::vector<bool>> adjacency;    // gain_nor >= alpha
    bool no_information = false;  // every gain entry was zero
    std::vector<std::string> diagnostics;
};

/// Full pipeline over the non-excluded series: depth from lag analysis
/// (unless overridden), quantization to `levels`, pairwise causally
/// conditioned estimates against the hyper-node of the remaining series,
/// normalization, and thresholding.
CausalGraphResult estimate_dig(std::span<const FlowSeries> series, const DigConfig& config);

/// info/entropy ratio; defined 0 when entropy is 0.  info > entropy
/// signals an estimator defect and throws.
double normalize_di(double info, double entropy);

/// Elementwise gain_nor >= alpha with the diagonal forced off.
std::vector<std::vector<bool>> threshold_graph(const std::vector<std::vector<double>>& gain_nor,
                                               double alpha);

/// Theoretical false-alarm / detection bounds for thresholding pairwise
/// estimates in an M-sensor network of order-k Markov processes.
struct DetectionBounds {
    int sensors = 2;     // M
    int order = 1;       // k
    int alphabet = 2;    // per-process symbol count
    long long w1 = 0;    // hypothesized number of true edges
    double i_th = 0.0;
    double r = 0.0;      // |X|^(M k) * (|X|^M - 1); chi-square dof scale
    double pf_upper = 1.0;
    double pd_lower = 0.0;
};

DetectionBounds detection_bounds(int sensors, int order, int alphabet, long long w1, double i_th);

}  // namespace dig

#endif  // DIG_GRAPH_HPP
