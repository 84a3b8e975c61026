#ifndef DIG_CTW_HPP
#define DIG_CTW_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "dig/series.hpp"

namespace dig {

/// Context-tree weighting over an m-ary alphabet with depth-limited
/// contexts.  Each node mixes its Krichevsky-Trofimov estimate with the
/// product of its children's weighted probabilities; block probabilities
/// are kept in natural log space.  Contexts are most-recent-first and may
/// be shorter than max_depth at the start of a sequence, in which case
/// counting and prediction stop at the context's end.
class ContextTreeModel {
public:
    ContextTreeModel(int alphabet_size, int max_depth, double prior_weight = 0.5);

    /// Weighted predictive distribution over the full alphabet.
    std::vector<double> predict(std::span<const int> context) const;

    /// Same distribution evaluated only at the requested symbols.
    std::vector<double> predict_symbols(std::span<const int> context,
                                        std::span<const int> symbols) const;

    void update(std::span<const int> context, int symbol);

    int alphabet_size() const { return alphabet_; }
    int max_depth() const { return max_depth_; }
    std::size_t node_count() const { return node_count_; }
    /// Cumulative nodes visited by update(); grows by at most
    /// max_depth + 1 per call.
    std::uint64_t touch_count() const { return touch_count_; }

private:
    struct Node {
        std::map<int, long long> counts;
        long long total = 0;
        double log_pe = 0.0;         // KT block probability of symbols seen here
        double log_pw = 0.0;         // weighted block probability
        double child_log_sum = 0.0;  // sum of children's log_pw
        std::map<int, std::unique_ptr<Node>> children;
    };

    double kt_log_step(const Node& node, int symbol) const;
    double kt_prob(const Node& node, int symbol) const;

    int alphabet_;
    int max_depth_;
    double log_prior_;      // log(prior_weight)
    double log_one_minus_;  // log(1 - prior_weight)
    Node root_;
    std::size_t node_count_ = 1;
    std::uint64_t touch_count_ = 0;
};

/// Joint result of one sequential context-tree pass; both averages weight
/// the same per-step numerator law, which keeps di <= entropy exactly.
struct CtEstimate {
    double di = 0.0;       // bits
    double entropy = 0.0;  // bits
    long long steps_used = 0;
};

/// Run the context-tree estimator once, returning the directed
/// information from x to y causally conditioned on z together with the
/// matching causally conditioned entropy of y.  Two models run in
/// lockstep: one over combined (x, y, z) symbols for the conditional of y
/// given x's full history, and one over (y, z) symbols for the
/// conditional that must not see x.  burn_in < 0 selects the default
/// max(depth, 100); the prefix is excluded from both averages.
CtEstimate estimate_ct(const QuantizedSeries& x, const QuantizedSeries& y,
                       std::span<const QuantizedSeries> z, int depth, long long burn_in = -1);

double directed_info_ct(const QuantizedSeries& x, const QuantizedSeries& y,
                        std::span<const QuantizedSeries> z, int depth, long long burn_in = -1);

double causally_conditioned_entropy_ct(const QuantizedSeries& x, const QuantizedSeries& y,
                                       std::span<const QuantizedSeries> z, int depth,
                                       long long burn_in = -1);

}  // namespace dig

#endif  // DIG_CTW_HPP
