#include "dig/ctw.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dig {

namespace {

double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    // a >= b, so the result is a + log1p(exp(b - a)) >= a.
    return a + std::log1p(std::exp(b - a));
}

void check_quantized(const QuantizedSeries& q) {
    if (q.symbols.empty()) throw std::invalid_argument("quantized series '" + q.node_id + "' is empty");
    for (int s : q.symbols) {
        if (s < 0 || s >= q.spec.levels)
            throw std::invalid_argument("quantized series '" + q.node_id +
                                        "' has symbol outside its alphabet");
    }
}

}  // namespace

ContextTreeModel::ContextTreeModel(int alphabet_size, int max_depth, double prior_weight)
    : alphabet_(alphabet_size), max_depth_(max_depth) {
    if (alphabet_size < 2) throw std::invalid_argument("context tree needs an alphabet of >= 2");
    if (max_depth < 0) throw std::invalid_argument("context tree depth must be >= 0");
    if (!(prior_weight > 0.0 && prior_weight < 1.0))
        throw std::invalid_argument("context tree prior weight must lie in (0,1)");
    log_prior_ = std::log(prior_weight);
    log_one_minus_ = std::log1p(-prior_weight);
}

double ContextTreeModel::kt_prob(const Node& node, int symbol) const {
    long long c = 0;
    if (auto it = node.counts.find(symbol); it != node.counts.end()) c = it->second;
    return (static_cast<double>(c) + 0.5) /
           (static_cast<double>(node.total) + 0.5 * static_cast<double>(alphabet_));
}

double ContextTreeModel::kt_log_step(const Node& node, int symbol) const {
    return std::log(kt_prob(node, symbol));
}

std::vector<double> ContextTreeModel::predict_symbols(std::span<const int> context,
                                                      std::span<const int> symbols) const {
    for (int s : symbols) {
        if (s < 0 || s >= alphabet_)
            throw std::invalid_argument("symbol " + std::to_string(s) + " outside alphabet");
    }
    std::size_t usable = std::min<std::size_t>(context.size(), static_cast<std::size_t>(max_depth_));
    for (std::size_t j = 0; j < usable; ++j) {
        if (context[j] < 0 || context[j] >= alphabet_)
            throw std::invalid_argument("context symbol outside alphabet");
    }

    // Existing nodes along the context path, root first.
    std::vector<const Node*> path;
    path.push_back(&root_);
    for (std::size_t j = 0; j < usable; ++j) {
        auto it = path.back()->children.find(context[j]);
        if (it == path.back()->children.end()) break;
        path.push_back(it->second.get());
    }

    std::vector<double> probs(symbols.size());
    bool subtree_missing = path.size() < usable + 1;
    if (subtree_missing) {
        // Everything below the last existing node is unseen; its weighted
        // prediction is the zero-count KT value, uniform over the alphabet.
        std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(alphabet_));
    } else {
        const Node& leaf = *path.back();
        for (std::size_t k = 0; k < symbols.size(); ++k) probs[k] = kt_prob(leaf, symbols[k]);
        path.pop_back();
    }

    // Fold the mixture upward: r_j = beta * KT_j + (1 - beta) * r_{j+1}.
    while (!path.empty()) {
        const Node& node = *path.back();
        path.pop_back();
        double beta = std::exp(log_prior_ + node.log_pe - node.log_pw);
        if (beta > 1.0) beta = 1.0;
        for (std::size_t k = 0; k < symbols.size(); ++k) {
            probs[k] = beta * kt_prob(node, symbols[k]) + (1.0 - beta) * probs[k];
        }
    }
    return probs;
}

std::vector<double> ContextTreeModel::predict(std::span<const int> context) const {
    std::vector<int> all(static_cast<std::size_t>(alphabet_));
    for (int a = 0; a < alphabet_; ++a) all[static_cast<std::size_t>(a)] = a;
    return predict_symbols(context, all);
}

void ContextTreeModel::update(std::span<const int> context, int symbol) {
    if (symbol < 0 || symbol >= alphabet_)
        throw std::invalid_argument("symbol " + std::to_string(symbol) + " outside alphabet");
    std::size_t usable = std::min<std::size_t>(context.size(), static_cast<std::size_t>(max_depth_));
    for (std::size_t j = 0; j < usable; ++j) {
        if (context[j] < 0 || context[j] >= alphabet_)
            throw std::invalid_argument("context symbol outside alphabet");
    }

    std::vector<Node*> path;
    path.push_back(&root_);
    for (std::size_t j = 0; j < usable; ++j) {
        auto& slot = path.back()->children[context[j]];
        if (!slot) {
            slot = std::make_unique<Node>();
            ++node_count_;
        }
        path.push_back(slot.get());
    }
    touch_count_ += path.size();

    // Deepest first so each parent folds its child's fresh weight.
    double child_old = 0.0, child_new = 0.0;
    for (std::size_t idx = path.size(); idx-- > 0;) {
        Node& node = *path[idx];
        node.log_pe += kt_log_step(node, symbol);
        ++node.counts[symbol];
        ++node.total;

        double old_pw = node.log_pw;
        bool deepest = (idx + 1 == path.size());
        if (!deepest) node.child_log_sum += child_new - child_old;
        if (idx == static_cast<std::size_t>(max_depth_)) {
            // Full-depth node: no children by construction.
            node.log_pw = node.log_pe;
        } else {
            node.log_pw = log_add(log_prior_ + node.log_pe, log_one_minus_ + node.child_log_sum);
        }
        child_old = old_pw;
        child_new = node.log_pw;
    }
}

namespace {

struct CombinedStream {
    std::vector<int> w;  // per-step combined (x, y, z) symbol
    std::vector<int> v;  // per-step combined (y, z) symbol, w with x dropped
    int x_size = 2, y_size = 2, z_size = 1;
    int m = 4;  // x_size * y_size * z_size
};

CombinedStream build_stream(const QuantizedSeries& x, const QuantizedSeries& y,
                            std::span<const QuantizedSeries> z) {
    check_quantized(x);
    check_quantized(y);
    for (const auto& q : z) check_quantized(q);
    std::size_t n = x.size();
    if (y.size() != n) throw std::invalid_argument("series lengths differ");
    for (const auto& q : z)
        if (q.size() != n) throw std::invalid_argument("series lengths differ");

    CombinedStream s;
    s.x_size = x.spec.levels;
    s.y_size = y.spec.levels;
    std::vector<int> z_sizes;
    for (const auto& q : z) z_sizes.push_back(q.spec.levels);
    std::uint64_t zp = alphabet_product(z_sizes);
    std::uint64_t m64 = static_cast<std::uint64_t>(s.x_size) * static_cast<std::uint64_t>(s.y_size) * zp;
    if (m64 > (1u << 24))
        throw std::invalid_argument("combined alphabet too large for the context-tree estimator");
    s.z_size = static_cast<int>(zp);
    s.m = static_cast<int>(m64);

    std::vector<int> sizes(2 + z.size());
    std::vector<int> symbols(2 + z.size());
    sizes[0] = s.x_size;
    sizes[1] = s.y_size;
    for (std::size_t k = 0; k < z.size(); ++k) sizes[2 + k] = z_sizes[k];
    s.w.resize(n);
    s.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        symbols[0] = x.symbols[i];
        symbols[1] = y.symbols[i];
        for (std::size_t k = 0; k < z.size(); ++k) symbols[2 + k] = z[k].symbols[i];
        s.w[i] = static_cast<int>(combine_symbols(symbols, sizes));
        s.v[i] = s.w[i] / s.x_size;
    }
    return s;
}

}  // namespace

CtEstimate estimate_ct(const QuantizedSeries& x, const QuantizedSeries& y,
                       std::span<const QuantizedSeries> z, int depth, long long burn_in) {
    if (depth < 0) throw std::invalid_argument("depth must be non-negative");
    CombinedStream s = build_stream(x, y, z);
    std::size_t n = s.w.size();
    if (burn_in < 0) burn_in = std::max<long long>(depth, 100);
    if (static_cast<std::size_t>(burn_in) >= n)
        throw std::invalid_argument("burn-in of " + std::to_string(burn_in) +
                                    " leaves no samples out of " + std::to_string(n));

    // The numerator conditional sees the full joint past through a model
    // over (x, y, z); the denominator must not see x at all, so it gets
    // its own model over (y, z).  A marginal of the joint model would
    // still smuggle x's history in through the shared context.
    ContextTreeModel joint_model(s.m, depth);
    ContextTreeModel marginal_model(s.y_size * s.z_size, depth);

    int nx = s.x_size, ny = s.y_size;
    std::vector<int> num_candidates(static_cast<std::size_t>(ny));
    std::vector<int> den_candidates(static_cast<std::size_t>(ny));

    std::vector<int> joint_context, marginal_context;
    joint_context.reserve(static_cast<std::size_t>(depth));
    marginal_context.reserve(static_cast<std::size_t>(depth));

    double sum_entropy = 0.0;   // -sum Pnum log2 Pden per step
    double sum_selfent = 0.0;   // entropy of Pnum per step
    long long used = 0;

    for (std::size_t i = 0; i < n; ++i) {
        // Most-recent-first contexts of up to `depth` combined symbols.
        joint_context.clear();
        marginal_context.clear();
        for (std::size_t back = 1; back <= static_cast<std::size_t>(depth) && back <= i; ++back) {
            joint_context.push_back(s.w[i - back]);
            marginal_context.push_back(s.v[i - back]);
        }

        if (static_cast<long long>(i) >= burn_in) {
            int xi = s.w[i] % nx;
            int zi = s.v[i] / ny;
            for (int yy = 0; yy < ny; ++yy) {
                num_candidates[static_cast<std::size_t>(yy)] = xi + nx * (yy + ny * zi);
                den_candidates[static_cast<std::size_t>(yy)] = yy + ny * zi;
            }
            std::vector<double> pn = joint_model.predict_symbols(joint_context, num_candidates);
            std::vector<double> pd = marginal_model.predict_symbols(marginal_context, den_candidates);

            double num_norm = 0.0, den_norm = 0.0;
            for (int yy = 0; yy < ny; ++yy) {
                num_norm += pn[static_cast<std::size_t>(yy)];
                den_norm += pd[static_cast<std::size_t>(yy)];
            }

            double step_entropy = 0.0, step_self = 0.0;
            for (int yy = 0; yy < ny; ++yy) {
                double p = pn[static_cast<std::size_t>(yy)] / num_norm;
                if (p <= 0.0) continue;
                double q = pd[static_cast<std::size_t>(yy)] / den_norm;
                step_entropy -= p * std::log2(q);
                step_self -= p * std::log2(p);
            }
            sum_entropy += step_entropy;
            sum_selfent += step_self;
            ++used;
        }

        joint_model.update(joint_context, s.w[i]);
        marginal_model.update(marginal_context, s.v[i]);
    }

    CtEstimate out;
    out.steps_used = used;
    out.entropy = sum_entropy / static_cast<double>(used);
    double di = (sum_entropy - sum_selfent) / static_cast<double>(used);
    out.di = di > 0.0 ? di : 0.0;
    return out;
}

double directed_info_ct(const QuantizedSeries& x, const QuantizedSeries& y,
                        std::span<const QuantizedSeries> z, int depth, long long burn_in) {
    return estimate_ct(x, y, z, depth, burn_in).di;
}

double causally_conditioned_entropy_ct(const QuantizedSeries& x, const QuantizedSeries& y,
                                       std::span<const QuantizedSeries> z, int depth,
                                       long long burn_in) {
    return estimate_ct(x, y, z, depth, burn_in).entropy;
}

}  // namespace dig
