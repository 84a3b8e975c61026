#include "dig/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "dig/ctw.hpp"
#include "dig/empirical.hpp"
#include "dig/gammainc.hpp"
#include "dig/lag.hpp"

namespace dig {

namespace {

std::vector<std::vector<double>> zero_matrix(std::size_t m) {
    return std::vector<std::vector<double>>(m, std::vector<double>(m, 0.0));
}

}  // namespace

double normalize_di(double info, double entropy) {
    if (info < 0.0 || entropy < 0.0)
        throw std::invalid_argument("normalize_di: negative information or entropy");
    if (entropy == 0.0) return 0.0;
    if (info > entropy)
        throw std::logic_error("normalize_di: information exceeds entropy, estimator defect");
    return info / entropy;
}

std::vector<std::vector<bool>> threshold_graph(const std::vector<std::vector<double>>& gain_nor,
                                               double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
    std::size_t m = gain_nor.size();
    std::vector<std::vector<bool>> adjacency(m, std::vector<bool>(m, false));
    for (std::size_t i = 0; i < m; ++i) {
        if (gain_nor[i].size() != m) throw std::invalid_argument("gain matrix is not square");
        for (std::size_t j = 0; j < m; ++j) {
            if (gain_nor[i][j] < 0.0 || gain_nor[i][j] > 1.0)
                throw std::invalid_argument("gain matrix entries must lie in [0, 1]");
            adjacency[i][j] = (i != j) && (gain_nor[i][j] >= alpha);
        }
    }
    return adjacency;
}

CausalGraphResult estimate_dig(std::span<const FlowSeries> series, const DigConfig& config) {
    if (series.size() < 2) throw std::invalid_argument("estimate_dig needs at least 2 series");
    if (!(config.alpha > 0.0 && config.alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in (0, 1]");
    if (config.levels < 2) throw std::invalid_argument("levels must be at least 2");
    if (config.gain_floor < 0.0) throw std::invalid_argument("gain_floor must be non-negative");

    std::set<std::string> ids;
    for (const auto& s : series) {
        validate(s);
        if (!ids.insert(s.node_id).second)
            throw std::invalid_argument("duplicate node id '" + s.node_id + "'");
        if (s.size() != series.front().size())
            throw std::invalid_argument("estimate_dig: series lengths differ");
    }
    for (const auto& ex : config.excluded_nodes) {
        if (!ids.count(ex))
            throw std::invalid_argument("excluded node '" + ex + "' is not in the dataset");
    }

    std::vector<const FlowSeries*> kept;
    for (const auto& s : series) {
        bool excluded = std::find(config.excluded_nodes.begin(), config.excluded_nodes.end(),
                                  s.node_id) != config.excluded_nodes.end();
        if (!excluded) kept.push_back(&s);
    }
    std::size_t m = kept.size();
    if (m < 2) throw std::invalid_argument("fewer than 2 nodes remain after exclusion");
    std::size_t n = kept.front()->size();

    CausalGraphResult result;
    result.estimator = config.estimator;
    result.alpha = config.alpha;
    for (const auto* s : kept) result.node_ids.push_back(s->node_id);

    // Conditioning alphabet grows as levels^(M-2); refuse configurations
    // that would silently explode.
    std::uint64_t hyper = 1;
    for (std::size_t k = 0; k + 2 < m; ++k) {
        hyper *= static_cast<std::uint64_t>(config.levels);
        if (hyper > config.max_hypernode_alphabet)
            throw std::invalid_argument(
                "hyper-node alphabet exceeds the configured cap of " +
                std::to_string(config.max_hypernode_alphabet) +
                "; exclude nodes or reduce quantization levels");
    }

    if (config.depth_override) {
        result.depth = *config.depth_override;
        if (result.depth < 0) throw std::invalid_argument("depth must be non-negative");
    } else {
        std::vector<FlowSeries> owned;
        owned.reserve(m);
        for (const auto* s : kept) owned.push_back(*s);
        int tau_max = std::min<int>(config.tau_max, static_cast<int>(n) - 1);
        if (tau_max < 0) throw std::invalid_argument("series too short for lag analysis");
        result.depth = estimate_depth(owned, tau_max);
    }
    if (n <= static_cast<std::size_t>(result.depth))
        throw std::invalid_argument("series shorter than the estimation depth");

    std::vector<QuantizedSeries> quantized;
    quantized.reserve(m);
    for (const auto* s : kept)
        quantized.push_back(quantize(*s, fit_quantizer(*s, config.levels, config.strategy)));

    result.info = zero_matrix(m);
    result.entropy = zero_matrix(m);
    result.gain = zero_matrix(m);
    result.gain_nor = zero_matrix(m);

    for (std::size_t from = 0; from < m; ++from) {
        for (std::size_t to = 0; to < m; ++to) {
            if (from == to) continue;
            std::vector<QuantizedSeries> rest;
            rest.reserve(m - 2);
            for (std::size_t k = 0; k < m; ++k)
                if (k != from && k != to) rest.push_back(quantized[k]);

            double info = 0.0, entropy = 0.0;
            if (config.estimator == Estimator::empirical) {
                BlockCountTable table =
                    count_blocks(quantized[from], quantized[to], rest, result.depth);
                info = conditional_directed_info_emp(table);
                entropy = causally_conditioned_entropy_emp(table);
            } else {
                CtEstimate est = estimate_ct(quantized[from], quantized[to], rest, result.depth,
                                             config.ct_burn_in);
                info = est.di;
                entropy = est.entropy;
            }
            result.info[from][to] = info;
            result.entropy[from][to] = entropy;
            if (entropy == 0.0)
                result.diagnostics.push_back("pair " + result.node_ids[from] + "->" +
                                             result.node_ids[to] +
                                             ": zero residual entropy, gain set to 0");
            result.gain[from][to] = normalize_di(info, entropy);
        }
    }

    if (config.gain_floor > 0.0) {
        std::size_t floored = 0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (i != j && result.gain[i][j] != 0.0 &&
                    std::abs(result.gain[i][j]) < config.gain_floor) {
                    result.gain[i][j] = 0.0;
                    ++floored;
                }
            }
        }
        if (floored > 0)
            result.diagnostics.push_back(std::to_string(floored) + " gain entries below " +
                                         std::to_string(config.gain_floor) +
                                         " treated as no information");
    }

    double max_gain = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) max_gain = std::max(max_gain, std::abs(result.gain[i][j]));

    if (max_gain == 0.0) {
        result.no_information = true;
        result.diagnostics.push_back("no pair carries information; graph is empty");
    } else {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                result.gain_nor[i][j] = std::abs(result.gain[i][j]) / max_gain;
    }
    result.adjacency = threshold_graph(result.gain_nor, config.alpha);
    return result;
}

DetectionBounds detection_bounds(int sensors, int order, int alphabet, long long w1, double i_th) {
    if (sensors < 2) throw std::invalid_argument("detection_bounds: need at least 2 sensors");
    if (order < 1) throw std::invalid_argument("detection_bounds: Markov order must be >= 1");
    if (alphabet < 2) throw std::invalid_argument("detection_bounds: alphabet must be >= 2");
    long long max_edges = static_cast<long long>(sensors) * (sensors - 1);
    if (w1 < 0 || w1 > max_edges)
        throw std::invalid_argument("detection_bounds: W1 must lie in [0, M(M-1)]");
    if (i_th < 0.0) throw std::invalid_argument("detection_bounds: threshold must be >= 0");

    DetectionBounds b;
    b.sensors = sensors;
    b.order = order;
    b.alphabet = alphabet;
    b.w1 = w1;
    b.i_th = i_th;
    double a = static_cast<double>(alphabet);
    double am = std::pow(a, static_cast<double>(sensors));
    b.r = std::pow(a, static_cast<double>(sensors) * static_cast<double>(order)) * (am - 1.0);

    double p_g = reg_lower_gamma(b.r / 2.0, i_th);
    double w0 = static_cast<double>(max_edges - w1);
    b.pf_upper = std::clamp(1.0 - p_g, 0.0, 1.0);
    b.pd_lower = std::clamp(1.0 - w0 * (1.0 - p_g), 0.0, 1.0);
    return b;
}

}  // namespace dig
