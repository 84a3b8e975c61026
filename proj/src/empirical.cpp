#include "dig/empirical.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dig {

namespace {

void check_quantized(const QuantizedSeries& q) {
    if (q.symbols.empty()) throw std::invalid_argument("quantized series '" + q.node_id + "' is empty");
    for (int s : q.symbols) {
        if (s < 0 || s >= q.spec.levels)
            throw std::invalid_argument("quantized series '" + q.node_id +
                                        "' has symbol outside its alphabet");
    }
}

struct DecodedBlock {
    std::vector<int> x, y, z;  // oldest first, each of length depth+1
};

DecodedBlock decode_key(std::uint64_t key, const BlockCountTable& t) {
    std::uint64_t m = static_cast<std::uint64_t>(t.x_size) * static_cast<std::uint64_t>(t.y_size) *
                      static_cast<std::uint64_t>(t.z_size);
    DecodedBlock block;
    int steps = t.depth + 1;
    block.x.reserve(steps);
    block.y.reserve(steps);
    block.z.reserve(steps);
    std::array<int, 3> sizes{t.x_size, t.y_size, t.z_size};
    for (int j = 0; j < steps; ++j) {
        std::uint64_t w = key % m;
        key /= m;
        auto parts = split_symbols(w, sizes);
        block.x.push_back(parts[0]);
        block.y.push_back(parts[1]);
        block.z.push_back(parts[2]);
    }
    if (key != 0) throw std::invalid_argument("block key outside the table's alphabet");
    return block;
}

void check_table(const BlockCountTable& t) {
    if (t.depth < 0) throw std::invalid_argument("block table has negative depth");
    if (t.x_size < 1 || t.y_size < 1 || t.z_size < 1)
        throw std::invalid_argument("block table has non-positive alphabet size");
    long long sum = 0;
    for (const auto& [key, count] : t.counts) {
        if (count < 1) throw std::invalid_argument("block table stores a non-positive count");
        sum += count;
    }
    if (sum != t.total) throw std::invalid_argument("block table total does not match its counts");
}

/// Marginal maps for the two conditional entropies behind the estimate:
///   xyzm: (x^{d+1}, y^d, z^{d+1})   -- full minus the newest y
///   yz:   (y^{d+1}, z^{d+1})        -- all x dropped
///   yzm:  (y^d, z^{d+1})            -- all x and the newest y dropped
struct Marginals {
    std::unordered_map<std::uint64_t, long long> xyzm, yz, yzm;
};

Marginals build_marginals(const BlockCountTable& t) {
    Marginals m;
    std::uint64_t mw = static_cast<std::uint64_t>(t.x_size) * static_cast<std::uint64_t>(t.y_size) *
                       static_cast<std::uint64_t>(t.z_size);
    std::uint64_t myz = static_cast<std::uint64_t>(t.y_size) * static_cast<std::uint64_t>(t.z_size);
    for (const auto& [key, count] : t.counts) {
        DecodedBlock b = decode_key(key, t);
        int d = t.depth;

        std::uint64_t key_xyzm = 0, place = 1;
        for (int j = 0; j < d; ++j) {
            std::uint64_t w = static_cast<std::uint64_t>(b.x[j]) +
                              static_cast<std::uint64_t>(t.x_size) *
                                  (static_cast<std::uint64_t>(b.y[j]) +
                                   static_cast<std::uint64_t>(t.y_size) *
                                       static_cast<std::uint64_t>(b.z[j]));
            key_xyzm += w * place;
            place *= mw;
        }
        key_xyzm += (static_cast<std::uint64_t>(b.x[d]) +
                     static_cast<std::uint64_t>(t.x_size) * static_cast<std::uint64_t>(b.z[d])) *
                    place;

        std::uint64_t key_yz = 0, key_yzm = 0;
        place = 1;
        for (int j = 0; j < d; ++j) {
            std::uint64_t pair = static_cast<std::uint64_t>(b.y[j]) +
                                 static_cast<std::uint64_t>(t.y_size) *
                                     static_cast<std::uint64_t>(b.z[j]);
            key_yz += pair * place;
            key_yzm += pair * place;
            place *= myz;
        }
        key_yz += (static_cast<std::uint64_t>(b.y[d]) +
                   static_cast<std::uint64_t>(t.y_size) * static_cast<std::uint64_t>(b.z[d])) *
                  place;
        key_yzm += static_cast<std::uint64_t>(b.z[d]) * place;

        m.xyzm[key_xyzm] += count;
        m.yz[key_yz] += count;
        m.yzm[key_yzm] += count;
    }
    return m;
}

/// H(Y_{d+1} | Y^d, Z^{d+1}) under the empirical law, in bits.
double entropy_given_past(const BlockCountTable& t, const Marginals& m) {
    double sum = 0.0;
    std::uint64_t myz = static_cast<std::uint64_t>(t.y_size) * static_cast<std::uint64_t>(t.z_size);
    std::uint64_t place = 1;
    for (int j = 0; j < t.depth; ++j) place *= myz;
    for (const auto& [key_yz, count] : m.yz) {
        // Rebuild the reduced key by swapping the newest (y, z) slot for z.
        std::uint64_t prefix = key_yz % place;
        std::uint64_t last = key_yz / place;
        std::uint64_t z_last = last / static_cast<std::uint64_t>(t.y_size);
        std::uint64_t key_yzm = prefix + z_last * place;
        long long denom = m.yzm.at(key_yzm);
        // count <= denom, so each term is >= 0.
        sum += static_cast<double>(count) *
               std::log2(static_cast<double>(denom) / static_cast<double>(count));
    }
    return sum / static_cast<double>(t.total);
}

/// H(Y_{d+1} | X^{d+1}, Y^d, Z^{d+1}) under the empirical law, in bits.
double entropy_given_all(const BlockCountTable& t, const Marginals& m) {
    double sum = 0.0;
    std::uint64_t mw = static_cast<std::uint64_t>(t.x_size) * static_cast<std::uint64_t>(t.y_size) *
                       static_cast<std::uint64_t>(t.z_size);
    for (const auto& [key, count] : t.counts) {
        DecodedBlock b = decode_key(key, t);
        int d = t.depth;
        std::uint64_t key_xyzm = 0, place = 1;
        for (int j = 0; j < d; ++j) {
            std::uint64_t w = static_cast<std::uint64_t>(b.x[j]) +
                              static_cast<std::uint64_t>(t.x_size) *
                                  (static_cast<std::uint64_t>(b.y[j]) +
                                   static_cast<std::uint64_t>(t.y_size) *
                                       static_cast<std::uint64_t>(b.z[j]));
            key_xyzm += w * place;
            place *= mw;
        }
        key_xyzm += (static_cast<std::uint64_t>(b.x[d]) +
                     static_cast<std::uint64_t>(t.x_size) * static_cast<std::uint64_t>(b.z[d])) *
                    place;
        long long denom = m.xyzm.at(key_xyzm);
        sum += static_cast<double>(count) *
               std::log2(static_cast<double>(denom) / static_cast<double>(count));
    }
    return sum / static_cast<double>(t.total);
}

}  // namespace

BlockCountTable count_blocks(const QuantizedSeries& x, const QuantizedSeries& y,
                             std::span<const QuantizedSeries> z, int depth) {
    check_quantized(x);
    check_quantized(y);
    for (const auto& q : z) check_quantized(q);
    if (depth < 0) throw std::invalid_argument("depth must be non-negative");
    std::size_t n = x.size();
    if (y.size() != n) throw std::invalid_argument("count_blocks: series lengths differ");
    for (const auto& q : z)
        if (q.size() != n) throw std::invalid_argument("count_blocks: series lengths differ");
    if (n <= static_cast<std::size_t>(depth))
        throw std::invalid_argument("count_blocks: need more than depth=" + std::to_string(depth) +
                                    " samples, got " + std::to_string(n));

    BlockCountTable table;
    table.depth = depth;
    table.x_size = x.spec.levels;
    table.y_size = y.spec.levels;
    std::vector<int> z_sizes;
    z_sizes.reserve(z.size());
    for (const auto& q : z) z_sizes.push_back(q.spec.levels);
    std::uint64_t z_product = alphabet_product(z_sizes);
    if (z_product > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
        throw std::invalid_argument("hyper-node alphabet too large");
    table.z_size = static_cast<int>(z_product);

    std::uint64_t m = static_cast<std::uint64_t>(table.x_size) *
                      static_cast<std::uint64_t>(table.y_size) *
                      static_cast<std::uint64_t>(table.z_size);
    // The key space m^(d+1) must fit in 64 bits.
    std::vector<int> per_step(static_cast<std::size_t>(depth) + 1, static_cast<int>(m));
    if (m > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
        throw std::overflow_error("combined step alphabet exceeds practical limits");
    std::uint64_t key_space = alphabet_product(per_step);
    (void)key_space;

    // Per-step combined symbols.
    std::vector<std::uint64_t> w(n);
    std::vector<int> step_symbols(2 + z.size());
    std::vector<int> step_sizes(2 + z.size());
    step_sizes[0] = table.x_size;
    step_sizes[1] = table.y_size;
    for (std::size_t k = 0; k < z.size(); ++k) step_sizes[2 + k] = z_sizes[k];
    for (std::size_t i = 0; i < n; ++i) {
        step_symbols[0] = x.symbols[i];
        step_symbols[1] = y.symbols[i];
        for (std::size_t k = 0; k < z.size(); ++k) step_symbols[2 + k] = z[k].symbols[i];
        w[i] = combine_symbols(step_symbols, step_sizes);
    }

    // Rolling window key: drop the oldest (least significant) digit,
    // append the newest at the top.
    std::uint64_t top_place = 1;
    for (int j = 0; j < depth; ++j) top_place *= m;
    std::uint64_t key = 0;
    std::uint64_t place = 1;
    for (int j = 0; j <= depth; ++j, place *= m) key += w[static_cast<std::size_t>(j)] * place;
    table.counts[key] = 1;
    for (std::size_t i = static_cast<std::size_t>(depth) + 1; i < n; ++i) {
        key = key / m + w[i] * top_place;
        ++table.counts[key];
    }
    table.total = static_cast<long long>(n - static_cast<std::size_t>(depth));
    return table;
}

double conditional_directed_info_emp(const BlockCountTable& table) {
    check_table(table);
    Marginals m = build_marginals(table);
    double h_past = entropy_given_past(table, m);
    double h_all = entropy_given_all(table, m);
    double info = h_past - h_all;
    return info > 0.0 ? info : 0.0;
}

double causally_conditioned_entropy_emp(const BlockCountTable& table) {
    check_table(table);
    Marginals m = build_marginals(table);
    return entropy_given_past(table, m);
}

}  // namespace dig
