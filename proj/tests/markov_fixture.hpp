#pragma once

// Shared test fixture: a jointly order-1 Markov binary triple (x, y, z) whose
// causally conditioned directed information rate from x to y given z has a
// closed form.  Each coordinate flips independently given the previous state:
//   x' ~ Bern(0.2 + 0.6 z),  y' ~ Bern(0.1 + 0.8 x),  z' ~ Bern(0.3 + 0.4 y).
// Because the chain is order-1, depth-1 block statistics capture the full
// rate, so estimators can be checked against the exact value.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dig/rng.hpp"
#include "dig/series.hpp"

namespace markov_triple {

inline double px1(int z) { return 0.2 + 0.6 * z; }
inline double py1(int x) { return 0.1 + 0.8 * x; }
inline double pz1(int y) { return 0.3 + 0.4 * y; }

// Transition probability between packed states s -> t with bit layout
// x | y<<1 | z<<2.  The product form reflects the per-coordinate updates.
inline double kernel(int s, int t) {
    int x = s & 1, y = (s >> 1) & 1, z = (s >> 2) & 1;
    int xn = t & 1, yn = (t >> 1) & 1, zn = (t >> 2) & 1;
    double p = xn ? px1(z) : 1 - px1(z);
    p *= yn ? py1(x) : 1 - py1(x);
    p *= zn ? pz1(y) : 1 - pz1(y);
    return p;
}

inline std::array<double, 8> stationary() {
    std::array<double, 8> pi{}, next{};
    pi.fill(1.0 / 8);
    for (int it = 0; it < 1000; ++it) {
        next.fill(0.0);
        for (int s = 0; s < 8; ++s)
            for (int t = 0; t < 8; ++t) next[t] += pi[s] * kernel(s, t);
        pi = next;
    }
    return pi;
}

// Exact I(y2 ; x1,x2 | y1, z1, z2) over the 64 stationary pair blocks, which
// equals the depth-1 causally conditioned directed information rate.
inline double exact_rate() {
    auto pi = stationary();
    double total = 0.0;
    for (int s = 0; s < 8; ++s) {
        for (int t = 0; t < 8; ++t) {
            double a = pi[s] * kernel(s, t);
            if (a <= 0) continue;
            double b = 0, c = 0, d = 0;
            for (int y2 = 0; y2 < 2; ++y2) b += pi[s] * kernel(s, (t & ~2) | (y2 << 1));
            for (int x1 = 0; x1 < 2; ++x1) {
                for (int x2 = 0; x2 < 2; ++x2) {
                    int ss = (s & ~1) | x1, tt = (t & ~1) | x2;
                    c += pi[ss] * kernel(ss, tt);
                    for (int y2 = 0; y2 < 2; ++y2)
                        d += pi[ss] * kernel(ss, (tt & ~2) | (y2 << 1));
                }
            }
            total += a * std::log2(a * d / (b * c));
        }
    }
    return total;
}

struct Path {
    dig::QuantizedSeries x, y, z;
};

// Samples a stationary-ish path: 100 warmup steps are discarded so the
// empirical block distribution starts near the stationary one.
inline Path sample(std::size_t n, std::uint64_t seed) {
    dig::QuantizerSpec spec{2, dig::QuantizerStrategy::equal_width, {0.5}};
    Path p{{"x", {}, spec}, {"y", {}, spec}, {"z", {}, spec}};
    dig::Rng rng = dig::Rng::derive(seed, "markov.kernel.fixture");
    int x = 0, y = 0, z = 0;
    for (std::size_t i = 0; i < n + 100; ++i) {
        int xn = rng.bernoulli(px1(z)) ? 1 : 0;
        int yn = rng.bernoulli(py1(x)) ? 1 : 0;
        int zn = rng.bernoulli(pz1(y)) ? 1 : 0;
        x = xn;
        y = yn;
        z = zn;
        if (i >= 100) {
            p.x.symbols.push_back(x);
            p.y.symbols.push_back(y);
            p.z.symbols.push_back(z);
        }
    }
    return p;
}

}  // namespace markov_triple
