#ifndef DIG_RNG_HPP
#define DIG_RNG_HPP

#include <cstdint>
#include <string_view>

namespace dig {

/// Counter-based pseudo-random stream with a fixed, platform-independent
/// algorithm (splitmix64 finalizer over key + counter).  Identical
/// (seed, label) pairs produce identical streams on every platform, so
/// generated fixtures can be frozen in tests.
///
/// Sub-streams are derived by hashing a text label into the key; adding a
/// new consumer label never shifts the draws of an existing one.
class Rng {
public:
    explicit Rng(std::uint64_t key) : key_(key) {}

    /// Derive an independent stream for `label` under a single user seed.
    static Rng derive(std::uint64_t seed, std::string_view label) {
        // FNV-1a over the label, folded with the seed through the mixer.
        std::uint64_t h = 14695981039346656037ull;
        for (unsigned char c : label) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return Rng(mix(h ^ mix(seed + 0x5851f42d4c957f2dull)));
    }

    std::uint64_t next_u64() {
        return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ull);
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    bool bernoulli(double p) { return next_double() < p; }

    /// Poisson sample by CDF inversion; intended for small means (the
    /// simulators stay at lambda <= 10 or so).
    long poisson(double lambda);

    /// Binomial(n, p) as n independent Bernoulli draws (counts are small).
    long binomial(long n, double p) {
        long k = 0;
        for (long i = 0; i < n; ++i)
            if (bernoulli(p)) ++k;
        return k;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace dig

#endif  // DIG_RNG_HPP
