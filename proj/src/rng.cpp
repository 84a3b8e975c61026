#include "dig/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace dig {

long Rng::poisson(double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("poisson: negative mean");
    if (lambda == 0.0) return 0;
    const double u = next_double();
    double p = std::exp(-lambda);
    double cdf = p;
    long k = 0;
    // Hard cap far in the tail so a pathological u cannot loop forever.
    const long cap = static_cast<long>(lambda + 40.0 * std::sqrt(lambda) + 50.0);
    while (u >= cdf && k < cap) {
        ++k;
        p *= lambda / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

}  // namespace dig
