#include "dig/gammainc.hpp"

#include <cmath>
#include <stdexcept>

namespace dig {

namespace {

constexpr double kRelTol = 1e-12;
constexpr int kMaxIter = 10000;
constexpr double kTiny = 1e-300;

/// Series gamma(s,x)/Gamma(s) = e^{-x} x^s / Gamma(s) * sum_k x^k / (s)_{k+1}.
double lower_by_series(double s, double x) {
    double ap = s;
    double term = 1.0 / s;
    double sum = term;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kRelTol)
            return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
    throw std::runtime_error("incomplete gamma series did not converge");
}

/// Continued fraction for the upper tail Q(s,x), modified Lentz method.
double upper_by_continued_fraction(double s, double x) {
    double b = x + 1.0 - s;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kRelTol)
            return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
    throw std::runtime_error("incomplete gamma continued fraction did not converge");
}

}  // namespace

double reg_lower_gamma(double s, double x) {
    if (!(s > 0.0)) throw std::invalid_argument("reg_lower_gamma: shape must be positive");
    if (x < 0.0) throw std::invalid_argument("reg_lower_gamma: argument must be non-negative");
    if (x == 0.0) return 0.0;
    double p = (x < s + 1.0) ? lower_by_series(s, x) : 1.0 - upper_by_continued_fraction(s, x);
    if (p < 0.0) return 0.0;
    if (p > 1.0) return 1.0;
    return p;
}

}  // namespace dig
