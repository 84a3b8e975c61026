#ifndef DIG_GAMMAINC_HPP
#define DIG_GAMMAINC_HPP

namespace dig {

/// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s)
/// for s > 0, x >= 0.  Series expansion for x < s + 1, continued fraction
/// otherwise, both iterated to 1e-12 relative tolerance.
double reg_lower_gamma(double s, double x);

}  // namespace dig

#endif  // DIG_GAMMAINC_HPP
