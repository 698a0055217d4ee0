#ifndef RW_ZETA_HPP
#define RW_ZETA_HPP

#include <complex>

#include "util.hpp"

namespace rw {

// Riemann zeta for real s != 1 (analytic continuation included).
double zeta_real(double s);

// sum_{x >= m} x^{-s} for s > 1, m >= 1, with a certified error bound.
Certified hurwitz_tail(double s, long long m);

struct CertifiedComplex {
  std::complex<double> value;
  double err = 0.0;
};

// Centered tail of the characteristic sum:
//   sum_{x >= start} x^{-1-alpha} (1 - e^{i x theta} + i x theta)
// for alpha > 1, |theta| <= pi.  The linear centering keeps the value
// O(theta^min(alpha,2)) near zero without catastrophic cancellation;
// summed against a mean-zero law the centering terms drop out exactly.
CertifiedComplex centered_tail_char(double alpha, long long start, double theta);

}  // namespace rw

#endif
