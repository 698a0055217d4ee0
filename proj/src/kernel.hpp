#ifndef RW_KERNEL_HPP
#define RW_KERNEL_HPP

#include <limits>
#include <vector>

#include "law.hpp"

namespace rw {

// Potential kernel a(x) on [-W, W] with per-entry error bounds.
struct PotentialTable {
  long long W = 0;
  std::vector<double> a;    // index x + W
  std::vector<double> err;  // per-entry bound, same layout
  bool sigma2_finite = false;
  double sigma2 = std::numeric_limits<double>::infinity();
  double A = 1.0;  // 1/2 when sigma2 < inf, else 1

  double at(long long x) const;
  double err_at(long long x) const;
  double a_dagger(long long x) const;  // a(x) + [x == 0]
  double abar(long long x) const;      // (a(x) + a(-x)) / 2
};

// Fourier-quadrature kernel, cross-validated on small |x| against the
// partial-sum extrapolation oracle (RW_ERR_NO_CONVERGENCE on mismatch).
PotentialTable potential_kernel(const Law& law, long long X_max, double tol);
// same computation without the cross-validation pass
PotentialTable potential_kernel_unchecked(const Law& law, long long X_max,
                                          double tol);

// Partial sums S_N(x) = sum_{n<=N} [p^n(0) - p^n(-x)] accelerated by
// power-tail extrapolation; tolerance is estimated, not certified.
struct OracleValue {
  double value;
  double tol;
};
OracleValue potential_series_oracle(const Law& law, long long x, int n_max,
                                    long long W);

// Spitzer's constant c in (0, 1): log-characteristic integral primary,
// extrapolated p^k(0)/k series secondary, agreement enforced.
double constant_c(const Law& law, double tol);

// max over |x| <= x_hi of |sum_y p(y-x) a(y) - a(x) - delta(0,x)|, the
// out-of-window part of the sum bounded via subadditivity
double check_harmonicity(const Law& law, const PotentialTable& t,
                         long long x_hi);

}  // namespace rw

#endif
