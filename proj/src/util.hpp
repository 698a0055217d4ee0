#ifndef RW_UTIL_HPP
#define RW_UTIL_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

namespace rw {

// Compensated accumulator.  Adding doubles in a fixed order keeps every
// reduction reproducible; the compensation keeps long sums accurate.
class KahanSum {
public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Value with a certified absolute error bound.
struct Certified {
  double value = 0.0;
  double err = 0.0;
  Certified() = default;
  Certified(double v, double e) : value(v), err(e) {}
  Certified operator+(const Certified& o) const {
    return {value + o.value, err + o.err};
  }
  Certified operator-(const Certified& o) const {
    return {value - o.value, err + o.err};
  }
  Certified scaled(double s) const { return {value * s, err * std::fabs(s)}; }
};

// Gauss-Legendre rule on [-1,1]; nodes/weights computed once per order.
struct GaussLegendre {
  std::vector<double> node;
  std::vector<double> weight;
  explicit GaussLegendre(int n);
};

const GaussLegendre& gauss_legendre_32();
const GaussLegendre& gauss_legendre_64();

// Aitken extrapolation from partial sums S_N, S_2N, S_4N; exact for a
// pure power tail S_N = a - C N^{-beta}.  correction is the shift that
// was applied, or the fallback spread when the ratio test fails.
struct Extrapolated {
  double value;
  double correction;
};
Extrapolated aitken(double s1, double s2, double s4);

// Two-stage Aitken over five dyadic checkpoints S_N .. S_16N: the first
// stage removes the leading power tail, the second the next order.
// correction combines the stage-two shift with the stage-one spread into
// an error estimate for value.
Extrapolated aitken5(const std::array<double, 5>& s);

// Richardson extrapolation over the same five dyadic checkpoints when the
// error expansion S_N = a - sum_k C_k N^{-(e0 + k step)} is known; removes
// the first four terms.  correction is the depth-3 / depth-4 spread plus
// the amplified rounding floor, so a wrong exponent ladder still yields an
// honest (large) estimate.
Extrapolated richardson5(const std::array<double, 5>& s, double e0,
                         double step);

inline int64_t gcd64(int64_t a, int64_t b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

// t - sin(t) without cancellation near zero.
inline double t_minus_sin(double t) {
  if (std::fabs(t) < 0.05) {
    double t2 = t * t;
    return t * t2 * (1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0);
  }
  return t - std::sin(t);
}

// 1 - e^{it} + it, the mean-centered phase deficit; both components are
// evaluated in cancellation-free form.
inline std::complex<double> centered_phase(double t) {
  double s = std::sin(0.5 * t);
  return {2.0 * s * s, t_minus_sin(t)};
}

}  // namespace rw

#endif
