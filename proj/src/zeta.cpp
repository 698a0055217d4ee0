#include "zeta.hpp"

#include <cmath>

#include "status.hpp"

namespace rw {

double zeta_real(double s) { return std::riemann_zeta(s); }

Certified hurwitz_tail(double s, long long m) {
  if (s <= 1.0 || m < 1) fail(RW_ERR_INVALID_ARGUMENT, "hurwitz_tail: s>1, m>=1");
  // Euler-Maclaurin after an exact head.  x^{-s} is completely monotone,
  // so the remainder is bounded by the first omitted correction term.
  const long long M = m + 32;
  KahanSum head;
  for (long long x = m; x < M; ++x) head.add(std::pow(double(x), -s));
  double Md = double(M);
  double t0 = std::pow(Md, 1.0 - s) / (s - 1.0);
  double t1 = 0.5 * std::pow(Md, -s);
  double t2 = s * std::pow(Md, -s - 1.0) / 12.0;
  double t3 = -s * (s + 1.0) * (s + 2.0) * std::pow(Md, -s - 3.0) / 720.0;
  double t4 = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) *
              std::pow(Md, -s - 5.0) / 30240.0;
  double value = head.value() + t0 + t1 + t2 + t3 + t4;
  double err = std::fabs(s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * (s + 5) *
                         (s + 6) * std::pow(Md, -s - 7.0)) /
               1209600.0;
  err += 8e-16 * std::fabs(value) + double(M - m) * 4e-17 * std::fabs(value);
  return {value, err};
}

namespace {

// (-i*theta)^p for real p without passing through complex log of a
// negative-imaginary number: |theta|^p * exp(-i p (pi/2) sign(theta)).
std::complex<double> neg_i_theta_pow(double theta, double p) {
  double mag = std::pow(std::fabs(theta), p);
  double ang = -p * (M_PI / 2.0) * (theta > 0 ? 1.0 : -1.0);
  return {mag * std::cos(ang), mag * std::sin(ang)};
}

// Full centered sum from x = 1 via the polylogarithm expansion about
// z = 1.  s = 1 + alpha.  Valid for |theta| < 2*pi; we use |theta|<=pi.
CertifiedComplex centered_full(double s, double theta) {
  std::complex<double> mu(0.0, theta);
  const double n_round = std::round(s);
  const bool integer_s = std::fabs(s - n_round) < 1e-9;
  std::complex<double> total(0.0, 0.0);
  double err = 0.0;
  int log_k = -1;  // series index replaced by the logarithmic term
  if (integer_s) {
    int n = int(n_round);
    log_k = n - 1;
    double hn = 0.0;
    for (int j = 1; j <= n - 1; ++j) hn += 1.0 / j;
    double fact = 1.0;
    for (int j = 2; j <= n - 1; ++j) fact *= j;
    std::complex<double> mupow(1.0, 0.0);
    for (int j = 0; j < n - 1; ++j) mupow *= mu;
    std::complex<double> logneg(std::log(std::fabs(theta)),
                                -(M_PI / 2.0) * (theta > 0 ? 1.0 : -1.0));
    total -= mupow / fact * (hn - logneg);
  } else {
    total -= std::tgamma(1.0 - s) * neg_i_theta_pow(theta, s - 1.0);
  }
  // - sum_{k>=2, k != log_k} zeta(s-k) mu^k / k!
  std::complex<double> mupow = mu * mu;
  double kfact = 2.0;
  int small_count = 0;
  for (int k = 2; k <= 240; ++k) {
    if (k > 2) {
      mupow *= mu;
      kfact *= k;
    }
    if (k != log_k) {
      double zs = zeta_real(s - k);
      std::complex<double> term = -zs * mupow / kfact;
      total += term;
      double mag = std::abs(term);
      if (mag < 1e-18 * (1.0 + std::abs(total))) {
        if (++small_count >= 3 && k > s + 2) {
          err += 8.0 * mag;
          break;
        }
      } else {
        small_count = 0;
      }
    }
    if (k == 240) fail(RW_ERR_NO_CONVERGENCE, "centered_full: series not converged");
  }
  err += 1e-15 * (1.0 + std::abs(total));
  return {total, err};
}

}  // namespace

CertifiedComplex centered_tail_char(double alpha, long long start, double theta) {
  if (alpha <= 1.0 || start < 1)
    fail(RW_ERR_INVALID_ARGUMENT, "centered_tail_char: alpha>1, start>=1");
  if (theta == 0.0) return {{0.0, 0.0}, 0.0};
  const double s = 1.0 + alpha;
  CertifiedComplex full = centered_full(s, theta);
  // remove the head x = 1 .. start-1 (numerically stable centered form)
  std::complex<double> head(0.0, 0.0);
  for (long long x = 1; x < start; ++x)
    head += std::pow(double(x), -s) * centered_phase(double(x) * theta);
  return {full.value - head, full.err + 2e-16 * std::abs(head) * double(start)};
}

}  // namespace rw
