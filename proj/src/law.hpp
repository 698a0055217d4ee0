#ifndef RW_LAW_HPP
#define RW_LAW_HPP

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "util.hpp"

namespace rw {

enum class Side { Left, Right };

// Analytic one-sided tail: pmf amplitude * |x|^{-1-alpha} on |x| >= start.
struct TailModel {
  bool present = false;
  double alpha = 0.0;
  double amplitude = 0.0;
  long long start = 0;
};

struct Moments {
  double mass = 0.0;
  double mean = 0.0;
  bool sigma2_finite = false;
  double sigma2 = 0.0;  // valid iff sigma2_finite
  double abs_mean = 0.0;
  double ex_plus = 0.0;
  double ex_minus = 0.0;
};

// Mean-zero irreducible increment law on the integers: a finite core
// plus optional analytic power tails.  Validated on construction; all
// downstream modules may assume mass 1, mean 0, E|X| < inf and
// irreducibility (hence recurrence).
class Law {
public:
  static Law build(std::vector<std::pair<long long, double>> core,
                   TailModel left, TailModel right,
                   double mass_tol = 1e-12, double mean_tol = 1e-10);
  static Law parse_json(const std::string& text);
  static Law load_file(const std::string& path);

  double pmf(long long x) const;
  // side Right: P[X > t]; side Left: P[X < -t]; t >= 0 real
  double tail_prob(double t, Side side) const;
  const Moments& moments() const { return mom_; }

  // truncated tail integrals m-(x), m+(x), m(x) = m-(x)+m+(x)
  double m_minus(double x) const;
  double m_plus(double x) const;
  double m_total(double x) const { return m_minus(x) + m_plus(x); }
  // mean excess over level j on one side: E[(X- - j)^+] resp. E[(X+ - j)^+]
  double tail_excess(long long j, Side side) const;

  std::complex<double> char_fn(double theta) const;
  // 1 - E e^{i theta X} evaluated cancellation-free (exact mean-zero
  // centering); err receives a certified bound when non-null.
  std::complex<double> one_minus_char(double theta, double* err = nullptr) const;

  const std::vector<long long>& core_sites() const { return sites_; }
  const std::vector<double>& core_probs() const { return probs_; }
  long long core_min() const { return sites_.front(); }
  long long core_max() const { return sites_.back(); }
  const TailModel& tail(Side s) const {
    return s == Side::Left ? left_ : right_;
  }
  bool heavy(Side s) const { return tail(s).present; }
  // largest/smallest support point, tails included; only valid when the
  // corresponding side carries no analytic tail
  long long support_max() const;
  long long support_min() const;
  bool right_continuous() const;  // P[X >= 2] = 0
  bool left_continuous() const;   // P[X <= -2] = 0

  Law mirrored() const;

private:
  Law() = default;
  std::vector<long long> sites_;  // sorted, probability > 0 only
  std::vector<double> probs_;
  TailModel left_, right_;
  Moments mom_;
};

// Period of the return chain: gcd of the lengths of all cycles through
// 0.  p^n(0) > 0 only when the period divides n, so series checkpoints
// must be aligned to a multiple of it.
long long chain_period(const Law& law);

}  // namespace rw

#endif
