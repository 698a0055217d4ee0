#ifndef RW_NSTEP_HPP
#define RW_NSTEP_HPP

#include <memory>
#include <vector>

#include "law.hpp"

namespace rw {

// Distribution of S_n restricted to the window [-W, W], advanced one
// convolution per step.  Mass that leaves the window is dropped and
// accounted: escaped() = 1 - sum(table) is a certified upper bound on
// everything the table does not see, so any event probability lies in
// [in-window value, in-window value + escaped + noise].
class Stepper {
public:
  // force_direct: use the O(W * support) sliding convolution even when
  // the FFT path would be chosen (testing hook)
  Stepper(const Law& law, long long W, bool force_direct = false);
  ~Stepper();
  Stepper(const Stepper&) = delete;
  Stepper& operator=(const Stepper&) = delete;

  void step();          // S_n -> S_{n+1}
  int n() const { return n_; }
  long long window() const { return W_; }

  double at(long long x) const;   // P[S_n = x, never escaped], |x| <= W
  double mass_above_zero() const; // sum over x > 0
  double mass_at_or_below_zero() const;
  double in_mass() const;         // sum over the whole window
  double escaped() const { return escaped_; }
  double noise() const { return noise_; }  // accumulated fp slack

  const std::vector<double>& table() const { return cur_; }

private:
  void collect(const std::vector<double>& full);  // fold [-2W,2W] buffer

  long long W_;
  int n_ = 0;
  std::vector<double> cur_;     // index i <-> site i - W
  std::vector<double> kern_;    // one-step pmf on [-W, W]
  double kern_escape_;          // one-step mass outside [-W, W]
  double escaped_ = 0.0;
  double noise_ = 0.0;

  std::unique_ptr<class Convolver> conv_;
  std::vector<double> buf_;     // linear conv result, index i <-> i - 2W
};

// p^n on [-W, W] with escaped-mass bound (spec of the n-step table op)
struct NStepTable {
  long long W;
  int n;
  std::vector<double> p;  // index i <-> site i - W
  double escaped;
  double noise;
  double at(long long x) const {
    return (x < -W || x > W) ? 0.0 : p[size_t(x + W)];
  }
};
NStepTable nstep_pmf(const Law& law, int n, long long W);

// (1/n) sum_{k<=n} P[S_k > 0] with certified interval per n
struct SpitzerPoint {
  int n;
  double lo, hi;
};
// returns the full trajectory n = 1..n_max
std::vector<SpitzerPoint> spitzer_trajectory(const Law& law, int n_max,
                                             long long W);

// p^k(0) for k = 1..n_max; *uncertainty receives escaped+noise at n_max
std::vector<double> pk0_sequence(const Law& law, int n_max, long long W,
                                 double* uncertainty = nullptr);

}  // namespace rw

#endif
