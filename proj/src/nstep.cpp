#include "nstep.hpp"

#include <algorithm>
#include <cmath>

#include "conv.hpp"
#include "status.hpp"
#include "util.hpp"

namespace rw {

Stepper::Stepper(const Law& law, long long W, bool force_direct) : W_(W) {
  if (W < 1) fail(RW_ERR_INVALID_ARGUMENT, "window must be >= 1");
  size_t len = size_t(2 * W + 1);
  cur_.assign(len, 0.0);
  cur_[size_t(W)] = 1.0;  // S_0 = 0
  kern_.assign(len, 0.0);
  for (long long x = -W; x <= W; ++x) kern_[size_t(x + W)] = law.pmf(x);
  kern_escape_ = law.tail_prob(double(W), Side::Left) +
                 law.tail_prob(double(W), Side::Right);
  conv_ = std::make_unique<Convolver>(kern_, len, force_direct);
  buf_.assign(size_t(4 * W + 1), 0.0);
}

Stepper::~Stepper() = default;

void Stepper::step() {
  conv_->apply(cur_, buf_);
  collect(buf_);
  noise_ += conv_->noise_per_apply();
  ++n_;
}

void Stepper::collect(const std::vector<double>& full) {
  // full covers sites [-2W, 2W]; keep [-W, W], everything else escapes
  size_t len = cur_.size();
  for (size_t i = 0; i < len; ++i) {
    double v = full[i + size_t(W_)];
    if (v < 0.0) {
      noise_ += -v;
      v = 0.0;
    }
    cur_[i] = v;
  }
  KahanSum s;
  for (double v : cur_) s.add(v);
  double esc = 1.0 - escaped_ - s.value();
  if (esc < 0.0) {
    noise_ += -esc;
    esc = 0.0;
  }
  escaped_ += esc;
}

double Stepper::at(long long x) const {
  if (x < -W_ || x > W_) return 0.0;
  return cur_[size_t(x + W_)];
}

double Stepper::in_mass() const {
  KahanSum s;
  for (double v : cur_) s.add(v);
  return s.value();
}

double Stepper::mass_above_zero() const {
  KahanSum s;
  for (long long x = 1; x <= W_; ++x) s.add(cur_[size_t(x + W_)]);
  return s.value();
}

double Stepper::mass_at_or_below_zero() const {
  KahanSum s;
  for (long long x = -W_; x <= 0; ++x) s.add(cur_[size_t(x + W_)]);
  return s.value();
}

NStepTable nstep_pmf(const Law& law, int n, long long W) {
  if (n < 1) fail(RW_ERR_INVALID_ARGUMENT, "n >= 1");
  Stepper st(law, W);
  for (int k = 0; k < n; ++k) st.step();
  NStepTable t;
  t.W = W;
  t.n = n;
  t.p = st.table();
  t.escaped = st.escaped();
  t.noise = st.noise();
  return t;
}

std::vector<SpitzerPoint> spitzer_trajectory(const Law& law, int n_max,
                                             long long W) {
  if (n_max < 1) fail(RW_ERR_INVALID_ARGUMENT, "n_max >= 1");
  Stepper st(law, W);
  std::vector<SpitzerPoint> out;
  out.reserve(size_t(n_max));
  KahanSum lo_sum, hi_sum;
  for (int k = 1; k <= n_max; ++k) {
    st.step();
    double above = st.mass_above_zero();
    double slack = st.escaped() + st.noise();
    lo_sum.add(std::max(0.0, above - st.noise()));
    hi_sum.add(std::min(1.0, above + slack));
    out.push_back({k, lo_sum.value() / double(k), hi_sum.value() / double(k)});
  }
  return out;
}

std::vector<double> pk0_sequence(const Law& law, int n_max, long long W,
                                 double* uncertainty) {
  if (n_max < 1) fail(RW_ERR_INVALID_ARGUMENT, "n_max >= 1");
  Stepper st(law, W);
  std::vector<double> out;
  out.reserve(size_t(n_max));
  for (int k = 1; k <= n_max; ++k) {
    st.step();
    out.push_back(st.at(0));
  }
  if (uncertainty) *uncertainty = st.escaped() + st.noise();
  return out;
}

}  // namespace rw
