#ifndef RW_CONV_HPP
#define RW_CONV_HPP

#include <cstddef>
#include <memory>
#include <vector>

namespace rw {

// Linear convolution of a fixed-length input with a fixed kernel.  The
// kernel is captured once at construction; apply() computes the full
// linear convolution, out[k] = sum_i in[i] * kernel[k - i], with
// out.size() == in_len + kernel.size() - 1.  Sparse kernels fall back to
// a direct sliding sum, dense ones go through a cached real FFT plan.
class Convolver {
public:
  Convolver(const std::vector<double>& kernel, size_t in_len,
            bool force_direct = false);
  ~Convolver();
  Convolver(const Convolver&) = delete;
  Convolver& operator=(const Convolver&) = delete;

  void apply(const std::vector<double>& in, std::vector<double>& out);

  size_t out_len() const { return out_len_; }
  bool uses_fft() const { return fft_ != nullptr; }
  // conservative absolute rounding slack contributed by one apply()
  double noise_per_apply() const { return noise_; }

private:
  size_t in_len_;
  size_t out_len_;
  double noise_;
  // direct path: nonzero kernel taps as (offset, value)
  std::vector<std::pair<size_t, double>> taps_;

  struct FftPlan;
  std::unique_ptr<FftPlan> fft_;
};

}  // namespace rw

#endif
