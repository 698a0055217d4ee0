#include "conv.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>

#include "status.hpp"

namespace rw {

namespace {

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

struct Convolver::FftPlan {
  size_t L = 0;
  double* in = nullptr;
  fftw_complex* freq = nullptr;
  fftw_complex* khat = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  ~FftPlan() {
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
    if (in) fftw_free(in);
    if (freq) fftw_free(freq);
    if (khat) fftw_free(khat);
  }
};

Convolver::Convolver(const std::vector<double>& kernel, size_t in_len,
                     bool force_direct)
    : in_len_(in_len), out_len_(in_len + kernel.size() - 1) {
  if (in_len == 0 || kernel.empty())
    fail(RW_ERR_INVALID_ARGUMENT, "empty convolution operand");
  size_t nz = 0;
  for (double k : kernel)
    if (k != 0.0) ++nz;
  bool direct = force_direct || nz <= 96;
  if (direct) {
    taps_.reserve(nz);
    for (size_t j = 0; j < kernel.size(); ++j)
      if (kernel[j] != 0.0) taps_.emplace_back(j, kernel[j]);
    noise_ = 1e-16 * double(in_len_);
    return;
  }
  fft_ = std::make_unique<FftPlan>();
  fft_->L = next_pow2(out_len_);
  fft_->in = fftw_alloc_real(fft_->L);
  fft_->freq = fftw_alloc_complex(fft_->L / 2 + 1);
  fft_->khat = fftw_alloc_complex(fft_->L / 2 + 1);
  fft_->fwd =
      fftw_plan_dft_r2c_1d(int(fft_->L), fft_->in, fft_->freq, FFTW_ESTIMATE);
  fft_->inv =
      fftw_plan_dft_c2r_1d(int(fft_->L), fft_->freq, fft_->in, FFTW_ESTIMATE);
  std::memset(fft_->in, 0, sizeof(double) * fft_->L);
  std::memcpy(fft_->in, kernel.data(), sizeof(double) * kernel.size());
  fftw_execute(fft_->fwd);
  std::memcpy(fft_->khat, fft_->freq, sizeof(fftw_complex) * (fft_->L / 2 + 1));
  noise_ = 4e-16 * std::log2(double(fft_->L)) * double(out_len_);
}

Convolver::~Convolver() = default;

void Convolver::apply(const std::vector<double>& in, std::vector<double>& out) {
  if (in.size() != in_len_)
    fail(RW_ERR_INVALID_ARGUMENT, "convolution input length changed");
  if (out.size() != out_len_) out.assign(out_len_, 0.0);
  if (!fft_) {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& [j, k] : taps_)
      for (size_t i = 0; i < in_len_; ++i) out[i + j] += k * in[i];
    return;
  }
  std::memset(fft_->in, 0, sizeof(double) * fft_->L);
  std::memcpy(fft_->in, in.data(), sizeof(double) * in_len_);
  fftw_execute(fft_->fwd);
  size_t half = fft_->L / 2 + 1;
  for (size_t i = 0; i < half; ++i) {
    double ar = fft_->freq[i][0], ai = fft_->freq[i][1];
    double br = fft_->khat[i][0], bi = fft_->khat[i][1];
    fft_->freq[i][0] = ar * br - ai * bi;
    fft_->freq[i][1] = ar * bi + ai * br;
  }
  fftw_execute(fft_->inv);
  double scale = 1.0 / double(fft_->L);
  for (size_t i = 0; i < out_len_; ++i) out[i] = fft_->in[i] * scale;
}

}  // namespace rw
