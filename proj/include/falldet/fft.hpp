#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace falldet {

// Forward DFT  X[j] = sum_k x[k] * exp(-2*pi*i*j*k / n)  for arbitrary n.
// Power-of-two sizes run radix-2 in place; everything else goes through a
// Bluestein chirp-z built on the radix-2 path. Plans are immutable after
// construction and safe to share across threads.
class FftPlan {
 public:
  explicit FftPlan(size_t n);

  size_t size() const { return n_; }

  void forward(const double* in, std::complex<double>* out) const;
  std::vector<std::complex<double>> forward(const std::vector<double>& in) const;

 private:
  size_t n_;
  size_t m_ = 0;                             // padded power-of-two size (Bluestein)
  std::vector<std::complex<double>> chirp_;  // exp(-i*pi*k^2/n)
  std::vector<std::complex<double>> chirp_fft_;
};

// In-place radix-2; n must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace falldet
