#include "falldet/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace falldet {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

size_t next_pow2(size_t n) {
  size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
  const size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft_pow2: size not a power of 2");

  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }

  if (inverse) {
    double inv = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv;
  }
}

FftPlan::FftPlan(size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("FftPlan: size must be > 0");
  if ((n & (n - 1)) == 0) return;  // radix-2 path needs no tables

  m_ = next_pow2(2 * n - 1);
  chirp_.resize(n);
  for (size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the phase argument small
    uint64_t k2 = (static_cast<uint64_t>(k) * k) % (2 * n);
    double ang = -kPi * static_cast<double>(k2) / static_cast<double>(n);
    chirp_[k] = {std::cos(ang), std::sin(ang)};
  }
  chirp_fft_.assign(m_, {0.0, 0.0});
  chirp_fft_[0] = std::conj(chirp_[0]);
  for (size_t k = 1; k < n; ++k) {
    chirp_fft_[k] = std::conj(chirp_[k]);
    chirp_fft_[m_ - k] = std::conj(chirp_[k]);
  }
  fft_pow2(chirp_fft_, false);
}

void FftPlan::forward(const double* in, std::complex<double>* out) const {
  if ((n_ & (n_ - 1)) == 0) {
    std::vector<std::complex<double>> a(n_);
    for (size_t k = 0; k < n_; ++k) a[k] = {in[k], 0.0};
    fft_pow2(a, false);
    for (size_t k = 0; k < n_; ++k) out[k] = a[k];
    return;
  }
  // Bluestein: X[j] = chirp[j] * (x*chirp  conv  conj(chirp))[j]
  std::vector<std::complex<double>> a(m_, {0.0, 0.0});
  for (size_t k = 0; k < n_; ++k) a[k] = in[k] * chirp_[k];
  fft_pow2(a, false);
  for (size_t k = 0; k < m_; ++k) a[k] *= chirp_fft_[k];
  fft_pow2(a, true);
  for (size_t j = 0; j < n_; ++j) out[j] = a[j] * chirp_[j];
}

std::vector<std::complex<double>> FftPlan::forward(const std::vector<double>& in) const {
  if (in.size() != n_) throw std::invalid_argument("FftPlan: input size mismatch");
  std::vector<std::complex<double>> out(n_);
  forward(in.data(), out.data());
  return out;
}

}  // namespace falldet
