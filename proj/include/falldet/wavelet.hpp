#pragma once

#include <memory>
#include <string>
#include <vector>

namespace falldet {

// sym1..sym3 coincide with db1..db3 (the least-asymmetric construction only
// diverges from Daubechies at order 4); they are kept as distinct names.
enum class WaveletFamily {
  Haar,
  Db1,
  Db2,
  Db3,
  Sym1,
  Sym2,
  Sym3,
  Bior2_2,
  Meyer,
};

const char* wavelet_family_name(WaveletFamily f);
WaveletFamily wavelet_family_from_string(const std::string& s);

struct WaveletSpec {
  WaveletFamily family = WaveletFamily::Bior2_2;
  double scale = 250.0;
  int tabulation_resolution = 1024;  // samples per unit of support
};

// Mother wavelet sampled on a uniform grid covering its support, evaluated by
// linear interpolation and zero outside. Compact families are tabulated with
// the dyadic refinement cascade (for the biorthogonal pair this is the
// decomposition/analysis wavelet); Meyer comes from quadrature of its
// closed-form spectrum and is centered at t = 0.
class WaveletTable {
 public:
  WaveletTable(WaveletFamily family, int resolution);

  double psi(double t) const {
    if (t < t0_ || t > t1_) return 0.0;
    double pos = (t - t0_) * inv_dt_;
    size_t i = static_cast<size_t>(pos);
    if (i >= samples_.size() - 1) return samples_.back();
    double frac = pos - static_cast<double>(i);
    return samples_[i] + frac * (samples_[i + 1] - samples_[i]);
  }

  double t_min() const { return t0_; }
  double t_max() const { return t1_; }
  WaveletFamily family() const { return family_; }
  const std::vector<double>& samples() const { return samples_; }

  // Process-wide cache; tables are immutable and shared read-only.
  static std::shared_ptr<const WaveletTable> get(WaveletFamily family, int resolution);

 private:
  WaveletFamily family_;
  double t0_ = 0.0, t1_ = 0.0, inv_dt_ = 0.0;
  std::vector<double> samples_;
};

}  // namespace falldet
