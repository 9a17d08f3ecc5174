#include "falldet/wavelet.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace falldet {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct FilterPair {
  std::vector<double> lo;  // refinement (lowpass) filter, sum = sqrt(2)
  std::vector<double> hi;  // wavelet (highpass) filter
  bool integer_start;      // scaling function continuous enough to pin phi at integers
};

FilterPair filters_for(WaveletFamily f) {
  const double s2 = std::sqrt(2.0);
  const double s3 = std::sqrt(3.0);
  switch (f) {
    case WaveletFamily::Haar:
    case WaveletFamily::Db1:
    case WaveletFamily::Sym1: {
      double h = 1.0 / s2;
      return {{h, h}, {h, -h}, true};
    }
    case WaveletFamily::Db2:
    case WaveletFamily::Sym2: {
      double d = 4.0 * s2;
      std::vector<double> lo = {(1 + s3) / d, (3 + s3) / d, (3 - s3) / d, (1 - s3) / d};
      std::vector<double> hi = {lo[3], -lo[2], lo[1], -lo[0]};
      return {lo, hi, true};
    }
    case WaveletFamily::Db3:
    case WaveletFamily::Sym3: {
      std::vector<double> lo = {0.3326705529509569,   0.8068915093133388,
                                0.4598775021193313,   -0.13501102001039084,
                                -0.08544127388224149, 0.035226291882100656};
      std::vector<double> hi = {lo[5], -lo[4], lo[3], -lo[2], lo[1], -lo[0]};
      return {lo, hi, true};
    }
    case WaveletFamily::Bior2_2: {
      // Analysis side of the 5/3 pair: the dual scaling function is refined by
      // the decomposition lowpass; its integer samples are not well defined
      // (the dual is not continuous), so the cascade starts from a delta.
      std::vector<double> lo = {s2 * -0.125, s2 * 0.25, s2 * 0.75, s2 * 0.25, s2 * -0.125};
      std::vector<double> hi = {s2 * 0.25, s2 * -0.5, s2 * 0.25};
      return {lo, hi, false};
    }
    default:
      throw std::invalid_argument("no filter bank for this wavelet family");
  }
}

// phi values at integer points: dominant-eigenvector of A[i][j] = sqrt(2)*h[2i-j],
// normalized so the samples sum to 1 (partition of unity).
std::vector<double> phi_at_integers(const std::vector<double>& lo) {
  const size_t n = lo.size();
  std::vector<double> v(n, 0.0);
  if (n == 2) {
    v[0] = 1.0;  // box, right-open
    return v;
  }
  for (size_t i = 1; i + 1 < n; ++i) v[i] = 1.0 / static_cast<double>(n - 2);
  const double s2 = std::sqrt(2.0);
  std::vector<double> next(n, 0.0);
  for (int iter = 0; iter < 500; ++iter) {
    double delta = 0.0, sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (size_t j = 0; j < n; ++j) {
        ptrdiff_t k = static_cast<ptrdiff_t>(2 * i) - static_cast<ptrdiff_t>(j);
        if (k >= 0 && k < static_cast<ptrdiff_t>(n)) acc += s2 * lo[static_cast<size_t>(k)] * v[j];
      }
      next[i] = acc;
      sum += acc;
    }
    for (size_t i = 0; i < n; ++i) {
      next[i] /= sum;
      delta = std::max(delta, std::abs(next[i] - v[i]));
      v[i] = next[i];
    }
    if (delta < 1e-15) break;
  }
  return v;
}

// One refinement step: given phi on the 2^-j grid, produce it on the 2^-(j+1)
// grid via phi(t) = sqrt(2) * sum_k lo[k] * phi(2t - k).
std::vector<double> refine(const std::vector<double>& prev, const std::vector<double>& lo,
                           int level_from) {
  const double s2 = std::sqrt(2.0);
  const size_t step = size_t{1} << level_from;
  std::vector<double> out(2 * (prev.size() - 1) + 1, 0.0);
  for (size_t m = 0; m < out.size(); ++m) {
    double acc = 0.0;
    for (size_t k = 0; k < lo.size(); ++k) {
      ptrdiff_t idx = static_cast<ptrdiff_t>(m) - static_cast<ptrdiff_t>(k * step);
      if (idx >= 0 && idx < static_cast<ptrdiff_t>(prev.size()))
        acc += lo[k] * prev[static_cast<size_t>(idx)];
    }
    out[m] = s2 * acc;
  }
  return out;
}

// Cascade started from a delta sequence (the wavefun convention); converges to
// the same tables where phi is continuous and defines the published shape of
// the rougher duals. The iterate is a palindrome for palindromic filters and
// the caller maps it onto the full support, which keeps that symmetry.
std::vector<double> cascade_from_delta(const std::vector<double>& lo, int levels) {
  const size_t n = lo.size();
  std::vector<double> v{1.0};
  const double s2 = std::sqrt(2.0);
  for (int j = 0; j < levels; ++j) {
    // upsample by 2, convolve with the mask sqrt(2)*lo
    std::vector<double> up(2 * v.size() - 1, 0.0);
    for (size_t i = 0; i < v.size(); ++i) up[2 * i] = v[i];
    std::vector<double> nx(up.size() + n - 1, 0.0);
    for (size_t i = 0; i < up.size(); ++i) {
      if (up[i] == 0.0) continue;
      for (size_t k = 0; k < n; ++k) nx[i + k] += s2 * lo[k] * up[i];
    }
    v = std::move(nx);
  }
  return v;
}

// Meyer spectrum magnitude on [2pi/3, 8pi/3]; zero elsewhere.
double meyer_window(double w) {
  auto nu = [](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * x * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
  };
  double a = 2.0 * kPi / 3.0;
  if (w < a || w > 4.0 * a) return 0.0;
  if (w <= 2.0 * a) return std::sin(kPi / 2.0 * nu(w / a - 1.0));
  return std::cos(kPi / 2.0 * nu(w / (2.0 * a) - 1.0));
}

// psi(t) = (1/pi) * integral m(w) cos(w t) dw over the compact band, Simpson.
std::vector<double> tabulate_meyer(int resolution, double half_support) {
  const size_t half = static_cast<size_t>(std::llround(half_support * resolution));
  const size_t count = 2 * half + 1;
  const double lo = 2.0 * kPi / 3.0, hi = 8.0 * kPi / 3.0;
  const size_t steps = 8192;  // even
  const double h = (hi - lo) / static_cast<double>(steps);
  std::vector<double> mw(steps + 1), wgrid(steps + 1);
  for (size_t i = 0; i <= steps; ++i) {
    wgrid[i] = lo + h * static_cast<double>(i);
    mw[i] = meyer_window(wgrid[i]);
  }
  std::vector<double> out(count);
  for (size_t m = 0; m < count; ++m) {
    double t = (static_cast<double>(m) - static_cast<double>(half)) / resolution;
    double acc = 0.0;
    for (size_t i = 0; i <= steps; ++i) {
      double w = (i == 0 || i == steps) ? 1.0 : ((i % 2) ? 4.0 : 2.0);
      acc += w * mw[i] * std::cos(wgrid[i] * t);
    }
    out[m] = acc * h / 3.0 / kPi;
  }
  return out;
}

int levels_for(int resolution) {
  int levels = 0;
  while ((1 << levels) < resolution) ++levels;
  return levels;
}

}  // namespace

const char* wavelet_family_name(WaveletFamily f) {
  switch (f) {
    case WaveletFamily::Haar: return "haar";
    case WaveletFamily::Db1: return "db1";
    case WaveletFamily::Db2: return "db2";
    case WaveletFamily::Db3: return "db3";
    case WaveletFamily::Sym1: return "sym1";
    case WaveletFamily::Sym2: return "sym2";
    case WaveletFamily::Sym3: return "sym3";
    case WaveletFamily::Bior2_2: return "bior2.2";
    case WaveletFamily::Meyer: return "meyer";
  }
  return "?";
}

WaveletFamily wavelet_family_from_string(const std::string& s) {
  if (s == "haar") return WaveletFamily::Haar;
  if (s == "db1") return WaveletFamily::Db1;
  if (s == "db2") return WaveletFamily::Db2;
  if (s == "db3") return WaveletFamily::Db3;
  if (s == "sym1") return WaveletFamily::Sym1;
  if (s == "sym2") return WaveletFamily::Sym2;
  if (s == "sym3") return WaveletFamily::Sym3;
  if (s == "bior2.2" || s == "bior22") return WaveletFamily::Bior2_2;
  if (s == "meyer") return WaveletFamily::Meyer;
  throw std::invalid_argument("unknown wavelet family \"" + s + "\"");
}

WaveletTable::WaveletTable(WaveletFamily family, int resolution) : family_(family) {
  if (resolution < 2) throw std::invalid_argument("tabulation resolution too small");

  if (family == WaveletFamily::Meyer) {
    const double half_support = 8.0;  // |psi| is negligible beyond this
    samples_ = tabulate_meyer(resolution, half_support);
    t0_ = -half_support;
    t1_ = half_support;
    inv_dt_ = resolution;
    return;
  }

  FilterPair fp = filters_for(family);
  int levels = levels_for(resolution);
  // psi(t) = sqrt(2) * sum_k hi[k] * phi(2t - k), sampled on the level-J grid
  // from the level-(J-1) phi table.
  const size_t step = size_t{1} << (levels - 1);
  const size_t n_lo = fp.lo.size(), n_hi = fp.hi.size();
  const double support = static_cast<double>(n_lo + n_hi - 2) / 2.0;
  const double s2 = std::sqrt(2.0);

  std::vector<double> phi;
  if (fp.integer_start) {
    phi = phi_at_integers(fp.lo);
    for (int j = 0; j + 1 < levels; ++j) phi = refine(phi, fp.lo, j);
    // phi grid is exactly m / 2^(levels-1) over [0, n_lo - 1]
    const size_t count = static_cast<size_t>(support) * (size_t{1} << levels) + 1;
    samples_.assign(count, 0.0);
    for (size_t m = 0; m < count; ++m) {
      double acc = 0.0;
      for (size_t k = 0; k < n_hi; ++k) {
        ptrdiff_t idx = static_cast<ptrdiff_t>(m) - static_cast<ptrdiff_t>(k * step);
        if (idx >= 0 && idx < static_cast<ptrdiff_t>(phi.size()))
          acc += fp.hi[k] * phi[static_cast<size_t>(idx)];
      }
      samples_[m] = s2 * acc;
    }
    t0_ = 0.0;
    t1_ = support;
    inv_dt_ = static_cast<double>(size_t{1} << levels);
    return;
  }

  // Delta-start iterate: its samples span the support once stretched over it,
  // which preserves the palindrome of symmetric filter banks.
  phi = cascade_from_delta(fp.lo, levels - 1);
  const size_t count = (phi.size() - 1) + (n_hi - 1) * step + 1;
  samples_.assign(count, 0.0);
  for (size_t m = 0; m < count; ++m) {
    double acc = 0.0;
    for (size_t k = 0; k < n_hi; ++k) {
      ptrdiff_t idx = static_cast<ptrdiff_t>(m) - static_cast<ptrdiff_t>(k * step);
      if (idx >= 0 && idx < static_cast<ptrdiff_t>(phi.size()))
        acc += fp.hi[k] * phi[static_cast<size_t>(idx)];
    }
    samples_[m] = s2 * acc;
  }
  t0_ = 0.0;
  t1_ = support;
  inv_dt_ = static_cast<double>(count - 1) / support;
}

std::shared_ptr<const WaveletTable> WaveletTable::get(WaveletFamily family, int resolution) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const WaveletTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(static_cast<int>(family), resolution);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<const WaveletTable>(family, resolution);
  cache.emplace(key, table);
  return table;
}

}  // namespace falldet
