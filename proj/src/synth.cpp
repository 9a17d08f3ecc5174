#include "falldet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "falldet/rng.hpp"

namespace falldet {

namespace {

constexpr double kTau = 6.283185307179586476925287;

double smooth01(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * (3.0 - 2.0 * x);
}

// Builds one record as gravity following an orientation path plus body
// acceleration expressed in a local frame (along gravity, two orthogonals).
struct RecordBuilder {
  size_t L;
  double fs;
  Rng& rng;
  std::vector<double> theta, phi, gscale;
  std::vector<double> body_v, body_h1, body_h2;

  RecordBuilder(size_t length, double rate, Rng& r)
      : L(length), fs(rate), rng(r), theta(length, 0.0), phi(length, 0.0), gscale(length, 1.0),
        body_v(length, 0.0), body_h1(length, 0.0), body_h2(length, 0.0) {}

  double t_of(size_t i) const { return static_cast<double>(i) / fs; }
  double duration() const { return static_cast<double>(L) / fs; }

  void set_orientation(double th0, double ph0, double th1, double ph1, double t0, double t1) {
    for (size_t i = 0; i < L; ++i) {
      double s = smooth01((t_of(i) - t0) / (t1 - t0));
      theta[i] = th0 + (th1 - th0) * s;
      phi[i] = ph0 + (ph1 - ph0) * s;
    }
  }

  void add_orientation_wobble(double amp, double freq) {
    double ph = rng.uniform(0.0, kTau);
    for (size_t i = 0; i < L; ++i) theta[i] += amp * std::sin(kTau * freq * t_of(i) + ph);
  }

  void add_periodic(double amp, double freq, double vert_frac, double t0, double t1,
                    double harmonic = 0.35) {
    double ph = rng.uniform(0.0, kTau);
    double ph2 = rng.uniform(0.0, kTau);
    double h_split = rng.uniform(0.3, 0.7);
    for (size_t i = 0; i < L; ++i) {
      double t = t_of(i);
      if (t < t0 || t > t1) continue;
      double edge = smooth01((t - t0) / 0.2) * smooth01((t1 - t) / 0.2);
      double base = std::sin(kTau * freq * t + ph) + harmonic * std::sin(2.0 * kTau * freq * t + ph2);
      double v = amp * base * edge;
      body_v[i] += vert_frac * v;
      body_h1[i] += (1.0 - vert_frac) * h_split * v;
      body_h2[i] += (1.0 - vert_frac) * (1.0 - h_split) * v;
    }
  }

  void add_bump(double amp, double center, double width, double vert_frac) {
    double h_split = rng.uniform(0.2, 0.8);
    for (size_t i = 0; i < L; ++i) {
      double z = (t_of(i) - center) / width;
      double v = amp * std::exp(-0.5 * z * z);
      body_v[i] += vert_frac * v;
      body_h1[i] += (1.0 - vert_frac) * h_split * v;
      body_h2[i] += (1.0 - vert_frac) * (1.0 - h_split) * v;
    }
  }

  void add_impact(double amp, double t0, double tau_decay, double f_osc) {
    double wv = rng.uniform(0.55, 0.85);
    double w1 = rng.uniform(0.0, 1.0 - wv);
    double w2 = 1.0 - wv - w1;
    for (size_t i = 0; i < L; ++i) {
      double dt = t_of(i) - t0;
      if (dt < 0.0) continue;
      double rise = std::min(1.0, dt / 0.02);
      double v = amp * rise * std::exp(-dt / tau_decay) * std::cos(kTau * f_osc * dt);
      body_v[i] += wv * v;
      body_h1[i] += w1 * v;
      body_h2[i] += w2 * v;
    }
  }

  // Gravity reading drops toward gamma_min while falling.
  void add_freefall(double t0, double t1, double gamma_min) {
    for (size_t i = 0; i < L; ++i) {
      double t = t_of(i);
      if (t < t0 || t > t1) continue;
      double s = smooth01((t - t0) / (0.4 * (t1 - t0)));
      double e = smooth01((t1 - t) / (0.25 * (t1 - t0)));
      gscale[i] = std::min(gscale[i], 1.0 - (1.0 - gamma_min) * std::min(s, e));
    }
  }

  void add_tremor(double sigma, double t0, double t1) {
    if (sigma <= 0.0) return;
    for (size_t i = 0; i < L; ++i) {
      double t = t_of(i);
      if (t < t0 || t > t1) continue;
      body_v[i] += rng.normal(0.0, sigma);
      body_h1[i] += rng.normal(0.0, sigma);
      body_h2[i] += rng.normal(0.0, sigma);
    }
  }

  Record finish(std::string id, std::string activity, Label label, double noise_sigma) {
    Record r;
    r.id = std::move(id);
    r.activity = std::move(activity);
    r.label = label;
    r.fs = fs;
    r.ax.resize(L);
    r.ay.resize(L);
    r.az.resize(L);
    for (size_t i = 0; i < L; ++i) {
      double st = std::sin(theta[i]), ct = std::cos(theta[i]);
      double sp = std::sin(phi[i]), cp = std::cos(phi[i]);
      // u: gravity direction; e1, e2: orthogonal unit vectors
      double ux = st * cp, uy = ct, uz = st * sp;
      double e1x = ct * cp, e1y = -st, e1z = ct * sp;
      double e2x = -sp, e2z = cp;  // e2 has no y component
      double a = gscale[i] + body_v[i];
      r.ax[i] = a * ux + body_h1[i] * e1x + body_h2[i] * e2x + rng.normal(0.0, noise_sigma);
      r.ay[i] = a * uy + body_h1[i] * e1y + rng.normal(0.0, noise_sigma);
      r.az[i] = a * uz + body_h1[i] * e1z + body_h2[i] * e2z + rng.normal(0.0, noise_sigma);
    }
    return r;
  }
};

enum class Archetype {
  StandUpSit,
  StandUpLying,
  Walking,
  Running,
  Upstairs,
  Jumping,
  Downstairs,
  LyingDown,
  SittingDown,
  FallForward,
  FallRight,
  FallBackward,
  FallLeft,
  HitObstacle,
  FallProtection,
  FallChair,
  Syncope,
};

struct ClassSpec {
  Archetype kind;
  const char* name;
  Label label;
  size_t count;  // counts at the published dataset size
};

const ClassSpec kUnimibClasses[] = {
    {Archetype::StandUpSit, "Standing up from sitting", Label::ADL, 153},
    {Archetype::StandUpLying, "Standing up from lying", Label::ADL, 216},
    {Archetype::Walking, "Walking", Label::ADL, 1738},
    {Archetype::Running, "Running", Label::ADL, 1985},
    {Archetype::Upstairs, "Going upstairs", Label::ADL, 921},
    {Archetype::Jumping, "Jumping", Label::ADL, 746},
    {Archetype::Downstairs, "Going downstairs", Label::ADL, 1324},
    {Archetype::LyingDown, "Lying down from standing", Label::ADL, 296},
    {Archetype::SittingDown, "Sitting down", Label::ADL, 200},
    {Archetype::FallForward, "Falling forward", Label::FALL, 529},
    {Archetype::FallRight, "Falling right", Label::FALL, 511},
    {Archetype::FallBackward, "Falling backward", Label::FALL, 526},
    {Archetype::FallLeft, "Falling left", Label::FALL, 534},
    {Archetype::HitObstacle, "Hitting obstacle", Label::FALL, 661},
    {Archetype::FallProtection, "Falling with protection strategies", Label::FALL, 484},
    {Archetype::FallChair, "Falling backward sitting on chair", Label::FALL, 434},
    {Archetype::Syncope, "Syncope", Label::FALL, 513},
};

double fall_direction_phi(Archetype a, Rng& rng) {
  double base;
  switch (a) {
    case Archetype::FallForward: base = 0.0; break;
    case Archetype::FallRight: base = kTau / 4.0; break;
    case Archetype::FallBackward: base = kTau / 2.0; break;
    case Archetype::FallLeft: base = -kTau / 4.0; break;
    default: base = rng.uniform(0.0, kTau); break;
  }
  return base + rng.uniform(-0.3, 0.3);
}

// Impact strength scale lets the small-dataset generator reuse the same
// archetypes with soft/strong variants.
void generate_event(RecordBuilder& b, Archetype kind, double strength, Rng& rng) {
  const double dur = b.duration();
  switch (kind) {
    case Archetype::Walking: {
      b.set_orientation(rng.uniform(0.04, 0.18), rng.uniform(0.0, kTau), 0.0, 0.0, -1.0, -0.5);
      b.add_orientation_wobble(rng.uniform(0.015, 0.04), rng.uniform(0.2, 0.5));
      b.add_periodic(rng.uniform(0.13, 0.33) * strength, rng.uniform(1.6, 2.3), 0.72, 0.0, dur);
      break;
    }
    case Archetype::Running: {
      b.set_orientation(rng.uniform(0.06, 0.22), rng.uniform(0.0, kTau), 0.0, 0.0, -1.0, -0.5);
      b.add_orientation_wobble(rng.uniform(0.02, 0.05), rng.uniform(0.3, 0.6));
      b.add_periodic(rng.uniform(0.45, 0.95) * strength, rng.uniform(2.4, 3.3), 0.78, 0.0, dur);
      break;
    }
    case Archetype::Upstairs: {
      b.set_orientation(rng.uniform(0.08, 0.22), rng.uniform(0.0, kTau), 0.0, 0.0, -1.0, -0.5);
      b.add_orientation_wobble(rng.uniform(0.02, 0.05), rng.uniform(0.2, 0.4));
      b.add_periodic(rng.uniform(0.20, 0.45) * strength, rng.uniform(1.4, 1.9), 0.65, 0.0, dur);
      break;
    }
    case Archetype::Downstairs: {
      b.set_orientation(rng.uniform(0.08, 0.22), rng.uniform(0.0, kTau), 0.0, 0.0, -1.0, -0.5);
      b.add_orientation_wobble(rng.uniform(0.02, 0.06), rng.uniform(0.25, 0.5));
      b.add_periodic(rng.uniform(0.28, 0.60) * strength, rng.uniform(1.9, 2.45), 0.7, 0.0, dur,
                     0.5);
      break;
    }
    case Archetype::Jumping: {
      b.set_orientation(rng.uniform(0.04, 0.15), rng.uniform(0.0, kTau), 0.0, 0.0, -1.0, -0.5);
      bool single_impact_variant = rng.coin(0.06);  // reads like a protected fall
      int hops = single_impact_variant ? 1 : 2 + static_cast<int>(rng.next_below(3));
      double t = rng.uniform(0.35, 0.7);
      for (int h = 0; h < hops && t < dur - 0.35; ++h) {
        double dip = rng.uniform(0.12, 0.2);
        b.add_freefall(t - dip, t, rng.uniform(0.25, 0.5));
        b.add_impact(rng.uniform(0.9, 1.9) * strength, t, rng.uniform(0.07, 0.1),
                     rng.uniform(9.0, 13.0));
        t += rng.uniform(0.55, 0.85);
      }
      if (single_impact_variant)
        b.set_orientation(0.1, rng.uniform(0.0, kTau), rng.uniform(0.25, 0.45),
                          rng.uniform(0.0, kTau), t - 0.6, t - 0.1);
      b.add_periodic(rng.uniform(0.06, 0.14), rng.uniform(1.0, 1.6), 0.7, 0.0, dur);
      break;
    }
    case Archetype::StandUpSit: {
      double tc = rng.uniform(0.8, std::min(1.6, dur - 0.8));
      b.set_orientation(rng.uniform(0.25, 0.45), rng.uniform(0.0, kTau), rng.uniform(0.03, 0.13),
                        rng.uniform(0.0, kTau), tc - 0.4, tc + 0.5);
      b.add_bump(rng.uniform(0.12, 0.30), tc, rng.uniform(0.35, 0.55), 0.8);
      break;
    }
    case Archetype::StandUpLying: {
      // two-stage rise: sit up, pause, then stand; effort bumps, no impact
      double phi0 = rng.uniform(0.0, kTau);
      double t0 = rng.uniform(0.25, 0.55);
      double t_sit = t0 + rng.uniform(0.5, 0.8);
      double t_stand0 = t_sit + rng.uniform(0.3, 0.6);
      double t_stand1 = t_stand0 + rng.uniform(0.5, 0.8);
      double th_lying = rng.uniform(1.3, 1.57), th_sit = rng.uniform(0.6, 0.8);
      double th_up = rng.uniform(0.05, 0.15);
      for (size_t i = 0; i < b.L; ++i) {
        double t = b.t_of(i);
        double s1 = smooth01((t - t0) / (t_sit - t0));
        double s2 = smooth01((t - t_stand0) / (t_stand1 - t_stand0));
        b.theta[i] = th_lying + (th_sit - th_lying) * s1 + (th_up - th_sit) * s2;
        b.phi[i] = phi0;
      }
      b.add_bump(rng.uniform(0.12, 0.25), t_sit, rng.uniform(0.25, 0.4), 0.75);
      b.add_bump(rng.uniform(0.20, 0.42), t_stand1 - 0.2, rng.uniform(0.3, 0.45), 0.8);
      b.add_periodic(rng.uniform(0.04, 0.1), rng.uniform(0.8, 1.4), 0.7, t_stand1, b.duration());
      break;
    }
    case Archetype::SittingDown: {
      double tc = rng.uniform(0.8, std::min(1.8, dur - 0.7));
      b.set_orientation(rng.uniform(0.03, 0.13), rng.uniform(0.0, kTau), rng.uniform(0.25, 0.5),
                        rng.uniform(0.0, kTau), tc - 0.35, tc + 0.35);
      b.add_bump(rng.uniform(0.25, 0.55), tc, rng.uniform(0.22, 0.35), 0.85);
      break;
    }
    case Archetype::LyingDown: {
      // sit on the bed, pause, then swing horizontal; falls never pause
      bool fast_variant = rng.coin(0.08);  // drops into bed, reads like a collapse
      double phi0 = (rng.coin(0.5) ? 0.0 : 3.1) + rng.uniform(-0.3, 0.3);
      if (fast_variant) {
        double t0 = rng.uniform(0.5, 0.9);
        double t1 = std::min(t0 + rng.uniform(0.6, 0.9), dur - 0.4);
        b.set_orientation(rng.uniform(0.05, 0.15), phi0, rng.uniform(1.35, 1.57), phi0, t0, t1);
        b.add_impact(rng.uniform(0.3, 0.5), t1, rng.uniform(0.07, 0.1), rng.uniform(7.0, 10.0));
        b.add_tremor(rng.uniform(0.004, 0.012), t1 + 0.2, dur);
      } else {
        double t0 = rng.uniform(0.35, 0.55);
        double t_sit = t0 + rng.uniform(0.45, 0.55);
        double t_lie0 = t_sit + rng.uniform(0.4, 0.55);
        double t_lie1 = std::min(t_lie0 + rng.uniform(0.7, 0.9), dur - 0.25);
        double th_sit = rng.uniform(0.4, 0.5), th_flat = rng.uniform(1.4, 1.57);
        for (size_t i = 0; i < b.L; ++i) {
          double t = b.t_of(i);
          double s1 = smooth01((t - t0) / (t_sit - t0));
          double s2 = smooth01((t - t_lie0) / (t_lie1 - t_lie0));
          b.theta[i] = 0.1 + (th_sit - 0.1) * s1 + (th_flat - th_sit) * s2;
          b.phi[i] = phi0;
        }
        b.add_bump(rng.uniform(0.18, 0.26), t_sit, rng.uniform(0.22, 0.28), 0.8);
        b.add_bump(rng.uniform(0.12, 0.2), t_lie1 - 0.1, rng.uniform(0.28, 0.36), 0.7);
        b.add_tremor(rng.uniform(0.025, 0.035), t_lie1, dur);
      }
      break;
    }
    case Archetype::Syncope: {
      // fast unconscious collapse, weak impact, dead-still afterwards
      bool soft_collapse = rng.coin(0.08);  // slumps slowly, reads like lying down
      double t0 = rng.uniform(0.5, 1.2);
      double t1 = t0 + (soft_collapse ? rng.uniform(1.2, 1.9) : rng.uniform(0.45, 0.9));
      t1 = std::min(t1, dur - 0.3);
      b.set_orientation(rng.uniform(0.05, 0.15), rng.uniform(0.0, kTau), rng.uniform(1.35, 1.57),
                        fall_direction_phi(Archetype::Syncope, rng), t0, t1);
      if (soft_collapse) {
        b.add_bump(rng.uniform(0.12, 0.30), t1 - 0.15, rng.uniform(0.3, 0.45), 0.75);
        b.add_tremor(rng.uniform(0.02, 0.04), t1, dur);
      } else {
        b.add_freefall(t1 - rng.uniform(0.15, 0.3), t1, rng.uniform(0.65, 0.85));
        b.add_impact(rng.uniform(0.45, 0.9) * strength, t1, rng.uniform(0.06, 0.09),
                     rng.uniform(7.0, 11.0));
        b.add_tremor(rng.uniform(0.004, 0.012), t1 + 0.2, dur);
      }
      break;
    }
    case Archetype::FallForward:
    case Archetype::FallRight:
    case Archetype::FallBackward:
    case Archetype::FallLeft: {
      double t_fall = rng.uniform(0.7, 1.4);
      double dt = rng.uniform(0.25, 0.4);
      double t_imp = t_fall + dt;
      if (rng.coin(0.6))
        b.add_periodic(rng.uniform(0.08, 0.2), rng.uniform(1.5, 2.1), 0.7, 0.0, t_fall);
      b.add_freefall(t_fall, t_imp, rng.uniform(0.15, 0.45));
      b.add_impact(rng.uniform(1.6, 3.2) * strength, t_imp, rng.uniform(0.06, 0.12),
                   rng.uniform(8.0, 14.0));
      b.add_impact(rng.uniform(0.3, 0.7) * strength, t_imp + rng.uniform(0.1, 0.18),
                   rng.uniform(0.05, 0.08), rng.uniform(6.0, 10.0));
      b.set_orientation(rng.uniform(0.05, 0.18), rng.uniform(0.0, kTau), rng.uniform(1.35, 1.57),
                        fall_direction_phi(kind, rng), t_fall, t_imp + rng.uniform(0.2, 0.4));
      b.add_tremor(rng.uniform(0.015, 0.05), t_imp + 0.25, dur);
      break;
    }
    case Archetype::HitObstacle: {
      b.set_orientation(rng.uniform(0.05, 0.18), rng.uniform(0.0, kTau), 0.0, 0.0, -1.0, -0.5);
      double f_walk = rng.uniform(1.7, 2.2);
      double a_walk = rng.uniform(0.15, 0.30);
      double t_imp = rng.uniform(1.0, std::min(1.9, dur - 0.8));
      bool soft_variant = rng.coin(0.05);  // glancing hit, keeps walking upright
      b.add_periodic(a_walk, f_walk, 0.72, 0.0, t_imp);
      b.add_impact(rng.uniform(1.0, 2.0) * (soft_variant ? 0.55 : 1.0) * strength, t_imp,
                   rng.uniform(0.06, 0.1), rng.uniform(8.0, 13.0));
      if (!soft_variant)
        b.set_orientation(rng.uniform(0.05, 0.18), rng.uniform(0.0, kTau), rng.uniform(0.35, 0.8),
                          fall_direction_phi(kind, rng), t_imp, t_imp + rng.uniform(0.25, 0.45));
      b.add_periodic(a_walk * 0.6, f_walk, 0.72, t_imp + 0.3, dur);
      break;
    }
    case Archetype::FallProtection: {
      double t_fall = rng.uniform(0.8, 1.5);
      double dt = rng.uniform(0.2, 0.3);
      double t_imp = t_fall + dt;
      bool jumpy_variant = rng.coin(0.06);  // caught themselves, two hops, stays upright
      if (rng.coin(0.5))
        b.add_periodic(rng.uniform(0.08, 0.18), rng.uniform(1.5, 2.0), 0.7, 0.0, t_fall);
      b.add_freefall(t_fall, t_imp, rng.uniform(0.45, 0.65));
      b.add_impact(rng.uniform(0.8, 1.7) * strength, t_imp, rng.uniform(0.06, 0.1),
                   rng.uniform(8.0, 13.0));
      if (jumpy_variant) {
        b.add_freefall(t_imp + 0.4, t_imp + 0.55, rng.uniform(0.3, 0.5));
        b.add_impact(rng.uniform(0.8, 1.4), t_imp + 0.55, rng.uniform(0.07, 0.1),
                     rng.uniform(9.0, 12.0));
      } else {
        b.set_orientation(rng.uniform(0.05, 0.18), rng.uniform(0.0, kTau), rng.uniform(0.9, 1.35),
                          fall_direction_phi(kind, rng), t_fall, t_imp + rng.uniform(0.3, 0.5));
        b.add_bump(rng.uniform(0.15, 0.3), t_imp + rng.uniform(0.5, 0.8), 0.3, 0.6);
      }
      break;
    }
    case Archetype::FallChair: {
      double t_fall = rng.uniform(0.9, 1.6);
      b.add_bump(rng.uniform(0.2, 0.4), t_fall - 0.35, rng.uniform(0.2, 0.3), 0.8);
      b.add_freefall(t_fall, t_fall + 0.22, rng.uniform(0.35, 0.55));
      b.add_impact(rng.uniform(0.9, 1.8) * strength, t_fall + 0.22, rng.uniform(0.06, 0.1),
                   rng.uniform(8.0, 12.0));
      b.set_orientation(rng.uniform(0.15, 0.3), rng.uniform(0.0, kTau), rng.uniform(0.7, 1.1),
                        fall_direction_phi(kind, rng), t_fall, t_fall + rng.uniform(0.4, 0.6));
      b.add_tremor(rng.uniform(0.01, 0.04), t_fall + 0.5, dur);
      break;
    }
  }
}

Record make_record(const ClassSpec& cls, size_t L, double fs, double strength, std::string id,
                   uint64_t record_seed) {
  Rng rng(record_seed);
  RecordBuilder b(L, fs, rng);
  b.set_orientation(rng.uniform(0.04, 0.16), rng.uniform(0.0, kTau), 0.0, 0.0, -1.0, -0.5);
  generate_event(b, cls.kind, strength, rng);
  double noise = rng.uniform(0.030, 0.045);
  return b.finish(std::move(id), cls.name, cls.label, noise);
}

std::vector<size_t> allocate_counts(size_t n, const ClassSpec* classes, size_t n_classes,
                                    size_t published_total) {
  std::vector<size_t> counts(n_classes);
  if (n == published_total) {
    for (size_t i = 0; i < n_classes; ++i) counts[i] = classes[i].count;
    return counts;
  }
  // Largest-remainder proportional allocation.
  std::vector<double> remainders(n_classes);
  size_t assigned = 0;
  for (size_t i = 0; i < n_classes; ++i) {
    double exact = static_cast<double>(n) * static_cast<double>(classes[i].count) /
                   static_cast<double>(published_total);
    counts[i] = static_cast<size_t>(std::floor(exact));
    remainders[i] = exact - std::floor(exact);
    assigned += counts[i];
  }
  std::vector<size_t> order(n_classes);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return remainders[a] > remainders[b]; });
  for (size_t i = 0; assigned < n; ++i, ++assigned) counts[order[i % n_classes]]++;
  return counts;
}

}  // namespace

Dataset make_unimib_surrogate(size_t n, uint64_t seed) {
  constexpr size_t kPublishedTotal = 11771;
  constexpr size_t kLength = 151;
  constexpr double kFs = 50.0;
  const size_t n_classes = std::size(kUnimibClasses);

  std::vector<size_t> counts = allocate_counts(n, kUnimibClasses, n_classes, kPublishedTotal);

  Dataset ds;
  ds.name = "unimib-surrogate";
  ds.records.reserve(n);
  size_t index = 0;
  for (size_t c = 0; c < n_classes; ++c) {
    for (size_t i = 0; i < counts[c]; ++i, ++index) {
      char id[32];
      std::snprintf(id, sizeof(id), "u%06zu", index);
      ds.records.push_back(make_record(kUnimibClasses[c], kLength, kFs, 1.0, id,
                                       derive_seed(seed, index, "synth-unimib")));
    }
  }
  return ds;
}

Dataset make_gibson_surrogate(uint64_t seed) {
  constexpr size_t kLength = 101;
  constexpr double kFs = 50.0;
  struct Row {
    Archetype kind;
    const char* name;
    Label label;
    size_t count;
    double strength;
  };
  const Row rows[] = {
      {Archetype::Jumping, "Jumping (3 times)", Label::ADL, 6, 1.0},
      {Archetype::Jumping, "Jumping (1 time)", Label::ADL, 6, 0.9},
      {Archetype::LyingDown, "Lie down from sitting position", Label::ADL, 6, 0.9},
      {Archetype::LyingDown, "Lie down from sitting position quickly", Label::ADL, 6, 1.2},
      {Archetype::Running, "Running", Label::ADL, 15, 1.0},
      {Archetype::SittingDown, "Sitting on chair", Label::ADL, 7, 0.9},
      {Archetype::SittingDown, "Sitting on chair quickly", Label::ADL, 6, 1.3},
      {Archetype::StandUpSit, "Standing up", Label::ADL, 6, 1.0},
      {Archetype::StandUpSit, "Standing up quickly", Label::ADL, 6, 1.3},
      {Archetype::Walking, "Walking", Label::ADL, 22, 1.0},
      {Archetype::Walking, "Walking quickly", Label::ADL, 6, 1.5},
      {Archetype::FallForward, "Soft front fall", Label::FALL, 19, 0.85},
      {Archetype::FallBackward, "Soft back fall", Label::FALL, 19, 0.85},
      {Archetype::FallLeft, "Soft left fall", Label::FALL, 19, 0.85},
      {Archetype::FallRight, "Soft right fall", Label::FALL, 19, 0.85},
      {Archetype::FallForward, "Strong front fall", Label::FALL, 15, 1.35},
      {Archetype::FallBackward, "Strong back fall", Label::FALL, 15, 1.35},
      {Archetype::FallLeft, "Strong left fall", Label::FALL, 15, 1.35},
      {Archetype::FallRight, "Strong right fall", Label::FALL, 15, 1.35},
  };

  Dataset ds;
  ds.name = "gibson-surrogate";
  size_t index = 0;
  for (const auto& row : rows) {
    ClassSpec cls{row.kind, row.name, row.label, row.count};
    for (size_t i = 0; i < row.count; ++i, ++index) {
      char id[32];
      std::snprintf(id, sizeof(id), "g%04zu", index);
      ds.records.push_back(make_record(cls, kLength, kFs, row.strength, id,
                                       derive_seed(seed, index, "synth-gibson")));
    }
  }
  return ds;
}

Dataset make_blob_dataset(size_t n, size_t L, double separation, uint64_t seed) {
  Dataset ds;
  ds.name = "blobs";
  ds.records.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, i, "synth-blob"));
    bool fall = i % 2 == 1;
    Record r;
    char id[32];
    std::snprintf(id, sizeof(id), "b%05zu", i);
    r.id = id;
    r.activity = fall ? "blob fall" : "blob adl";
    r.label = fall ? Label::FALL : Label::ADL;
    r.fs = 50.0;
    r.ax.resize(L);
    r.ay.resize(L);
    r.az.resize(L);
    for (size_t t = 0; t < L; ++t) {
      double base = fall ? separation : 0.0;
      r.ax[t] = base + rng.normal(0.0, 0.05);
      r.ay[t] = 1.0 + (fall ? separation : 0.0) + rng.normal(0.0, 0.05);
      r.az[t] = rng.normal(0.0, 0.05);
    }
    ds.records.push_back(std::move(r));
  }
  return ds;
}

Dataset make_constant_dataset(size_t n, size_t L, double adl_fraction, uint64_t seed) {
  Dataset ds;
  ds.name = "constant";
  Rng rng(derive_seed(seed, 0, "synth-constant"));
  for (size_t i = 0; i < n; ++i) {
    Record r;
    char id[32];
    std::snprintf(id, sizeof(id), "c%05zu", i);
    r.id = id;
    r.label = rng.uniform01() < adl_fraction ? Label::ADL : Label::FALL;
    r.activity = r.label == Label::ADL ? "constant adl" : "constant fall";
    r.fs = 50.0;
    r.ax.assign(L, 0.0);
    r.ay.assign(L, 1.0);
    r.az.assign(L, 0.0);
    ds.records.push_back(std::move(r));
  }
  return ds;
}

Dataset make_random_dataset(size_t n, size_t L, uint64_t seed) {
  Dataset ds;
  ds.name = "random";
  for (size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, i, "synth-random"));
    Record r;
    char id[32];
    std::snprintf(id, sizeof(id), "r%05zu", i);
    r.id = id;
    r.label = rng.coin(0.5) ? Label::FALL : Label::ADL;
    r.activity = r.label == Label::ADL ? "noise adl" : "noise fall";
    r.fs = 50.0;
    r.ax.resize(L);
    r.ay.resize(L);
    r.az.resize(L);
    for (size_t t = 0; t < L; ++t) {
      r.ax[t] = rng.normal(0.0, 1.0);
      r.ay[t] = rng.normal(0.0, 1.0);
      r.az[t] = rng.normal(0.0, 1.0);
    }
    ds.records.push_back(std::move(r));
  }
  return ds;
}

}  // namespace falldet
