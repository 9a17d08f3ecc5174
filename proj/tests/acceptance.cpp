// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria.
//
// The published benchmark recordings are not redistributable, so the runs use
// the deterministic surrogate dataset unless FALLDET_UNIMIB_CSV points at a
// converted canonical copy of the real data.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "falldet/dataset.hpp"
#include "falldet/eval.hpp"
#include "falldet/gateway.hpp"
#include "falldet/model_io.hpp"
#include "falldet/synth.hpp"
#include "support/oracles.hpp"

using namespace falldet;
using namespace falldet::testing;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n        %s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

bool within(double value, double center, double tol) {
  return value >= center - tol && value <= center + tol;
}

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr uint64_t kDataSeed = 424242;
constexpr uint64_t kEvalSeed = 31337;

Dataset acceptance_dataset() {
  if (const char* env = std::getenv("FALLDET_UNIMIB_CSV")) {
    std::printf("        using real dataset from FALLDET_UNIMIB_CSV=%s\n", env);
    return load_canonical(env);
  }
  // Surrogate at the published size, written out and re-read so the canonical
  // file path is exercised at scale.
  namespace fs = std::filesystem;
  Dataset ds = make_unimib_surrogate(11771, kDataSeed);
  fs::path dir = fs::temp_directory_path() / "falldet_acceptance";
  fs::create_directories(dir);
  std::string path = (dir / "unimib_surrogate.csv").string();
  save_canonical(ds, path);
  Dataset loaded = load_canonical(path);
  if (loaded.size() != 11771 || loaded.length() != 151)
    throw std::runtime_error("surrogate round-trip failed");
  loaded.name = ds.name;
  return loaded;
}

EvalOptions base_options() {
  EvalOptions opt;
  opt.features = FeatureConfig::parse("cwt,svm,sma,se", {});
  opt.split = SplitSpec{0.70, 5, kEvalSeed};
  opt.knn_k = 5;
  opt.enn_e = 5;
  opt.bdt = true;
  return opt;
}

EvalReport run_criterion_1(const Dataset& ds) {
  auto t0 = Clock::now();
  EvalReport r = run_protocol(ds, base_options());
  double elapsed = seconds_since(t0);

  const Metrics& enn = r.avg(Classifier::ENN);
  const Metrics& knn = r.avg(Classifier::KNN);
  const Metrics& bdt = r.avg(Classifier::BDT);
  const Metrics& vm = r.avg(Classifier::VM);
  bool ok = enn.accuracy && within(*enn.accuracy, 99.07, 1.0) && enn.recall &&
            within(*enn.recall, 98.98, 1.5) && enn.specificity &&
            within(*enn.specificity, 99.12, 1.5) && knn.accuracy &&
            within(*knn.accuracy, 98.94, 1.0) && bdt.accuracy &&
            within(*bdt.accuracy, 96.79, 2.5) && vm.accuracy && within(*vm.accuracy, 99.14, 1.0) &&
            elapsed <= 1800.0;
  criterion(1, "5-fold 70/30 reproduction (cwt,svm,sma,se; k=e=5)", ok,
            "enn acc=" + fmt(*enn.accuracy) + " (99.07±1.0) re=" + fmt(*enn.recall) +
                " (98.98±1.5) sp=" + fmt(*enn.specificity) + " (99.12±1.5) | knn acc=" +
                fmt(*knn.accuracy) + " (98.94±1.0) | bdt acc=" + fmt(*bdt.accuracy) +
                " (96.79±2.5) | vm acc=" + fmt(*vm.accuracy) + " (99.14±1.0) | runtime " +
                fmt(elapsed, 1) + " s (<=1800)");
  return r;
}

EvalReport run_criterion_2(const Dataset& ds) {
  EvalOptions opt = base_options();
  opt.split = SplitSpec{0.90, 10, kEvalSeed};
  EvalReport r = run_protocol(ds, opt);
  const Metrics& enn = r.avg(Classifier::ENN);
  bool ok = enn.accuracy && within(*enn.accuracy, 99.15, 1.0) && enn.f1 &&
            within(*enn.f1, 98.81, 1.5);
  criterion(2, "10-fold 90/10 block", ok,
            "enn acc=" + fmt(*enn.accuracy) + " (99.15±1.0) f1=" + fmt(*enn.f1) + " (98.81±1.5)");
  return r;
}

void run_criterion_3(const Dataset& ds, const EvalReport& r1, const EvalReport& r2) {
  auto t_of = [](const EvalReport& r, Classifier c) {
    return r.mean_classify_ms[static_cast<size_t>(c)];
  };
  bool order1 = t_of(r1, Classifier::BDT) < t_of(r1, Classifier::ENN) &&
                t_of(r1, Classifier::ENN) < t_of(r1, Classifier::KNN);
  bool order2 = t_of(r2, Classifier::BDT) < t_of(r2, Classifier::ENN) &&
                t_of(r2, Classifier::ENN) < t_of(r2, Classifier::KNN);

  double combo_enn = *r1.avg(Classifier::ENN).accuracy;
  double combo_vm = *r1.avg(Classifier::VM).accuracy;
  bool combo_wins = true;
  bool se_tie = false;
  std::string singles;
  for (const char* feat : {"tsvm", "sma", "svm", "range", "se", "cwt"}) {
    EvalOptions opt = base_options();
    opt.features = FeatureConfig::parse(feat, {});
    EvalReport r = run_protocol(ds, opt);
    double enn_acc = *r.avg(Classifier::ENN).accuracy;
    double vm_acc = *r.avg(Classifier::VM).accuracy;
    if (!(combo_enn > enn_acc && combo_vm > vm_acc)) {
      combo_wins = false;
      if (std::string(feat) == "se") se_tie = true;
    }
    singles += std::string(feat) + "=" + fmt(enn_acc) + "/" + fmt(vm_acc) + " ";
  }
  bool ok = order1 && order2 && combo_wins;
  std::string detail =
      "time 70/30 bdt/enn/knn=" + fmt(t_of(r1, Classifier::BDT), 4) + "/" +
      fmt(t_of(r1, Classifier::ENN), 4) + "/" + fmt(t_of(r1, Classifier::KNN), 4) + " ms, 90/10=" +
      fmt(t_of(r2, Classifier::BDT), 4) + "/" + fmt(t_of(r2, Classifier::ENN), 4) + "/" +
      fmt(t_of(r2, Classifier::KNN), 4) + " ms | combo enn/vm=" + fmt(combo_enn) + "/" +
      fmt(combo_vm) + " vs singles (enn/vm acc): " + singles;
  if (se_tie)
    detail +=
        "\n        note: the se row ties the combination. Without normalization the energy "
        "features dominate every Euclidean distance (their squared pairwise gaps run ~5 orders "
        "of magnitude above all other blocks combined), so any combination containing se gives "
        "the nearest-neighbor classifiers identical predictions to se alone, and the majority "
        "vote follows them; a strict accuracy win over the se row is unreachable by "
        "construction.";
  criterion(3, "ordering claims: classification time and combination rank", ok, detail);
}

void run_criterion_4(const Dataset& ds) {
  Dataset subset = ds.size() > 2000 ? stratified_subset(ds, 2000, kEvalSeed) : ds;
  EvalOptions base;
  base.features = FeatureConfig::parse("cwt,svm,sma,se", {});
  base.split = SplitSpec{0.70, 5, kEvalSeed};
  std::vector<int> ks{1, 3, 5, 7, 9, 11, 13, 15, 17};
  auto rows = sweep_neighbors(subset, base, ks);

  auto acc_of = [&rows](const std::string& classifier, int k) {
    for (const auto& row : rows)
      if (row.classifier == classifier && row.metric == "accuracy" &&
          row.param == std::to_string(k))
        return row.value.value_or(0.0);
    return 0.0;
  };
  double knn_best = std::max({acc_of("knn", 3), acc_of("knn", 5), acc_of("knn", 7)});
  double enn_best = std::max({acc_of("enn", 3), acc_of("enn", 5), acc_of("enn", 7)});
  double knn17 = acc_of("knn", 17), enn17 = acc_of("enn", 17);
  double knn_drop = knn_best - knn17, enn_drop = enn_best - enn17;
  bool ok = knn_best > knn17 && enn_drop <= knn_drop + 0.5;
  criterion(4, "neighbor-sweep shape on a 2000-record stratified subset", ok,
            "knn best{3,5,7}=" + fmt(knn_best) + " at17=" + fmt(knn17) + " drop=" +
                fmt(knn_drop) + " | enn best=" + fmt(enn_best) + " at17=" + fmt(enn17) +
                " drop=" + fmt(enn_drop) + " (<= knn drop + 0.5)");
}

void run_criterion_5(const Dataset& ds) {
  Rng rng(20206);

  // (a) ENN from-scratch oracle equivalence, 200 instances with n <= 60
  size_t enn_bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 8 + rng.next_below(53);
    size_t dim = 1 + rng.next_below(6);
    FeatureMatrix m = random_matrix(n, dim, rng);
    int e = std::min<int>(static_cast<int>(n) - 1, 1 + 2 * static_cast<int>(rng.next_below(4)));
    if (e % 2 == 0) --e;
    EnnModel model = enn_preprocess_serial(m, e);
    for (int q = 0; q < 3; ++q) {
      std::vector<double> query(dim);
      for (auto& v : query) v = rng.normal(0.0, 1.4);
      if (enn_classify(model, query) != enn_oracle(m, query.data(), e).label) ++enn_bad;
    }
  }

  // (b) brute-force KNN oracle equivalence, 200 instances
  size_t knn_bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 5 + rng.next_below(50);
    size_t dim = 1 + rng.next_below(8);
    FeatureMatrix m = random_matrix(n, dim, rng);
    int k = std::min<int>(static_cast<int>(n), 1 + 2 * static_cast<int>(rng.next_below(5)));
    if (k % 2 == 0) --k;
    KnnModel model = knn_train(m, k);
    for (int q = 0; q < 3; ++q) {
      std::vector<double> query(dim);
      for (auto& v : query) v = rng.normal();
      if (knn_classify(model, query) != knn_oracle(m, query.data(), k)) ++knn_bad;
    }
  }

  // (c) Parseval and CWT linearity at 1e-9 relative over 1000 random records
  size_t parseval_bad = 0, linear_bad = 0;
  WaveletSpec w;  // bior2.2, scale 250
  for (int i = 0; i < 1000; ++i) {
    size_t L = 16 + rng.next_below(180);
    Record r = random_record(L, rng);
    auto e = signal_energy(r);
    for (int a = 0; a < 3; ++a) {
      const auto& axis = a == 0 ? r.ax : (a == 1 ? r.ay : r.az);
      double te = 0.0;
      for (double v : axis) te += v * v;
      double want = static_cast<double>(L) * te;
      if (std::abs(e[a] - want) > 1e-9 * std::max(1.0, std::abs(want))) ++parseval_bad;
    }
    double alpha = rng.uniform(-2.0, 2.0), beta = rng.uniform(-2.0, 2.0);
    std::vector<double> u(L), v(L), mix(L);
    for (size_t t = 0; t < L; ++t) {
      u[t] = rng.normal();
      v[t] = rng.normal();
      mix[t] = alpha * u[t] + beta * v[t];
    }
    auto cu = cwt_single_scale(u, w);
    auto cv = cwt_single_scale(v, w);
    auto cm = cwt_single_scale(mix, w);
    for (size_t t = 0; t < L; ++t) {
      double want = alpha * cu[t] + beta * cv[t];
      if (std::abs(cm[t] - want) > 1e-9 * std::max(1.0, std::abs(want))) ++linear_bad;
    }
  }

  // (d) metric identities
  size_t metric_bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    ConfusionCounts c{static_cast<int64_t>(rng.next_below(400) + 1),
                      static_cast<int64_t>(rng.next_below(400)),
                      static_cast<int64_t>(rng.next_below(400) + 1),
                      static_cast<int64_t>(rng.next_below(400))};
    Metrics m = compute_metrics(c);
    double P = static_cast<double>(c.tp + c.fn), N = static_cast<double>(c.tn + c.fp);
    double lhs = *m.accuracy * (P + N), rhs = *m.recall * P + *m.specificity * N;
    if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(lhs))) ++metric_bad;
    if (m.f1 && (*m.f1 < std::min(*m.precision, *m.recall) - 1e-9 ||
                 *m.f1 > std::max(*m.precision, *m.recall) + 1e-9))
      ++metric_bad;
  }

  // (e) end-to-end determinism: two seeded runs are byte identical
  Dataset small = stratified_subset(ds, 800, 5150);
  EvalOptions opt;
  opt.features = FeatureConfig::parse("cwt,svm,sma,se", {});
  opt.split = SplitSpec{0.70, 3, 777};
  opt.knn_k = 3;
  opt.enn_e = 3;
  opt.bdt = true;
  opt.timing = false;
  EvalReport ra = run_protocol(small, opt);
  EvalReport rb = run_protocol(small, opt);
  std::ostringstream ta, tb, ca, cb, ja, jb;
  write_text(ra, ta);
  write_text(rb, tb);
  write_csv(ra, ca);
  write_csv(rb, cb);
  write_json(ra, ja);
  write_json(rb, jb);
  bool deterministic = ta.str() == tb.str() && ca.str() == cb.str() && ja.str() == jb.str();

  bool ok = enn_bad == 0 && knn_bad == 0 && parseval_bad == 0 && linear_bad == 0 &&
            metric_bad == 0 && deterministic;
  criterion(5, "property-based substitution for the non-public small dataset", ok,
            "enn-oracle mismatches=" + std::to_string(enn_bad) + "/600, knn-oracle mismatches=" +
                std::to_string(knn_bad) + "/600, parseval violations=" +
                std::to_string(parseval_bad) + ", linearity violations=" +
                std::to_string(linear_bad) + ", metric-identity violations=" +
                std::to_string(metric_bad) + ", byte-identical reruns=" +
                (deterministic ? "yes" : "NO"));
}

void run_criterion_6(const Dataset& ds) {
  Dataset train = stratified_subset(ds, 1200, 6001);
  FeatureConfig cfg = FeatureConfig::parse("cwt,svm,sma,se", {});
  ModelBundle bundle = train_bundle(train, cfg, 5, 5);
  WindowPolicy policy{3.02, 0.5, 10.0};  // 151 samples at 50 Hz
  Detector detector(bundle, policy, 50.0);
  Windower windower(policy, 50.0);

  // a fall record outside the training slice whose offline label is FALL
  FeatureExtractor fx(cfg, ds.length());
  const Record* fall = nullptr;
  for (const auto& r : ds.records) {
    if (r.label != Label::FALL) continue;
    bool in_train = false;
    for (const auto& t : train.records)
      if (t.id == r.id) {
        in_train = true;
        break;
      }
    if (in_train) continue;
    std::vector<double> q(fx.vector_length());
    fx.extract_into(r, q.data());
    Label a = knn_classify(bundle.knn, q);
    Label b = enn_classify(bundle.enn, q);
    Label c = bundle.bdt.classify(q);
    if (vote(a, b, c) == Label::FALL) {
      fall = &r;
      break;
    }
  }
  if (!fall) {
    criterion(6, "gateway real-time contract", false, "no offline-FALL record found");
    return;
  }

  // 30 s replay: quiet, the fall record, quiet
  Rng rng(606);
  std::vector<double> ax, ay, az;
  auto quiet = [&](size_t frames) {
    for (size_t i = 0; i < frames; ++i) {
      ax.push_back(rng.normal(0.0, 0.01));
      ay.push_back(1.0 + rng.normal(0.0, 0.01));
      az.push_back(rng.normal(0.0, 0.01));
    }
  };
  quiet(500);  // 10 s
  ax.insert(ax.end(), fall->ax.begin(), fall->ax.end());
  ay.insert(ay.end(), fall->ay.begin(), fall->ay.end());
  az.insert(az.end(), fall->az.begin(), fall->az.end());
  while (ax.size() < 1500) quiet(1);  // pad to 30 s

  std::vector<Window> windows;
  for (size_t i = 0; i < ax.size(); ++i)
    windower.push({static_cast<int64_t>(i) * 20, ax[i], ay[i], az[i]}, windows);

  size_t alerts = 0;
  double max_latency = 0.0;
  size_t label_mismatches = 0;
  std::vector<AlertEvent> events;
  for (const auto& win : windows) {
    auto t0 = Clock::now();
    Prediction streamed = detector.classify(win);
    double latency = seconds_since(t0) * 1000.0;
    max_latency = std::max(max_latency, latency);

    Record rec;
    rec.id = "offline";
    rec.fs = 50.0;
    rec.ax = win.ax;
    rec.ay = win.ay;
    rec.az = win.az;
    std::vector<double> q(fx.vector_length());
    fx.extract_into(rec, q.data());
    Label off_knn = knn_classify(bundle.knn, q);
    Label off_enn = enn_classify(bundle.enn, q);
    Label off_bdt = bundle.bdt.classify(q);
    if (streamed.knn != off_knn || streamed.enn != off_enn || streamed.bdt != off_bdt ||
        streamed.vm != vote(off_knn, off_enn, off_bdt))
      ++label_mismatches;

    auto alert = detector.process(win);
    if (alert) {
      ++alerts;
      events.push_back(*alert);
    }
  }

  int64_t fall_start = 500 * 20;
  int64_t fall_end = (500 + static_cast<int64_t>(fall->length())) * 20;
  bool covers = events.size() == 1 && events[0].window_end_ms >= fall_start &&
                events[0].window_start_ms <= fall_end;
  bool ok = covers && max_latency < 500.0 && label_mismatches == 0;
  criterion(6, "gateway real-time contract and streaming/offline equivalence", ok,
            "alerts=" + std::to_string(alerts) + " (want exactly 1 covering the fall), max " +
                "window latency=" + fmt(max_latency, 2) + " ms (<500), streaming/offline label " +
                "mismatches=" + std::to_string(label_mismatches) + "/" +
                std::to_string(windows.size()) + " windows");
}

}  // namespace

int main() {
  std::printf("falldet acceptance suite\n");
  auto t0 = Clock::now();
  Dataset ds = acceptance_dataset();
  std::printf("dataset: %s (n=%zu, L=%zu, fs=%g Hz)\n", ds.name.c_str(), ds.size(), ds.length(),
              ds.fs());

  EvalReport r1 = run_criterion_1(ds);
  EvalReport r2 = run_criterion_2(ds);
  run_criterion_3(ds, r1, r2);
  run_criterion_4(ds);
  run_criterion_5(ds);
  run_criterion_6(ds);

  std::printf("total: %s (%d criteria failed), %.1f s\n", g_failures == 0 ? "PASS" : "FAIL",
              g_failures, seconds_since(t0));
  return g_failures;
}
