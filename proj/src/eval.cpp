#include "falldet/eval.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "falldet/bdt.hpp"
#include "falldet/dataset.hpp"
#include "falldet/enn.hpp"
#include "falldet/knn.hpp"
#include "falldet/vote.hpp"
#include "json.hpp"

namespace falldet {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

std::string format_fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

std::string metric_cell(const std::optional<double>& v, int digits = 2) {
  return v ? format_fixed(*v, digits) : std::string("—");
}

struct MetricField {
  const char* name;
  std::optional<double> Metrics::* field;
};
constexpr MetricField kMetricFields[] = {
    {"accuracy", &Metrics::accuracy},   {"recall", &Metrics::recall},
    {"precision", &Metrics::precision}, {"f1", &Metrics::f1},
    {"specificity", &Metrics::specificity},
};

FoldResult run_fold(const FeatureMatrix& full, const EvalOptions& opt, int fold) {
  auto [train_idx, test_idx] = split_indices(full.rows, opt.split, fold);
  FeatureMatrix train = full.select(train_idx);
  FeatureMatrix test = full.select(test_idx);

  FoldResult fr;
  for (Label l : train.labels) (l == Label::FALL ? fr.train_fall : fr.train_adl)++;
  for (Label l : test.labels) (l == Label::FALL ? fr.test_fall : fr.test_adl)++;

  const bool use_knn = opt.knn_k.has_value();
  const bool use_enn = opt.enn_e.has_value();
  const bool use_bdt = opt.bdt;
  const bool use_vm = use_knn && use_enn && use_bdt;

  std::optional<KnnModel> knn;
  std::optional<EnnModel> enn;
  std::optional<BdtModel> bdt;
  if (use_knn) {
    if (static_cast<size_t>(*opt.knn_k) > train.rows)
      throw std::invalid_argument("knn: k exceeds training set size");
    knn = knn_train(train, *opt.knn_k);
  }
  if (use_enn) {
    auto t0 = Clock::now();
    enn = enn_preprocess_serial(train, *opt.enn_e);
    fr.enn_preprocess_s = seconds_since(t0);
  }
  if (use_bdt) bdt = bdt_train_serial(train);

  std::array<int64_t, kClassifierCount> total_ns{};
  for (size_t i = 0; i < test.rows; ++i) {
    std::span<const double> q(test.row(i), test.cols);
    const Label truth = test.labels[i];
    Prediction p;
    if (use_knn) {
      auto t0 = Clock::now();
      p.knn = knn_classify(*knn, q);
      p.latency_ns[0] = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0)
                            .count();
    }
    if (use_enn) {
      auto t0 = Clock::now();
      p.enn = enn_classify(*enn, q);
      p.latency_ns[1] = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0)
                            .count();
    }
    if (use_bdt) {
      auto t0 = Clock::now();
      p.bdt = bdt->classify(q);
      p.latency_ns[2] = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0)
                            .count();
    }
    if (use_vm) {
      auto t0 = Clock::now();
      p.vm = vote(p.knn, p.enn, p.bdt);
      int64_t vote_ns =
          std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count();
      // the voting machine's cost is the three classifiers plus the vote
      p.latency_ns[3] = p.latency_ns[0] + p.latency_ns[1] + p.latency_ns[2] + vote_ns;
    }

    auto tally = [&](Classifier c, Label predicted) {
      ConfusionCounts& cc = fr.counts[static_cast<size_t>(c)];
      if (truth == Label::FALL)
        (predicted == Label::FALL ? cc.tp : cc.fn)++;
      else
        (predicted == Label::FALL ? cc.fp : cc.tn)++;
    };
    if (use_knn) tally(Classifier::KNN, p.knn);
    if (use_enn) tally(Classifier::ENN, p.enn);
    if (use_bdt) tally(Classifier::BDT, p.bdt);
    if (use_vm) tally(Classifier::VM, p.vm);
    for (int c = 0; c < kClassifierCount; ++c) total_ns[static_cast<size_t>(c)] +=
        p.latency_ns[static_cast<size_t>(c)];
  }

  for (int c = 0; c < kClassifierCount; ++c)
    fr.classify_ms[static_cast<size_t>(c)] =
        test.rows ? static_cast<double>(total_ns[static_cast<size_t>(c)]) /
                        (1e6 * static_cast<double>(test.rows))
                  : 0.0;
  for (int c = 0; c < kClassifierCount; ++c)
    fr.metrics[static_cast<size_t>(c)] = compute_metrics(fr.counts[static_cast<size_t>(c)]);
  return fr;
}

}  // namespace

const char* classifier_name(Classifier c) {
  switch (c) {
    case Classifier::KNN: return "knn";
    case Classifier::ENN: return "enn";
    case Classifier::BDT: return "bdt";
    case Classifier::VM: return "vm";
  }
  return "?";
}

EvalReport run_protocol(const Dataset& ds, const EvalOptions& opt) {
  validate(ds);
  if (ds.count(Label::ADL) == 0 || ds.count(Label::FALL) == 0)
    throw std::invalid_argument("dataset must contain both ADL and FALL records");
  if (!opt.knn_k && !opt.enn_e && !opt.bdt)
    throw std::invalid_argument("at least one classifier must be selected");
  for (const auto& kv : {opt.knn_k, opt.enn_e})
    if (kv && (*kv < 1 || *kv % 2 == 0))
      throw std::invalid_argument("neighbor counts must be positive odd integers");

  EvalReport r;
  r.dataset_name = ds.name;
  r.n_records = ds.size();
  r.record_length = ds.length();
  r.fs = ds.fs();
  r.features_desc = opt.features.describe();
  r.wavelet_name = wavelet_family_name(opt.features.wavelet.family);
  r.wavelet_scale = opt.features.wavelet.scale;
  r.knn_k = opt.knn_k;
  r.enn_e = opt.enn_e;
  r.bdt = opt.bdt;
  r.vm = opt.knn_k && opt.enn_e && opt.bdt;
  r.split = opt.split;
  r.threads = opt.threads;
  r.timing = opt.timing;
  r.enabled = {opt.knn_k.has_value(), opt.enn_e.has_value(), opt.bdt, r.vm};

  ExtractTiming et;
  FeatureMatrix full = extract_matrix(ds, opt.features, &et, opt.threads);
  r.feature_dim = full.cols;
  r.extract_total_s = et.total_seconds;
  r.extract_per_record_ms = et.per_record_ms;

  r.folds.resize(static_cast<size_t>(opt.split.folds));
  std::vector<std::string> errors(static_cast<size_t>(opt.split.folds));
  if (opt.threads > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(opt.threads)
    for (int fold = 0; fold < opt.split.folds; ++fold) {
      try {
        r.folds[static_cast<size_t>(fold)] = run_fold(full, opt, fold);
      } catch (const std::exception& e) {
        errors[static_cast<size_t>(fold)] = e.what();
      }
    }
  } else {
    for (int fold = 0; fold < opt.split.folds; ++fold) {
      try {
        r.folds[static_cast<size_t>(fold)] = run_fold(full, opt, fold);
      } catch (const std::exception& e) {
        errors[static_cast<size_t>(fold)] = e.what();
      }
    }
  }
  for (int fold = 0; fold < opt.split.folds; ++fold)
    if (!errors[static_cast<size_t>(fold)].empty())
      throw std::runtime_error("fold " + std::to_string(fold) + ": " +
                               errors[static_cast<size_t>(fold)]);

  // Arithmetic mean over folds; any undefined fold metric leaves the average
  // undefined rather than silently skewing it.
  const double nf = static_cast<double>(opt.split.folds);
  for (int c = 0; c < kClassifierCount; ++c) {
    if (!r.enabled[static_cast<size_t>(c)]) continue;
    for (const auto& field : kMetricFields) {
      double sum = 0.0;
      bool all_defined = true;
      for (const auto& fr : r.folds) {
        const auto& v = fr.metrics[static_cast<size_t>(c)].*(field.field);
        if (!v) {
          all_defined = false;
          break;
        }
        sum += *v;
      }
      if (all_defined)
        r.averaged[static_cast<size_t>(c)].*(field.field) = sum / nf;
      else
        r.any_undefined_metric = true;
    }
    double t = 0.0;
    for (const auto& fr : r.folds) t += fr.classify_ms[static_cast<size_t>(c)];
    r.mean_classify_ms[static_cast<size_t>(c)] = t / nf;
  }
  double pre = 0.0;
  for (const auto& fr : r.folds) pre += fr.enn_preprocess_s;
  r.mean_enn_preprocess_s = pre / nf;

  if (!opt.timing) {
    r.extract_total_s = r.extract_per_record_ms = 0.0;
    r.mean_enn_preprocess_s = 0.0;
    r.mean_classify_ms = {};
    for (auto& fr : r.folds) {
      fr.classify_ms = {};
      fr.enn_preprocess_s = 0.0;
    }
  }
  return r;
}

std::vector<SweepRow> sweep_neighbors(const Dataset& ds, const EvalOptions& base,
                                      const std::vector<int>& neighbor_values) {
  if (neighbor_values.empty()) throw std::invalid_argument("neighbor sweep needs values");
  std::vector<SweepRow> rows;
  for (int k : neighbor_values) {
    EvalOptions opt = base;
    opt.knn_k = k;
    opt.enn_e = k;
    opt.bdt = false;
    EvalReport r = run_protocol(ds, opt);
    for (Classifier c : {Classifier::KNN, Classifier::ENN})
      for (const auto& field : kMetricFields)
        rows.push_back({std::to_string(k), classifier_name(c), field.name,
                        r.avg(c).*(field.field)});
  }
  return rows;
}

std::vector<SweepRow> sweep_features(const Dataset& ds, const EvalOptions& base,
                                     const std::vector<FeatureConfig>& combos) {
  if (combos.empty()) throw std::invalid_argument("feature sweep needs combinations");
  std::vector<SweepRow> rows;
  for (const auto& cfg : combos) {
    EvalOptions opt = base;
    opt.features = cfg;
    EvalReport r = run_protocol(ds, opt);
    for (int c = 0; c < kClassifierCount; ++c) {
      if (!r.enabled[static_cast<size_t>(c)]) continue;
      for (const auto& field : kMetricFields)
        rows.push_back({cfg.describe(), classifier_name(static_cast<Classifier>(c)), field.name,
                        r.averaged[static_cast<size_t>(c)].*(field.field)});
    }
  }
  return rows;
}

std::vector<FeatureConfig> feature_combo_catalog(const WaveletSpec& w) {
  const char* combos[] = {
      "tsvm",
      "sma",
      "svm",
      "svm,sma",
      "range",
      "raw",
      "cwt",
      "svm,sma,se",
      "cwt,svm",
      "se",
      "cwt,se",
      "cwt,sma",
      "cwt,tsvm",
      "sma,range,se",
      "cwt,svm,tsvm,sma,range,se",
      "cwt,tsvm,sma,se",
      "cwt,svm,sma,se",
  };
  std::vector<FeatureConfig> out;
  for (const char* s : combos) out.push_back(FeatureConfig::parse(s, w));
  return out;
}

void write_text(const EvalReport& r, std::ostream& os) {
  os << "falldet evaluation report\n";
  os << "dataset: " << r.dataset_name << " (n=" << r.n_records << ", L=" << r.record_length
     << ", fs=" << format_double(r.fs) << " Hz)\n";
  os << "features: " << r.features_desc << " (dim=" << r.feature_dim << ")";
  if (r.features_desc.find("cwt") != std::string::npos)
    os << "  wavelet: " << r.wavelet_name << " scale=" << format_double(r.wavelet_scale);
  os << "\n";
  os << "split: " << r.split.folds << " folds, "
     << format_fixed(r.split.train_fraction * 100.0, 0) << "/"
     << format_fixed((1.0 - r.split.train_fraction) * 100.0, 0)
     << " train/test, seed=" << r.split.seed << ", threads=" << r.threads << "\n";
  os << "classifiers:";
  if (r.knn_k) os << " knn(k=" << *r.knn_k << ")";
  if (r.enn_e) os << " enn(e=" << *r.enn_e << ")";
  if (r.bdt) os << " bdt";
  if (r.vm) os << " vm";
  os << "\n\n";

  os << "fold  train(ADL/FALL)  test(ADL/FALL)";
  for (int c = 0; c < kClassifierCount; ++c)
    if (r.enabled[static_cast<size_t>(c)])
      os << "  " << classifier_name(static_cast<Classifier>(c)) << "(tp,fp,tn,fn)";
  os << "\n";
  for (size_t f = 0; f < r.folds.size(); ++f) {
    const auto& fr = r.folds[f];
    os << "   " << f << "  " << fr.train_adl << "/" << fr.train_fall << "  " << fr.test_adl << "/"
       << fr.test_fall;
    for (int c = 0; c < kClassifierCount; ++c) {
      if (!r.enabled[static_cast<size_t>(c)]) continue;
      const auto& cc = fr.counts[static_cast<size_t>(c)];
      os << "  (" << cc.tp << "," << cc.fp << "," << cc.tn << "," << cc.fn << ")";
    }
    os << "\n";
  }

  os << "\naveraged metrics (%), mean over " << r.split.folds << " folds\n";
  os << "classifier  accuracy  recall  precision  f1_score  specificity\n";
  for (int c = 0; c < kClassifierCount; ++c) {
    if (!r.enabled[static_cast<size_t>(c)]) continue;
    const Metrics& m = r.averaged[static_cast<size_t>(c)];
    os << classifier_name(static_cast<Classifier>(c)) << "  " << metric_cell(m.accuracy) << "  "
       << metric_cell(m.recall) << "  " << metric_cell(m.precision) << "  " << metric_cell(m.f1)
       << "  " << metric_cell(m.specificity) << "\n";
  }

  if (r.timing) {
    os << "\nmean classification time per record (ms):";
    for (int c = 0; c < kClassifierCount; ++c)
      if (r.enabled[static_cast<size_t>(c)])
        os << " " << classifier_name(static_cast<Classifier>(c)) << "="
           << format_fixed(r.mean_classify_ms[static_cast<size_t>(c)], 4);
    os << "\n";
    os << "feature extraction: " << format_fixed(r.extract_per_record_ms, 4)
       << " ms/record (total " << format_fixed(r.extract_total_s, 3) << " s)\n";
    if (r.enn_e)
      os << "enn preprocessing: mean " << format_fixed(r.mean_enn_preprocess_s, 3)
         << " s per fold\n";
  }
}

void write_csv(const EvalReport& r, std::ostream& os) {
  os << "section,fold,classifier,key,value\n";
  auto cfg = [&os](const std::string& key, const std::string& value) {
    os << "config,,," << key << "," << value << "\n";
  };
  cfg("dataset", r.dataset_name);
  cfg("n_records", std::to_string(r.n_records));
  cfg("record_length", std::to_string(r.record_length));
  cfg("fs", format_double(r.fs));
  cfg("features", r.features_desc);
  cfg("feature_dim", std::to_string(r.feature_dim));
  cfg("wavelet", r.wavelet_name);
  cfg("wavelet_scale", format_double(r.wavelet_scale));
  cfg("folds", std::to_string(r.split.folds));
  cfg("train_fraction", format_double(r.split.train_fraction));
  cfg("seed", std::to_string(r.split.seed));
  cfg("threads", std::to_string(r.threads));
  if (r.knn_k) cfg("knn_k", std::to_string(*r.knn_k));
  if (r.enn_e) cfg("enn_e", std::to_string(*r.enn_e));
  cfg("bdt", r.bdt ? "1" : "0");
  cfg("vm", r.vm ? "1" : "0");

  for (size_t f = 0; f < r.folds.size(); ++f) {
    const auto& fr = r.folds[f];
    os << "split," << f << ",,train_adl," << fr.train_adl << "\n";
    os << "split," << f << ",,train_fall," << fr.train_fall << "\n";
    os << "split," << f << ",,test_adl," << fr.test_adl << "\n";
    os << "split," << f << ",,test_fall," << fr.test_fall << "\n";
    for (int c = 0; c < kClassifierCount; ++c) {
      if (!r.enabled[static_cast<size_t>(c)]) continue;
      const char* name = classifier_name(static_cast<Classifier>(c));
      const auto& cc = fr.counts[static_cast<size_t>(c)];
      os << "counts," << f << "," << name << ",tp," << cc.tp << "\n";
      os << "counts," << f << "," << name << ",fp," << cc.fp << "\n";
      os << "counts," << f << "," << name << ",tn," << cc.tn << "\n";
      os << "counts," << f << "," << name << ",fn," << cc.fn << "\n";
      for (const auto& field : kMetricFields) {
        const auto& v = fr.metrics[static_cast<size_t>(c)].*(field.field);
        os << "metrics," << f << "," << name << "," << field.name << ","
           << (v ? format_double(*v) : "—") << "\n";
      }
    }
  }
  for (int c = 0; c < kClassifierCount; ++c) {
    if (!r.enabled[static_cast<size_t>(c)]) continue;
    const char* name = classifier_name(static_cast<Classifier>(c));
    for (const auto& field : kMetricFields) {
      const auto& v = r.averaged[static_cast<size_t>(c)].*(field.field);
      os << "averaged,," << name << "," << field.name << ","
         << (v ? format_double(*v) : "—") << "\n";
    }
    if (r.timing)
      os << "timing,," << name << ",classify_ms,"
         << format_double(r.mean_classify_ms[static_cast<size_t>(c)]) << "\n";
  }
  if (r.timing) {
    os << "timing,,,extract_ms_per_record," << format_double(r.extract_per_record_ms) << "\n";
    os << "timing,,,extract_total_s," << format_double(r.extract_total_s) << "\n";
    if (r.enn_e)
      os << "timing,,,enn_preprocess_s," << format_double(r.mean_enn_preprocess_s) << "\n";
  }
}

void write_json(const EvalReport& r, std::ostream& os) {
  nlohmann::json j;
  j["dataset"] = {{"name", r.dataset_name},
                  {"n_records", r.n_records},
                  {"record_length", r.record_length},
                  {"fs", r.fs}};
  j["config"] = {{"features", r.features_desc},
                 {"feature_dim", r.feature_dim},
                 {"wavelet", r.wavelet_name},
                 {"wavelet_scale", r.wavelet_scale},
                 {"folds", r.split.folds},
                 {"train_fraction", r.split.train_fraction},
                 {"seed", r.split.seed},
                 {"threads", r.threads},
                 {"bdt", r.bdt},
                 {"vm", r.vm}};
  if (r.knn_k) j["config"]["knn_k"] = *r.knn_k;
  if (r.enn_e) j["config"]["enn_e"] = *r.enn_e;

  auto metrics_json = [](const Metrics& m) {
    nlohmann::json mj;
    for (const auto& field : kMetricFields) {
      const auto& v = m.*(field.field);
      if (v)
        mj[field.name] = *v;
      else
        mj[field.name] = nullptr;
    }
    return mj;
  };

  j["folds"] = nlohmann::json::array();
  for (const auto& fr : r.folds) {
    nlohmann::json fj;
    fj["train"] = {{"adl", fr.train_adl}, {"fall", fr.train_fall}};
    fj["test"] = {{"adl", fr.test_adl}, {"fall", fr.test_fall}};
    for (int c = 0; c < kClassifierCount; ++c) {
      if (!r.enabled[static_cast<size_t>(c)]) continue;
      const char* name = classifier_name(static_cast<Classifier>(c));
      const auto& cc = fr.counts[static_cast<size_t>(c)];
      fj[name] = {{"tp", cc.tp}, {"fp", cc.fp}, {"tn", cc.tn}, {"fn", cc.fn}};
      fj[name]["metrics"] = metrics_json(fr.metrics[static_cast<size_t>(c)]);
      if (r.timing) fj[name]["classify_ms"] = fr.classify_ms[static_cast<size_t>(c)];
    }
    if (r.timing && r.enn_e) fj["enn_preprocess_s"] = fr.enn_preprocess_s;
    j["folds"].push_back(fj);
  }

  j["averaged"] = nlohmann::json::object();
  for (int c = 0; c < kClassifierCount; ++c) {
    if (!r.enabled[static_cast<size_t>(c)]) continue;
    const char* name = classifier_name(static_cast<Classifier>(c));
    j["averaged"][name] = metrics_json(r.averaged[static_cast<size_t>(c)]);
    if (r.timing)
      j["averaged"][name]["classify_ms"] = r.mean_classify_ms[static_cast<size_t>(c)];
  }
  if (r.timing) {
    j["timing"] = {{"extract_ms_per_record", r.extract_per_record_ms},
                   {"extract_total_s", r.extract_total_s}};
    if (r.enn_e) j["timing"]["enn_preprocess_s"] = r.mean_enn_preprocess_s;
  }
  j["any_undefined_metric"] = r.any_undefined_metric;
  os << j.dump(2) << "\n";
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << "param,classifier,metric,value\n";
  for (const auto& row : rows)
    os << row.param << "," << row.classifier << "," << row.metric << ","
       << (row.value ? format_double(*row.value) : "—") << "\n";
}

}  // namespace falldet
