// Times the OpenMP kernels against their serial references on synthetic data
// and prints per-record classification costs for the three classifiers.

#include <chrono>
#include <cstdio>
#include <string>

#include "falldet/bdt.hpp"
#include "falldet/dataset.hpp"
#include "falldet/enn.hpp"
#include "falldet/features.hpp"
#include "falldet/knn.hpp"
#include "falldet/synth.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace falldet;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename F>
double time_call(F&& f) {
  auto t0 = Clock::now();
  f();
  return seconds(t0);
}

}  // namespace

int main(int argc, char** argv) {
  size_t n = argc > 1 ? static_cast<size_t>(std::stoul(argv[1])) : 2000;
  Dataset ds = make_unimib_surrogate(n, 1234);
  FeatureConfig cfg = FeatureConfig::parse("cwt,svm,sma,se", {});

#ifdef _OPENMP
  std::printf("openmp: max %d thread(s)\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled\n");
#endif
  std::printf("dataset: %zu records, L=%zu, dim=%zu\n\n", ds.size(), ds.length(),
              cfg.vector_length(ds.length()));

  FeatureMatrix serial_m, parallel_m;
  double t_serial = time_call([&] { serial_m = extract_matrix_serial(ds, cfg); });
  double t_parallel = time_call([&] { parallel_m = extract_matrix(ds, cfg); });
  bool extract_same = serial_m.values == parallel_m.values;
  std::printf("extract_matrix     serial %8.3f s   parallel %8.3f s   speedup %5.2fx   %s\n",
              t_serial, t_parallel, t_serial / t_parallel,
              extract_same ? "bit-identical" : "MISMATCH");

  EnnModel enn_s, enn_p;
  double te_serial = time_call([&] { enn_s = enn_preprocess_serial(parallel_m, 5); });
  double te_parallel = time_call([&] { enn_p = enn_preprocess(parallel_m, 5); });
  bool enn_same = enn_s.neighbors == enn_p.neighbors;
  std::printf("enn_preprocess     serial %8.3f s   parallel %8.3f s   speedup %5.2fx   %s\n",
              te_serial, te_parallel, te_serial / te_parallel,
              enn_same ? "bit-identical" : "MISMATCH");

  BdtModel bdt_s, bdt_p;
  double tb_serial = time_call([&] { bdt_s = bdt_train_serial(parallel_m); });
  double tb_parallel = time_call([&] { bdt_p = bdt_train(parallel_m); });
  bool bdt_same = bdt_s.nodes.size() == bdt_p.nodes.size();
  std::printf("bdt_train          serial %8.3f s   parallel %8.3f s   speedup %5.2fx   %s\n\n",
              tb_serial, tb_parallel, tb_serial / tb_parallel,
              bdt_same ? "same tree" : "MISMATCH");

  // per-record classification cost over a held-out slice
  size_t n_query = std::min<size_t>(200, parallel_m.rows / 4);
  KnnModel knn = knn_train(parallel_m, 5);
  double tq_knn = 0.0, tq_enn = 0.0, tq_bdt = 0.0;
  for (size_t i = 0; i < n_query; ++i) {
    std::span<const double> q(parallel_m.row(i), parallel_m.cols);
    tq_knn += time_call([&] { (void)knn_classify(knn, q); });
    tq_enn += time_call([&] { (void)enn_classify(enn_p, q); });
    tq_bdt += time_call([&] { (void)bdt_p.classify(q); });
  }
  std::printf("classification per record over %zu queries:\n", n_query);
  std::printf("  knn %8.4f ms   enn %8.4f ms   bdt %8.4f ms\n",
              1000.0 * tq_knn / static_cast<double>(n_query),
              1000.0 * tq_enn / static_cast<double>(n_query),
              1000.0 * tq_bdt / static_cast<double>(n_query));
  return (extract_same && enn_same && bdt_same) ? 0 : 1;
}
