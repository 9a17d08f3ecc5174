// falldet: fall-detection toolkit CLI.
//
// Subcommands: convert-check, extract, train, eval, sweep, gateway, synth.
// Exit codes: 0 success, 1 runtime/data/evaluation anomaly, 2 usage error.

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "falldet/dataset.hpp"
#include "falldet/eval.hpp"
#include "falldet/gateway.hpp"
#include "falldet/model_io.hpp"
#include "falldet/synth.hpp"

using namespace falldet;

namespace {

std::atomic<bool> g_interrupted{false};

void handle_sigint(int) { g_interrupted.store(true); }

int g_log_level = 1;  // 0 quiet, 1 info, 2 debug

void log_info(const std::string& msg) {
  if (g_log_level >= 1) std::cerr << "[falldet] " << msg << "\n";
}

struct GlobalOpts {
  uint64_t seed = 42;
  int threads = 1;
  std::string format = "text";
  std::string log_level = "info";
};

struct FeatureFlags {
  std::string features = "cwt,svm,tsvm,sma,range,se";
  std::string wavelet = "bior2.2";
  double scale = 250.0;
  int resolution = 1024;

  FeatureConfig config() const {
    WaveletSpec w;
    w.family = wavelet_family_from_string(wavelet);
    w.scale = scale;
    w.tabulation_resolution = resolution;
    return FeatureConfig::parse(features, w);
  }
};

void add_feature_flags(CLI::App* cmd, FeatureFlags& ff) {
  cmd->add_option("--features", ff.features,
                  "comma list of cwt,svm,tsvm,sma,range,se,raw")
      ->envname("FALLDET_FEATURES");
  cmd->add_option("--wavelet", ff.wavelet, "cwt mother wavelet family");
  cmd->add_option("--scale", ff.scale, "cwt scale")->check(CLI::PositiveNumber);
  cmd->add_option("--resolution", ff.resolution, "wavelet tabulation samples per unit");
}

void write_report(const EvalReport& report, const std::string& format, std::ostream& os) {
  if (format == "text")
    write_text(report, os);
  else if (format == "csv")
    write_csv(report, os);
  else
    write_json(report, os);
}

void emit_report(const EvalReport& report, const std::string& format, const std::string& out) {
  write_report(report, format, std::cout);
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write report file: " + out);
    write_report(report, format, f);
    log_info("report written to " + out);
  }
}

// Echoes the resolved configuration of every run for reproducibility.
void log_config_echo(const GlobalOpts& g, const std::string& detail) {
  log_info("config: seed=" + std::to_string(g.seed) + " threads=" + std::to_string(g.threads) +
           " format=" + g.format + (detail.empty() ? "" : " " + detail));
}

int run_gateway_stream(std::istream& in, const ModelBundle& bundle, const WindowPolicy& policy,
                       double fs) {
  GatewayService service(
      bundle, policy, fs,
      [](const AlertEvent& a) { std::cout << alert_to_json(a) << "\n" << std::flush; });
  std::string line;
  while (!g_interrupted.load() && std::getline(in, line)) {
    if (line.empty()) continue;
    auto frame = parse_frame_line(line);
    if (!frame) {
      log_info("skipping malformed frame line");
      continue;
    }
    service.feed(*frame);
  }
  service.finish();
  std::cerr << counters_to_json(service.counters()) << "\n";
  return 0;
}

int accept_and_stream(const std::string& listen, const ModelBundle& bundle,
                      const WindowPolicy& policy, double fs) {
  auto colon = listen.rfind(':');
  if (colon == std::string::npos)
    throw std::runtime_error("listen address must be host:port, got " + listen);
  std::string host = listen.substr(0, colon);
  int port = std::stoi(listen.substr(colon + 1));

  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::runtime_error("socket() failed");
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw std::runtime_error("bad listen host " + host);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd);
    throw std::runtime_error("bind failed on " + listen);
  }
  if (::listen(fd, 1) != 0) {
    ::close(fd);
    throw std::runtime_error("listen failed on " + listen);
  }
  log_info("listening for one frame connection on " + listen);
  int client = ::accept(fd, nullptr, nullptr);
  ::close(fd);
  if (client < 0) throw std::runtime_error("accept failed");

  // Read the socket line-by-line through a streambuf-free loop.
  std::string buffer, line;
  char chunk[4096];
  GatewayService service(
      bundle, policy, fs,
      [](const AlertEvent& a) { std::cout << alert_to_json(a) << "\n" << std::flush; });
  ssize_t n;
  while (!g_interrupted.load() && (n = ::read(client, chunk, sizeof(chunk))) > 0) {
    buffer.append(chunk, static_cast<size_t>(n));
    size_t pos;
    while ((pos = buffer.find('\n')) != std::string::npos) {
      line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (line.empty()) continue;
      auto frame = parse_frame_line(line);
      if (frame) service.feed(*frame);
    }
  }
  ::close(client);
  service.finish();
  std::cerr << counters_to_json(service.counters()) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fall-detection toolkit: feature extraction, classification, evaluation, gateway"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOpts g;
  app.add_option("--seed", g.seed, "root seed; all randomness derives from it")
      ->envname("FALLDET_SEED");
  app.add_option("--threads", g.threads, "fold-level parallelism bound")
      ->envname("FALLDET_THREADS")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "report format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->envname("FALLDET_FORMAT");
  app.add_option("--log-level", g.log_level, "quiet|info|debug")
      ->check(CLI::IsMember({"quiet", "info", "debug"}))
      ->envname("FALLDET_LOG_LEVEL");

  // convert-check
  auto* cmd_check = app.add_subcommand("convert-check", "validate a canonical dataset file");
  std::string check_path;
  cmd_check->add_option("dataset", check_path, "canonical csv path")->required();

  // extract
  auto* cmd_extract = app.add_subcommand("extract", "extract a feature matrix");
  std::string ex_path, ex_out, ex_cache;
  FeatureFlags ex_ff;
  cmd_extract->add_option("dataset", ex_path, "canonical csv path")->required();
  add_feature_flags(cmd_extract, ex_ff);
  cmd_extract->add_option("--out", ex_out, "feature csv output path");
  cmd_extract->add_option("--cache", ex_cache, "binary feature cache output path");

  // train
  auto* cmd_train = app.add_subcommand("train", "train a model bundle for the gateway");
  std::string tr_path, tr_out;
  FeatureFlags tr_ff;
  int tr_k = 5, tr_e = 5;
  cmd_train->add_option("dataset", tr_path, "canonical csv path")->required();
  add_feature_flags(cmd_train, tr_ff);
  cmd_train->add_option("--knn", tr_k, "knn neighbor count");
  cmd_train->add_option("--enn", tr_e, "enn neighbor count");
  cmd_train->add_option("--out", tr_out, "model bundle output path")->required();

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "run the cross-validation protocol");
  std::string ev_path, ev_out;
  FeatureFlags ev_ff;
  ev_ff.features = "cwt,svm,sma,se";
  int ev_folds = 5;
  double ev_split = 0.70;
  int ev_knn = -1, ev_enn = -1;
  bool ev_bdt = false, ev_no_timing = false;
  cmd_eval->add_option("dataset", ev_path, "canonical csv path")->required();
  add_feature_flags(cmd_eval, ev_ff);
  cmd_eval->add_option("--knn", ev_knn, "enable knn with this neighbor count");
  cmd_eval->add_option("--enn", ev_enn, "enable enn with this neighbor count");
  cmd_eval->add_flag("--bdt", ev_bdt, "enable the binary decision tree");
  cmd_eval->add_option("--folds", ev_folds, "number of random splits")->check(CLI::PositiveNumber);
  cmd_eval->add_option("--split", ev_split, "train fraction in (0,1)");
  cmd_eval->add_flag("--no-timing", ev_no_timing,
                     "zero all timing fields (byte-stable reports)");
  cmd_eval->add_option("--out", ev_out, "also write the report to this file");

  // sweep
  auto* cmd_sweep = app.add_subcommand("sweep", "neighbor-count or feature-combination sweeps");
  auto* sweep_nb = cmd_sweep->add_subcommand("neighbors", "metrics per neighbor count");
  std::string swn_path, swn_out;
  FeatureFlags swn_ff;
  swn_ff.features = "cwt,svm,sma,se";
  int swn_max = 17, swn_folds = 5;
  double swn_split = 0.70;
  sweep_nb->add_option("dataset", swn_path)->required();
  add_feature_flags(sweep_nb, swn_ff);
  sweep_nb->add_option("--max", swn_max, "largest (odd) neighbor count");
  sweep_nb->add_option("--folds", swn_folds)->check(CLI::PositiveNumber);
  sweep_nb->add_option("--split", swn_split);
  sweep_nb->add_option("--out", swn_out, "sweep csv output path");

  auto* sweep_ft = cmd_sweep->add_subcommand("features", "metrics per feature combination");
  std::string swf_path, swf_out;
  FeatureFlags swf_ff;
  int swf_knn = 3, swf_enn = 3, swf_folds = 5;
  double swf_split = 0.70;
  sweep_ft->add_option("dataset", swf_path)->required();
  sweep_ft->add_option("--wavelet", swf_ff.wavelet);
  sweep_ft->add_option("--scale", swf_ff.scale)->check(CLI::PositiveNumber);
  sweep_ft->add_option("--knn", swf_knn);
  sweep_ft->add_option("--enn", swf_enn);
  sweep_ft->add_option("--folds", swf_folds)->check(CLI::PositiveNumber);
  sweep_ft->add_option("--split", swf_split);
  sweep_ft->add_option("--out", swf_out, "sweep csv output path");

  // gateway
  auto* cmd_gw = app.add_subcommand("gateway", "stream frames in, alerts out");
  std::string gw_model, gw_listen, gw_config;
  double gw_window = 3.0, gw_stride = 0.5, gw_debounce = 10.0, gw_fs = 50.0;
  cmd_gw->add_option("--model", gw_model, "model bundle path");
  cmd_gw->add_option("--window", gw_window, "window length, seconds");
  cmd_gw->add_option("--stride", gw_stride, "window stride, seconds");
  cmd_gw->add_option("--debounce", gw_debounce, "minimum seconds between alerts");
  cmd_gw->add_option("--fs", gw_fs, "stream sampling rate, Hz");
  cmd_gw->add_option("--listen", gw_listen, "host:port for a frame socket (default: stdin)");
  cmd_gw->add_option("--config", gw_config, "json config file; flags override it");

  // synth
  auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic surrogate dataset");
  std::string sy_kind = "unimib", sy_out;
  size_t sy_n = 11771;
  cmd_synth->add_option("kind", sy_kind)->check(CLI::IsMember({"unimib", "gibson"}));
  cmd_synth->add_option("--n", sy_n, "record count (unimib only)");
  cmd_synth->add_option("--out", sy_out, "canonical csv output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  g_log_level = g.log_level == "quiet" ? 0 : (g.log_level == "debug" ? 2 : 1);

  try {
    if (cmd_check->parsed()) {
      log_config_echo(g, "dataset=" + check_path);
      Dataset ds = load_canonical(check_path);
      std::cout << "ok: " << ds.name << "\n";
      std::cout << "records: " << ds.size() << " (ADL " << ds.count(Label::ADL) << ", FALL "
                << ds.count(Label::FALL) << ")\n";
      std::cout << "length: " << ds.length() << " samples at " << ds.fs() << " Hz\n";
      return 0;
    }

    if (cmd_extract->parsed()) {
      if (ex_out.empty() && ex_cache.empty())
        throw CLI::ValidationError("extract", "need --out and/or --cache");
      log_config_echo(g, "dataset=" + ex_path + " features=" + ex_ff.features);
      Dataset ds = load_canonical(ex_path);
      ExtractTiming timing;
      FeatureMatrix m = extract_matrix(ds, ex_ff.config(), &timing, g.threads);
      if (!ex_out.empty()) write_feature_csv(m, ex_out);
      if (!ex_cache.empty()) write_feature_cache(m, ex_cache);
      std::cout << "extracted " << m.rows << " x " << m.cols << " feature matrix\n";
      std::cout << "extraction time: " << timing.per_record_ms << " ms/record (total "
                << timing.total_seconds << " s)\n";
      return 0;
    }

    if (cmd_train->parsed()) {
      log_config_echo(g, "dataset=" + tr_path + " features=" + tr_ff.features);
      Dataset ds = load_canonical(tr_path);
      ModelBundle bundle = train_bundle(ds, tr_ff.config(), tr_k, tr_e, g.threads);
      save_bundle(bundle, tr_out);
      char digest[17];
      std::snprintf(digest, sizeof(digest), "%016llx",
                    static_cast<unsigned long long>(bundle.digest));
      std::cout << "model written to " << tr_out << " (digest " << digest << ", dim "
                << bundle.knn.train.cols << ", n " << bundle.knn.train.rows << ")\n";
      return 0;
    }

    if (cmd_eval->parsed()) {
      log_config_echo(g, "dataset=" + ev_path + " features=" + ev_ff.features);
      Dataset ds = load_canonical(ev_path);
      EvalOptions opt;
      opt.features = ev_ff.config();
      opt.split = SplitSpec{ev_split, ev_folds, g.seed};
      if (ev_knn > 0) opt.knn_k = ev_knn;
      if (ev_enn > 0) opt.enn_e = ev_enn;
      opt.bdt = ev_bdt;
      opt.threads = g.threads;
      opt.timing = !ev_no_timing;
      EvalReport report = run_protocol(ds, opt);
      emit_report(report, g.format, ev_out);
      return report.any_undefined_metric ? 1 : 0;
    }

    if (sweep_nb->parsed()) {
      if (swn_max < 1) throw CLI::ValidationError("sweep", "--max must be >= 1");
      log_config_echo(g, "dataset=" + swn_path + " sweep=neighbors max=" + std::to_string(swn_max));
      Dataset ds = load_canonical(swn_path);
      EvalOptions base;
      base.features = swn_ff.config();
      base.split = SplitSpec{swn_split, swn_folds, g.seed};
      base.threads = g.threads;
      std::vector<int> values;
      for (int k = 1; k <= swn_max; k += 2) values.push_back(k);
      auto rows = sweep_neighbors(ds, base, values);
      std::ostringstream os;
      write_sweep_csv(rows, os);
      std::cout << os.str();
      if (!swn_out.empty()) {
        std::ofstream f(swn_out, std::ios::binary);
        f << os.str();
      }
      return 0;
    }

    if (sweep_ft->parsed()) {
      log_config_echo(g, "dataset=" + swf_path + " sweep=features");
      Dataset ds = load_canonical(swf_path);
      WaveletSpec w;
      w.family = wavelet_family_from_string(swf_ff.wavelet);
      w.scale = swf_ff.scale;
      w.tabulation_resolution = swf_ff.resolution;
      EvalOptions base;
      base.split = SplitSpec{swf_split, swf_folds, g.seed};
      base.knn_k = swf_knn;
      base.enn_e = swf_enn;
      base.bdt = true;
      base.threads = g.threads;
      auto rows = sweep_features(ds, base, feature_combo_catalog(w));
      std::ostringstream os;
      write_sweep_csv(rows, os);
      std::cout << os.str();
      if (!swf_out.empty()) {
        std::ofstream f(swf_out, std::ios::binary);
        f << os.str();
      }
      return 0;
    }

    if (cmd_gw->parsed()) {
      if (!gw_config.empty()) {
        std::ifstream f(gw_config);
        if (!f) throw std::runtime_error("cannot open gateway config: " + gw_config);
        nlohmann::json j;
        f >> j;
        if (cmd_gw->count("--window") == 0) gw_window = j.value("window", gw_window);
        if (cmd_gw->count("--stride") == 0) gw_stride = j.value("stride", gw_stride);
        if (cmd_gw->count("--debounce") == 0) gw_debounce = j.value("debounce", gw_debounce);
        if (cmd_gw->count("--fs") == 0) gw_fs = j.value("fs", gw_fs);
        if (cmd_gw->count("--model") == 0) gw_model = j.value("model", gw_model);
        if (cmd_gw->count("--listen") == 0) gw_listen = j.value("listen", gw_listen);
      }
      if (gw_model.empty()) throw CLI::ValidationError("gateway", "a model path is required");

      ModelBundle bundle = load_bundle(gw_model);
      WindowPolicy policy{gw_window, gw_stride, gw_debounce};
      // Construction validates the window/model contract up front.
      Windower probe(policy, gw_fs);
      Detector check(bundle, policy, gw_fs);
      char digest[17];
      std::snprintf(digest, sizeof(digest), "%016llx",
                    static_cast<unsigned long long>(bundle.digest));
      log_info("gateway ready: L=" + std::to_string(probe.window_samples()) + " stride=" +
               std::to_string(probe.stride_samples()) + " samples, debounce=" +
               std::to_string(gw_debounce) + " s, model=" + digest);

      std::signal(SIGINT, handle_sigint);
      std::signal(SIGTERM, handle_sigint);
      if (gw_listen.empty()) return run_gateway_stream(std::cin, bundle, policy, gw_fs);
      return accept_and_stream(gw_listen, bundle, policy, gw_fs);
    }

    if (cmd_synth->parsed()) {
      log_config_echo(g, "synth=" + sy_kind + " n=" + std::to_string(sy_n));
      Dataset ds = sy_kind == "unimib" ? make_unimib_surrogate(sy_n, g.seed)
                                       : make_gibson_surrogate(g.seed);
      save_canonical(ds, sy_out);
      DatasetManifest m{ds.name, ds.length(), "g"};
      save_manifest(m, sy_out);
      std::cout << "wrote " << ds.size() << " records to " << sy_out << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
