#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "falldet/dataset.hpp"
#include "falldet/synth.hpp"

using namespace falldet;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

CmdResult run_cli(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string(FALLDET_CLI_PATH) + " " + args +
                    (merge_stderr ? " 2>&1" : " 2>/dev/null");
  std::array<char, 4096> buf{};
  CmdResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path work_dir() {
  fs::path dir = fs::temp_directory_path() / "falldet_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string small_dataset_csv() {
  static std::string path;
  if (path.empty()) {
    Dataset ds = make_unimib_surrogate(90, 91);
    path = (work_dir() / "small.csv").string();
    save_canonical(ds, path);
  }
  return path;
}

std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("cli: convert-check summarizes a valid file") {
  auto r = run_cli("convert-check " + small_dataset_csv());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("records: 90") != std::string::npos);
  CHECK(r.output.find("151 samples at 50 Hz") != std::string::npos);

  auto bad = run_cli("convert-check /nonexistent/file.csv");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("cli: extract writes a feature matrix and reports timing") {
  auto out = (work_dir() / "feat.csv").string();
  auto r = run_cli("extract " + small_dataset_csv() + " --features sma --out " + out);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("90 x 1 feature matrix") != std::string::npos);
  CHECK(r.output.find("ms/record") != std::string::npos);

  std::ifstream f(out);
  std::string header, row;
  std::getline(f, header);
  std::getline(f, row);
  CHECK(header == "record_id,f0");
  CHECK(row.find("u0") == 0);
}

TEST_CASE("cli: empty feature set is a usage error (exit 2)") {
  auto r = run_cli("extract " + small_dataset_csv() + " --features '' --out /tmp/x.csv");
  CHECK(r.exit_code == 2);
  auto r2 = run_cli("extract " + small_dataset_csv());
  CHECK(r2.exit_code == 2);  // needs --out or --cache
  auto r3 = run_cli("sweep neighbors " + small_dataset_csv() + " --max 0");
  CHECK(r3.exit_code == 2);
}

TEST_CASE("cli: eval reports are byte-identical across reruns with one seed") {
  std::string base = "eval " + small_dataset_csv() +
                     " --features cwt,svm,sma,se --knn 3 --enn 3 --bdt --folds 2"
                     " --no-timing --seed 42 --format json";
  auto a = run_cli(base);
  auto b = run_cli(base);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.find("\"averaged\"") != std::string::npos);

  auto c = run_cli("eval " + small_dataset_csv() +
                   " --features sma --knn 3 --folds 2 --no-timing --seed 43 --format csv");
  CHECK(c.output.substr(0, 33) == "section,fold,classifier,key,value");
}

TEST_CASE("cli: text report echoes the configuration") {
  auto r = run_cli("eval " + small_dataset_csv() +
                   " --features cwt,svm,sma,se --knn 3 --enn 3 --bdt --folds 2 --seed 7");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("seed=7") != std::string::npos);
  CHECK(r.output.find("knn(k=3)") != std::string::npos);
  CHECK(r.output.find("enn(e=3)") != std::string::npos);
  CHECK(r.output.find("vm") != std::string::npos);
  CHECK(r.output.find("dim=608") != std::string::npos);
}

TEST_CASE("cli: train then gateway classifies a replayed fall") {
  auto model = (work_dir() / "model.fdm").string();
  auto train = run_cli("train " + small_dataset_csv() + " --features cwt,svm,sma,se --knn 3" +
                       " --enn 3 --out " + model);
  REQUIRE(train.exit_code == 0);
  CHECK(train.output.find("model written") != std::string::npos);

  // build a replay stream: quiet, one training fall record, quiet
  Dataset src = load_canonical(small_dataset_csv());
  const Record* fall = nullptr;
  for (const auto& r : src.records)
    if (r.label == Label::FALL) {
      fall = &r;
      break;
    }
  REQUIRE(fall != nullptr);
  auto stream_path = (work_dir() / "stream.ndjson").string();
  {
    std::ofstream f(stream_path);
    int64_t t = 0;
    auto emit = [&](double ax, double ay, double az) {
      f << "{\"t\":" << t << ",\"ax\":" << ax << ",\"ay\":" << ay << ",\"az\":" << az << "}\n";
      t += 20;
    };
    for (int i = 0; i < 300; ++i) emit(0.0, 1.0, 0.0);
    for (size_t i = 0; i < fall->length(); ++i) emit(fall->ax[i], fall->ay[i], fall->az[i]);
    for (int i = 0; i < 300; ++i) emit(0.0, 1.0, 0.0);
  }

  auto gw = run_cli("gateway --model " + model + " --window 3.02 --stride 0.5 --debounce 10 < " +
                    stream_path);
  CHECK(gw.exit_code == 0);
  // exactly one alert line mentioning FALL
  size_t first = gw.output.find("\"label\":\"FALL\"");
  CHECK(first != std::string::npos);
  CHECK(gw.output.find("\"label\":\"FALL\"", first + 1) == std::string::npos);
  CHECK(gw.output.find("\"votes\"") != std::string::npos);

  // window/model mismatch is a startup configuration error
  auto bad = run_cli("gateway --model " + model + " --window 2 < /dev/null");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: undefined metrics in a fold exit with code 1") {
  // one lone FALL record: folds without it in test make precision undefined
  Dataset ds = make_unimib_surrogate(40, 92);
  for (auto& r : ds.records) r.label = Label::ADL;
  ds.records[0].label = Label::FALL;
  auto path = (work_dir() / "lone_fall.csv").string();
  save_canonical(ds, path);
  auto r = run_cli("eval " + path + " --features sma --knn 3 --folds 4 --seed 3");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("—") != std::string::npos);  // report still written
}

TEST_CASE("cli: gateway reads a config file with flag overrides") {
  auto model = (work_dir() / "model_cfg.fdm").string();
  auto train = run_cli("train " + small_dataset_csv() +
                       " --features cwt,svm,sma,se --knn 3 --enn 3 --out " + model);
  REQUIRE(train.exit_code == 0);
  auto cfg = (work_dir() / "gateway.json").string();
  {
    std::ofstream f(cfg);
    f << "{\"window\":3.02,\"stride\":0.5,\"debounce\":5,\"model\":\"" << model << "\"}";
  }
  auto ok = run_cli("gateway --config " + cfg + " < /dev/null", true);
  CHECK(ok.exit_code == 0);
  // the startup banner echoes the resolved window geometry
  CHECK(ok.output.find("L=151") != std::string::npos);
  CHECK(ok.output.find("stride=25") != std::string::npos);
  // flags override the file: a 2 s window mismatches the model length
  auto bad = run_cli("gateway --config " + cfg + " --window 2 < /dev/null");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: synth writes a loadable canonical file") {
  auto out = (work_dir() / "synth.csv").string();
  auto r = run_cli("synth unimib --n 40 --out " + out + " --seed 5");
  CHECK(r.exit_code == 0);
  Dataset ds = load_canonical(out);
  CHECK(ds.size() == 40);
  CHECK(ds.name == "unimib-surrogate");

  // deterministic: regenerating with the same seed yields identical bytes
  auto out2 = (work_dir() / "synth2.csv").string();
  run_cli("synth unimib --n 40 --out " + out2 + " --seed 5");
  CHECK(slurp(out) == slurp(out2));
}
