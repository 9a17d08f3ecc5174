#include "falldet/gateway.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "falldet/bdt.hpp"
#include "falldet/enn.hpp"
#include "falldet/knn.hpp"
#include "json.hpp"

namespace falldet {

namespace {

int64_t llround_i64(double v) { return static_cast<int64_t>(std::llround(v)); }

}  // namespace

Windower::Windower(const WindowPolicy& policy, double fs) {
  if (fs <= 0.0) throw std::invalid_argument("gateway: fs must be > 0");
  if (policy.stride_s <= 0.0 || policy.stride_s > policy.window_length_s)
    throw std::invalid_argument("gateway: stride must be in (0, window_length]");
  if (policy.debounce_s < 0.0) throw std::invalid_argument("gateway: debounce must be >= 0");
  window_samples_ = static_cast<size_t>(llround_i64(policy.window_length_s * fs));
  stride_samples_ = static_cast<size_t>(llround_i64(policy.stride_s * fs));
  if (window_samples_ < 2) throw std::invalid_argument("gateway: window too short");
  if (stride_samples_ < 1) stride_samples_ = 1;
  window_ms_ = llround_i64(policy.window_length_s * 1000.0);
}

void Windower::push(const StreamFrame& f, std::vector<Window>& out) {
  counters_.frames_in++;
  if (!std::isfinite(f.ax) || !std::isfinite(f.ay) || !std::isfinite(f.az)) {
    counters_.frames_dropped++;
    return;
  }
  if (have_last_ && f.t_ms < last_t_) {
    counters_.frames_dropped++;
    return;
  }
  if (have_last_ && f.t_ms - last_t_ > window_ms_ && !buffer_.empty()) {
    buffer_.clear();
    accepted_since_reset_ = 0;
    counters_.buffer_resets++;
  }
  last_t_ = f.t_ms;
  have_last_ = true;
  counters_.frames_accepted++;
  accepted_since_reset_++;
  buffer_.push_back(f);
  if (buffer_.size() > window_samples_) buffer_.pop_front();

  if (accepted_since_reset_ >= window_samples_ &&
      (accepted_since_reset_ - window_samples_) % stride_samples_ == 0) {
    Window w;
    w.start_ms = buffer_.front().t_ms;
    w.end_ms = buffer_.back().t_ms;
    w.ax.reserve(window_samples_);
    w.ay.reserve(window_samples_);
    w.az.reserve(window_samples_);
    for (const auto& fr : buffer_) {
      w.ax.push_back(fr.ax);
      w.ay.push_back(fr.ay);
      w.az.push_back(fr.az);
    }
    out.push_back(std::move(w));
    counters_.windows_emitted++;
  }
}

Detector::Detector(const ModelBundle& bundle, const WindowPolicy& policy, double fs)
    : bundle_(bundle), policy_(policy), extractor_(bundle.features, bundle.record_length) {
  size_t window_samples = static_cast<size_t>(llround_i64(policy.window_length_s * fs));
  if (window_samples != bundle.record_length)
    throw std::invalid_argument(
        "gateway: window of " + std::to_string(window_samples) +
        " samples does not match the model's training length " +
        std::to_string(bundle.record_length) + " (window_length * fs must equal it)");
  if (bundle.fs > 0.0 && std::abs(bundle.fs - fs) > 1e-9)
    throw std::invalid_argument("gateway: stream rate " + std::to_string(fs) +
                                " Hz does not match the model's training rate " +
                                std::to_string(bundle.fs) + " Hz");
  debounce_ms_ = llround_i64(policy.debounce_s * 1000.0);
  stride_ms_ = llround_i64(policy.stride_s * 1000.0);
}

Prediction Detector::classify(const Window& w) const {
  Record r;
  r.id = "window";
  r.fs = bundle_.fs;
  r.ax = w.ax;
  r.ay = w.ay;
  r.az = w.az;
  std::vector<double> features(extractor_.vector_length());
  extractor_.extract_into(r, features.data());
  std::span<const double> q(features);
  Prediction p;
  p.knn = knn_classify(bundle_.knn, q);
  p.enn = enn_classify(bundle_.enn, q);
  p.bdt = bundle_.bdt.classify(q);
  p.vm = vote(p.knn, p.enn, p.bdt);
  return p;
}

std::optional<AlertEvent> Detector::process(const Window& w) {
  auto t0 = std::chrono::steady_clock::now();
  Prediction p = classify(w);
  last_latency_ms_ =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (last_latency_ms_ > static_cast<double>(stride_ms_)) deadline_misses_++;

  if (p.vm != Label::FALL) return std::nullopt;
  if (have_alert_ && w.end_ms - last_alert_end_ms_ < debounce_ms_) {
    alerts_debounced_++;
    return std::nullopt;
  }
  have_alert_ = true;
  last_alert_end_ms_ = w.end_ms;
  AlertEvent a;
  a.window_start_ms = w.start_ms;
  a.window_end_ms = w.end_ms;
  a.label = Label::FALL;
  a.vote_knn = p.knn;
  a.vote_enn = p.enn;
  a.vote_bdt = p.bdt;
  a.model_id = bundle_.digest;
  return a;
}

GatewayService::GatewayService(const ModelBundle& bundle, const WindowPolicy& policy, double fs,
                               std::function<void(const AlertEvent&)> on_alert,
                               size_t queue_capacity)
    : windower_(policy, fs),
      detector_(bundle, policy, fs),
      on_alert_(std::move(on_alert)),
      capacity_(queue_capacity == 0 ? 1 : queue_capacity) {
  thread_ = std::thread(&GatewayService::worker, this);
}

GatewayService::~GatewayService() {
  finish();
}

void GatewayService::feed(const StreamFrame& f) {
  std::vector<Window> completed;
  {
    std::lock_guard<std::mutex> lock(mu_);
    windower_.push(f, completed);
    for (auto& w : completed) {
      if (queue_.size() >= capacity_) {
        queue_.pop_front();
        windower_.counters().windows_dropped++;
      }
      queue_.push_back(std::move(w));
    }
  }
  if (!completed.empty()) cv_.notify_one();
}

void GatewayService::worker() {
  while (true) {
    Window w;
    {
      std::unique_lock<std::mutex> lock(mu_);
      cv_.wait(lock, [this] { return done_ || !queue_.empty(); });
      if (queue_.empty()) {
        if (done_) return;
        continue;
      }
      w = std::move(queue_.front());
      queue_.pop_front();
    }
    std::optional<AlertEvent> alert = detector_.process(w);
    {
      std::lock_guard<std::mutex> lock(mu_);
      worker_counters_.windows_classified++;
      worker_counters_.deadline_misses = detector_.deadline_misses();
      worker_counters_.alerts_debounced = detector_.alerts_debounced();
      if (alert) worker_counters_.alerts_emitted++;
    }
    if (alert && on_alert_) on_alert_(*alert);
  }
}

void GatewayService::finish() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (done_ && !thread_.joinable()) return;
    done_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

GatewayCounters GatewayService::counters() const {
  std::lock_guard<std::mutex> lock(mu_);
  GatewayCounters c = windower_.counters();
  c.windows_classified = worker_counters_.windows_classified;
  c.alerts_emitted = worker_counters_.alerts_emitted;
  c.alerts_debounced = worker_counters_.alerts_debounced;
  c.deadline_misses = worker_counters_.deadline_misses;
  return c;
}

std::optional<StreamFrame> parse_frame_line(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  if (!j.contains("t") || !j.contains("ax") || !j.contains("ay") || !j.contains("az"))
    return std::nullopt;
  if (!j["t"].is_number() || !j["ax"].is_number() || !j["ay"].is_number() ||
      !j["az"].is_number())
    return std::nullopt;
  StreamFrame f;
  f.t_ms = j["t"].get<int64_t>();
  f.ax = j["ax"].get<double>();
  f.ay = j["ay"].get<double>();
  f.az = j["az"].get<double>();
  return f;
}

std::string alert_to_json(const AlertEvent& a) {
  char digest[17];
  std::snprintf(digest, sizeof(digest), "%016llx", static_cast<unsigned long long>(a.model_id));
  nlohmann::json j{{"window_start", a.window_start_ms},
                   {"window_end", a.window_end_ms},
                   {"label", label_name(a.label)},
                   {"votes",
                    {{"knn", label_name(a.vote_knn)},
                     {"enn", label_name(a.vote_enn)},
                     {"bdt", label_name(a.vote_bdt)}}},
                   {"model_id", digest}};
  return j.dump();
}

std::string counters_to_json(const GatewayCounters& c) {
  nlohmann::json j{{"frames_in", c.frames_in},
                   {"frames_accepted", c.frames_accepted},
                   {"frames_dropped", c.frames_dropped},
                   {"buffer_resets", c.buffer_resets},
                   {"windows_emitted", c.windows_emitted},
                   {"windows_dropped", c.windows_dropped},
                   {"windows_classified", c.windows_classified},
                   {"alerts_emitted", c.alerts_emitted},
                   {"alerts_debounced", c.alerts_debounced},
                   {"deadline_misses", c.deadline_misses}};
  return j.dump();
}

}  // namespace falldet
