#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "falldet/features.hpp"
#include "falldet/model_io.hpp"
#include "falldet/types.hpp"
#include "falldet/vote.hpp"

namespace falldet {

struct StreamFrame {
  int64_t t_ms = 0;
  double ax = 0.0, ay = 0.0, az = 0.0;
};

struct WindowPolicy {
  double window_length_s = 3.0;
  double stride_s = 0.5;
  double debounce_s = 10.0;
};

struct Window {
  int64_t start_ms = 0, end_ms = 0;
  std::vector<double> ax, ay, az;
};

struct AlertEvent {
  int64_t window_start_ms = 0, window_end_ms = 0;
  Label label = Label::FALL;
  Label vote_knn = Label::ADL, vote_enn = Label::ADL, vote_bdt = Label::ADL;
  uint64_t model_id = 0;
};

struct GatewayCounters {
  uint64_t frames_in = 0;
  uint64_t frames_accepted = 0;       // windowed or still buffered
  uint64_t frames_dropped = 0;        // out-of-order timestamps
  uint64_t buffer_resets = 0;         // gaps larger than the window
  uint64_t windows_emitted = 0;
  uint64_t windows_dropped = 0;       // backpressure, oldest first
  uint64_t windows_classified = 0;
  uint64_t alerts_emitted = 0;
  uint64_t alerts_debounced = 0;
  uint64_t deadline_misses = 0;       // processing slower than the stride
};

// Fixed-length sliding windows over an ordered frame stream: L samples every
// stride, both rounded from seconds at the given rate. Out-of-order frames
// are dropped and counted; a timestamp gap longer than the window resets the
// buffer. Incomplete tails are never emitted.
class Windower {
 public:
  Windower(const WindowPolicy& policy, double fs);

  size_t window_samples() const { return window_samples_; }
  size_t stride_samples() const { return stride_samples_; }

  // Appends any windows completed by this frame to `out`.
  void push(const StreamFrame& f, std::vector<Window>& out);

  const GatewayCounters& counters() const { return counters_; }
  GatewayCounters& counters() { return counters_; }

 private:
  size_t window_samples_, stride_samples_;
  int64_t window_ms_;
  std::deque<StreamFrame> buffer_;
  uint64_t accepted_since_reset_ = 0;
  bool have_last_ = false;
  int64_t last_t_ = 0;
  GatewayCounters counters_;
};

// Per-window feature extraction + majority vote + debounce. Model/window
// mismatches are configuration errors at construction, never mid-stream.
class Detector {
 public:
  Detector(const ModelBundle& bundle, const WindowPolicy& policy, double fs);

  // Prediction for a window regardless of debounce (offline equivalence).
  Prediction classify(const Window& w) const;

  // Returns an alert iff the majority says FALL and the debounce has elapsed.
  std::optional<AlertEvent> process(const Window& w);

  double last_latency_ms() const { return last_latency_ms_; }
  uint64_t deadline_misses() const { return deadline_misses_; }
  uint64_t alerts_debounced() const { return alerts_debounced_; }

 private:
  const ModelBundle& bundle_;
  WindowPolicy policy_;
  FeatureExtractor extractor_;
  int64_t debounce_ms_;
  int64_t stride_ms_;
  bool have_alert_ = false;
  int64_t last_alert_end_ms_ = 0;
  double last_latency_ms_ = 0.0;
  uint64_t deadline_misses_ = 0;
  uint64_t alerts_debounced_ = 0;
};

// One ingest loop and one classify/emit loop joined by a bounded queue; when
// the queue is full the oldest unprocessed window is dropped (counted), never
// an incoming frame.
class GatewayService {
 public:
  GatewayService(const ModelBundle& bundle, const WindowPolicy& policy, double fs,
                 std::function<void(const AlertEvent&)> on_alert, size_t queue_capacity = 8);
  ~GatewayService();

  void feed(const StreamFrame& f);
  void finish();  // drain the queue and join the worker

  GatewayCounters counters() const;

 private:
  void worker();

  Windower windower_;
  Detector detector_;
  std::function<void(const AlertEvent&)> on_alert_;
  size_t capacity_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Window> queue_;
  bool done_ = false;
  GatewayCounters worker_counters_;
  std::thread thread_;
};

// Wire formats: one JSON object per line.
std::optional<StreamFrame> parse_frame_line(const std::string& line);
std::string alert_to_json(const AlertEvent& a);
std::string counters_to_json(const GatewayCounters& c);

}  // namespace falldet
