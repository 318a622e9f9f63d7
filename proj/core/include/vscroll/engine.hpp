#pragma once

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "vscroll/dataset.hpp"
#include "vscroll/events.hpp"
#include "vscroll/interpolator.hpp"

namespace vscroll {

struct EngineConfig {
  // Window height in rows.
  std::size_t h = 20;
  std::size_t capacity = InterpolationTable::kDefaultCapacity;
  double threshold_fraction = 0.2;
  int max_iter = 64;
  // Steps up to this many rows are served by adjacent seeks; 0 means 2h.
  std::size_t page_size = 0;
  RowIndex lambda_max_default = InterpolationTable::kDefaultLambdaMax;
  // Schedule warmup right after the row count arrives.
  bool auto_warmup = true;

  // Throws Error(kConfigError).
  void Validate() const;
  std::size_t effective_page_size() const { return page_size == 0 ? 2 * h : page_size; }
};

// What the grid shows after a user action.
struct Window {
  std::vector<Row> rows;
  RowIndex lambda = 0;
  // True when lambda is known exactly rather than interpolated.
  bool exact = false;
  std::uint64_t generation = 0;
};

struct RefinementOutcome {
  RowIndex lambda_exact = 0;
  std::uint64_t for_generation = 0;
  bool point_added = false;
  // The thumb event was emitted (the user had not moved on meanwhile).
  bool applied = false;
};

enum class WarmupStop { kNotRun, kThreshold, kMaxIterations, kNoProgress, kTooSmall };

struct WarmupReport {
  int iterations = 0;
  RowIndex max_gap = 0;
  RowIndex lambda_max = 0;
  WarmupStop stop = WarmupStop::kNotRun;
};

std::string_view WarmupStopName(WarmupStop stop);

// Drives the grid: maps thumb positions to key estimates and back using only
// index seeks on the caller's path, and refines the interpolation table from
// exact counts on a background thread.
//
// User-facing calls (OnScroll, PositionTo, SmallStep, OnScrollRelease) are
// serialized among themselves and never run a counting query. The row count,
// refinements and warmup run on one worker thread; only the most recent
// pending refinement is kept. A refinement that finishes after a newer user
// action still adds its point but emits no ThumbCorrected.
class ScrollEngine {
 public:
  // Reads the first and last rows, seeds the interpolation table with the
  // default lambda_max, shows the first h rows and schedules the row count.
  // An empty table yields an engine that serves empty windows and emits no
  // events.
  ScrollEngine(std::shared_ptr<const IndexedTable> table, EngineConfig config);
  ~ScrollEngine();

  ScrollEngine(const ScrollEngine&) = delete;
  ScrollEngine& operator=(const ScrollEngine&) = delete;

  // Thumb dragged to lambda (clamped to [0, lambda_max]).
  Window OnScroll(RowIndex lambda);
  // Thumb released: schedules an exact count for the current anchor row.
  void OnScrollRelease();
  // Jump to the first row with key >= keys; lambda is the estimate for that
  // row. Throws Error(kSchemaError).
  Window PositionTo(const KeyTuple& keys);
  // Move by n rows (arrow or page click). Steps beyond the page size fall
  // back to OnScroll.
  Window SmallStep(std::int64_t n);

  // Queues a warmup pass with explicit parameters.
  void StartWarmup(double threshold_fraction, int max_iter);

  // Blocks until the worker has no queued or running task.
  void WaitIdle();

  Window current() const;
  RowIndex lambda_max() const;
  bool lambda_max_known() const;
  bool empty() const { return table_->empty(); }
  const EngineConfig& config() const { return config_; }
  const IndexedTable& table() const { return *table_; }
  std::shared_ptr<const IndexedTable> shared_table() const { return table_; }

  // Copies of the interpolation points for diagnostics and tests.
  std::vector<InterpolationPoint> InterpolationPoints() const;
  std::pair<RowIndex, RowIndex> LargestGap() const;
  // Interpolated lambda for a key; 0 for an empty table.
  RowIndex EstimateLambda(const KeyTuple& keys) const;

  std::optional<RefinementOutcome> last_refinement() const;
  WarmupReport warmup_report() const;
  std::uint64_t refinements_completed() const;

  EventLog& events() { return events_; }
  const EventLog& events() const { return events_; }

 private:
  struct RefinementRequest {
    KeyTuple anchor;
    std::uint64_t generation = 0;
  };
  struct WarmupRequest {
    double threshold_fraction = 0.2;
    int max_iter = 64;
  };
  struct FilledWindow {
    std::vector<Row> rows;
    bool at_end = false;
  };

  FilledWindow Fill(std::vector<Row> rows) const;
  Window Publish(FilledWindow window, RowIndex lambda, bool exact);
  Window ScrollLocked(RowIndex lambda);
  void ScheduleRefinement();

  void WorkerLoop();
  void RunCount();
  void RunRefinement(const RefinementRequest& request);
  // Returns false when warmup is finished.
  bool RunWarmupStep();
  std::optional<Row> ProbeInterior(const Ordinal& kappa_lo, const Ordinal& kappa_hi,
                                   Ordinal probe) const;

  std::shared_ptr<const IndexedTable> table_;
  EngineConfig config_;
  EventLog events_;

  // Interpolation state; the worker writes, user calls read.
  mutable std::shared_mutex interp_mutex_;
  std::optional<InterpolationTable> interp_;
  bool lambda_max_known_ = false;

  // Serializes user-facing calls.
  std::mutex user_mutex_;

  // Grid state.
  mutable std::mutex state_mutex_;
  std::vector<Row> window_rows_;
  RowIndex lambda_estimate_ = 0;
  bool anchor_exact_ = true;
  std::uint64_t generation_ = 0;

  // Worker queue.
  mutable std::mutex queue_mutex_;
  std::condition_variable queue_cv_;
  std::condition_variable idle_cv_;
  bool stop_ = false;
  bool busy_ = false;
  bool count_pending_ = false;
  std::optional<RefinementRequest> pending_refinement_;
  std::optional<WarmupRequest> pending_warmup_;
  WarmupReport warmup_report_;
  RowIndex warmup_last_gap_ = -1;
  std::optional<RefinementOutcome> last_refinement_;
  std::uint64_t refinements_completed_ = 0;
  std::thread worker_;
};

}  // namespace vscroll
