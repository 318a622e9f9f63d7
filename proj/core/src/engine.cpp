#include "vscroll/engine.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "vscroll/error.hpp"

namespace vscroll {

void EngineConfig::Validate() const {
  if (h == 0) throw Error(ErrorCode::kConfigError, "window height h must be positive");
  if (capacity < 2) throw Error(ErrorCode::kConfigError, "capacity must be at least 2");
  if (!(threshold_fraction > 0.0 && threshold_fraction <= 1.0)) {
    throw Error(ErrorCode::kConfigError, "threshold_fraction must lie in (0, 1]");
  }
  if (max_iter < 0) throw Error(ErrorCode::kConfigError, "max_iter must be >= 0");
  if (lambda_max_default < 1) {
    throw Error(ErrorCode::kConfigError, "lambda_max_default must be >= 1");
  }
}

std::string_view WarmupStopName(WarmupStop stop) {
  switch (stop) {
    case WarmupStop::kNotRun: return "not-run";
    case WarmupStop::kThreshold: return "threshold";
    case WarmupStop::kMaxIterations: return "max-iterations";
    case WarmupStop::kNoProgress: return "no-progress";
    case WarmupStop::kTooSmall: return "too-small";
  }
  return "unknown";
}

ScrollEngine::ScrollEngine(std::shared_ptr<const IndexedTable> table, EngineConfig config)
    : table_(std::move(table)), config_(config) {
  config_.Validate();
  if (table_->empty()) {
    worker_ = std::thread([this] { WorkerLoop(); });
    return;
  }

  const Row first = *table_->FirstLast(Direction::kAscending);
  const Row last = *table_->FirstLast(Direction::kDescending);
  const Ordinal kappa_min = table_->schema().Encode(first.key);
  const Ordinal kappa_max = table_->schema().Encode(last.key);
  if (kappa_min < kappa_max) {
    interp_.emplace(kappa_min, kappa_max, config_.lambda_max_default, config_.capacity);
  }
  window_rows_ = Fill(table_->SeekGe(first.key, config_.h)).rows;
  lambda_estimate_ = 0;
  anchor_exact_ = true;

  count_pending_ = true;
  if (config_.auto_warmup) {
    pending_warmup_ = WarmupRequest{config_.threshold_fraction, config_.max_iter};
  }
  worker_ = std::thread([this] { WorkerLoop(); });
}

ScrollEngine::~ScrollEngine() {
  {
    std::lock_guard lock(queue_mutex_);
    stop_ = true;
  }
  queue_cv_.notify_all();
  if (worker_.joinable()) worker_.join();
  events_.Close();
}

// ---------------------------------------------------------------------------
// User-facing path: seeks only.

ScrollEngine::FilledWindow ScrollEngine::Fill(std::vector<Row> rows) const {
  if (rows.size() >= config_.h) return {std::move(rows), false};
  if (rows.empty()) {
    std::optional<Row> last = table_->FirstLast(Direction::kDescending);
    if (!last) return {{}, true};
    rows.push_back(std::move(*last));
  }
  // Not enough rows below the estimate: re-anchor so the window ends on the
  // last row of the table and stays full.
  std::vector<Row> before = table_->SeekLtDesc(rows.front().key, config_.h - rows.size());
  std::vector<Row> out;
  out.reserve(before.size() + rows.size());
  out.insert(out.end(), std::make_move_iterator(before.rbegin()),
             std::make_move_iterator(before.rend()));
  out.insert(out.end(), std::make_move_iterator(rows.begin()),
             std::make_move_iterator(rows.end()));
  return {std::move(out), true};
}

Window ScrollEngine::Publish(FilledWindow window, RowIndex lambda, bool exact) {
  if (window.at_end) {
    std::shared_lock lock(interp_mutex_);
    if (lambda_max_known_) {
      const RowIndex rows = static_cast<RowIndex>(window.rows.size());
      const RowIndex count = (interp_ ? interp_->lambda_max() : 0) + 1;
      lambda = std::max<RowIndex>(0, count - rows);
      exact = true;
    }
  }
  std::lock_guard lock(state_mutex_);
  window_rows_ = window.rows;
  lambda_estimate_ = lambda;
  anchor_exact_ = exact;
  const std::uint64_t generation = ++generation_;
  events_.Push(WindowChanged{window.rows, lambda, generation});
  return Window{std::move(window.rows), lambda, exact, generation};
}

Window ScrollEngine::ScrollLocked(RowIndex lambda) {
  if (table_->empty()) return Window{};
  Ordinal kappa;
  {
    std::shared_lock lock(interp_mutex_);
    if (!interp_) {
      lambda = 0;
    } else {
      lambda = std::clamp<RowIndex>(lambda, 0, interp_->lambda_max());
      kappa = interp_->KappaFor(lambda);
    }
  }
  std::vector<Row> rows;
  if (!interp_) {
    rows = table_->SeekGe(table_->FirstLast(Direction::kAscending)->key, config_.h);
  } else {
    // The decoded key need not exist in the table; strings in it are often
    // gibberish. Seeking from it still lands near the wanted position.
    rows = table_->SeekGe(table_->schema().codec().DecodeClamped(kappa), config_.h);
  }
  return Publish(Fill(std::move(rows)), lambda, lambda == 0);
}

Window ScrollEngine::OnScroll(RowIndex lambda) {
  std::lock_guard user(user_mutex_);
  return ScrollLocked(lambda);
}

void ScrollEngine::ScheduleRefinement() {
  RefinementRequest request;
  {
    std::lock_guard lock(state_mutex_);
    if (window_rows_.empty()) return;
    request = RefinementRequest{window_rows_.front().key, generation_};
  }
  {
    std::lock_guard lock(queue_mutex_);
    // Coalesce: a newer request replaces one that has not started.
    pending_refinement_ = std::move(request);
  }
  queue_cv_.notify_all();
}

void ScrollEngine::OnScrollRelease() {
  std::lock_guard user(user_mutex_);
  ScheduleRefinement();
}

Window ScrollEngine::PositionTo(const KeyTuple& keys) {
  std::lock_guard user(user_mutex_);
  const Ordinal kappa = table_->schema().Encode(keys);
  if (table_->empty()) return Window{};

  FilledWindow window = Fill(table_->SeekGe(keys, config_.h));
  // The thumb follows the top displayed row, which is also what a later
  // refinement counts.
  const Ordinal anchor = window.rows.empty() ? kappa : table_->schema().Encode(window.rows.front().key);
  RowIndex lambda = 0;
  bool exact = false;
  {
    std::shared_lock lock(interp_mutex_);
    if (interp_) {
      lambda = interp_->LambdaFor(anchor);
      exact = anchor <= interp_->kappa_min();
    } else {
      exact = true;
    }
  }
  Window out = Publish(std::move(window), lambda, exact);
  ScheduleRefinement();
  return out;
}

Window ScrollEngine::SmallStep(std::int64_t n) {
  std::lock_guard user(user_mutex_);
  if (table_->empty()) return Window{};

  std::vector<Row> rows;
  RowIndex lambda;
  bool exact;
  {
    std::lock_guard lock(state_mutex_);
    rows = window_rows_;
    lambda = lambda_estimate_;
    exact = anchor_exact_;
  }
  if (n == 0 || rows.empty()) return current();
  const auto magnitude = static_cast<std::size_t>(n < 0 ? -n : n);
  if (magnitude > config_.effective_page_size()) return ScrollLocked(lambda + n);

  // Splice the fetched rows onto the current window and keep h of them.
  FilledWindow window;
  const std::size_t h = rows.size();
  if (n > 0) {
    std::vector<Row> next = table_->SeekGt(rows.back().key, magnitude);
    const std::size_t shift = next.size();
    std::vector<Row> combined = std::move(rows);
    combined.insert(combined.end(), std::make_move_iterator(next.begin()),
                    std::make_move_iterator(next.end()));
    window.rows.assign(std::make_move_iterator(combined.end() - static_cast<std::ptrdiff_t>(h)),
                       std::make_move_iterator(combined.end()));
    window.at_end = shift < magnitude;
    lambda += static_cast<RowIndex>(shift);
  } else {
    std::vector<Row> prev = table_->SeekLtDesc(rows.front().key, magnitude);
    const std::size_t shift = prev.size();
    std::vector<Row> combined(std::make_move_iterator(prev.rbegin()),
                              std::make_move_iterator(prev.rend()));
    combined.insert(combined.end(), std::make_move_iterator(rows.begin()),
                    std::make_move_iterator(rows.end()));
    combined.resize(h);
    window.rows = std::move(combined);
    lambda -= static_cast<RowIndex>(shift);
    if (shift < magnitude) {
      // Fewer predecessors than asked for: the window starts at row 0.
      lambda = 0;
      exact = true;
    }
  }
  lambda = std::max<RowIndex>(lambda, 0);

  // An exact anchor stays exact after moving by a known number of rows, which
  // gives a free interpolation point.
  if (exact && !window.at_end && !window.rows.empty()) {
    const Ordinal kappa = table_->schema().Encode(window.rows.front().key);
    std::unique_lock lock(interp_mutex_);
    if (interp_ && lambda_max_known_ && lambda > 0 && lambda < interp_->lambda_max()) {
      try {
        interp_->Insert(lambda, kappa);
      } catch (const Error& e) {
        std::cerr << "vscroll: small-step point rejected: " << e.what() << '\n';
      }
    }
  }
  return Publish(std::move(window), lambda, exact);
}

void ScrollEngine::StartWarmup(double threshold_fraction, int max_iter) {
  {
    std::lock_guard lock(queue_mutex_);
    pending_warmup_ = WarmupRequest{threshold_fraction, max_iter};
    warmup_report_ = WarmupReport{};
    warmup_last_gap_ = -1;
  }
  queue_cv_.notify_all();
}

void ScrollEngine::WaitIdle() {
  std::unique_lock lock(queue_mutex_);
  idle_cv_.wait(lock, [&] {
    return stop_ || (!busy_ && !count_pending_ && !pending_refinement_ && !pending_warmup_);
  });
}

Window ScrollEngine::current() const {
  std::lock_guard lock(state_mutex_);
  return Window{window_rows_, lambda_estimate_, anchor_exact_, generation_};
}

RowIndex ScrollEngine::lambda_max() const {
  std::shared_lock lock(interp_mutex_);
  return interp_ ? interp_->lambda_max() : 0;
}

bool ScrollEngine::lambda_max_known() const {
  std::shared_lock lock(interp_mutex_);
  return lambda_max_known_;
}

std::vector<InterpolationPoint> ScrollEngine::InterpolationPoints() const {
  std::shared_lock lock(interp_mutex_);
  return interp_ ? interp_->Points() : std::vector<InterpolationPoint>{};
}

std::pair<RowIndex, RowIndex> ScrollEngine::LargestGap() const {
  std::shared_lock lock(interp_mutex_);
  return interp_ ? interp_->LargestGap() : std::pair<RowIndex, RowIndex>{0, 0};
}

RowIndex ScrollEngine::EstimateLambda(const KeyTuple& keys) const {
  const Ordinal kappa = table_->schema().Encode(keys);
  std::shared_lock lock(interp_mutex_);
  return interp_ ? interp_->LambdaFor(kappa) : 0;
}

std::optional<RefinementOutcome> ScrollEngine::last_refinement() const {
  std::lock_guard lock(queue_mutex_);
  return last_refinement_;
}

WarmupReport ScrollEngine::warmup_report() const {
  std::lock_guard lock(queue_mutex_);
  return warmup_report_;
}

std::uint64_t ScrollEngine::refinements_completed() const {
  std::lock_guard lock(queue_mutex_);
  return refinements_completed_;
}

// ---------------------------------------------------------------------------
// Background path: counting queries.

void ScrollEngine::WorkerLoop() {
  std::unique_lock lock(queue_mutex_);
  while (true) {
    queue_cv_.wait(lock, [&] {
      return stop_ || count_pending_ || pending_refinement_ || pending_warmup_;
    });
    if (stop_) break;
    busy_ = true;
    try {
      if (count_pending_) {
        count_pending_ = false;
        lock.unlock();
        RunCount();
        lock.lock();
      } else if (pending_refinement_) {
        RefinementRequest request = std::move(*pending_refinement_);
        pending_refinement_.reset();
        lock.unlock();
        RunRefinement(request);
        lock.lock();
      } else {
        lock.unlock();
        const bool more = RunWarmupStep();
        lock.lock();
        if (!more) pending_warmup_.reset();
      }
    } catch (const std::exception& e) {
      std::cerr << "vscroll: background task failed: " << e.what() << '\n';
      if (!lock.owns_lock()) lock.lock();
    }
    busy_ = false;
    idle_cv_.notify_all();
  }
  busy_ = false;
  idle_cv_.notify_all();
}

void ScrollEngine::RunCount() {
  const std::int64_t count = table_->CountAll();
  if (count == 0) return;
  {
    std::unique_lock lock(interp_mutex_);
    if (interp_) interp_->SetLambdaMax(count - 1);
    lambda_max_known_ = true;
  }
  std::lock_guard lock(state_mutex_);
  events_.Push(LambdaMaxChanged{count - 1});
}

void ScrollEngine::RunRefinement(const RefinementRequest& request) {
  const std::int64_t lambda_exact = table_->CountLess(request.anchor);
  const Ordinal kappa = table_->schema().Encode(request.anchor);

  RefinementOutcome outcome{lambda_exact, request.generation, false, false};
  {
    std::unique_lock lock(interp_mutex_);
    if (interp_ && lambda_max_known_ && lambda_exact > 0 &&
        lambda_exact < interp_->lambda_max()) {
      try {
        interp_->Insert(lambda_exact, kappa);
        outcome.point_added = true;
      } catch (const Error& e) {
        std::cerr << "vscroll: refinement point rejected: " << e.what() << '\n';
      }
    }
  }
  {
    std::lock_guard lock(state_mutex_);
    if (generation_ == request.generation) {
      lambda_estimate_ = lambda_exact;
      anchor_exact_ = true;
      events_.Push(ThumbCorrected{lambda_exact, request.generation});
      outcome.applied = true;
    }
  }
  std::lock_guard lock(queue_mutex_);
  last_refinement_ = outcome;
  ++refinements_completed_;
}

std::optional<Row> ScrollEngine::ProbeInterior(const Ordinal& kappa_lo, const Ordinal& kappa_hi,
                                               Ordinal probe) const {
  const CompositeCodec& codec = table_->schema().codec();
  // Halve the probe toward kappa_lo until a row strictly inside the gap shows
  // up; every step is a single seek.
  while (probe > kappa_lo) {
    std::vector<Row> found = table_->SeekGe(codec.DecodeClamped(probe), 1);
    if (!found.empty()) {
      const Ordinal kappa = table_->schema().Encode(found.front().key);
      if (kappa > kappa_lo && kappa < kappa_hi) return std::move(found.front());
      if (kappa <= kappa_lo) break;
    }
    probe = kappa_lo + (probe - kappa_lo) / 2;
  }
  std::vector<Row> next = table_->SeekGt(codec.Decode(kappa_lo), 1);
  if (!next.empty() && table_->schema().Encode(next.front().key) < kappa_hi) {
    return std::move(next.front());
  }
  return std::nullopt;
}

bool ScrollEngine::RunWarmupStep() {
  WarmupRequest request;
  {
    std::lock_guard lock(queue_mutex_);
    if (!pending_warmup_) return false;
    request = *pending_warmup_;
  }
  const auto finish = [&](WarmupStop stop, RowIndex gap, RowIndex lambda_max) {
    std::lock_guard lock(queue_mutex_);
    warmup_report_.stop = stop;
    warmup_report_.max_gap = gap;
    warmup_report_.lambda_max = lambda_max;
    warmup_last_gap_ = -1;
    return false;
  };

  std::pair<RowIndex, RowIndex> gap;
  RowIndex lambda_max = 0;
  Ordinal kappa_lo, kappa_hi, probe;
  {
    std::shared_lock lock(interp_mutex_);
    if (!lambda_max_known_) return finish(WarmupStop::kNotRun, 0, 0);
    if (!interp_) return finish(WarmupStop::kTooSmall, 0, 0);
    lambda_max = interp_->lambda_max();
    gap = interp_->LargestGap();
    kappa_lo = interp_->KappaFor(gap.first);
    kappa_hi = interp_->KappaFor(gap.second);
    probe = interp_->KappaFor(gap.first + (gap.second - gap.first) / 2);
  }
  const RowIndex width = gap.second - gap.first;
  if (static_cast<std::size_t>(lambda_max) + 1 <= config_.h) {
    return finish(WarmupStop::kTooSmall, width, lambda_max);
  }
  if (static_cast<double>(width) <= request.threshold_fraction * static_cast<double>(lambda_max)) {
    return finish(WarmupStop::kThreshold, width, lambda_max);
  }
  int iterations;
  {
    std::lock_guard lock(queue_mutex_);
    iterations = warmup_report_.iterations;
  }
  if (iterations >= request.max_iter) return finish(WarmupStop::kMaxIterations, width, lambda_max);

  std::optional<Row> row = ProbeInterior(kappa_lo, kappa_hi, probe);
  if (!row) return finish(WarmupStop::kNoProgress, width, lambda_max);

  const std::int64_t lambda_exact = table_->CountLess(row->key);
  const Ordinal kappa = table_->schema().Encode(row->key);
  bool added = false;
  {
    std::unique_lock lock(interp_mutex_);
    if (lambda_exact > 0 && lambda_exact < interp_->lambda_max()) {
      interp_->Insert(lambda_exact, kappa);
      added = true;
    }
  }
  std::lock_guard lock(queue_mutex_);
  ++warmup_report_.iterations;
  warmup_report_.max_gap = width;
  warmup_report_.lambda_max = lambda_max;
  if (!added && warmup_last_gap_ == width) {
    warmup_report_.stop = WarmupStop::kNoProgress;
    warmup_last_gap_ = -1;
    return false;
  }
  warmup_last_gap_ = width;
  return true;
}

}  // namespace vscroll
