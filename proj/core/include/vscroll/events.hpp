#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <utility>
#include <variant>
#include <vector>

#include "vscroll/dataset.hpp"

namespace vscroll {

struct WindowChanged {
  std::vector<Row> rows;
  RowIndex lambda = 0;
  std::uint64_t generation = 0;
};

// The thumb "bounces" to the exact position of the displayed anchor row.
struct ThumbCorrected {
  RowIndex lambda = 0;
  std::uint64_t generation = 0;
};

struct LambdaMaxChanged {
  RowIndex lambda_max = 0;
};

using EngineEvent = std::variant<WindowChanged, ThumbCorrected, LambdaMaxChanged>;

// Append-only broadcast log of engine events. Every event gets a sequence
// number starting at 1; readers poll or block for events after the last
// sequence they saw. Only the most recent `retention` events are kept.
class EventLog {
 public:
  explicit EventLog(std::size_t retention = 4096) : retention_(retention) {}

  std::uint64_t Push(EngineEvent event);

  // Events with sequence > after, waiting up to `timeout` for the first one.
  std::vector<std::pair<std::uint64_t, EngineEvent>> WaitAfter(
      std::uint64_t after, std::chrono::milliseconds timeout) const;

  std::vector<std::pair<std::uint64_t, EngineEvent>> Since(std::uint64_t after) const;

  std::uint64_t last_sequence() const;

  // Wakes blocked readers, e.g. on shutdown.
  void Close();
  bool closed() const;

 private:
  std::vector<std::pair<std::uint64_t, EngineEvent>> CollectLocked(std::uint64_t after) const;

  mutable std::mutex mutex_;
  mutable std::condition_variable cv_;
  std::deque<std::pair<std::uint64_t, EngineEvent>> events_;
  std::uint64_t next_sequence_ = 1;
  std::size_t retention_;
  bool closed_ = false;
};

}  // namespace vscroll
