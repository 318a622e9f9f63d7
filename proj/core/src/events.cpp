#include "vscroll/events.hpp"

namespace vscroll {

std::uint64_t EventLog::Push(EngineEvent event) {
  std::uint64_t sequence;
  {
    std::lock_guard lock(mutex_);
    sequence = next_sequence_++;
    events_.emplace_back(sequence, std::move(event));
    while (events_.size() > retention_) events_.pop_front();
  }
  cv_.notify_all();
  return sequence;
}

std::vector<std::pair<std::uint64_t, EngineEvent>> EventLog::CollectLocked(
    std::uint64_t after) const {
  std::vector<std::pair<std::uint64_t, EngineEvent>> out;
  for (const auto& entry : events_) {
    if (entry.first > after) out.push_back(entry);
  }
  return out;
}

std::vector<std::pair<std::uint64_t, EngineEvent>> EventLog::WaitAfter(
    std::uint64_t after, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [&] { return closed_ || next_sequence_ - 1 > after; });
  return CollectLocked(after);
}

std::vector<std::pair<std::uint64_t, EngineEvent>> EventLog::Since(std::uint64_t after) const {
  std::lock_guard lock(mutex_);
  return CollectLocked(after);
}

std::uint64_t EventLog::last_sequence() const {
  std::lock_guard lock(mutex_);
  return next_sequence_ - 1;
}

void EventLog::Close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  cv_.notify_all();
}

bool EventLog::closed() const {
  std::lock_guard lock(mutex_);
  return closed_;
}

}  // namespace vscroll
