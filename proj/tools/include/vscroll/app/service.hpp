#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "vscroll/dataset.hpp"
#include "vscroll/engine.hpp"

namespace httplib {
class Server;
}

namespace vscroll::app {

// HTTP front end of one engine.
//
//   GET  /api/meta               {lambda_max, lambda_max_known, h, rows, schema, payload_columns}
//   GET  /api/window?lambda=L    {rows, lambda, exact, generation}
//   POST /api/locate {keys}      {rows, lambda_estimate, exact, generation}
//   POST /api/step {n}           {rows, lambda, exact, generation}
//   POST /api/release            202
//   GET  /api/events?after=S     newline-delimited JSON, one event per line
//
// The table is loaded on a background thread; until it is ready every
// endpoint answers 503. Malformed parameters or keys give 400.
class Service {
 public:
  using Loader = std::function<std::shared_ptr<const IndexedTable>()>;

  Service(Loader loader, EngineConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds the socket and starts loading. Port 0 picks a free port; returns
  // the bound port. Throws Error(kConfigError) when binding fails.
  int Bind(const std::string& host, int port);
  // Serves until Stop(); call after Bind.
  void Listen();
  // Listen() on a background thread.
  void Start();
  void Stop();

  bool ready() const;
  // Message of a failed load, if any.
  std::optional<std::string> load_error() const;
  // Blocks until loading finished either way; returns ready().
  bool WaitLoaded();
  std::shared_ptr<ScrollEngine> engine() const;

 private:
  void Load();
  void Route();

  Loader loader_;
  EngineConfig config_;
  std::unique_ptr<httplib::Server> server_;

  mutable std::mutex mutex_;
  std::shared_ptr<ScrollEngine> engine_;
  std::optional<std::string> load_error_;
  bool loaded_ = false;
  std::atomic<bool> stopping_{false};

  std::thread loader_thread_;
  std::thread listen_thread_;
};

}  // namespace vscroll::app
