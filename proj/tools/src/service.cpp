#include "vscroll/app/service.hpp"

#include <charconv>
#include <chrono>
#include <httplib.h>
#include <iostream>

#include "vscroll/app/wire.hpp"
#include "vscroll/error.hpp"

namespace vscroll::app {
namespace {

constexpr char kJson[] = "application/json";

void SendJson(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void SendError(httplib::Response& res, int status, const std::string& message) {
  SendJson(res, status, {{"error", message}});
}

bool IsClientError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchemaError:
    case ErrorCode::kLengthExceeded:
    case ErrorCode::kUnknownChar:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kRangeError:
      return true;
    default:
      return false;
  }
}

std::optional<std::int64_t> ParseInteger(const std::string& text) {
  std::int64_t value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

Service::Service(Loader loader, EngineConfig config)
    : loader_(std::move(loader)), config_(config), server_(std::make_unique<httplib::Server>()) {
  config_.Validate();
  Route();
}

Service::~Service() {
  Stop();
  if (loader_thread_.joinable()) loader_thread_.join();
}

int Service::Bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) {
    throw Error(ErrorCode::kConfigError, "cannot listen on " + host + ":" + std::to_string(port));
  }
  loader_thread_ = std::thread([this] { Load(); });
  return bound;
}

void Service::Listen() { server_->listen_after_bind(); }

void Service::Start() {
  listen_thread_ = std::thread([this] { Listen(); });
  server_->wait_until_ready();
}

void Service::Stop() {
  if (stopping_.exchange(true)) return;
  if (auto engine = this->engine()) engine->events().Close();
  server_->stop();
  if (listen_thread_.joinable()) listen_thread_.join();
}

bool Service::ready() const {
  std::lock_guard lock(mutex_);
  return engine_ != nullptr;
}

std::optional<std::string> Service::load_error() const {
  std::lock_guard lock(mutex_);
  return load_error_;
}

bool Service::WaitLoaded() {
  if (loader_thread_.joinable()) loader_thread_.join();
  return ready();
}

std::shared_ptr<ScrollEngine> Service::engine() const {
  std::lock_guard lock(mutex_);
  return engine_;
}

void Service::Load() {
  try {
    auto engine = std::make_shared<ScrollEngine>(loader_(), config_);
    std::lock_guard lock(mutex_);
    engine_ = std::move(engine);
    if (stopping_) engine_->events().Close();
  } catch (const std::exception& e) {
    std::lock_guard lock(mutex_);
    load_error_ = e.what();
    std::cerr << "vscroll: loading failed: " << e.what() << '\n';
  }
}

void Service::Route() {
  // Wraps a handler that needs a loaded engine and maps library errors.
  auto with_engine = [this](auto handler) {
    return [this, handler](const httplib::Request& req, httplib::Response& res) {
      std::shared_ptr<ScrollEngine> engine = this->engine();
      if (!engine) {
        const auto error = load_error();
        SendError(res, 503, error ? "loading failed: " + *error : "dataset is still loading");
        return;
      }
      try {
        handler(*engine, req, res);
      } catch (const Json::exception& e) {
        SendError(res, 400, std::string("malformed JSON: ") + e.what());
      } catch (const Error& e) {
        SendError(res, IsClientError(e.code()) ? 400 : 500, e.what());
      }
    };
  };

  server_->Get("/api/meta", with_engine([](ScrollEngine& engine, const httplib::Request&,
                                           httplib::Response& res) {
    const IndexedTable& table = engine.table();
    SendJson(res, 200,
             {{"lambda_max", engine.lambda_max()},
              {"lambda_max_known", engine.lambda_max_known()},
              {"h", engine.config().h},
              {"schema", SchemaToJson(table.schema())},
              {"payload_columns", table.payload_columns()},
              {"generation", engine.current().generation}});
  }));

  server_->Get("/api/window", with_engine([](ScrollEngine& engine, const httplib::Request& req,
                                             httplib::Response& res) {
    if (!req.has_param("lambda")) return SendError(res, 400, "missing lambda");
    const auto lambda = ParseInteger(req.get_param_value("lambda"));
    if (!lambda || *lambda < 0) return SendError(res, 400, "lambda must be a non-negative integer");
    SendJson(res, 200, WindowToJson(engine.table(), engine.OnScroll(*lambda)));
  }));

  server_->Post("/api/locate", with_engine([](ScrollEngine& engine, const httplib::Request& req,
                                              httplib::Response& res) {
    const Json body = Json::parse(req.body);
    if (!body.is_object() || !body.contains("keys")) return SendError(res, 400, "missing keys");
    const KeyTuple keys = KeyFromJson(engine.table().schema(), body["keys"]);
    const Window window = engine.PositionTo(keys);
    Json out = WindowToJson(engine.table(), window);
    out["lambda_estimate"] = window.lambda;
    SendJson(res, 200, out);
  }));

  server_->Post("/api/step", with_engine([](ScrollEngine& engine, const httplib::Request& req,
                                            httplib::Response& res) {
    const Json body = Json::parse(req.body);
    if (!body.is_object() || !body.contains("n") || !body["n"].is_number_integer()) {
      return SendError(res, 400, "n must be an integer");
    }
    SendJson(res, 200, WindowToJson(engine.table(), engine.SmallStep(body["n"].get<std::int64_t>())));
  }));

  server_->Post("/api/release", with_engine([](ScrollEngine& engine, const httplib::Request&,
                                               httplib::Response& res) {
    engine.OnScrollRelease();
    SendJson(res, 202, {{"generation", engine.current().generation}});
  }));

  server_->Get("/api/events", with_engine([this](ScrollEngine&, const httplib::Request& req,
                                                 httplib::Response& res) {
    std::uint64_t after = 0;
    if (req.has_param("after")) {
      const auto parsed = ParseInteger(req.get_param_value("after"));
      if (!parsed || *parsed < 0) return SendError(res, 400, "after must be a non-negative integer");
      after = static_cast<std::uint64_t>(*parsed);
    }
    // The engine outlives the stream through this shared_ptr copy.
    std::shared_ptr<ScrollEngine> keep = this->engine();
    auto cursor = std::make_shared<std::uint64_t>(after);
    res.set_chunked_content_provider(
        "application/x-ndjson", [this, keep, cursor](std::size_t, httplib::DataSink& sink) {
          while (!stopping_ && !keep->events().closed()) {
            const auto batch = keep->events().WaitAfter(*cursor, std::chrono::milliseconds(200));
            if (batch.empty()) {
              if (!sink.is_writable()) return false;
              continue;
            }
            std::string chunk;
            for (const auto& [sequence, event] : batch) {
              chunk += EventToJson(sequence, event, keep->table()).dump();
              chunk += '\n';
              *cursor = sequence;
            }
            return sink.write(chunk.data(), chunk.size());
          }
          sink.done();
          return true;
        });
  }));
}

}  // namespace vscroll::app
