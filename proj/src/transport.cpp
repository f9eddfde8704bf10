#include <httplib.h>

#include "monoslice/json_codec.hpp"
#include "runtime_internal.hpp"

namespace monoslice {

namespace {

constexpr const char* kContentType = "application/json; charset=utf-8";

std::string fault_body(const Fault& f) {
  return "{\"fault\":" + nlohmann::json(f.name).dump() + ",\"data\":" + encode_json(f.data) + "}";
}

/// Parses a `{"fault":..,"data":..}` body; nullopt when it is not one.
std::optional<Fault> parse_fault(const std::string& body) {
  auto doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  auto it = doc.find("fault");
  if (it == doc.end() || !it->is_string()) return std::nullopt;
  Fault f{it->get<std::string>(), {}};
  if (auto d = doc.find("data"); d != doc.end()) f.data = from_json(*d);
  return f;
}

Fault transport_fault(std::string detail) { return Fault{faults::kTransportError, ValueTree(std::move(detail))}; }

httplib::Result post(const Location& location, std::string_view operation, const ValueTree& message,
                     std::chrono::milliseconds timeout) {
  httplib::Client client(location.host, location.port);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  return client.Post("/" + std::string(operation), encode_json(message), kContentType);
}

Fault unexpected_response(const httplib::Response& res) {
  if (auto f = parse_fault(res.body)) return *f;
  return transport_fault("unexpected HTTP status " + std::to_string(res.status));
}

}  // namespace

Outcome call_remote(const Location& location, std::string_view operation, const ValueTree& request,
                    std::chrono::milliseconds timeout) {
  if (!location.is_socket()) return {ValueTree{}, transport_fault("not a socket location: " + location.str())};
  auto res = post(location, operation, request, timeout);
  if (!res) {
    if (res.error() == httplib::Error::Read) return Outcome::failure(faults::kTimeout);
    return {ValueTree{}, transport_fault(location.str() + ": " + httplib::to_string(res.error()))};
  }
  if (res->status == 200) {
    try {
      return Outcome::success(decode_json(res->body));
    } catch (const JsonError& e) {
      return {ValueTree{}, transport_fault(std::string("malformed response: ") + e.what())};
    }
  }
  return {ValueTree{}, unexpected_response(*res)};
}

std::optional<Fault> send_remote(const Location& location, std::string_view operation, const ValueTree& message,
                                 std::chrono::milliseconds timeout) {
  if (!location.is_socket()) return transport_fault("not a socket location: " + location.str());
  auto res = post(location, operation, message, timeout);
  if (!res) return transport_fault(location.str() + ": " + httplib::to_string(res.error()));
  if (res->status == 202) return std::nullopt;
  return unexpected_response(*res);
}

namespace detail {

void Transport::bind_local(const std::string& name, std::shared_ptr<Endpoint> endpoint) {
  std::lock_guard lock(mu_);
  if (!local_.emplace(name, std::move(endpoint)).second) {
    throw RuntimeError("BindError", "location local://" + name + " is already bound");
  }
}

void Transport::unbind_local(const std::string& name) {
  std::lock_guard lock(mu_);
  local_.erase(name);
}

std::shared_ptr<Endpoint> Transport::lookup(const std::string& name) {
  std::lock_guard lock(mu_);
  auto it = local_.find(name);
  return it == local_.end() ? nullptr : it->second;
}

Outcome Transport::request(const Location& to, const std::string& op, ValueTree message,
                           const std::atomic<bool>* cancel) {
  if (to.is_socket()) return call_remote(to, op, message, timeout_);
  auto endpoint = lookup(to.name);
  if (!endpoint) return {ValueTree{}, transport_fault("nothing bound at " + to.str())};
  auto kind = endpoint->is_request_response(op);
  if (!kind || !*kind) return Outcome::failure(faults::kUnknownOperation, ValueTree(op));
  auto future = endpoint->request(op, canonicalize_wire(std::move(message)));
  auto deadline = std::chrono::steady_clock::now() + timeout_;
  while (future.wait_for(std::chrono::milliseconds(20)) != std::future_status::ready) {
    if (cancel && cancel->load()) return Outcome::failure(faults::kAborted);
    if (std::chrono::steady_clock::now() >= deadline) return Outcome::failure(faults::kTimeout);
  }
  Outcome out = future.get();
  out.value = canonicalize_wire(std::move(out.value));
  if (out.fault) out.fault->data = canonicalize_wire(std::move(out.fault->data));
  return out;
}

std::optional<Fault> Transport::send(const Location& to, const std::string& op, ValueTree message) {
  if (to.is_socket()) return send_remote(to, op, message, timeout_);
  auto endpoint = lookup(to.name);
  if (!endpoint) return transport_fault("nothing bound at " + to.str());
  auto kind = endpoint->is_request_response(op);
  if (!kind || *kind) return Fault{faults::kUnknownOperation, ValueTree(op)};
  auto f = endpoint->one_way(op, canonicalize_wire(std::move(message)));
  if (f) f->data = canonicalize_wire(std::move(f->data));
  return f;
}

// ---------------------------------------------------------------------------

struct HttpServer::State {
  std::shared_ptr<Endpoint> endpoint;
  Location location;
  std::chrono::milliseconds timeout;
  httplib::Server server;
  std::thread thread;
  bool bound = false;
};

namespace {

void reply_fault(httplib::Response& res, int status, const Fault& f) {
  res.status = status;
  res.set_content(fault_body(f), kContentType);
}

void handle(HttpServer::State& st, const httplib::Request& req, httplib::Response& res) {
  std::string op = req.matches[1];
  auto kind = st.endpoint->is_request_response(op);
  if (!kind) return reply_fault(res, 500, Fault{faults::kUnknownOperation, ValueTree(op)});
  ValueTree message;
  try {
    message = decode_json(req.body);
  } catch (const JsonError& e) {
    return reply_fault(res, 400, Fault{"JsonError", ValueTree(std::string(e.what()))});
  }
  if (!*kind) {
    if (auto f = st.endpoint->one_way(op, std::move(message))) return reply_fault(res, 500, *f);
    res.status = 202;
    return;
  }
  auto future = st.endpoint->request(op, std::move(message));
  if (future.wait_for(st.timeout) != std::future_status::ready) {
    return reply_fault(res, 500, Fault{faults::kTimeout, {}});
  }
  Outcome out = future.get();
  if (out.fault) return reply_fault(res, 500, *out.fault);
  res.status = 200;
  res.set_content(encode_json(out.value), kContentType);
}

}  // namespace

HttpServer::HttpServer(std::shared_ptr<Endpoint> endpoint, const Location& location,
                       std::chrono::milliseconds timeout)
    : state_(std::make_unique<State>()) {
  state_->endpoint = std::move(endpoint);
  state_->location = location;
  state_->timeout = timeout;
  state_->server.new_task_queue = [] { return new httplib::ThreadPool(32); };
  state_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  State* st = state_.get();
  state_->server.Post(R"(/([A-Za-z_][A-Za-z0-9_]*))",
                      [st](const httplib::Request& req, httplib::Response& res) { handle(*st, req, res); });
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::bind() {
  if (!state_->server.bind_to_port("0.0.0.0", state_->location.port)) {
    throw RuntimeError("BindError", "cannot listen on port " + std::to_string(state_->location.port) + " for " +
                                        state_->location.str());
  }
  state_->bound = true;
}

void HttpServer::start() {
  if (!state_->bound || state_->thread.joinable()) return;
  state_->thread = std::thread([st = state_.get()] { st->server.listen_after_bind(); });
  state_->server.wait_until_ready();
}

void HttpServer::stop() {
  if (!state_) return;
  if (state_->bound) state_->server.stop();
  if (state_->thread.joinable()) state_->thread.join();
  state_->bound = false;
}

}  // namespace detail
}  // namespace monoslice
