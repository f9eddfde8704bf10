#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "monoslice/config.hpp"
#include "monoslice/semantic.hpp"
#include "monoslice/value_tree.hpp"

namespace monoslice {

struct Fault {
  std::string name;
  ValueTree data;  // empty when the fault carries no data

  bool operator==(const Fault&) const = default;
};

/// Result of a request-response exchange: a response tree or a fault.
struct Outcome {
  ValueTree value;
  std::optional<Fault> fault;

  static Outcome success(ValueTree v) { return {std::move(v), std::nullopt}; }
  static Outcome failure(std::string name, ValueTree data = {}) {
    return {ValueTree{}, Fault{std::move(name), std::move(data)}};
  }

  bool ok() const { return !fault.has_value(); }
  bool operator==(const Outcome&) const = default;
};

std::string to_debug_string(const Outcome& o);

// Fault names raised by the runtime itself.
namespace faults {
inline constexpr const char* kTypeMismatch = "TypeMismatch";
inline constexpr const char* kUnknownOperation = "UnknownOperation";
inline constexpr const char* kTransportError = "TransportError";
inline constexpr const char* kTimeout = "Timeout";
inline constexpr const char* kServiceUnavailable = "ServiceUnavailable";
inline constexpr const char* kAborted = "Aborted";
inline constexpr const char* kDivisionByZero = "DivisionByZero";
inline constexpr const char* kInvalidIndex = "InvalidIndex";
inline constexpr const char* kInvalidLocation = "InvalidLocation";
}  // namespace faults

struct RuntimeOptions {
  std::chrono::milliseconds request_timeout{30000};
  std::chrono::milliseconds receive_timeout{30000};
  std::chrono::milliseconds drain_timeout{5000};
  /// Receives runtime log lines (dropped messages, faults). Defaults to stderr.
  std::function<void(const std::string&)> log;
};

class RuntimeError : public std::runtime_error {
 public:
  /// code: NoServices | UnknownService | ConfigError | BindError
  RuntimeError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct ServiceReport {
  std::string service;
  bool executable = false;
  std::uint64_t served = 0;   // finished handler activations
  std::uint64_t faults = 0;   // activations that ended in a fault
  std::uint64_t aborted = 0;  // activations still running at the drain deadline
  bool completed = false;     // executable ran to the end (with or without fault)
  std::optional<Fault> exit_fault;
};

struct ShutdownReport {
  std::vector<ServiceReport> services;

  const ServiceReport* find(std::string_view service) const;
  std::uint64_t aborted() const;
};

std::string to_string(const ShutdownReport& report);

/// Request-response over HTTP to a socket location (no running system needed).
Outcome call_remote(const Location& location, std::string_view operation, const ValueTree& request,
                    std::chrono::milliseconds timeout = std::chrono::seconds(30));
/// One-way over HTTP; returns a fault when the message was not accepted.
std::optional<Fault> send_remote(const Location& location, std::string_view operation, const ValueTree& message,
                                 std::chrono::milliseconds timeout = std::chrono::seconds(30));

/// A set of running service instances sharing one in-process transport.
/// Thread-safe.
class System {
 public:
  /// Binds every input port of the selected services, then starts executable
  /// services. All-or-nothing: on failure nothing stays bound. An empty
  /// selection is NoServices.
  static std::unique_ptr<System> start(CheckedProgram checked, ConfigTree config,
                                       std::vector<std::string> services, RuntimeOptions options = {});

  ~System();
  System(const System&) = delete;
  System& operator=(const System&) = delete;

  const CheckedProgram& program() const;

  /// Invokes `operation` on the first input port of `service` offering it,
  /// through the port's real transport.
  Outcome invoke_rr(std::string_view service, std::string_view operation, ValueTree request);
  std::optional<Fault> invoke_ow(std::string_view service, std::string_view operation, ValueTree message);

  Outcome call(const Location& location, std::string_view operation, ValueTree request);
  std::optional<Fault> send(const Location& location, std::string_view operation, ValueTree message);

  bool has_executables() const;
  /// True when every executable service finished before the timeout.
  bool wait_executables(std::chrono::milliseconds timeout);
  /// Executable service -> exit fault (nullopt = finished cleanly); only finished ones.
  std::map<std::string, std::optional<Fault>> executable_results() const;

  /// Stops accepting, drains in-flight activations up to the drain timeout,
  /// aborts the rest, and closes every endpoint. Idempotent.
  ShutdownReport shutdown();

 private:
  struct Impl;
  explicit System(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace monoslice
