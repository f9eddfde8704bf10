#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <future>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <thread>

#include "monoslice/runtime.hpp"

namespace monoslice::detail {

/// Thrown inside an activation to unwind with a fault.
struct FaultSignal {
  Fault fault;
};

/// Receiving side of one input port.
class Endpoint {
 public:
  virtual ~Endpoint() = default;
  /// nullopt when the port does not offer the operation.
  virtual std::optional<bool> is_request_response(const std::string& op) const = 0;
  virtual std::future<Outcome> request(const std::string& op, ValueTree message) = 0;
  /// Fault when the message was refused (unknown operation, closed service).
  virtual std::optional<Fault> one_way(const std::string& op, ValueTree message) = 0;
};

/// Routes messages by location: local:// through an in-process registry,
/// socket:// over HTTP.
class Transport {
 public:
  explicit Transport(std::chrono::milliseconds request_timeout) : timeout_(request_timeout) {}

  void bind_local(const std::string& name, std::shared_ptr<Endpoint> endpoint);
  void unbind_local(const std::string& name);

  Outcome request(const Location& to, const std::string& op, ValueTree message,
                  const std::atomic<bool>* cancel = nullptr);
  std::optional<Fault> send(const Location& to, const std::string& op, ValueTree message);

 private:
  std::shared_ptr<Endpoint> lookup(const std::string& name);

  std::chrono::milliseconds timeout_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Endpoint>> local_;
};

/// Serves one Endpoint over HTTP on a socket location.
class HttpServer {
 public:
  HttpServer(std::shared_ptr<Endpoint> endpoint, const Location& location, std::chrono::milliseconds timeout);
  ~HttpServer();

  /// Throws RuntimeError(BindError).
  void bind();
  void start();
  void stop();

  struct State;

 private:
  std::unique_ptr<State> state_;
};

class ServiceInstance : public std::enable_shared_from_this<ServiceInstance> {
 public:
  ServiceInstance(const CheckedProgram& program, const ServiceDecl& decl, const ConfigTree& config,
                  Transport& transport, const RuntimeOptions& options);
  ~ServiceInstance();

  const ServiceDecl& decl() const { return decl_; }
  const CheckedProgram& program() const { return program_; }
  Transport& transport() { return transport_; }
  const RuntimeOptions& options() const { return options_; }

  std::shared_ptr<Endpoint> endpoint_for(const PortDecl& port);

  std::future<Outcome> request(const PortDecl& port, const std::string& op, ValueTree message);
  std::optional<Fault> one_way(const PortDecl& port, const std::string& op, ValueTree message);

  void start_executable();
  bool executable_finished() const;
  std::optional<Fault> exit_fault() const;
  /// Blocks until the executable finishes or the deadline passes.
  bool wait_executable(std::chrono::steady_clock::time_point deadline);

  void close();
  bool wait_idle(std::chrono::steady_clock::time_point deadline);
  void abort();
  void join();
  ServiceReport report() const;

  // -- used by the interpreter ----------------------------------------------
  bool aborting() const { return aborting_.load(); }
  const std::atomic<bool>& abort_flag() const { return aborting_; }
  Location output_location(const std::string& port);
  void rebind(const std::string& port, Location location);
  std::recursive_mutex& lock_for(const std::string& token);
  std::mutex& global_mutex() { return global_mu_; }
  ValueTree& global() { return global_; }
  /// Next queued one-way message for `op`; throws FaultSignal on timeout/abort.
  ValueTree receive(const std::string& op);
  void bind_config(ValueTree& scope) const;
  void log(const std::string& line) const;

 private:
  const InputBranch* branch_for(const std::string& op) const;
  std::optional<Fault> admit();
  void launch(std::function<void()> work);
  void finished(bool faulted);
  Outcome run_branch(const InputBranch& branch, ValueTree message, const OperationDecl& op);
  void run_oneway_branch(const InputBranch& branch, ValueTree message);
  void worker_loop();
  void reap();

  const CheckedProgram& program_;
  const ServiceDecl& decl_;
  const ConfigTree& config_;
  Transport& transport_;
  const RuntimeOptions& options_;

  std::atomic<bool> aborting_{false};

  mutable std::mutex state_mu_;
  std::condition_variable state_cv_;
  bool closed_ = false;
  bool single_used_ = false;
  std::uint64_t active_ = 0;
  std::uint64_t served_ = 0;
  std::uint64_t faults_ = 0;
  std::uint64_t aborted_ = 0;

  struct Worker {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };
  std::mutex threads_mu_;
  std::list<Worker> threads_;

  // sequential mode
  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::deque<std::function<void()>> queue_;
  bool queue_stop_ = false;
  std::thread sequential_worker_;

  // executable
  std::thread exec_thread_;
  bool exec_started_ = false;
  bool exec_done_ = false;
  std::optional<Fault> exec_fault_;

  std::shared_mutex ports_mu_;
  std::map<std::string, Location> outputs_;

  std::mutex tokens_mu_;
  std::map<std::string, std::unique_ptr<std::recursive_mutex>> tokens_;

  std::mutex global_mu_;
  ValueTree global_;

  std::mutex mailbox_mu_;
  std::condition_variable mailbox_cv_;
  std::map<std::string, std::deque<ValueTree>> mailbox_;
};

/// Executes behavior statements within one activation scope.
class Interpreter {
 public:
  Interpreter(ServiceInstance& instance, ValueTree& scope) : inst_(instance), scope_(scope) {}

  void run(const Block& block);
  ValueTree eval(const Expr& expr);
  ValueTree read(const Path& path);
  void write(const Path& path, ValueTree value);

 private:
  void exec(const Stmt& stmt);
  bool condition(const Expr& expr);
  std::vector<std::size_t> indices(const Path& path);
  std::size_t count(const Path& path);

  ServiceInstance& inst_;
  ValueTree& scope_;
};

[[noreturn]] void raise(const char* fault_name);

}  // namespace monoslice::detail
