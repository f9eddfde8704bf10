#include <iostream>
#include <set>
#include <sstream>

#include "monoslice/json_codec.hpp"
#include "runtime_internal.hpp"

namespace monoslice {

std::string to_debug_string(const Outcome& o) {
  if (!o.fault) return to_debug_string(o.value);
  std::string out = "fault " + o.fault->name;
  if (!o.fault->data.empty()) out += "(" + to_debug_string(o.fault->data) + ")";
  return out;
}

const ServiceReport* ShutdownReport::find(std::string_view service) const {
  for (const auto& s : services) {
    if (s.service == service) return &s;
  }
  return nullptr;
}

std::uint64_t ShutdownReport::aborted() const {
  std::uint64_t n = 0;
  for (const auto& s : services) n += s.aborted;
  return n;
}

std::string to_string(const ShutdownReport& report) {
  std::ostringstream out;
  for (const auto& s : report.services) {
    out << s.service << ": served " << s.served << ", faults " << s.faults << ", aborted " << s.aborted;
    if (s.executable) {
      if (!s.completed) {
        out << ", did not complete";
      } else if (s.exit_fault) {
        out << ", exited with fault " << s.exit_fault->name;
      } else {
        out << ", completed";
      }
    }
    out << '\n';
  }
  return out.str();
}

namespace detail {

namespace {

std::future<Outcome> ready(Outcome o) {
  std::promise<Outcome> p;
  p.set_value(std::move(o));
  return p.get_future();
}

std::optional<Fault> type_fault(const ValueTree& message, const TypeRef& type, const CheckedProgram& program) {
  auto violations = check_value(message, type, program);
  if (violations.empty()) return std::nullopt;
  return Fault{faults::kTypeMismatch, ValueTree(to_string(violations.front()))};
}

class PortEndpoint : public Endpoint {
 public:
  PortEndpoint(std::weak_ptr<ServiceInstance> instance, const PortDecl& port)
      : instance_(std::move(instance)), port_(port) {}

  std::optional<bool> is_request_response(const std::string& op) const override {
    auto inst = instance_.lock();
    if (!inst) return std::nullopt;
    auto po = inst->program().port_operation(inst->decl(), port_.name, op);
    if (!po) return std::nullopt;
    return po->operation->response.has_value();
  }

  std::future<Outcome> request(const std::string& op, ValueTree message) override {
    auto inst = instance_.lock();
    if (!inst) return ready(Outcome::failure(faults::kServiceUnavailable));
    return inst->request(port_, op, std::move(message));
  }

  std::optional<Fault> one_way(const std::string& op, ValueTree message) override {
    auto inst = instance_.lock();
    if (!inst) return Fault{faults::kServiceUnavailable, {}};
    return inst->one_way(port_, op, std::move(message));
  }

 private:
  std::weak_ptr<ServiceInstance> instance_;
  const PortDecl& port_;
};

}  // namespace

ServiceInstance::ServiceInstance(const CheckedProgram& program, const ServiceDecl& decl, const ConfigTree& config,
                                 Transport& transport, const RuntimeOptions& options)
    : program_(program), decl_(decl), config_(config), transport_(transport), options_(options) {
  for (const auto& port : decl_.ports) {
    if (port.kind != PortKind::Output) continue;
    try {
      outputs_[port.name] = resolve_port_location(config_, decl_, port);
    } catch (const ConfigError& e) {
      throw RuntimeError("ConfigError", decl_.name + "." + port.name + ": " + e.what());
    }
  }
  if (decl_.mode == ExecutionMode::Sequential && !decl_.is_executable()) {
    sequential_worker_ = std::thread([this] { worker_loop(); });
  }
}

ServiceInstance::~ServiceInstance() {
  abort();
  join();
}

std::shared_ptr<Endpoint> ServiceInstance::endpoint_for(const PortDecl& port) {
  return std::make_shared<PortEndpoint>(weak_from_this(), port);
}

void ServiceInstance::log(const std::string& line) const {
  if (options_.log) {
    options_.log(line);
  } else {
    std::cerr << line << '\n';
  }
}

const InputBranch* ServiceInstance::branch_for(const std::string& op) const {
  const auto* choice = std::get_if<InputChoice>(&decl_.behavior);
  if (!choice) return nullptr;
  for (const auto& b : choice->branches) {
    if (b.operation == op) return &b;
  }
  return nullptr;
}

std::optional<Fault> ServiceInstance::admit() {
  std::lock_guard lock(state_mu_);
  if (closed_ || aborting_) return Fault{faults::kServiceUnavailable, ValueTree(decl_.name + " is shutting down")};
  if (decl_.mode == ExecutionMode::Single) {
    if (single_used_) return Fault{faults::kServiceUnavailable, ValueTree(decl_.name + " has already served")};
    single_used_ = true;
  }
  ++active_;
  return std::nullopt;
}

void ServiceInstance::finished(bool faulted) {
  std::lock_guard lock(state_mu_);
  --active_;
  ++served_;
  if (faulted) ++faults_;
  state_cv_.notify_all();
}

void ServiceInstance::reap() {
  std::lock_guard lock(threads_mu_);
  for (auto it = threads_.begin(); it != threads_.end();) {
    if (it->done->load()) {
      it->thread.join();
      it = threads_.erase(it);
    } else {
      ++it;
    }
  }
}

void ServiceInstance::launch(std::function<void()> work) {
  if (decl_.mode == ExecutionMode::Sequential) {
    std::lock_guard lock(queue_mu_);
    queue_.push_back(std::move(work));
    queue_cv_.notify_one();
    return;
  }
  reap();
  auto done = std::make_shared<std::atomic<bool>>(false);
  std::lock_guard lock(threads_mu_);
  threads_.push_back({std::thread([work = std::move(work), done] {
                        work();
                        done->store(true);
                      }),
                      done});
}

void ServiceInstance::worker_loop() {
  for (;;) {
    std::function<void()> work;
    {
      std::unique_lock lock(queue_mu_);
      queue_cv_.wait(lock, [&] { return queue_stop_ || !queue_.empty(); });
      if (queue_.empty()) return;
      work = std::move(queue_.front());
      queue_.pop_front();
    }
    work();
  }
}

void ServiceInstance::bind_config(ValueTree& scope) const {
  if (decl_.config) scope.at(decl_.config->name) = config_.root;
}

Outcome ServiceInstance::run_branch(const InputBranch& branch, ValueTree message, const OperationDecl& op) {
  ValueTree scope;
  bind_config(scope);
  Interpreter interp(*this, scope);
  Outcome out;
  try {
    if (branch.request) interp.write(*branch.request, std::move(message));
    interp.run(branch.body);
    if (branch.response) out.value = interp.read(*branch.response);
    if (auto f = type_fault(out.value, *op.response, program_)) out = Outcome{ValueTree{}, std::move(f)};
  } catch (const FaultSignal& s) {
    out = Outcome{ValueTree{}, s.fault};
  } catch (const std::exception& e) {
    out = Outcome::failure(faults::kTypeMismatch, ValueTree(std::string(e.what())));
  }
  if (out.fault) log(decl_.name + "." + branch.operation + ": fault " + out.fault->name);
  return out;
}

void ServiceInstance::run_oneway_branch(const InputBranch& branch, ValueTree message) {
  ValueTree scope;
  bind_config(scope);
  Interpreter interp(*this, scope);
  bool faulted = false;
  try {
    if (branch.request) interp.write(*branch.request, std::move(message));
    interp.run(branch.body);
  } catch (const FaultSignal& s) {
    faulted = true;
    log(decl_.name + "." + branch.operation + ": fault " + s.fault.name);
  } catch (const std::exception& e) {
    faulted = true;
    log(decl_.name + "." + branch.operation + ": " + e.what());
  }
  finished(faulted);
}

std::future<Outcome> ServiceInstance::request(const PortDecl& port, const std::string& op, ValueTree message) {
  auto po = program_.port_operation(decl_, port.name, op);
  if (!po || !po->operation->response) return ready(Outcome::failure(faults::kUnknownOperation, ValueTree(op)));
  const InputBranch* branch = branch_for(op);
  if (!branch || !branch->request_response) {
    return ready(Outcome::failure(faults::kUnknownOperation, ValueTree(op)));
  }
  if (auto f = type_fault(message, po->operation->request, program_)) return ready(Outcome{ValueTree{}, *f});
  if (auto f = admit()) return ready(Outcome{ValueTree{}, *f});
  auto promise = std::make_shared<std::promise<Outcome>>();
  auto future = promise->get_future();
  const OperationDecl* operation = po->operation;
  auto self = shared_from_this();
  launch([self, branch, operation, promise, message = std::move(message)]() mutable {
    Outcome out = self->run_branch(*branch, std::move(message), *operation);
    bool faulted = out.fault.has_value();
    promise->set_value(std::move(out));
    self->finished(faulted);
  });
  return future;
}

std::optional<Fault> ServiceInstance::one_way(const PortDecl& port, const std::string& op, ValueTree message) {
  auto po = program_.port_operation(decl_, port.name, op);
  if (!po || po->operation->response) return Fault{faults::kUnknownOperation, ValueTree(op)};
  if (auto f = type_fault(message, po->operation->request, program_)) {
    log(decl_.name + "." + op + ": dropped message: " + to_debug_string(f->data));
    return std::nullopt;
  }
  const InputBranch* branch = branch_for(op);
  if (branch) {
    if (branch->request_response) return Fault{faults::kUnknownOperation, ValueTree(op)};
    if (auto f = admit()) return f;
    auto self = shared_from_this();
    launch([self, branch, message = std::move(message)]() mutable {
      self->run_oneway_branch(*branch, std::move(message));
    });
    return std::nullopt;
  }
  if (!decl_.is_executable()) return Fault{faults::kUnknownOperation, ValueTree(op)};
  {
    std::lock_guard lock(state_mu_);
    if (closed_) return Fault{faults::kServiceUnavailable, ValueTree(decl_.name + " is shutting down")};
  }
  std::lock_guard lock(mailbox_mu_);
  mailbox_[op].push_back(std::move(message));
  mailbox_cv_.notify_all();
  return std::nullopt;
}

ValueTree ServiceInstance::receive(const std::string& op) {
  std::unique_lock lock(mailbox_mu_);
  auto deadline = std::chrono::steady_clock::now() + options_.receive_timeout;
  bool got = mailbox_cv_.wait_until(lock, deadline, [&] { return aborting_.load() || !mailbox_[op].empty(); });
  if (aborting_) raise(faults::kAborted);
  if (!got) raise(faults::kTimeout);
  ValueTree message = std::move(mailbox_[op].front());
  mailbox_[op].pop_front();
  return message;
}

Location ServiceInstance::output_location(const std::string& port) {
  std::shared_lock lock(ports_mu_);
  auto it = outputs_.find(port);
  if (it == outputs_.end()) raise(faults::kInvalidLocation);
  return it->second;
}

void ServiceInstance::rebind(const std::string& port, Location location) {
  std::unique_lock lock(ports_mu_);
  outputs_[port] = std::move(location);
}

std::recursive_mutex& ServiceInstance::lock_for(const std::string& token) {
  std::lock_guard lock(tokens_mu_);
  auto& slot = tokens_[token];
  if (!slot) slot = std::make_unique<std::recursive_mutex>();
  return *slot;
}

void ServiceInstance::start_executable() {
  const auto* block = std::get_if<Block>(&decl_.behavior);
  if (!block) return;
  {
    std::lock_guard lock(state_mu_);
    exec_started_ = true;
  }
  exec_thread_ = std::thread([this, block] {
    ValueTree scope;
    bind_config(scope);
    Interpreter interp(*this, scope);
    std::optional<Fault> fault;
    try {
      interp.run(*block);
    } catch (const FaultSignal& s) {
      fault = s.fault;
    } catch (const std::exception& e) {
      fault = Fault{faults::kTypeMismatch, ValueTree(std::string(e.what()))};
    }
    if (fault) log(decl_.name + ": exited with fault " + fault->name + (fault->data.empty() ? "" : " " + to_debug_string(fault->data)));
    std::lock_guard lock(state_mu_);
    exec_fault_ = std::move(fault);
    exec_done_ = true;
    state_cv_.notify_all();
  });
}

bool ServiceInstance::executable_finished() const {
  std::lock_guard lock(state_mu_);
  return exec_done_;
}

std::optional<Fault> ServiceInstance::exit_fault() const {
  std::lock_guard lock(state_mu_);
  return exec_fault_;
}

bool ServiceInstance::wait_executable(std::chrono::steady_clock::time_point deadline) {
  std::unique_lock lock(state_mu_);
  return state_cv_.wait_until(lock, deadline, [&] { return !exec_started_ || exec_done_; });
}

void ServiceInstance::close() {
  std::lock_guard lock(state_mu_);
  closed_ = true;
}

bool ServiceInstance::wait_idle(std::chrono::steady_clock::time_point deadline) {
  std::unique_lock lock(state_mu_);
  return state_cv_.wait_until(lock, deadline,
                              [&] { return active_ == 0 && (!exec_started_ || exec_done_); });
}

void ServiceInstance::abort() {
  {
    std::lock_guard lock(state_mu_);
    if (!aborting_.exchange(true)) aborted_ = active_;
    state_cv_.notify_all();
  }
  std::lock_guard lock(mailbox_mu_);
  mailbox_cv_.notify_all();
}

void ServiceInstance::join() {
  {
    std::lock_guard lock(queue_mu_);
    queue_stop_ = true;
    queue_cv_.notify_all();
  }
  if (sequential_worker_.joinable()) sequential_worker_.join();
  std::list<Worker> threads;
  {
    std::lock_guard lock(threads_mu_);
    threads.swap(threads_);
  }
  for (auto& w : threads) w.thread.join();
  if (exec_thread_.joinable()) exec_thread_.join();
}

ServiceReport ServiceInstance::report() const {
  std::lock_guard lock(state_mu_);
  ServiceReport r;
  r.service = decl_.name;
  r.executable = decl_.is_executable();
  r.served = served_;
  r.faults = faults_;
  r.aborted = aborted_;
  r.completed = exec_done_;
  r.exit_fault = exec_fault_;
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct System::Impl {
  CheckedProgram checked;
  ConfigTree config;
  RuntimeOptions options;
  detail::Transport transport;
  std::vector<std::shared_ptr<detail::ServiceInstance>> instances;
  std::vector<std::unique_ptr<detail::HttpServer>> servers;
  std::vector<std::string> local_names;

  std::mutex shutdown_mu;
  std::optional<ShutdownReport> report;

  Impl(CheckedProgram c, ConfigTree cfg, RuntimeOptions o)
      : checked(std::move(c)), config(std::move(cfg)), options(std::move(o)), transport(options.request_timeout) {}

  detail::ServiceInstance* find(std::string_view service) {
    for (auto& i : instances) {
      if (i->decl().name == service) return i.get();
    }
    return nullptr;
  }

  void release() {
    for (auto& s : servers) s->stop();
    servers.clear();
    for (const auto& n : local_names) transport.unbind_local(n);
    local_names.clear();
  }
};

System::System(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

System::~System() {
  if (impl_) shutdown();
}

std::unique_ptr<System> System::start(CheckedProgram checked, ConfigTree config, std::vector<std::string> services,
                                      RuntimeOptions options) {
  auto impl = std::make_unique<Impl>(std::move(checked), std::move(config), std::move(options));
  if (services.empty()) throw RuntimeError("NoServices", "no services selected");
  std::set<std::string> seen;
  for (const auto& name : services) {
    if (!impl->checked.find_service(name)) throw RuntimeError("UnknownService", "no service named " + name);
    if (!seen.insert(name).second) throw RuntimeError("UnknownService", "service " + name + " selected twice");
  }
  auto issues = validate_config(impl->checked, impl->config, services);
  if (!issues.empty()) throw RuntimeError("ConfigError", to_string(issues.front()));

  for (const auto& name : services) {
    const ServiceDecl& decl = *impl->checked.find_service(name);
    impl->instances.push_back(std::make_shared<detail::ServiceInstance>(impl->checked, decl, impl->config,
                                                                        impl->transport, impl->options));
  }
  try {
    for (auto& inst : impl->instances) {
      for (const auto& port : inst->decl().ports) {
        if (port.kind != PortKind::Input) continue;
        Location loc = resolve_port_location(impl->config, inst->decl(), port);
        if (loc.is_socket()) {
          auto server = std::make_unique<detail::HttpServer>(inst->endpoint_for(port), loc,
                                                             impl->options.request_timeout);
          server->bind();
          impl->servers.push_back(std::move(server));
        } else {
          impl->transport.bind_local(loc.name, inst->endpoint_for(port));
          impl->local_names.push_back(loc.name);
        }
      }
    }
  } catch (const ConfigError& e) {
    impl->release();
    throw RuntimeError("ConfigError", e.what());
  } catch (...) {
    impl->release();
    throw;
  }
  for (auto& s : impl->servers) s->start();
  for (auto& inst : impl->instances) inst->start_executable();
  return std::unique_ptr<System>(new System(std::move(impl)));
}

const CheckedProgram& System::program() const { return impl_->checked; }

Outcome System::invoke_rr(std::string_view service, std::string_view operation, ValueTree request) {
  auto* inst = impl_->find(service);
  if (!inst) return Outcome::failure(faults::kServiceUnavailable, ValueTree(std::string(service)));
  auto po = impl_->checked.input_operation(inst->decl(), operation);
  if (!po) return Outcome::failure(faults::kUnknownOperation, ValueTree(std::string(operation)));
  Location loc = resolve_port_location(impl_->config, inst->decl(), *po->port);
  return impl_->transport.request(loc, std::string(operation), std::move(request));
}

std::optional<Fault> System::invoke_ow(std::string_view service, std::string_view operation, ValueTree message) {
  auto* inst = impl_->find(service);
  if (!inst) return Fault{faults::kServiceUnavailable, ValueTree(std::string(service))};
  auto po = impl_->checked.input_operation(inst->decl(), operation);
  if (!po) return Fault{faults::kUnknownOperation, ValueTree(std::string(operation))};
  Location loc = resolve_port_location(impl_->config, inst->decl(), *po->port);
  return impl_->transport.send(loc, std::string(operation), std::move(message));
}

Outcome System::call(const Location& location, std::string_view operation, ValueTree request) {
  return impl_->transport.request(location, std::string(operation), std::move(request));
}

std::optional<Fault> System::send(const Location& location, std::string_view operation, ValueTree message) {
  return impl_->transport.send(location, std::string(operation), std::move(message));
}

bool System::has_executables() const {
  for (const auto& i : impl_->instances) {
    if (i->decl().is_executable()) return true;
  }
  return false;
}

bool System::wait_executables(std::chrono::milliseconds timeout) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  bool all = true;
  for (auto& i : impl_->instances) {
    if (i->decl().is_executable()) all = i->wait_executable(deadline) && all;
  }
  return all;
}

std::map<std::string, std::optional<Fault>> System::executable_results() const {
  std::map<std::string, std::optional<Fault>> out;
  for (const auto& i : impl_->instances) {
    if (i->decl().is_executable() && i->executable_finished()) out[i->decl().name] = i->exit_fault();
  }
  return out;
}

ShutdownReport System::shutdown() {
  std::lock_guard lock(impl_->shutdown_mu);
  if (impl_->report) return *impl_->report;
  for (auto& i : impl_->instances) i->close();
  auto deadline = std::chrono::steady_clock::now() + impl_->options.drain_timeout;
  for (auto& i : impl_->instances) {
    if (!i->wait_idle(deadline)) i->abort();
  }
  for (auto& i : impl_->instances) i->abort();
  for (auto& i : impl_->instances) i->join();
  impl_->release();
  ShutdownReport report;
  for (const auto& i : impl_->instances) report.services.push_back(i->report());
  impl_->report = report;
  return report;
}

}  // namespace monoslice
