#include "monoslice/cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "monoslice/config.hpp"
#include "monoslice/deploy.hpp"
#include "monoslice/json_codec.hpp"
#include "monoslice/lexer.hpp"
#include "monoslice/parser.hpp"
#include "monoslice/render.hpp"
#include "monoslice/runtime.hpp"
#include "monoslice/semantic.hpp"
#include "monoslice/slicer.hpp"

namespace monoslice {

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kFault = 1;
constexpr int kUsage = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buf.str();
}

void report_error(std::ostream& err, const std::string& where, const std::string& code, const std::string& msg) {
  err << where << ": error: " << code << ": " << msg << '\n';
}

std::optional<CheckedProgram> load_program(const std::string& path, std::ostream& err) {
  auto text = read_file(path);
  if (!text) {
    report_error(err, path, "IoError", "cannot read file");
    return std::nullopt;
  }
  SourceProgram program;
  try {
    program = parse_source(*text, fs::path(path).stem().string());
  } catch (const LexError& e) {
    err << path << ':' << to_string(e.pos()) << ": error: LexError: " << e.what() << '\n';
    return std::nullopt;
  } catch (const ParseError& e) {
    err << path << ':' << to_string(e.pos()) << ": error: ParseError: " << e.what() << '\n';
    return std::nullopt;
  }
  ResolveResult result = resolve(std::move(program));
  for (const auto& d : result.errors) err << format_diagnostic(d, path) << '\n';
  for (const auto& d : result.warnings) err << format_diagnostic(d, path) << '\n';
  if (!result.ok()) return std::nullopt;
  return std::move(*result.checked);
}

std::optional<ConfigTree> load_config_file(const std::string& path, std::ostream& err) {
  try {
    return load_config(path);
  } catch (const JsonError& e) {
    err << path << ':' << e.line() << ':' << e.column() << ": error: JsonError: " << e.what() << '\n';
  } catch (const ConfigError& e) {
    report_error(err, path, e.code(), e.what());
  }
  return std::nullopt;
}

// -- check ------------------------------------------------------------------

int cmd_check(const std::string& program, std::ostream& err) {
  return load_program(program, err) ? kOk : kUsage;
}

// -- run --------------------------------------------------------------------

/// Blocks SIGINT/SIGTERM for the lifetime of the object so they can be
/// collected with sigtimedwait.
class SignalGuard {
 public:
  SignalGuard() {
    sigemptyset(&set_);
    sigaddset(&set_, SIGINT);
    sigaddset(&set_, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set_, &previous_);
  }
  ~SignalGuard() { pthread_sigmask(SIG_SETMASK, &previous_, nullptr); }

  /// True when a signal arrived within the timeout.
  bool wait(std::chrono::milliseconds timeout) {
    timespec ts{static_cast<time_t>(timeout.count() / 1000), static_cast<long>((timeout.count() % 1000) * 1000000)};
    return sigtimedwait(&set_, nullptr, &ts) > 0;
  }

 private:
  sigset_t set_;
  sigset_t previous_;
};

int cmd_run(const std::string& program, const std::string& config_path, std::vector<std::string> services,
            std::ostream& out, std::ostream& err) {
  auto checked = load_program(program, err);
  if (!checked) return kUsage;
  auto config = load_config_file(config_path, err);
  if (!config) return kUsage;
  if (services.empty()) {
    for (const auto* s : checked->program().services()) services.push_back(s->name);
  }

  SignalGuard signals;
  std::unique_ptr<System> system;
  try {
    RuntimeOptions options;
    options.log = [&err](const std::string& line) { err << line << '\n'; };
    system = System::start(std::move(*checked), std::move(*config), services, options);
  } catch (const RuntimeError& e) {
    report_error(err, "monoslice", e.code(), e.what());
    return kUsage;
  }

  bool executables = system->has_executables();
  bool interrupted = false;
  for (;;) {
    if (executables && system->wait_executables(std::chrono::milliseconds(0))) break;
    if (signals.wait(std::chrono::milliseconds(50))) {
      interrupted = true;
      break;
    }
  }

  ShutdownReport report = system->shutdown();
  out << to_string(report);
  if (!executables) return kOk;
  if (interrupted) return kFault;
  for (const auto& s : report.services) {
    if (s.executable && (!s.completed || s.exit_fault)) return kFault;
  }
  return kOk;
}

// -- slice ------------------------------------------------------------------

struct SliceArgs {
  std::string program;
  std::string config;
  std::string output;
  std::vector<std::string> exclude;
  std::string base_image = DeploymentOptions{}.base_image;
  std::string runner_cmd = DeploymentOptions{}.runner_cmd;
  bool expose_ports = false;
  bool force = false;
};

int cmd_slice(const SliceArgs& args, std::ostream& out, std::ostream& err) {
  auto checked = load_program(args.program, err);
  if (!checked) return kUsage;
  auto config = load_config_file(args.config, err);
  if (!config) return kUsage;

  std::vector<std::string> included;
  for (const auto& name : args.exclude) {
    if (!checked->find_service(name)) {
      report_error(err, "monoslice", "UnknownService", "no service named " + name + " to exclude");
      return kUsage;
    }
  }
  for (const auto* s : checked->program().services()) {
    if (std::find(args.exclude.begin(), args.exclude.end(), s->name) == args.exclude.end()) {
      included.push_back(s->name);
    }
  }
  if (included.empty()) {
    report_error(err, "monoslice", "NoServices", "no services left to deploy");
    return kUsage;
  }
  auto issues = validate_config(*checked, *config, included);
  for (const auto& issue : issues) report_error(err, args.config, issue.code, to_string(issue));
  if (!issues.empty()) return kUsage;

  DeploymentOptions options;
  options.output_root = args.output.empty() ? fs::path(checked->program().source_name + "-sliced") : fs::path(args.output);
  options.exclude = args.exclude;
  options.base_image = args.base_image;
  options.runner_cmd = args.runner_cmd;
  options.expose_ports = args.expose_ports;

  DeploymentPlan plan;
  try {
    plan = plan_deployment(slice_all(*checked), *config, options);
  } catch (const SliceError& e) {
    report_error(err, "monoslice", e.code(), e.what());
    return kUsage;
  } catch (const DeployError& e) {
    report_error(err, "monoslice", e.code(), e.what());
    return kUsage;
  }
  for (const auto& entry : plan.entries) {
    auto again = resolve(parse_source(entry.program_text, entry.service));
    if (!again.ok()) {
      for (const auto& d : again.errors) err << format_diagnostic(d, entry.program_file) << '\n';
      return kUsage;
    }
  }
  for (const auto& w : plan.warnings) err << "monoslice: warning: " << w << '\n';

  std::error_code ec;
  bool existed = fs::exists(options.output_root, ec);
  try {
    auto manifest = write_deployment(plan, args.force);
    for (const auto& m : manifest) {
      out << (options.output_root / m.path).generic_string() << ' ' << m.bytes << '\n';
    }
  } catch (const DeployError& e) {
    if (e.code() != "RefusingToOverwrite") {
      if (!existed) fs::remove_all(options.output_root, ec);
    }
    report_error(err, "monoslice", e.code(), e.what());
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    if (!existed) fs::remove_all(options.output_root, ec);
    report_error(err, "monoslice", "IoError", e.what());
    return kUsage;
  }
  return kOk;
}

bool is_subcommand(const std::string& arg) {
  return arg == "check" || arg == "run" || arg == "slice" || arg == "-h" || arg == "--help";
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err,
            const std::string& implied_command) {
  if (!implied_command.empty()) {
    args.insert(args.begin(), implied_command);
  } else if (!args.empty() && !is_subcommand(args.front())) {
    args.insert(args.begin(), "slice");
  }

  CLI::App app{"Check, run and slice multi-service programs", "monoslice"};
  app.require_subcommand(1);

  std::string check_program;
  auto* check = app.add_subcommand("check", "Parse and resolve a program");
  check->add_option("program", check_program, "Program file")->required();

  std::string run_program;
  std::string run_config;
  std::vector<std::string> run_services;
  auto* run = app.add_subcommand("run", "Run services of a program");
  run->add_option("--config", run_config, "Deployment configuration (JSON)")->required();
  run->add_option("--service", run_services, "Service to run (repeatable; default all)");
  run->add_option("program", run_program, "Program file")->required();

  SliceArgs slice_args;
  auto* slice = app.add_subcommand("slice", "Split a program into per-service deployments");
  slice->add_option("--config", slice_args.config, "Deployment configuration (JSON)")->required();
  slice->add_option("-o,--output", slice_args.output, "Output directory (default <program>-sliced)");
  slice->add_option("--exclude", slice_args.exclude, "Service to leave out (repeatable)");
  slice->add_option("--base-image", slice_args.base_image, "Dockerfile base image");
  slice->add_option("--runner-cmd", slice_args.runner_cmd, "Command run by the container");
  slice->add_flag("--expose-ports", slice_args.expose_ports, "Publish input ports in the compose file");
  slice->add_flag("--force", slice_args.force, "Replace an existing output directory");
  slice->add_option("program", slice_args.program, "Program file")->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (*check) return cmd_check(check_program, err);
  if (*run) return cmd_run(run_program, run_config, run_services, out, err);
  return cmd_slice(slice_args, out, err);
}

}  // namespace monoslice
