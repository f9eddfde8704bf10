#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "monoslice/ast.hpp"
#include "monoslice/semantic.hpp"
#include "monoslice/value_tree.hpp"

namespace monoslice {

class ConfigError : public std::runtime_error {
 public:
  /// code: IoError | JsonError | MissingConfigPath | BadLocationSyntax
  ConfigError(std::string code, std::string subject, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)), subject_(std::move(subject)) {}

  const std::string& code() const { return code_; }
  /// The missing path, offending text, or file name.
  const std::string& subject() const { return subject_; }

 private:
  std::string code_;
  std::string subject_;
};

/// Deployment configuration: the decoded tree plus the exact bytes it came from
/// (copied verbatim into generated deployments).
struct ConfigTree {
  ValueTree root;
  std::string raw;
};

/// `socket://host:port` or `local://name`.
struct Location {
  enum class Scheme { Socket, Local };

  Scheme scheme = Scheme::Local;
  std::string host;  // Socket
  int port = 0;      // Socket, 1..65535
  std::string name;  // Local

  static Location parse(std::string_view text);
  static Location socket(std::string host, int port) { return {Scheme::Socket, std::move(host), port, {}}; }
  static Location local(std::string name) { return {Scheme::Local, {}, 0, std::move(name)}; }

  std::string str() const;
  bool is_socket() const { return scheme == Scheme::Socket; }
  bool operator==(const Location&) const = default;
};

ConfigTree load_config(const std::filesystem::path& path);
ConfigTree config_from_text(std::string text);

/// Evaluates a port location expression: a string literal, or a path rooted at
/// the service's configuration parameter.
Location resolve_location(const ConfigTree& config, const Expr& location_expr, std::string_view config_param);

/// Location of `port` in `service` (uses the service's config parameter name).
Location resolve_port_location(const ConfigTree& config, const ServiceDecl& service, const PortDecl& port);

struct ConfigIssue {
  std::string code;  // MissingConfigPath | BadLocationSyntax | LocationCollision
  std::string service;
  std::string port;
  std::string detail;
};

std::string to_string(const ConfigIssue& issue);

/// Every port location of the selected services (all when `services` is empty)
/// resolves, and input-port socket locations are pairwise distinct.
std::vector<ConfigIssue> validate_config(const CheckedProgram& checked, const ConfigTree& config,
                                         const std::vector<std::string>& services = {});

}  // namespace monoslice
