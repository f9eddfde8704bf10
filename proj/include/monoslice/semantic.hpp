#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "monoslice/ast.hpp"
#include "monoslice/value_tree.hpp"

namespace monoslice {

struct Diagnostic {
  enum class Severity { Error, Warning };

  Severity severity = Severity::Error;
  std::string code;  // e.g. "UndefinedType"
  std::string message;
  SourcePos pos;
};

/// `file:line:col: error: Code: message`
std::string format_diagnostic(const Diagnostic& d, std::string_view file);

/// A program whose names all resolve. Immutable; lookups return pointers into
/// the owned program.
class CheckedProgram {
 public:
  struct PortOperation {
    const PortDecl* port = nullptr;
    const InterfaceDecl* interface = nullptr;
    const OperationDecl* operation = nullptr;
  };

  const SourceProgram& program() const { return program_; }

  const TypeDecl* find_type(std::string_view name) const;
  const InterfaceDecl* find_interface(std::string_view name) const;
  const ServiceDecl* find_service(std::string_view name) const;

  std::size_t type_count() const { return types_.size(); }
  std::size_t interface_count() const { return interfaces_.size(); }
  std::size_t service_count() const { return services_.size(); }

  /// Operation `op` as offered by port `port` of `service`.
  std::optional<PortOperation> port_operation(const ServiceDecl& service, std::string_view port,
                                              std::string_view op) const;
  /// First input port of `service` that offers `op`.
  std::optional<PortOperation> input_operation(const ServiceDecl& service, std::string_view op) const;

  /// Output ports are addressable as `Port.location` rebinding targets.
  static bool is_output_port(const ServiceDecl& service, std::string_view name);

  const std::vector<Diagnostic>& warnings() const { return warnings_; }

 private:
  friend struct Resolver;

  SourceProgram program_;
  std::map<std::string, std::size_t, std::less<>> types_;
  std::map<std::string, std::size_t, std::less<>> interfaces_;
  std::map<std::string, std::size_t, std::less<>> services_;
  std::vector<Diagnostic> warnings_;
};

struct ResolveResult {
  std::optional<CheckedProgram> checked;  // set iff errors is empty
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;

  bool ok() const { return checked.has_value(); }
  /// No errors and no warnings.
  bool clean() const { return ok() && warnings.empty(); }
};

ResolveResult resolve(SourceProgram program);

struct Violation {
  std::string path;  // e.g. "info.availability[1].from"; empty for the root
  std::string expected;
  std::string found;

  bool operator==(const Violation&) const = default;
};

std::string to_string(const Violation& v);

/// Structural conformance of a message against a type; empty result means ok.
std::vector<Violation> check_value(const ValueTree& tree, const TypeRef& type,
                                   const CheckedProgram& program);
std::vector<Violation> check_value(const ValueTree& tree, const TypeDecl& type,
                                   const CheckedProgram& program);

}  // namespace monoslice
