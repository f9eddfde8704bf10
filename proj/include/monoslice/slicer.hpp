#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "monoslice/ast.hpp"
#include "monoslice/semantic.hpp"

namespace monoslice {

class SliceError : public std::runtime_error {
 public:
  SliceError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }  // UnknownService | NoServices

 private:
  std::string code_;
};

/// Declarations a service needs; closed under reference.
struct DependencySet {
  std::string service;
  std::set<std::string> types;
  std::set<std::string> interfaces;
};

/// Seeds: interfaces named by the service's ports and its declared config
/// type; expanded through operation message types and field types (cycle-safe).
DependencySet compute_dependencies(const CheckedProgram& checked, std::string_view service);

/// Standalone program: the service plus its dependencies, in monolith order.
SourceProgram slice(const CheckedProgram& checked, std::string_view service);

struct Slice {
  std::string service;
  SourceProgram program;
};

/// One slice per service, in source order.
struct SliceSet {
  std::vector<Slice> slices;

  const Slice* find(std::string_view service) const;
  std::size_t size() const { return slices.size(); }
};

SliceSet slice_all(const CheckedProgram& checked);

}  // namespace monoslice
