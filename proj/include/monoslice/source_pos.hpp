#pragma once

#include <stdexcept>
#include <string>

namespace monoslice {

/// 1-based line and byte column. Positions never participate in AST
/// equality: two trees that differ only in layout compare equal.
struct SourcePos {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

inline std::string to_string(const SourcePos& p) {
  return std::to_string(p.line) + ":" + std::to_string(p.column);
}

/// Base for positioned front-end failures.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(SourcePos pos, const std::string& message)
      : std::runtime_error(message), pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

}  // namespace monoslice
