#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "monoslice/ast.hpp"
#include "monoslice/lexer.hpp"

namespace monoslice {

class ParseError : public SyntaxError {
 public:
  ParseError(SourcePos pos, std::string expected, std::string found)
      : SyntaxError(pos, "expected " + expected + ", found " + found),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::string expected_;
  std::string found_;
};

/// Stops at the first error.
SourceProgram parse_program(const std::vector<Token>& tokens, std::string source_name = {});

/// tokenize + parse_program.
SourceProgram parse_source(std::string_view source, std::string source_name = {});

/// Parses a standalone expression (used for locations given on the command line and in tests).
Expr parse_expression(std::string_view source);

}  // namespace monoslice
