#pragma once

#include <string>

#include "monoslice/ast.hpp"

namespace monoslice {

/// Canonical source text: two-space indentation, one blank line between
/// declarations, LF line endings. Comments are not preserved.
std::string render(const SourceProgram& program);

std::string render(const Declaration& decl);
std::string render(const Expr& expr);
std::string render(const Path& path);
std::string render_string_literal(const std::string& value);

}  // namespace monoslice
