#include "monoslice/ast.hpp"

#include <array>

namespace monoslice {

namespace {
constexpr std::array<std::string_view, 7> kBasicNames = {"void", "bool", "int", "long",
                                                         "double", "string", "any"};
}

std::string_view basic_type_name(BasicType t) { return kBasicNames[static_cast<std::size_t>(t)]; }

std::optional<BasicType> basic_type_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kBasicNames.size(); ++i) {
    if (kBasicNames[i] == name) return static_cast<BasicType>(i);
  }
  return std::nullopt;
}

std::string_view binary_op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return "||";
    case BinaryOp::And: return "&&";
    case BinaryOp::Equal: return "==";
    case BinaryOp::NotEqual: return "!=";
    case BinaryOp::Less: return "<";
    case BinaryOp::LessEqual: return "<=";
    case BinaryOp::Greater: return ">";
    case BinaryOp::GreaterEqual: return ">=";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
  }
  return "?";
}

std::string_view execution_mode_name(ExecutionMode m) {
  switch (m) {
    case ExecutionMode::Single: return "single";
    case ExecutionMode::Sequential: return "sequential";
    case ExecutionMode::Concurrent: return "concurrent";
  }
  return "?";
}

const OperationDecl* InterfaceDecl::find(std::string_view op) const {
  for (const auto& o : request_responses) {
    if (o.name == op) return &o;
  }
  for (const auto& o : one_ways) {
    if (o.name == op) return &o;
  }
  return nullptr;
}

const PortDecl* ServiceDecl::find_port(std::string_view port_name) const {
  for (const auto& p : ports) {
    if (p.name == port_name) return &p;
  }
  return nullptr;
}

const std::string& declaration_name(const Declaration& d) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, d);
}

SourcePos declaration_pos(const Declaration& d) {
  return std::visit([](const auto& x) { return x.pos; }, d);
}

std::vector<const ServiceDecl*> SourceProgram::services() const {
  std::vector<const ServiceDecl*> out;
  for (const auto& d : declarations) {
    if (const auto* s = std::get_if<ServiceDecl>(&d)) out.push_back(s);
  }
  return out;
}

}  // namespace monoslice
