#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "monoslice/source_pos.hpp"
#include "monoslice/value_tree.hpp"

namespace monoslice {

/// Immutable boxed node. Copies share the pointee; equality is structural.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}  // NOLINT(implicit)

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return a.ptr_ == b.ptr_ || *a.ptr_ == *b.ptr_; }

 private:
  std::shared_ptr<const T> ptr_;
};

// ---------------------------------------------------------------------------
// Types

enum class BasicType { Void, Bool, Int, Long, Double, String, Any };

std::string_view basic_type_name(BasicType t);
std::optional<BasicType> basic_type_from_name(std::string_view name);

enum class Cardinality { One, Optional, Many };

struct FieldDecl;

struct TypeRef {
  enum class Kind { Basic, Named, Inline };

  Kind kind = Kind::Basic;
  BasicType basic = BasicType::Void;  // Basic, or the root of an Inline type
  std::string name;                   // Named
  std::vector<FieldDecl> fields;      // Inline
  SourcePos pos;

  static TypeRef of(BasicType b) { return TypeRef{Kind::Basic, b, {}, {}, {}}; }
  static TypeRef named(std::string n) { return TypeRef{Kind::Named, BasicType::Void, std::move(n), {}, {}}; }

  bool operator==(const TypeRef&) const = default;
};

struct FieldDecl {
  std::string name;
  Cardinality cardinality = Cardinality::One;
  TypeRef type;
  SourcePos pos;

  bool operator==(const FieldDecl&) const = default;
};

struct TypeDecl {
  std::string name;
  BasicType root = BasicType::Void;
  std::vector<FieldDecl> fields;
  SourcePos pos;

  bool operator==(const TypeDecl&) const = default;
};

struct OperationDecl {
  std::string name;
  TypeRef request;
  std::optional<TypeRef> response;  // present iff request-response
  SourcePos pos;

  bool is_request_response() const { return response.has_value(); }
  bool operator==(const OperationDecl&) const = default;
};

struct InterfaceDecl {
  std::string name;
  std::vector<OperationDecl> request_responses;
  std::vector<OperationDecl> one_ways;
  SourcePos pos;

  const OperationDecl* find(std::string_view op) const;
  bool operator==(const InterfaceDecl&) const = default;
};

// ---------------------------------------------------------------------------
// Expressions

struct Expr;

struct PathStep {
  std::string name;
  std::optional<Box<Expr>> index;

  bool operator==(const PathStep&) const = default;
};

/// `a.b[2].c`: steps[0] names a variable (or `global`).
struct Path {
  std::vector<PathStep> steps;
  SourcePos pos;

  const std::string& root_name() const { return steps.front().name; }
  bool operator==(const Path&) const = default;
};

enum class UnaryOp { Not, Negate };
enum class BinaryOp { Or, And, Equal, NotEqual, Less, LessEqual, Greater, GreaterEqual, Add, Sub, Mul, Div };

std::string_view binary_op_text(BinaryOp op);

struct LiteralExpr {
  Scalar value;
  bool operator==(const LiteralExpr&) const = default;
};
struct PathExpr {
  Path path;
  bool operator==(const PathExpr&) const = default;
};
/// `#path`: number of occurrences of the path's last step.
struct CountExpr {
  Path path;
  bool operator==(const CountExpr&) const = default;
};
struct UnaryExpr {
  UnaryOp op;
  Box<Expr> operand;
  bool operator==(const UnaryExpr&) const = default;
};
struct BinaryExpr {
  BinaryOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  bool operator==(const BinaryExpr&) const = default;
};
struct TreeEntry {
  Path path;  // relative to the tree under construction
  Box<Expr> value;
  bool operator==(const TreeEntry&) const = default;
};
struct TreeLiteralExpr {
  std::vector<TreeEntry> entries;
  bool operator==(const TreeLiteralExpr&) const = default;
};

struct Expr {
  using Node = std::variant<LiteralExpr, PathExpr, CountExpr, UnaryExpr, BinaryExpr, TreeLiteralExpr>;
  Node node;
  SourcePos pos;

  bool operator==(const Expr&) const = default;
};

// ---------------------------------------------------------------------------
// Statements

struct Stmt;

struct Block {
  std::vector<Stmt> statements;
  bool operator==(const Block&) const = default;
};

struct AssignStmt {
  Path target;
  Expr value;
  bool operator==(const AssignStmt&) const = default;
};
/// `op@Port( request )( response )`
struct SolicitStmt {
  std::string operation;
  std::string port;
  std::optional<Expr> request;
  std::optional<Path> response;
  bool operator==(const SolicitStmt&) const = default;
};
/// `op@Port( message )`
struct NotifyStmt {
  std::string operation;
  std::string port;
  std::optional<Expr> message;
  bool operator==(const NotifyStmt&) const = default;
};
/// `op( target )`: waits for an inbound one-way message.
struct ReceiveStmt {
  std::string operation;
  std::optional<Path> target;
  bool operator==(const ReceiveStmt&) const = default;
};
struct IfStmt {
  Expr condition;
  Block then_block;
  std::optional<Block> else_block;
  bool operator==(const IfStmt&) const = default;
};
struct WhileStmt {
  Expr condition;
  Block body;
  bool operator==(const WhileStmt&) const = default;
};
struct ThrowStmt {
  std::string fault;
  std::optional<Expr> data;
  bool operator==(const ThrowStmt&) const = default;
};
struct SynchronizedStmt {
  std::string token;
  Block body;
  bool operator==(const SynchronizedStmt&) const = default;
};

struct Stmt {
  using Node = std::variant<AssignStmt, SolicitStmt, NotifyStmt, ReceiveStmt, IfStmt, WhileStmt,
                            ThrowStmt, SynchronizedStmt>;
  Node node;
  SourcePos pos;

  bool operator==(const Stmt&) const = default;
};

// ---------------------------------------------------------------------------
// Services

struct InputBranch {
  std::string operation;
  std::optional<Path> request;
  bool request_response = false;
  std::optional<Path> response;
  Block body;
  SourcePos pos;

  bool operator==(const InputBranch&) const = default;
};

struct InputChoice {
  std::vector<InputBranch> branches;
  bool operator==(const InputChoice&) const = default;
};

/// An InputChoice serves messages; a Block runs once ("executable" service).
using Behavior = std::variant<Block, InputChoice>;

enum class PortKind { Input, Output };

struct ProtocolParam {
  std::string name;
  Expr value;
  bool operator==(const ProtocolParam&) const = default;
};

struct Protocol {
  std::string name;
  std::vector<ProtocolParam> params;
  bool operator==(const Protocol&) const = default;
};

struct PortDecl {
  PortKind kind = PortKind::Input;
  std::string name;
  Expr location;
  std::optional<Protocol> protocol;
  std::vector<std::string> interfaces;
  SourcePos pos;
  SourcePos interfaces_pos;

  bool operator==(const PortDecl&) const = default;
};

enum class ExecutionMode { Single, Sequential, Concurrent };

std::string_view execution_mode_name(ExecutionMode m);

struct ConfigParam {
  std::string name;
  std::optional<std::string> type_name;
  SourcePos pos;
  bool operator==(const ConfigParam&) const = default;
};

struct ServiceDecl {
  std::string name;
  std::optional<ConfigParam> config;
  ExecutionMode mode = ExecutionMode::Single;
  std::vector<PortDecl> ports;  // source order, inputs and outputs interleaved
  Behavior behavior;
  SourcePos pos;

  const PortDecl* find_port(std::string_view port_name) const;
  bool is_executable() const { return std::holds_alternative<Block>(behavior); }
  bool operator==(const ServiceDecl&) const = default;
};

// ---------------------------------------------------------------------------

using Declaration = std::variant<TypeDecl, InterfaceDecl, ServiceDecl>;

const std::string& declaration_name(const Declaration& d);
SourcePos declaration_pos(const Declaration& d);

struct SourceProgram {
  std::vector<Declaration> declarations;
  std::string source_name;  // file stem, used to name outputs

  std::vector<const ServiceDecl*> services() const;
  bool operator==(const SourceProgram&) const = default;
};

}  // namespace monoslice
