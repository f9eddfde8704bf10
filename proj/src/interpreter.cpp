#include <charconv>
#include <limits>

#include "runtime_internal.hpp"

namespace monoslice::detail {

namespace {

constexpr std::size_t kMaxIndex = 1u << 20;

using MaybeScalar = std::optional<Scalar>;

bool is_numeric(const Scalar& s) {
  auto k = kind_of(s);
  return k == ScalarKind::Int || k == ScalarKind::Long || k == ScalarKind::Double;
}

double as_double(const Scalar& s) {
  switch (kind_of(s)) {
    case ScalarKind::Int: return std::get<std::int32_t>(s);
    case ScalarKind::Long: return static_cast<double>(std::get<std::int64_t>(s));
    case ScalarKind::Double: return std::get<double>(s);
    default: return 0;
  }
}

std::int64_t as_long(const Scalar& s) {
  return kind_of(s) == ScalarKind::Int ? std::get<std::int32_t>(s) : std::get<std::int64_t>(s);
}

std::string as_text(const MaybeScalar& s) {
  if (!s) return {};
  switch (kind_of(*s)) {
    case ScalarKind::String: return std::get<std::string>(*s);
    case ScalarKind::Long: return std::to_string(std::get<std::int64_t>(*s));
    default: return to_display(*s);
  }
}

Scalar zero_like(const Scalar& s) {
  switch (kind_of(s)) {
    case ScalarKind::Long: return std::int64_t{0};
    case ScalarKind::Double: return 0.0;
    case ScalarKind::String: return std::string{};
    default: return std::int32_t{0};
  }
}

std::int64_t wrap_long(BinaryOp op, std::int64_t a, std::int64_t b) {
  auto ua = static_cast<std::uint64_t>(a);
  auto ub = static_cast<std::uint64_t>(b);
  switch (op) {
    case BinaryOp::Add: return static_cast<std::int64_t>(ua + ub);
    case BinaryOp::Sub: return static_cast<std::int64_t>(ua - ub);
    case BinaryOp::Mul: return static_cast<std::int64_t>(ua * ub);
    default:
      if (b == 0) raise(faults::kDivisionByZero);
      if (a == std::numeric_limits<std::int64_t>::min() && b == -1) return a;
      return a / b;
  }
}

Scalar arithmetic(BinaryOp op, const MaybeScalar& lhs, const MaybeScalar& rhs) {
  bool lhs_str = lhs && kind_of(*lhs) == ScalarKind::String;
  bool rhs_str = rhs && kind_of(*rhs) == ScalarKind::String;
  if (op == BinaryOp::Add && (lhs_str || rhs_str)) return as_text(lhs) + as_text(rhs);
  if (!lhs && !rhs) raise(faults::kTypeMismatch);
  Scalar a = lhs ? *lhs : zero_like(*rhs);
  Scalar b = rhs ? *rhs : zero_like(*lhs);
  if (!is_numeric(a) || !is_numeric(b)) raise(faults::kTypeMismatch);
  auto ka = kind_of(a);
  auto kb = kind_of(b);
  if (ka == ScalarKind::Double || kb == ScalarKind::Double) {
    double x = as_double(a);
    double y = as_double(b);
    switch (op) {
      case BinaryOp::Add: return x + y;
      case BinaryOp::Sub: return x - y;
      case BinaryOp::Mul: return x * y;
      default: return x / y;
    }
  }
  std::int64_t r = wrap_long(op, as_long(a), as_long(b));
  if (ka == ScalarKind::Long || kb == ScalarKind::Long) return r;
  return static_cast<std::int32_t>(r);
}

bool scalar_equal(const MaybeScalar& a, const MaybeScalar& b) {
  if (!a || !b) return !a && !b;
  if (is_numeric(*a) && is_numeric(*b)) {
    if (kind_of(*a) == ScalarKind::Double || kind_of(*b) == ScalarKind::Double) return as_double(*a) == as_double(*b);
    return as_long(*a) == as_long(*b);
  }
  return *a == *b;
}

/// Negative, zero, positive.
int scalar_order(const MaybeScalar& a, const MaybeScalar& b) {
  if (!a || !b) raise(faults::kTypeMismatch);
  if (is_numeric(*a) && is_numeric(*b)) {
    if (kind_of(*a) == ScalarKind::Double || kind_of(*b) == ScalarKind::Double) {
      double x = as_double(*a);
      double y = as_double(*b);
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    std::int64_t x = as_long(*a);
    std::int64_t y = as_long(*b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (kind_of(*a) == ScalarKind::String && kind_of(*b) == ScalarKind::String) {
    return std::get<std::string>(*a).compare(std::get<std::string>(*b));
  }
  raise(faults::kTypeMismatch);
}

bool is_global(const Path& p) { return p.root_name() == "global"; }

const ValueTree* navigate(const ValueTree& root, const Path& p, const std::vector<std::size_t>& idx,
                          std::size_t first) {
  const ValueTree* node = &root;
  for (std::size_t i = first; i < p.steps.size() && node; ++i) node = node->get(p.steps[i].name, idx[i]);
  return node;
}

ValueTree& navigate_mut(ValueTree& root, const Path& p, const std::vector<std::size_t>& idx, std::size_t first) {
  ValueTree* node = &root;
  for (std::size_t i = first; i < p.steps.size(); ++i) node = &node->at(p.steps[i].name, idx[i]);
  return *node;
}

}  // namespace

void raise(const char* fault_name) { throw FaultSignal{Fault{fault_name, {}}}; }

std::vector<std::size_t> Interpreter::indices(const Path& path) {
  std::vector<std::size_t> out(path.steps.size(), 0);
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    if (!path.steps[i].index) continue;
    ValueTree v = eval(**path.steps[i].index);
    const auto& r = v.root();
    if (!r || (kind_of(*r) != ScalarKind::Int && kind_of(*r) != ScalarKind::Long)) raise(faults::kTypeMismatch);
    std::int64_t n = as_long(*r);
    if (n < 0 || static_cast<std::uint64_t>(n) >= kMaxIndex) raise(faults::kInvalidIndex);
    out[i] = static_cast<std::size_t>(n);
  }
  return out;
}

ValueTree Interpreter::read(const Path& path) {
  auto idx = indices(path);
  if (is_global(path)) {
    std::lock_guard lock(inst_.global_mutex());
    const ValueTree* node = navigate(inst_.global(), path, idx, 1);
    return node ? *node : ValueTree{};
  }
  const ValueTree* node = navigate(scope_, path, idx, 0);
  return node ? *node : ValueTree{};
}

void Interpreter::write(const Path& path, ValueTree value) {
  auto idx = indices(path);
  if (is_global(path)) {
    std::lock_guard lock(inst_.global_mutex());
    navigate_mut(inst_.global(), path, idx, 1) = std::move(value);
    return;
  }
  navigate_mut(scope_, path, idx, 0) = std::move(value);
}

std::size_t Interpreter::count(const Path& path) {
  auto idx = indices(path);
  const std::string& last = path.steps.back().name;
  if (is_global(path)) {
    std::lock_guard lock(inst_.global_mutex());
    if (path.steps.size() == 1) return inst_.global().empty() ? 0 : 1;
    Path parent{{path.steps.begin(), path.steps.end() - 1}, path.pos};
    const ValueTree* node = navigate(inst_.global(), parent, idx, 1);
    return node ? node->count(last) : 0;
  }
  Path parent{{path.steps.begin(), path.steps.end() - 1}, path.pos};
  const ValueTree* node = navigate(scope_, parent, idx, 0);
  return node ? node->count(last) : 0;
}

ValueTree Interpreter::eval(const Expr& expr) {
  return std::visit(
      [&](const auto& n) -> ValueTree {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LiteralExpr>) {
          return ValueTree(n.value);
        } else if constexpr (std::is_same_v<T, PathExpr>) {
          return read(n.path);
        } else if constexpr (std::is_same_v<T, CountExpr>) {
          return ValueTree(static_cast<std::int32_t>(count(n.path)));
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          ValueTree v = eval(*n.operand);
          const auto& r = v.root();
          if (n.op == UnaryOp::Not) {
            if (!r || kind_of(*r) != ScalarKind::Bool) raise(faults::kTypeMismatch);
            return ValueTree(!std::get<bool>(*r));
          }
          if (!r || !is_numeric(*r)) raise(faults::kTypeMismatch);
          return ValueTree(arithmetic(BinaryOp::Sub, zero_like(*r), r));
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          if (n.op == BinaryOp::And || n.op == BinaryOp::Or) {
            bool lhs = condition(*n.lhs);
            if (n.op == BinaryOp::And && !lhs) return ValueTree(false);
            if (n.op == BinaryOp::Or && lhs) return ValueTree(true);
            return ValueTree(condition(*n.rhs));
          }
          ValueTree a = eval(*n.lhs);
          ValueTree b = eval(*n.rhs);
          switch (n.op) {
            case BinaryOp::Equal: return ValueTree(scalar_equal(a.root(), b.root()));
            case BinaryOp::NotEqual: return ValueTree(!scalar_equal(a.root(), b.root()));
            case BinaryOp::Less: return ValueTree(scalar_order(a.root(), b.root()) < 0);
            case BinaryOp::LessEqual: return ValueTree(scalar_order(a.root(), b.root()) <= 0);
            case BinaryOp::Greater: return ValueTree(scalar_order(a.root(), b.root()) > 0);
            case BinaryOp::GreaterEqual: return ValueTree(scalar_order(a.root(), b.root()) >= 0);
            default: return ValueTree(arithmetic(n.op, a.root(), b.root()));
          }
        } else {
          ValueTree tree;
          for (const auto& entry : n.entries) {
            ValueTree v = eval(*entry.value);
            auto idx = indices(entry.path);
            navigate_mut(tree, entry.path, idx, 0) = std::move(v);
          }
          return tree;
        }
      },
      expr.node);
}

bool Interpreter::condition(const Expr& expr) {
  ValueTree v = eval(expr);
  const auto& r = v.root();
  if (!r || kind_of(*r) != ScalarKind::Bool) raise(faults::kTypeMismatch);
  return std::get<bool>(*r);
}

void Interpreter::run(const Block& block) {
  for (const auto& s : block.statements) exec(s);
}

void Interpreter::exec(const Stmt& stmt) {
  if (inst_.aborting()) raise(faults::kAborted);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AssignStmt>) {
          const ServiceDecl& decl = inst_.decl();
          if (CheckedProgram::is_output_port(decl, n.target.root_name())) {
            ValueTree v = eval(n.value);
            const auto* text = v.root() ? std::get_if<std::string>(&*v.root()) : nullptr;
            if (!text) raise(faults::kInvalidLocation);
            try {
              inst_.rebind(n.target.root_name(), Location::parse(*text));
            } catch (const ConfigError&) {
              raise(faults::kInvalidLocation);
            }
            return;
          }
          write(n.target, eval(n.value));
        } else if constexpr (std::is_same_v<T, SolicitStmt>) {
          ValueTree request = n.request ? eval(*n.request) : ValueTree{};
          Outcome out = inst_.transport().request(inst_.output_location(n.port), n.operation, std::move(request),
                                                  &inst_.abort_flag());
          if (out.fault) throw FaultSignal{std::move(*out.fault)};
          if (n.response) write(*n.response, std::move(out.value));
        } else if constexpr (std::is_same_v<T, NotifyStmt>) {
          ValueTree message = n.message ? eval(*n.message) : ValueTree{};
          if (auto f = inst_.transport().send(inst_.output_location(n.port), n.operation, std::move(message))) {
            throw FaultSignal{std::move(*f)};
          }
        } else if constexpr (std::is_same_v<T, ReceiveStmt>) {
          ValueTree message = inst_.receive(n.operation);
          if (n.target) write(*n.target, std::move(message));
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          if (condition(n.condition)) {
            run(n.then_block);
          } else if (n.else_block) {
            run(*n.else_block);
          }
        } else if constexpr (std::is_same_v<T, WhileStmt>) {
          while (condition(n.condition)) {
            if (inst_.aborting()) raise(faults::kAborted);
            run(n.body);
          }
        } else if constexpr (std::is_same_v<T, ThrowStmt>) {
          throw FaultSignal{Fault{n.fault, n.data ? eval(*n.data) : ValueTree{}}};
        } else {
          std::lock_guard lock(inst_.lock_for(n.token));
          run(n.body);
        }
      },
      stmt.node);
}

}  // namespace monoslice::detail
