#include "monoslice/render.hpp"

#include <sstream>

namespace monoslice {

namespace {

constexpr std::string_view kIndent = "  ";

int precedence(const Expr& e) {
  if (const auto* b = std::get_if<BinaryExpr>(&e.node)) {
    switch (b->op) {
      case BinaryOp::Or: return 1;
      case BinaryOp::And: return 2;
      case BinaryOp::Equal:
      case BinaryOp::NotEqual:
      case BinaryOp::Less:
      case BinaryOp::LessEqual:
      case BinaryOp::Greater:
      case BinaryOp::GreaterEqual: return 3;
      case BinaryOp::Add:
      case BinaryOp::Sub: return 4;
      case BinaryOp::Mul:
      case BinaryOp::Div: return 5;
    }
  }
  if (std::holds_alternative<UnaryExpr>(e.node)) return 6;
  return 7;
}

class Writer {
 public:
  std::string str() const { return out_.str(); }

  void program(const SourceProgram& p) {
    bool first = true;
    for (const auto& d : p.declarations) {
      if (!first) out_ << '\n';
      first = false;
      declaration(d);
    }
  }

  void declaration(const Declaration& d) {
    std::visit([this](const auto& x) { decl(x); }, d);
  }

  void expr(const Expr& e) {
    std::visit([this](const auto& n) { node(n); }, e.node);
  }

  void path(const Path& p) {
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
      if (i) out_ << '.';
      out_ << p.steps[i].name;
      if (p.steps[i].index) {
        out_ << '[';
        expr(**p.steps[i].index);
        out_ << ']';
      }
    }
  }

 private:
  void indent() {
    for (int i = 0; i < depth_; ++i) out_ << kIndent;
  }
  void line(const std::string& s) {
    indent();
    out_ << s << '\n';
  }

  // -- declarations --------------------------------------------------------

  void decl(const TypeDecl& t) {
    out_ << "type " << t.name;
    if (t.root != BasicType::Void || t.fields.empty()) out_ << " : " << basic_type_name(t.root);
    if (!t.fields.empty()) {
      out_ << " {\n";
      fields(t.fields);
      out_ << '}';
    }
    out_ << '\n';
  }

  void fields(const std::vector<FieldDecl>& fs) {
    ++depth_;
    for (const auto& f : fs) {
      indent();
      out_ << f.name;
      if (f.cardinality == Cardinality::Optional) out_ << '?';
      if (f.cardinality == Cardinality::Many) out_ << '*';
      out_ << " : ";
      type_ref(f.type);
      out_ << '\n';
    }
    --depth_;
  }

  void type_ref(const TypeRef& r) {
    switch (r.kind) {
      case TypeRef::Kind::Basic: out_ << basic_type_name(r.basic); break;
      case TypeRef::Kind::Named: out_ << r.name; break;
      case TypeRef::Kind::Inline:
        out_ << basic_type_name(r.basic) << " {";
        if (r.fields.empty()) {
          out_ << '}';
          break;
        }
        out_ << '\n';
        fields(r.fields);
        indent();
        out_ << '}';
        break;
    }
  }

  void decl(const InterfaceDecl& d) {
    out_ << "interface " << d.name << " {\n";
    ++depth_;
    operations("RequestResponse", d.request_responses);
    operations("OneWay", d.one_ways);
    --depth_;
    out_ << "}\n";
  }

  void operations(const char* header, const std::vector<OperationDecl>& ops) {
    if (ops.empty()) return;
    line(std::string(header) + ":");
    ++depth_;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      indent();
      out_ << ops[i].name << "( ";
      type_ref(ops[i].request);
      out_ << " )";
      if (ops[i].response) {
        out_ << "( ";
        type_ref(*ops[i].response);
        out_ << " )";
      }
      if (i + 1 < ops.size()) out_ << ',';
      out_ << '\n';
    }
    --depth_;
  }

  void decl(const ServiceDecl& s) {
    out_ << "service " << s.name << '(';
    if (s.config) {
      out_ << ' ' << s.config->name;
      if (s.config->type_name) out_ << " : " << *s.config->type_name;
      out_ << ' ';
    }
    out_ << ") {\n";
    ++depth_;
    if (s.mode != ExecutionMode::Single) {
      line("execution: " + std::string(execution_mode_name(s.mode)));
      out_ << '\n';
    }
    for (const auto& p : s.ports) {
      port(p);
      out_ << '\n';
    }
    indent();
    out_ << "main {\n";
    ++depth_;
    if (const auto* choice = std::get_if<InputChoice>(&s.behavior)) {
      for (const auto& br : choice->branches) branch(br);
    } else {
      statements(std::get<Block>(s.behavior));
    }
    --depth_;
    line("}");
    --depth_;
    out_ << "}\n";
  }

  void port(const PortDecl& p) {
    indent();
    out_ << (p.kind == PortKind::Input ? "inputPort " : "outputPort ") << p.name << " {\n";
    ++depth_;
    indent();
    out_ << "location: ";
    expr(p.location);
    out_ << '\n';
    if (p.protocol) {
      indent();
      out_ << "protocol: " << p.protocol->name;
      if (!p.protocol->params.empty()) {
        out_ << " { ";
        for (std::size_t i = 0; i < p.protocol->params.size(); ++i) {
          if (i) out_ << ", ";
          out_ << p.protocol->params[i].name << " = ";
          expr(p.protocol->params[i].value);
        }
        out_ << " }";
      }
      out_ << '\n';
    }
    indent();
    out_ << "interfaces: ";
    for (std::size_t i = 0; i < p.interfaces.size(); ++i) {
      if (i) out_ << ", ";
      out_ << p.interfaces[i];
    }
    out_ << '\n';
    --depth_;
    line("}");
  }

  void branch(const InputBranch& br) {
    indent();
    out_ << "[ " << br.operation;
    optional_path(br.request);
    if (br.request_response) optional_path(br.response);
    out_ << " {\n";
    ++depth_;
    statements(br.body);
    --depth_;
    line("} ]");
  }

  void optional_path(const std::optional<Path>& p) {
    if (!p) {
      out_ << "()";
      return;
    }
    out_ << "( ";
    path(*p);
    out_ << " )";
  }

  void optional_expr(const std::optional<Expr>& e) {
    if (!e) {
      out_ << "()";
      return;
    }
    out_ << "( ";
    expr(*e);
    out_ << " )";
  }

  // -- statements ----------------------------------------------------------

  void statements(const Block& b) {
    for (const auto& s : b.statements) statement(s);
  }

  void statement(const Stmt& s) {
    indent();
    std::visit([this](const auto& n) { stmt(n); }, s.node);
  }

  void stmt(const AssignStmt& s) {
    path(s.target);
    out_ << " = ";
    expr(s.value);
    out_ << '\n';
  }
  void stmt(const SolicitStmt& s) {
    out_ << s.operation << '@' << s.port;
    optional_expr(s.request);
    optional_path(s.response);
    out_ << '\n';
  }
  void stmt(const NotifyStmt& s) {
    out_ << s.operation << '@' << s.port;
    optional_expr(s.message);
    out_ << '\n';
  }
  void stmt(const ReceiveStmt& s) {
    out_ << s.operation;
    optional_path(s.target);
    out_ << '\n';
  }
  void stmt(const IfStmt& s) {
    out_ << "if( ";
    expr(s.condition);
    out_ << " ) {\n";
    nested(s.then_block);
    const IfStmt* chained = &s;
    while (chained->else_block) {
      const Block& eb = *chained->else_block;
      if (eb.statements.size() == 1) {
        if (const auto* inner = std::get_if<IfStmt>(&eb.statements.front().node)) {
          indent();
          out_ << "} else if( ";
          expr(inner->condition);
          out_ << " ) {\n";
          nested(inner->then_block);
          chained = inner;
          continue;
        }
      }
      line("} else {");
      nested(eb);
      break;
    }
    line("}");
  }
  void stmt(const WhileStmt& s) {
    out_ << "while( ";
    expr(s.condition);
    out_ << " ) {\n";
    nested(s.body);
    line("}");
  }
  void stmt(const ThrowStmt& s) {
    out_ << "throw( " << s.fault;
    if (s.data) {
      out_ << ", ";
      expr(*s.data);
    }
    out_ << " )\n";
  }
  void stmt(const SynchronizedStmt& s) {
    out_ << "synchronized( " << s.token << " ) {\n";
    nested(s.body);
    line("}");
  }

  void nested(const Block& b) {
    ++depth_;
    statements(b);
    --depth_;
  }

  // -- expressions ---------------------------------------------------------

  void node(const LiteralExpr& l) {
    if (const auto* s = std::get_if<std::string>(&l.value)) {
      out_ << render_string_literal(*s);
    } else {
      out_ << to_display(l.value);
    }
  }
  void node(const PathExpr& p) { path(p.path); }
  void node(const CountExpr& c) {
    out_ << '#';
    path(c.path);
  }
  void node(const UnaryExpr& u) {
    out_ << (u.op == UnaryOp::Not ? "!" : "-");
    operand(*u.operand, precedence(*u.operand) < 6);
  }
  void node(const BinaryExpr& b) {
    Expr self;
    self.node = b;
    int prec = precedence(self);
    operand(*b.lhs, precedence(*b.lhs) < prec);
    out_ << ' ' << binary_op_text(b.op) << ' ';
    operand(*b.rhs, precedence(*b.rhs) <= prec);
  }
  void node(const TreeLiteralExpr& t) {
    if (t.entries.empty()) {
      out_ << "{}";
      return;
    }
    out_ << "{ ";
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      if (i) out_ << ", ";
      path(t.entries[i].path);
      out_ << " = ";
      expr(*t.entries[i].value);
    }
    out_ << " }";
  }

  void operand(const Expr& e, bool parens) {
    if (parens) out_ << '(';
    expr(e);
    if (parens) out_ << ')';
  }

  std::ostringstream out_;
  int depth_ = 0;
};

}  // namespace

std::string render_string_literal(const std::string& value) { return to_display(Scalar(value)); }

std::string render(const SourceProgram& program) {
  Writer w;
  w.program(program);
  return w.str();
}

std::string render(const Declaration& decl) {
  Writer w;
  w.declaration(decl);
  return w.str();
}

std::string render(const Expr& expr) {
  Writer w;
  w.expr(expr);
  return w.str();
}

std::string render(const Path& path) {
  Writer w;
  w.path(path);
  return w.str();
}

}  // namespace monoslice
