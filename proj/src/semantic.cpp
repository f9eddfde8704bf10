#include "monoslice/semantic.hpp"

#include <limits>
#include <set>

namespace monoslice {

std::string format_diagnostic(const Diagnostic& d, std::string_view file) {
  std::string out(file);
  out += ':' + to_string(d.pos) + ": ";
  out += d.severity == Diagnostic::Severity::Error ? "error: " : "warning: ";
  out += d.code + ": " + d.message;
  return out;
}

const TypeDecl* CheckedProgram::find_type(std::string_view name) const {
  auto it = types_.find(name);
  return it == types_.end() ? nullptr : &std::get<TypeDecl>(program_.declarations[it->second]);
}

const InterfaceDecl* CheckedProgram::find_interface(std::string_view name) const {
  auto it = interfaces_.find(name);
  return it == interfaces_.end() ? nullptr
                                 : &std::get<InterfaceDecl>(program_.declarations[it->second]);
}

const ServiceDecl* CheckedProgram::find_service(std::string_view name) const {
  auto it = services_.find(name);
  return it == services_.end() ? nullptr : &std::get<ServiceDecl>(program_.declarations[it->second]);
}

std::optional<CheckedProgram::PortOperation> CheckedProgram::port_operation(
    const ServiceDecl& service, std::string_view port, std::string_view op) const {
  const PortDecl* p = service.find_port(port);
  if (!p) return std::nullopt;
  for (const auto& iname : p->interfaces) {
    const InterfaceDecl* iface = find_interface(iname);
    if (!iface) continue;
    if (const OperationDecl* o = iface->find(op)) return PortOperation{p, iface, o};
  }
  return std::nullopt;
}

std::optional<CheckedProgram::PortOperation> CheckedProgram::input_operation(
    const ServiceDecl& service, std::string_view op) const {
  for (const auto& p : service.ports) {
    if (p.kind != PortKind::Input) continue;
    if (auto found = port_operation(service, p.name, op)) return found;
  }
  return std::nullopt;
}

bool CheckedProgram::is_output_port(const ServiceDecl& service, std::string_view name) {
  const PortDecl* p = service.find_port(name);
  return p && p->kind == PortKind::Output;
}

// ---------------------------------------------------------------------------

struct Resolver {
  CheckedProgram out;
  std::vector<Diagnostic> errors;

  void error(std::string code, std::string message, SourcePos pos) {
    errors.push_back({Diagnostic::Severity::Error, std::move(code), std::move(message), pos});
  }
  void warning(std::string code, std::string message, SourcePos pos) {
    out.warnings_.push_back({Diagnostic::Severity::Warning, std::move(code), std::move(message), pos});
  }

  void build_tables() {
    const auto& decls = out.program_.declarations;
    for (std::size_t i = 0; i < decls.size(); ++i) {
      auto& table = std::holds_alternative<TypeDecl>(decls[i])        ? out.types_
                    : std::holds_alternative<InterfaceDecl>(decls[i]) ? out.interfaces_
                                                                      : out.services_;
      const char* kind = std::holds_alternative<TypeDecl>(decls[i])        ? "type"
                         : std::holds_alternative<InterfaceDecl>(decls[i]) ? "interface"
                                                                           : "service";
      const std::string& name = declaration_name(decls[i]);
      auto [it, inserted] = table.emplace(name, i);
      if (!inserted) {
        error("DuplicateDeclaration",
              std::string("duplicate ") + kind + " '" + name + "' (first declared at " +
                  to_string(declaration_pos(decls[it->second])) + ")",
              declaration_pos(decls[i]));
      }
    }
  }

  void check_type_ref(const TypeRef& r) {
    if (r.kind == TypeRef::Kind::Named) {
      if (!out.find_type(r.name)) error("UndefinedType", "type '" + r.name + "' is not defined", r.pos);
    } else if (r.kind == TypeRef::Kind::Inline) {
      check_fields(r.fields);
    }
  }

  void check_fields(const std::vector<FieldDecl>& fields) {
    std::set<std::string_view> seen;
    for (const auto& f : fields) {
      if (!seen.insert(f.name).second) {
        error("DuplicateField", "field '" + f.name + "' is declared more than once", f.pos);
      }
      check_type_ref(f.type);
    }
  }

  void check_interface(const InterfaceDecl& d) {
    std::set<std::string_view> seen;
    auto each = [&](const OperationDecl& op) {
      if (!seen.insert(op.name).second) {
        error("DuplicateOperation",
              "operation '" + op.name + "' is declared more than once in interface '" + d.name + "'",
              op.pos);
      }
      check_type_ref(op.request);
      if (op.response) check_type_ref(*op.response);
    };
    for (const auto& op : d.request_responses) each(op);
    for (const auto& op : d.one_ways) each(op);
  }

  // -- services ------------------------------------------------------------

  void check_service(const ServiceDecl& s) {
    if (s.config && s.config->type_name && !out.find_type(*s.config->type_name)) {
      warning("UndeclaredConfigType",
              "configuration type '" + *s.config->type_name +
                  "' is not declared; treating the configuration as unconstrained",
              s.config->pos);
    } else if (s.config && !s.config->type_name) {
      warning("UntypedConfig",
              "configuration parameter '" + s.config->name + "' has no type; treating it as unconstrained",
              s.config->pos);
    }
    std::set<std::string_view> port_names;
    for (const auto& p : s.ports) {
      if (!port_names.insert(p.name).second) {
        error("DuplicatePort", "port '" + p.name + "' is declared more than once in service '" + s.name + "'",
              p.pos);
      }
      for (const auto& iname : p.interfaces) {
        if (!out.find_interface(iname)) {
          error("UndefinedInterface", "interface '" + iname + "' is not defined", p.interfaces_pos);
        }
      }
      check_location(s, p);
    }

    if (const auto* choice = std::get_if<InputChoice>(&s.behavior)) {
      std::set<std::string_view> ops;
      for (const auto& br : choice->branches) {
        if (!ops.insert(br.operation).second) {
          error("DuplicateBranch", "operation '" + br.operation + "' has more than one input branch", br.pos);
        }
        auto found = out.input_operation(s, br.operation);
        if (!found) {
          error("UnknownOperation",
                "operation '" + br.operation + "' is not offered by any input port of service '" + s.name + "'",
                br.pos);
        } else if (found->operation->is_request_response() != br.request_response) {
          error("OperationKindMismatch",
                "operation '" + br.operation + "' is " +
                    (found->operation->is_request_response() ? "request-response" : "one-way") +
                    " but the branch is written as " + (br.request_response ? "request-response" : "one-way"),
                br.pos);
        }
        block(s, br.body);
      }
    } else {
      block(s, std::get<Block>(s.behavior));
    }
  }

  void check_location(const ServiceDecl& s, const PortDecl& p) {
    const auto& node = p.location.node;
    if (const auto* lit = std::get_if<LiteralExpr>(&node)) {
      if (std::holds_alternative<std::string>(lit->value)) return;
    } else if (const auto* path = std::get_if<PathExpr>(&node)) {
      if (s.config && path->path.root_name() == s.config->name) return;
    }
    error("InvalidLocation",
          "location of port '" + p.name + "' must be a string literal or a path into the configuration parameter",
          p.location.pos);
  }

  void block(const ServiceDecl& s, const Block& b) {
    for (const auto& st : b.statements) statement(s, st);
  }

  void outbound(const ServiceDecl& s, const std::string& op, const std::string& port, bool rr, SourcePos pos) {
    if (!CheckedProgram::is_output_port(s, port)) {
      error("UnknownPort", "service '" + s.name + "' has no output port '" + port + "'", pos);
      return;
    }
    auto found = out.port_operation(s, port, op);
    if (!found || found->operation->is_request_response() != rr) {
      error("UnknownOperation",
            std::string(rr ? "request-response" : "one-way") + " operation '" + op +
                "' is not offered by port '" + port + "'",
            pos);
    }
  }

  void statement(const ServiceDecl& s, const Stmt& st) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, AssignStmt>) {
            const Path& target = n.target;
            if (CheckedProgram::is_output_port(s, target.root_name())) {
              bool rebinding = target.steps.size() == 2 && !target.steps[0].index &&
                               !target.steps[1].index && target.steps[1].name == "location";
              if (!rebinding) {
                error("InvalidPortAccess",
                      "only 'Port.location' may be assigned on output port '" + target.root_name() + "'", st.pos);
              }
            }
          } else if constexpr (std::is_same_v<T, SolicitStmt>) {
            outbound(s, n.operation, n.port, true, st.pos);
          } else if constexpr (std::is_same_v<T, NotifyStmt>) {
            outbound(s, n.operation, n.port, false, st.pos);
          } else if constexpr (std::is_same_v<T, ReceiveStmt>) {
            auto found = out.input_operation(s, n.operation);
            if (!found || found->operation->is_request_response()) {
              error("UnknownOperation",
                    "one-way operation '" + n.operation + "' is not offered by any input port of service '" +
                        s.name + "'",
                    st.pos);
            }
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            block(s, n.then_block);
            if (n.else_block) block(s, *n.else_block);
          } else if constexpr (std::is_same_v<T, WhileStmt>) {
            block(s, n.body);
          } else if constexpr (std::is_same_v<T, SynchronizedStmt>) {
            block(s, n.body);
          }
        },
        st.node);
  }

  static ResolveResult resolve(SourceProgram program) {
    Resolver r;
    r.out.program_ = std::move(program);
    r.run();
    ResolveResult result;
    result.warnings = r.out.warnings_;
    if (r.errors.empty()) {
      result.checked = std::move(r.out);
    } else {
      result.errors = std::move(r.errors);
    }
    return result;
  }

  void run() {
    build_tables();
    for (const auto& d : out.program_.declarations) {
      if (const auto* t = std::get_if<TypeDecl>(&d)) {
        check_fields(t->fields);
      } else if (const auto* i = std::get_if<InterfaceDecl>(&d)) {
        check_interface(*i);
      } else {
        check_service(std::get<ServiceDecl>(d));
      }
    }
  }
};

ResolveResult resolve(SourceProgram program) { return Resolver::resolve(std::move(program)); }

// ---------------------------------------------------------------------------
// check_value

std::string to_string(const Violation& v) {
  return (v.path.empty() ? std::string("<root>") : v.path) + ": expected " + v.expected + ", found " + v.found;
}

namespace {

std::string describe(const TypeRef& r) {
  switch (r.kind) {
    case TypeRef::Kind::Basic: return std::string(basic_type_name(r.basic));
    case TypeRef::Kind::Named: return r.name;
    case TypeRef::Kind::Inline: return "inline " + std::string(basic_type_name(r.basic)) + " tree";
  }
  return "?";
}

std::string cardinality_text(Cardinality c) {
  switch (c) {
    case Cardinality::One: return "exactly-one";
    case Cardinality::Optional: return "optional";
    case Cardinality::Many: return "zero-or-more";
  }
  return "?";
}

bool root_accepts(BasicType expected, const std::optional<Scalar>& root) {
  switch (expected) {
    case BasicType::Any: return true;
    case BasicType::Void: return !root;
    default: break;
  }
  if (!root) return false;
  ScalarKind k = kind_of(*root);
  switch (expected) {
    case BasicType::Bool: return k == ScalarKind::Bool;
    case BasicType::Int:
      if (k == ScalarKind::Long) {
        auto v = std::get<std::int64_t>(*root);
        return v >= std::numeric_limits<std::int32_t>::min() && v <= std::numeric_limits<std::int32_t>::max();
      }
      return k == ScalarKind::Int;
    case BasicType::Long: return k == ScalarKind::Long || k == ScalarKind::Int;
    case BasicType::Double: return k == ScalarKind::Double || k == ScalarKind::Int;
    case BasicType::String: return k == ScalarKind::String;
    default: return false;
  }
}

std::string join(const std::string& base, const std::string& name, std::size_t index) {
  std::string p = base.empty() ? name : base + "." + name;
  if (index > 0) p += "[" + std::to_string(index) + "]";
  return p;
}

class Checker {
 public:
  explicit Checker(const CheckedProgram& prog) : prog_(prog) {}

  void tree(const ValueTree& t, BasicType root, const std::vector<FieldDecl>& fields, const std::string& path) {
    if (!root_accepts(root, t.root())) {
      out.push_back({path, std::string(basic_type_name(root)),
                     t.root() ? std::string(kind_name(kind_of(*t.root()))) : std::string("no value")});
    }
    for (const auto& f : fields) {
      std::size_t n = t.count(f.name);
      bool ok = f.cardinality == Cardinality::Many || (f.cardinality == Cardinality::One ? n == 1 : n <= 1);
      if (!ok) {
        out.push_back({join(path, f.name, 0), cardinality_text(f.cardinality) + " " + describe(f.type),
                       std::to_string(n)});
      }
      if (const auto* seq = t.find(f.name)) {
        for (std::size_t i = 0; i < seq->size(); ++i) ref((*seq)[i], f.type, join(path, f.name, i));
      }
    }
    for (const auto& [name, seq] : t.children()) {
      bool declared = false;
      for (const auto& f : fields) declared = declared || f.name == name;
      if (!declared) out.push_back({join(path, name, 0), "no such field", std::to_string(seq.size())});
    }
  }

  void ref(const ValueTree& t, const TypeRef& r, const std::string& path) {
    static const std::vector<FieldDecl> kNoFields;
    switch (r.kind) {
      case TypeRef::Kind::Basic: tree(t, r.basic, kNoFields, path); break;
      case TypeRef::Kind::Inline: tree(t, r.basic, r.fields, path); break;
      case TypeRef::Kind::Named:
        if (const TypeDecl* d = prog_.find_type(r.name)) {
          tree(t, d->root, d->fields, path);
        } else {
          out.push_back({path, "declared type " + r.name, "undefined type"});
        }
        break;
    }
  }

  std::vector<Violation> out;

 private:
  const CheckedProgram& prog_;
};

}  // namespace

std::vector<Violation> check_value(const ValueTree& tree, const TypeRef& type, const CheckedProgram& program) {
  Checker c(program);
  c.ref(tree, type, "");
  return std::move(c.out);
}

std::vector<Violation> check_value(const ValueTree& tree, const TypeDecl& type, const CheckedProgram& program) {
  Checker c(program);
  c.tree(tree, type.root, type.fields, "");
  return std::move(c.out);
}

}  // namespace monoslice
