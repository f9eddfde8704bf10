#include "monoslice/slicer.hpp"

#include <deque>

namespace monoslice {

namespace {

const ServiceDecl& require_service(const CheckedProgram& checked, std::string_view name) {
  const ServiceDecl* s = checked.find_service(name);
  if (!s) throw SliceError("UnknownService", "no service named '" + std::string(name) + "'");
  return *s;
}

class Reachability {
 public:
  explicit Reachability(const CheckedProgram& checked) : checked_(checked) {}

  void add_interface(const std::string& name) {
    if (!checked_.find_interface(name) || !out.interfaces.insert(name).second) return;
    pending_interfaces_.push_back(name);
  }

  void add_type(const std::string& name) {
    if (!checked_.find_type(name) || !out.types.insert(name).second) return;
    pending_types_.push_back(name);
  }

  void run() {
    while (!pending_interfaces_.empty() || !pending_types_.empty()) {
      if (!pending_interfaces_.empty()) {
        const InterfaceDecl* iface = checked_.find_interface(pending_interfaces_.front());
        pending_interfaces_.pop_front();
        for (const auto& op : iface->request_responses) operation(op);
        for (const auto& op : iface->one_ways) operation(op);
        continue;
      }
      const TypeDecl* t = checked_.find_type(pending_types_.front());
      pending_types_.pop_front();
      fields(t->fields);
    }
  }

  DependencySet out;

 private:
  void operation(const OperationDecl& op) {
    type_ref(op.request);
    if (op.response) type_ref(*op.response);
  }

  void type_ref(const TypeRef& r) {
    if (r.kind == TypeRef::Kind::Named) add_type(r.name);
    if (r.kind == TypeRef::Kind::Inline) fields(r.fields);
  }

  void fields(const std::vector<FieldDecl>& fs) {
    for (const auto& f : fs) type_ref(f.type);
  }

  const CheckedProgram& checked_;
  std::deque<std::string> pending_interfaces_;
  std::deque<std::string> pending_types_;
};

}  // namespace

DependencySet compute_dependencies(const CheckedProgram& checked, std::string_view service) {
  const ServiceDecl& s = require_service(checked, service);
  Reachability r(checked);
  r.out.service = s.name;
  for (const auto& p : s.ports) {
    for (const auto& i : p.interfaces) r.add_interface(i);
  }
  if (s.config && s.config->type_name) r.add_type(*s.config->type_name);
  r.run();
  return std::move(r.out);
}

SourceProgram slice(const CheckedProgram& checked, std::string_view service) {
  DependencySet deps = compute_dependencies(checked, service);
  SourceProgram out;
  out.source_name = deps.service;
  for (const auto& d : checked.program().declarations) {
    bool keep = std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, TypeDecl>) return deps.types.count(x.name) > 0;
          if constexpr (std::is_same_v<T, InterfaceDecl>) return deps.interfaces.count(x.name) > 0;
          if constexpr (std::is_same_v<T, ServiceDecl>) return x.name == deps.service;
        },
        d);
    if (keep) out.declarations.push_back(d);
  }
  return out;
}

const Slice* SliceSet::find(std::string_view service) const {
  for (const auto& s : slices) {
    if (s.service == service) return &s;
  }
  return nullptr;
}

SliceSet slice_all(const CheckedProgram& checked) {
  auto services = checked.program().services();
  if (services.empty()) throw SliceError("NoServices", "the program declares no services");
  SliceSet set;
  for (const ServiceDecl* s : services) set.slices.push_back({s->name, slice(checked, s->name)});
  return set;
}

}  // namespace monoslice
