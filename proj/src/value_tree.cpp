#include "monoslice/value_tree.hpp"

#include <charconv>
#include <sstream>

namespace monoslice {

std::string_view kind_name(ScalarKind k) {
  switch (k) {
    case ScalarKind::Bool: return "bool";
    case ScalarKind::Int: return "int";
    case ScalarKind::Long: return "long";
    case ScalarKind::Double: return "double";
    case ScalarKind::String: return "string";
  }
  return "?";
}

namespace {

std::string format_double(double d) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, end);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quoted(const std::string& value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static constexpr char kHex[] = "0123456789abcdef";
          out += "\\u00";
          out += kHex[(c >> 4) & 0xF];
          out += kHex[c & 0xF];
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_display(const Scalar& s) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int32_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v) + "L";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          return quoted(v);
        }
      },
      s);
}

const ValueTree::Sequence* ValueTree::find(std::string_view name) const {
  auto it = children_.find(name);
  return it == children_.end() ? nullptr : &it->second;
}

std::size_t ValueTree::count(std::string_view name) const {
  const auto* seq = find(name);
  return seq ? seq->size() : 0;
}

ValueTree& ValueTree::at(std::string_view name, std::size_t index) {
  auto it = children_.find(name);
  if (it == children_.end()) it = children_.emplace(std::string(name), Sequence{}).first;
  if (it->second.size() <= index) it->second.resize(index + 1);
  return it->second[index];
}

const ValueTree* ValueTree::get(std::string_view name, std::size_t index) const {
  const auto* seq = find(name);
  if (!seq || index >= seq->size()) return nullptr;
  return &(*seq)[index];
}

void ValueTree::append(std::string_view name, ValueTree child) {
  auto it = children_.find(name);
  if (it == children_.end()) it = children_.emplace(std::string(name), Sequence{}).first;
  it->second.push_back(std::move(child));
}

void ValueTree::set_sequence(std::string_view name, Sequence seq) {
  if (seq.empty()) {
    erase(name);
    return;
  }
  auto it = children_.find(name);
  if (it == children_.end()) {
    children_.emplace(std::string(name), std::move(seq));
  } else {
    it->second = std::move(seq);
  }
}

void ValueTree::erase(std::string_view name) {
  auto it = children_.find(name);
  if (it != children_.end()) children_.erase(it);
}

namespace {

void debug_into(std::ostringstream& out, const ValueTree& t) {
  if (t.has_root()) out << to_display(*t.root());
  if (!t.has_children()) {
    if (!t.has_root()) out << "{}";
    return;
  }
  if (t.has_root()) out << ' ';
  out << "{ ";
  bool first = true;
  for (const auto& [name, seq] : t.children()) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (!first) out << ", ";
      first = false;
      out << name << '[' << i << "] = ";
      debug_into(out, seq[i]);
    }
  }
  out << " }";
}

}  // namespace

std::string to_debug_string(const ValueTree& t) {
  std::ostringstream out;
  debug_into(out, t);
  return out.str();
}

}  // namespace monoslice
