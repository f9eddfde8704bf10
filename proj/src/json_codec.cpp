#include "monoslice/json_codec.hpp"

#include <limits>

namespace monoslice {

using nlohmann::json;

namespace {

constexpr std::string_view kRootKey = "$";

json scalar_to_json(const Scalar& s) {
  return std::visit([](const auto& v) { return json(v); }, s);
}

Scalar scalar_from_json(const json& j) {
  switch (j.type()) {
    case json::value_t::boolean: return j.get<bool>();
    case json::value_t::number_integer: return j.get<std::int64_t>();
    case json::value_t::number_unsigned: {
      auto u = j.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        throw JsonError(0, 0, "integer out of range for long");
      }
      return static_cast<std::int64_t>(u);
    }
    case json::value_t::number_float: return j.get<double>();
    case json::value_t::string: return j.get<std::string>();
    default: throw JsonError(0, 0, "expected a scalar JSON value");
  }
}

ValueTree node_from_json(const json& j);

ValueTree node_from_json(const json& j) {
  if (j.is_null()) return {};
  if (j.is_array()) throw JsonError(0, 0, "nested arrays have no tree representation");
  if (!j.is_object()) return ValueTree(scalar_from_json(j));
  ValueTree node;
  for (const auto& [key, value] : j.items()) {
    if (key == kRootKey) {
      if (!value.is_null()) node.set_root(scalar_from_json(value));
      continue;
    }
    if (value.is_array()) {
      ValueTree::Sequence seq;
      seq.reserve(value.size());
      for (const auto& element : value) seq.push_back(node_from_json(element));
      node.set_sequence(key, std::move(seq));
    } else {
      node.append(key, node_from_json(value));
    }
  }
  return node;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

void canonicalize_into(ValueTree& t) {
  if (t.has_root()) {
    if (const auto* i = std::get_if<std::int32_t>(&*t.root())) {
      t.set_root(static_cast<std::int64_t>(*i));
    }
  }
  if (!t.has_children()) return;
  ValueTree::Children children = t.children();
  for (auto& [name, seq] : children) {
    for (auto& child : seq) canonicalize_into(child);
    t.set_sequence(name, std::move(seq));
  }
}

}  // namespace

json to_json(const ValueTree& tree) {
  if (!tree.has_children()) {
    return tree.has_root() ? scalar_to_json(*tree.root()) : json(nullptr);
  }
  json obj = json::object();
  if (tree.has_root()) obj[std::string(kRootKey)] = scalar_to_json(*tree.root());
  for (const auto& [name, seq] : tree.children()) {
    if (seq.size() == 1) {
      obj[name] = to_json(seq.front());
    } else {
      json arr = json::array();
      for (const auto& child : seq) arr.push_back(to_json(child));
      obj[name] = std::move(arr);
    }
  }
  return obj;
}

ValueTree from_json(const json& doc) {
  if (doc.is_array()) throw JsonError(1, 1, "top-level array has no tree representation");
  return node_from_json(doc);
}

std::string encode_json(const ValueTree& tree) {
  return to_json(tree).dump(-1, ' ', false, json::error_handler_t::replace);
}

ValueTree decode_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte);
    throw JsonError(line, column, e.what());
  }
  try {
    return from_json(doc);
  } catch (const JsonError& e) {
    throw JsonError(1, 1, e.what());
  }
}

ValueTree canonicalize_wire(ValueTree tree) {
  canonicalize_into(tree);
  return tree;
}

}  // namespace monoslice
