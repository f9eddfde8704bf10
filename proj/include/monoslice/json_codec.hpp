#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "monoslice/value_tree.hpp"

namespace monoslice {

class JsonError : public std::runtime_error {
 public:
  JsonError(int line, int column, const std::string& message)
      : std::runtime_error(message), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// JSON <-> ValueTree mapping:
//   scalar leaf      <-> JSON scalar (integral number decodes as long)
//   empty node       <-> null
//   children         <-> object; key "$" carries a root that coexists with children
//   sequence of n>1  <-> array; a singleton sequence is the bare element
nlohmann::json to_json(const ValueTree& tree);
ValueTree from_json(const nlohmann::json& doc);

std::string encode_json(const ValueTree& tree);
ValueTree decode_json(std::string_view text);

/// Applies the number canonicalization the wire performs (int roots become
/// long) so that in-process delivery matches a JSON round trip.
ValueTree canonicalize_wire(ValueTree tree);

}  // namespace monoslice
