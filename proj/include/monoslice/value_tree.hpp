#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace monoslice {

/// A basic value carried at the root of a tree node.
using Scalar = std::variant<bool, std::int32_t, std::int64_t, double, std::string>;

enum class ScalarKind { Bool, Int, Long, Double, String };

inline ScalarKind kind_of(const Scalar& s) { return static_cast<ScalarKind>(s.index()); }

std::string_view kind_name(ScalarKind k);

/// Human-readable literal form (strings quoted, longs suffixed with L).
std::string to_display(const Scalar& s);

/// Runtime datum: an optional root value plus named, ordered sequences of
/// child trees. A child name is present iff its sequence is non-empty.
class ValueTree {
 public:
  using Sequence = std::vector<ValueTree>;
  using Children = std::map<std::string, Sequence, std::less<>>;

  ValueTree() = default;
  explicit ValueTree(Scalar root) : root_(std::move(root)) {}

  const std::optional<Scalar>& root() const { return root_; }
  bool has_root() const { return root_.has_value(); }
  void set_root(Scalar v) { root_ = std::move(v); }
  void clear_root() { root_.reset(); }

  const Children& children() const { return children_; }
  bool has_children() const { return !children_.empty(); }
  bool empty() const { return !root_ && children_.empty(); }

  /// Null when the name has no occurrences.
  const Sequence* find(std::string_view name) const;
  std::size_t count(std::string_view name) const;

  /// Element `index` of child `name`, extending the sequence with empty nodes.
  ValueTree& at(std::string_view name, std::size_t index = 0);
  /// Null when absent.
  const ValueTree* get(std::string_view name, std::size_t index = 0) const;

  void append(std::string_view name, ValueTree child);
  /// Replaces the whole sequence; an empty sequence erases the name.
  void set_sequence(std::string_view name, Sequence seq);
  void erase(std::string_view name);

  friend bool operator==(const ValueTree&, const ValueTree&) = default;

 private:
  std::optional<Scalar> root_;
  Children children_;
};

/// Debug rendering, e.g. `123L { a[0] = "x" }`.
std::string to_debug_string(const ValueTree& t);

}  // namespace monoslice
