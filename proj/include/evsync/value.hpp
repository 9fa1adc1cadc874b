#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace evsync {

/// Short bare token naming an object, an operation or a process-visible tag.
using Symbol = std::string;

/// Immutable-ish tagged value universe shared by sequential specifications,
/// base objects, histories and traces: null, 64-bit integer, boolean, symbol
/// (a short bare token) and list of values.  Lists nest; the builtin types
/// never need nesting deeper than two.
///
/// Lists that model fetch-and-cons content are stored newest-first: index 0
/// is the most recently added element.
class Value {
 public:
  enum class Kind { Null, Int, Bool, Symbol, List };
  using List = std::vector<Value>;

  /// Null value.
  Value() : rep_(std::monostate{}) {}

  static Value nil() { return Value(); }
  static Value integer(std::int64_t v) { return Value(Rep(v)); }
  static Value boolean(bool v) { return Value(Rep(v)); }
  static Value symbol(std::string name) { return Value(Rep(std::move(name))); }
  static Value list(List items) { return Value(Rep(std::move(items))); }

  Kind kind() const;
  bool is_null() const { return kind() == Kind::Null; }
  bool is_int() const { return kind() == Kind::Int; }
  bool is_bool() const { return kind() == Kind::Bool; }
  bool is_symbol() const { return kind() == Kind::Symbol; }
  bool is_list() const { return kind() == Kind::List; }

  /// Accessors throw KindMismatch when the value holds a different kind.
  std::int64_t as_int() const;
  bool as_bool() const;
  const std::string& as_symbol() const;
  const List& as_list() const;

  /// New list with \p head prepended to this list (newest-first cons).
  Value cons(const Value& head) const;

  bool operator==(const Value& other) const { return rep_ == other.rep_; }
  bool operator!=(const Value& other) const { return !(*this == other); }

  /// Renders the value in trace syntax: decimal integer, T, F, _ for null,
  /// [a,b,c] for lists (no interior spaces), bare token for symbols.
  std::string str() const;

  /// Parses one trace token produced by str().  Symbol tokens are accepted as
  /// a benign superset of the integer/bool/null/list grammar so that every
  /// in-memory value round-trips.  Throws Error on malformed input.
  static Value parse(std::string_view token);

 private:
  using Rep =
      std::variant<std::monostate, std::int64_t, bool, std::string, List>;
  explicit Value(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

}  // namespace evsync
