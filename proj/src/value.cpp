#include "evsync/value.hpp"

#include <cctype>
#include <charconv>

#include "evsync/errors.hpp"

namespace evsync {
namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

/// Recursive-descent parse of one value starting at pos; advances pos.
Value parse_at(std::string_view s, std::size_t& pos) {
  if (pos >= s.size()) throw Error("empty value token");
  char c = s[pos];
  if (c == '[') {
    ++pos;
    Value::List items;
    if (pos < s.size() && s[pos] == ']') {
      ++pos;
      return Value::list(std::move(items));
    }
    for (;;) {
      items.push_back(parse_at(s, pos));
      if (pos >= s.size()) throw Error("unterminated list");
      if (s[pos] == ',') {
        ++pos;
        continue;
      }
      if (s[pos] == ']') {
        ++pos;
        return Value::list(std::move(items));
      }
      throw Error(std::string("unexpected character '") + s[pos] +
                  "' in list");
    }
  }
  if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
    std::size_t start = pos;
    if (c == '-') ++pos;
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      throw Error("lone '-' is not a value");
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    std::int64_t out = 0;
    auto [ptr, ec] =
        std::from_chars(s.data() + start, s.data() + pos, out);
    if (ec != std::errc() || ptr != s.data() + pos)
      throw Error("integer out of range: " +
                  std::string(s.substr(start, pos - start)));
    return Value::integer(out);
  }
  if (is_ident_start(c)) {
    std::size_t start = pos;
    while (pos < s.size() && is_ident_char(s[pos])) ++pos;
    std::string_view tok = s.substr(start, pos - start);
    if (tok == "T") return Value::boolean(true);
    if (tok == "F") return Value::boolean(false);
    if (tok == "_") return Value::nil();
    return Value::symbol(std::string(tok));
  }
  throw Error(std::string("unexpected character '") + c + "' in value");
}

}  // namespace

Value::Kind Value::kind() const {
  switch (rep_.index()) {
    case 0: return Kind::Null;
    case 1: return Kind::Int;
    case 2: return Kind::Bool;
    case 3: return Kind::Symbol;
    default: return Kind::List;
  }
}

std::int64_t Value::as_int() const {
  if (!is_int()) throw KindMismatch("value is not an integer: " + str());
  return std::get<std::int64_t>(rep_);
}

bool Value::as_bool() const {
  if (!is_bool()) throw KindMismatch("value is not a boolean: " + str());
  return std::get<bool>(rep_);
}

const std::string& Value::as_symbol() const {
  if (!is_symbol()) throw KindMismatch("value is not a symbol: " + str());
  return std::get<std::string>(rep_);
}

const Value::List& Value::as_list() const {
  if (!is_list()) throw KindMismatch("value is not a list: " + str());
  return std::get<List>(rep_);
}

Value Value::cons(const Value& head) const {
  List out;
  const List& tail = as_list();
  out.reserve(tail.size() + 1);
  out.push_back(head);
  out.insert(out.end(), tail.begin(), tail.end());
  return Value::list(std::move(out));
}

std::string Value::str() const {
  switch (kind()) {
    case Kind::Null: return "_";
    case Kind::Int: return std::to_string(std::get<std::int64_t>(rep_));
    case Kind::Bool: return std::get<bool>(rep_) ? "T" : "F";
    case Kind::Symbol: return std::get<std::string>(rep_);
    case Kind::List: {
      std::string out = "[";
      const List& items = std::get<List>(rep_);
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i].str();
      }
      out += ']';
      return out;
    }
  }
  return "_";  // unreachable
}

Value Value::parse(std::string_view token) {
  std::size_t pos = 0;
  Value v = parse_at(token, pos);
  if (pos != token.size())
    throw Error("trailing characters after value: " + std::string(token));
  return v;
}

}  // namespace evsync
