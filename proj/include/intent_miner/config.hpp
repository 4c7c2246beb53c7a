#pragma once

// A small TOML subset for run configuration: [table] headers, bare or
// dotted keys, basic strings, integers, floats, booleans and single-line
// arrays of those. Keys are flattened to "table.key".

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "intent_miner/error.hpp"

namespace intent_miner {

struct TomlValue {
  enum class Kind { string, integer, floating, boolean, array };
  Kind kind = Kind::string;
  std::string s;
  std::int64_t i = 0;
  double d = 0.0;
  bool b = false;
  std::vector<TomlValue> items;

  bool is_number() const { return kind == Kind::integer || kind == Kind::floating; }
  double number() const { return kind == Kind::integer ? static_cast<double>(i) : d; }
};

using TomlTable = std::map<std::string, TomlValue>;

namespace detail {

class TomlLine {
 public:
  TomlLine(std::string_view s, std::size_t line_no) : s_(s), line_(line_no) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("config line " + std::to_string(line_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end_or_comment() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  bool consume(char c) {
    skip_ws();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  std::string key() {
    skip_ws();
    std::string out;
    while (true) {
      skip_ws();
      if (peek() == '"') {
        out += basic_string();
      } else {
        const auto start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-'))
          ++pos_;
        if (pos_ == start) fail("expected a key");
        out += s_.substr(start, pos_ - start);
      }
      skip_ws();
      if (peek() != '.') break;
      ++pos_;
      out += '.';
    }
    return out;
  }

  std::string basic_string() {
    if (peek() != '"') fail("expected '\"'");
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size()) fail("unterminated escape");
        switch (s_[pos_++]) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail("unsupported escape");
        }
      }
      out.push_back(c);
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  TomlValue value() {
    skip_ws();
    TomlValue v;
    const char c = peek();
    if (c == '"') {
      v.s = basic_string();
      return v;
    }
    if (c == '[') {
      ++pos_;
      v.kind = TomlValue::Kind::array;
      if (consume(']')) return v;
      while (true) {
        v.items.push_back(value());
        if (consume(']')) return v;
        if (!consume(',')) fail("expected ',' or ']' in array");
        if (consume(']')) return v;  // trailing comma
      }
    }
    const auto start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' && s_[pos_] != ' ' &&
           s_[pos_] != '\t')
      ++pos_;
    std::string token(s_.substr(start, pos_ - start));
    if (token == "true" || token == "false") {
      v.kind = TomlValue::Kind::boolean;
      v.b = token == "true";
      return v;
    }
    std::string digits;
    for (char ch : token)
      if (ch != '_') digits.push_back(ch);
    if (digits.empty()) fail("expected a value");
    const char* first = digits.data() + (digits[0] == '+' ? 1 : 0);
    const char* last = digits.data() + digits.size();
    if (digits.find_first_of(".eE") == std::string::npos) {
      v.kind = TomlValue::Kind::integer;
      auto [p, ec] = std::from_chars(first, last, v.i);
      if (ec != std::errc() || p != last) fail("bad value '" + token + "'");
      return v;
    }
    v.kind = TomlValue::Kind::floating;
    auto [p, ec] = std::from_chars(first, last, v.d);
    if (ec != std::errc() || p != last) fail("bad value '" + token + "'");
    return v;
  }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline TomlTable parse_toml(std::istream& in) {
  TomlTable out;
  std::string table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    detail::TomlLine p(line, line_no);
    if (p.at_end_or_comment()) continue;
    if (p.consume('[')) {
      if (p.peek() == '[') p.fail("arrays of tables are not supported");
      table = p.key();
      if (!p.consume(']')) p.fail("expected ']'");
      if (!p.at_end_or_comment()) p.fail("trailing characters after table header");
      continue;
    }
    auto key = p.key();
    if (!p.consume('=')) p.fail("expected '='");
    auto v = p.value();
    if (!p.at_end_or_comment()) p.fail("trailing characters after value");
    if (!table.empty()) key = table + "." + key;
    if (!out.emplace(key, std::move(v)).second) p.fail("duplicate key '" + key + "'");
  }
  return out;
}

inline TomlTable parse_toml(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_toml(in);
}

inline TomlTable load_toml(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  return parse_toml(in);
}

}  // namespace intent_miner
