#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "hqmap/diagnostics.hpp"

namespace hqmap {

enum class token_kind : uint8_t {
  ident,
  integer,
  floating,
  lparen,
  rparen,
  lbrace,
  rbrace,
  lbracket,
  rbracket,
  comma,
  semicolon,
  end,
};

struct token {
  token_kind kind = token_kind::end;
  std::string_view text;
  uint64_t int_value = 0;
  double float_value = 0.0;
  source_loc loc;
};

// Hand-rolled scanner over the module-QASM surface syntax. `//` comments run
// to end of line; whitespace is insignificant.
class lexer {
public:
  explicit lexer(std::string_view src) : src_(src) {}

  token next() {
    skip_ws();
    token t;
    t.loc = {line_, static_cast<uint32_t>(pos_ - line_start_ + 1)};
    if (pos_ >= src_.size()) {
      t.kind = token_kind::end;
      return t;
    }
    char c = src_[pos_];
    switch (c) {
      case '(': return punct(t, token_kind::lparen);
      case ')': return punct(t, token_kind::rparen);
      case '{': return punct(t, token_kind::lbrace);
      case '}': return punct(t, token_kind::rbrace);
      case '[': return punct(t, token_kind::lbracket);
      case ']': return punct(t, token_kind::rbracket);
      case ',': return punct(t, token_kind::comma);
      case ';': return punct(t, token_kind::semicolon);
      default: break;
    }
    if (is_ident_start(c)) return ident(t);
    if (is_digit(c) || c == '-' || c == '+') return number(t);
    throw parse_error(t.loc, std::string("unexpected character '") + c + "'");
  }

private:
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
        line_start_ = pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  token punct(token t, token_kind k) {
    t.kind = k;
    t.text = src_.substr(pos_, 1);
    ++pos_;
    return t;
  }

  token ident(token t) {
    size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
    t.kind = token_kind::ident;
    t.text = src_.substr(start, pos_ - start);
    return t;
  }

  token number(token t) {
    size_t start = pos_;
    if (src_[pos_] == '-' || src_[pos_] == '+') ++pos_;
    if (pos_ >= src_.size() || !is_digit(src_[pos_]))
      throw parse_error(t.loc, "malformed number");
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    bool is_float = false;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      is_float = true;
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      is_float = true;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    t.text = src_.substr(start, pos_ - start);
    if (is_float || t.text[0] == '-' || t.text[0] == '+') {
      t.kind = token_kind::floating;
      t.float_value = std::stod(std::string(t.text));
    } else {
      t.kind = token_kind::integer;
      t.int_value = std::stoull(std::string(t.text));
      t.float_value = static_cast<double>(t.int_value);
    }
    return t;
  }

  std::string_view src_;
  size_t pos_ = 0;
  size_t line_start_ = 0;
  uint32_t line_ = 1;
};

} // namespace hqmap
