#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "dcoh/errors.hpp"

namespace dcoh {

// Recursive-descent parser for the element syntax shared by fields, algebras,
// operators and multiplicative functions. A Builder supplies the semantics:
//
//   Value number(const mpz_class&); Value atom(std::string_view);
//   Value add/sub/mul/div(const Value&, const Value&); Value neg(const Value&);
//   Value pow(const Value&, long);
//
// and optionally
//
//   Value sigma(const Value&, unsigned);          enables  s(x), s^j(x)
//   Value tensor(const Value&, const Value&);     enables  x # y
//
// Precedence, loosest first: + -, * /, #, unary -, ^.
template <class Builder>
class ExprParser {
 public:
  using Value = typename Builder::Value;

  ExprParser(std::string_view text, Builder& b) : s_(text), b_(b) {}

  Value parse() {
    Value v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected input");
    return v;
  }

  /// Comma separated list of expressions at top level.
  std::vector<Value> parse_list() {
    std::vector<Value> out;
    out.push_back(expr());
    skip();
    while (pos_ < s_.size() && s_[pos_] == ',') {
      ++pos_;
      out.push_back(expr());
      skip();
    }
    if (pos_ != s_.size()) fail("unexpected input");
    return out;
  }

 private:
  static constexpr bool kSigma = requires(Builder& b, const Value& v) { b.sigma(v, 1u); };
  static constexpr bool kTensor = requires(Builder& b, const Value& v) { b.tensor(v, v); };

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Value expr() {
    Value v = term();
    for (;;) {
      if (eat('+'))
        v = b_.add(v, term());
      else if (eat('-'))
        v = b_.sub(v, term());
      else
        return v;
    }
  }

  Value term() {
    Value v = tfactor();
    for (;;) {
      if (eat('*'))
        v = b_.mul(v, tfactor());
      else if (eat('/'))
        v = b_.div(v, tfactor());
      else
        return v;
    }
  }

  Value tfactor() {
    Value v = unary();
    if constexpr (kTensor) {
      while (eat('#')) v = b_.tensor(v, unary());
    } else {
      if (peek() == '#') fail("tensor symbol not allowed here");
    }
    return v;
  }

  Value unary() {
    if (eat('-')) return b_.neg(unary());
    if (eat('+')) return unary();
    return power();
  }

  long exponent() {
    bool negative = false;
    bool paren = eat('(');
    if (eat('-')) negative = true;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    long e = std::stol(std::string(s_.substr(start, pos_ - start)));
    if (paren && !eat(')')) fail("expected ')'");
    return negative ? -e : e;
  }

  Value power() {
    Value v = primary();
    if (eat('^')) v = b_.pow(v, exponent());
    return v;
  }

  Value primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Value v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return b_.number(mpz_class(std::string(s_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      if constexpr (kSigma) {
        if (name == "s") {
          std::size_t save = pos_;
          long j = 1;
          if (eat('^')) {
            skip();
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
              j = exponent();
            else
              j = -1;
          }
          if (j >= 0 && eat('(')) {
            Value inner = expr();
            if (!eat(')')) fail("expected ')'");
            return b_.sigma(inner, static_cast<unsigned>(j));
          }
          pos_ = save;
        }
      }
      return b_.atom(name);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  Builder& b_;
  std::size_t pos_ = 0;
};

template <class Builder>
typename Builder::Value parse_expression(std::string_view text, Builder& b) {
  return ExprParser<Builder>(text, b).parse();
}

template <class Builder>
std::vector<typename Builder::Value> parse_expression_list(std::string_view text, Builder& b) {
  return ExprParser<Builder>(text, b).parse_list();
}

/// Splits on a separator that is not nested inside brackets.
inline std::vector<std::string> split_top_level(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim_copy(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace dcoh
