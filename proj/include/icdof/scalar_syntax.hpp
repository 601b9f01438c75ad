#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "icdof/error.hpp"
#include "icdof/exact_scalar.hpp"

namespace icdof {

namespace detail {

/*
 * Recursive-descent reader for the scalar text syntax:
 *
 *   expr    := ['+'|'-'] term (('+'|'-') term)*
 *   term    := power (('*'|'/') power)*
 *   power   := primary ['^' integer]
 *   primary := number | identifier | '(' expr ')'
 *   number  := digits ['.' digits]
 *
 * Division is only by nonzero rational constants. U+2212 is read as '-'.
 */
class ScalarReader {
 public:
  explicit ScalarReader(std::string_view text) : text_(normalize(text)) {}

  ExactScalar read() {
    ExactScalar value = expr();
    skip_space();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  static std::string normalize(std::string_view text) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
          static_cast<unsigned char>(text[i + 1]) == 0x88 && static_cast<unsigned char>(text[i + 2]) == 0x92) {
        out.push_back('-');
        i += 2;
      } else {
        out.push_back(text[i]);
      }
    }
    return out;
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::parse_error, "malformed scalar '" + text_ + "': " + what + " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExactScalar expr() {
    skip_space();
    bool negative = false;
    if (accept('-')) {
      negative = true;
    } else {
      accept('+');
    }
    ExactScalar value = term();
    if (negative) value = -value;
    for (;;) {
      if (accept('+')) {
        value += term();
      } else if (accept('-')) {
        value -= term();
      } else {
        return value;
      }
    }
  }

  ExactScalar term() {
    ExactScalar value = power();
    for (;;) {
      if (accept('*')) {
        value *= power();
      } else if (accept('/')) {
        const ExactScalar divisor = power();
        auto q = divisor.as_rational();
        if (!q) error("division by a non-constant");
        if (q->is_zero()) error("division by zero");
        value = value.scaled(Rational(1) / *q);
      } else {
        return value;
      }
    }
  }

  ExactScalar power() {
    ExactScalar base = primary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) error("expected integer exponent");
    if (pos_ - start > 4) error("exponent too large");
    const int exponent = std::stoi(text_.substr(start, pos_ - start));
    if (exponent > 1000) error("exponent too large");
    ExactScalar out(1);
    for (int i = 0; i < exponent; ++i) out *= base;
    return out;
  }

  ExactScalar primary() {
    skip_space();
    if (pos_ >= text_.size()) error("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExactScalar inner = expr();
      if (!accept(')')) error("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) error("exponent notation is not exact");
      return ExactScalar(Rational::parse(std::string_view(text_).substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      return ExactScalar(Generator::named(std::string_view(text_).substr(start, pos_ - start)));
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses e.g. "2*g1^2*g2 + 1/3", "-0.08", "h_1_2 - h_2_1".
inline ExactScalar parse_scalar(std::string_view text) { return detail::ScalarReader(text).read(); }

}  // namespace icdof
