#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mfsing/error.hpp"
#include "mfsing/ring.hpp"

namespace mfsing {

namespace detail {

/// Recursive-descent parser over the polynomial grammar
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := base ('^' natural)?
///   base   := rational | 'i' | identifier | '(' expr ')'
class PolyParser {
 public:
  PolyParser(std::string_view text, Ring ring) : text_(text), ring_(std::move(ring)) {}

  Poly parse() {
    skip_space();
    if (at_end()) fail("empty expression");
    Poly p = expr();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
    return p;
  }

 private:
  static constexpr std::uint32_t kMaxExponent = 10000;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  [[noreturn]] void fail(const std::string& what) const { fail_at(what, line_, col_); }
  [[noreturn]] static void fail_at(const std::string& what, std::size_t line, std::size_t col) {
    throw ParseError(what, static_cast<int>(line), static_cast<int>(col));
  }

  bool accept(char c) {
    skip_space();
    if (peek() != c) return false;
    advance();
    return true;
  }

  Poly expr() {
    skip_space();
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = peek() == '-';
      advance();
    }
    Poly acc = term();
    if (negate) acc = -acc;
    for (;;) {
      skip_space();
      if (peek() == '+') {
        advance();
        acc += term();
      } else if (peek() == '-') {
        advance();
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Poly term() {
    Poly acc = factor();
    while (accept('*')) acc = acc * factor();
    return acc;
  }

  Poly factor() {
    Poly b = base();
    skip_space();
    if (peek() != '^') return b;
    const std::size_t caret_line = line_, caret_col = col_;
    advance();
    skip_space();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail_at("expected exponent after '^'", caret_line, caret_col);
    const std::size_t num_line = line_, num_col = col_;
    std::string digits = read_digits();
    if (digits.size() > 6 || std::stoul(digits) > kMaxExponent) fail_at("exponent too large", num_line, num_col);
    return pow(b, static_cast<std::uint32_t>(std::stoul(digits)));
  }

  std::string read_digits() {
    std::string out;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      out.push_back(peek());
      advance();
    }
    return out;
  }

  Poly base() {
    skip_space();
    if (at_end()) fail("unexpected end of input");
    const char c = peek();
    if (c == '(') {
      const std::size_t open_line = line_, open_col = col_;
      advance();
      Poly inner = expr();
      if (!accept(')')) {
        if (at_end()) fail_at("unbalanced '('", open_line, open_col);
        fail("expected ')'");
      }
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return rational();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t id_line = line_, id_col = col_;
      std::string name;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
        name.push_back(peek());
        advance();
      }
      if (name == "i") return Poly::constant(ring_, Coefficient::i());
      auto idx = ring_->index_of(name);
      if (!idx) fail_at("unknown identifier '" + name + "'", id_line, id_col);
      return Poly::variable(ring_, *idx);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Poly rational() {
    const std::size_t num_line = line_, num_col = col_;
    std::string num = read_digits();
    Rational value(num);
    // a '/' directly after an integer continues the rational literal
    std::size_t save_pos = pos_, save_line = line_, save_col = col_;
    skip_space();
    if (peek() == '/') {
      advance();
      skip_space();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected denominator after '/'");
      std::string den = read_digits();
      mpz_class d(den);
      if (d == 0) fail_at("zero denominator in rational " + num + "/" + den, num_line, num_col);
      value = Rational(mpz_class(num), d);
      value.canonicalize();
    } else {
      pos_ = save_pos;
      line_ = save_line;
      col_ = save_col;
    }
    return Poly::constant(ring_, Coefficient(value));
  }

  std::string_view text_;
  Ring ring_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline std::string monomial_to_string(const Monomial& m, const RingContext& ring) {
  std::string out;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[j] == 0) continue;
    if (!out.empty()) out += "*";
    out += ring.var_names()[j];
    if (m[j] > 1) out += "^" + std::to_string(m[j]);
  }
  return out;
}

}  // namespace detail

/// Parses text into a polynomial over ring; whitespace is insignificant.
inline Poly parse_poly(std::string_view text, const Ring& ring) { return detail::PolyParser(text, ring).parse(); }

/// Highest degree first; inside a degree, variables earlier in the ring first.
/// The output parses back to the same polynomial.
inline std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<const Monomial*, const Coefficient*>> order;
  for (const auto& [m, c] : p.terms()) order.emplace_back(&m, &c);
  std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    if (x.first->degree() != y.first->degree()) return x.first->degree() > y.first->degree();
    return x.first->exponents() > y.first->exponents();
  });
  std::string out;
  for (const auto& [mp, cp] : order) {
    const Monomial& m = *mp;
    const Coefficient& c = *cp;
    const std::string mono = detail::monomial_to_string(m, *p.ring());
    bool negative = false;
    std::string coeff;
    if (c.is_real() || c.re() == 0) {
      // single real or single imaginary part: pull the sign out
      const Rational& part = c.is_real() ? c.re() : c.im();
      negative = part < 0;
      Rational mag = abs(part);
      std::string mag_s = rational_to_string(mag);
      if (c.is_real())
        coeff = (mag == 1 && !mono.empty()) ? "" : mag_s;
      else
        coeff = mag == 1 ? "i" : mag_s + "*i";
    } else {
      coeff = "(" + c.to_string() + ")";
    }
    if (out.empty())
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    out += coeff;
    if (!coeff.empty() && !mono.empty()) out += "*";
    out += mono;
  }
  return out;
}

}  // namespace mfsing
