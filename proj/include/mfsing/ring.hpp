#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mfsing/coefficient.hpp"
#include "mfsing/error.hpp"
#include "mfsing/linalg.hpp"

namespace mfsing {

/// Exponent vector. Its length always equals the variable count of the ring
/// the owning polynomial lives in.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) {}

  static Monomial variable(std::size_t nvars, std::size_t index, std::uint32_t power = 1) {
    Monomial m(nvars);
    m.exps_[index] = power;
    return m;
  }

  std::size_t size() const { return exps_.size(); }
  std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
  std::uint32_t& operator[](std::size_t i) { return exps_[i]; }
  const std::vector<std::uint32_t>& exponents() const { return exps_; }

  std::uint32_t degree() const {
    return std::accumulate(exps_.begin(), exps_.end(), std::uint32_t{0});
  }

  bool divides(const Monomial& other) const {
    for (std::size_t i = 0; i < exps_.size(); ++i)
      if (exps_[i] > other.exps_[i]) return false;
    return true;
  }

  /// Precondition: divides(other).
  Monomial quotient_into(const Monomial& other) const {
    Monomial q(other);
    for (std::size_t i = 0; i < exps_.size(); ++i) q.exps_[i] -= exps_[i];
    return q;
  }

  Monomial& operator*=(const Monomial& o) {
    for (std::size_t i = 0; i < exps_.size(); ++i) exps_[i] += o.exps_[i];
    return *this;
  }
  friend Monomial operator*(Monomial a, const Monomial& b) { return a *= b; }

  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r(a);
    for (std::size_t i = 0; i < r.exps_.size(); ++i) r.exps_[i] = std::max(a.exps_[i], b.exps_[i]);
    return r;
  }

  bool is_one() const {
    return std::all_of(exps_.begin(), exps_.end(), [](auto e) { return e == 0; });
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<std::uint32_t> exps_;
};

/// All exponent vectors of total degree d in n variables.
inline std::vector<Monomial> monomials_of_degree(std::size_t n, std::uint32_t d) {
  std::vector<Monomial> out;
  Monomial cur(n);
  auto rec = [&](auto&& self, std::size_t j, std::uint32_t left) -> void {
    if (j + 1 == n) {
      cur[j] = left;
      out.push_back(cur);
      return;
    }
    for (std::uint32_t e = left + 1; e-- > 0;) {
      cur[j] = e;
      self(self, j + 1, left - e);
    }
    cur[j] = 0;
  };
  if (n > 0) rec(rec, 0, d);
  return out;
}

/// Canonical storage order of terms: total degree ascending, then exponent
/// vectors lexicographically descending (z0 before z1 within a degree).
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    auto da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.exponents() > b.exponents();
  }
};

inline bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

/// Ordered, distinct variable names of a polynomial ring Q(i)[z_0..z_n].
class RingContext {
 public:
  explicit RingContext(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) precondition_failed("a ring needs at least one variable");
    std::set<std::string> seen;
    for (const auto& n : names_) {
      if (!is_identifier(n)) precondition_failed("invalid variable name '" + n + "'");
      if (n == "i") precondition_failed("'i' is reserved for the imaginary unit");
      if (!seen.insert(n).second) precondition_failed("duplicate variable name '" + n + "'");
    }
  }

  const std::vector<std::string>& var_names() const { return names_; }
  std::size_t var_count() const { return names_.size(); }

  std::optional<std::size_t> index_of(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
  }

  friend bool operator==(const RingContext& a, const RingContext& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
};

using Ring = std::shared_ptr<const RingContext>;

inline Ring make_ring(std::vector<std::string> names) {
  return std::make_shared<const RingContext>(std::move(names));
}

inline bool same_ring(const Ring& a, const Ring& b) { return a == b || *a == *b; }

/// The order of the zero polynomial.
inline constexpr std::uint32_t kInfiniteOrder = std::numeric_limits<std::uint32_t>::max();

/// Polynomial with Gaussian-rational coefficients. No stored coefficient is zero.
class Poly {
 public:
  using TermMap = std::map<Monomial, Coefficient, GradedLexLess>;

  Poly() = default;
  explicit Poly(Ring ring) : ring_(std::move(ring)) {}
  Poly(Ring ring, TermMap terms) : ring_(std::move(ring)), terms_(std::move(terms)) {
    std::erase_if(terms_, [](const auto& t) { return t.second.is_zero(); });
  }

  static Poly constant(Ring ring, const Coefficient& c) {
    Poly p(std::move(ring));
    if (!c.is_zero()) p.terms_.emplace(Monomial(p.ring_->var_count()), c);
    return p;
  }
  static Poly variable(Ring ring, std::size_t index) {
    Poly p(std::move(ring));
    if (index >= p.ring_->var_count()) precondition_failed("variable index out of range");
    p.terms_.emplace(Monomial::variable(p.ring_->var_count(), index), Coefficient(1));
    return p;
  }
  static Poly term(Ring ring, Monomial m, const Coefficient& c) {
    Poly p(std::move(ring));
    if (m.size() != p.ring_->var_count()) precondition_failed("monomial length does not match ring");
    if (!c.is_zero()) p.terms_.emplace(std::move(m), c);
    return p;
  }

  const Ring& ring() const { return ring_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Coefficient coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Coefficient() : it->second;
  }
  Coefficient constant_term() const {
    if (terms_.empty() || terms_.begin()->first.degree() != 0) return Coefficient();
    return terms_.begin()->second;
  }

  /// Minimal total degree over the support; kInfiniteOrder for zero.
  std::uint32_t order() const { return terms_.empty() ? kInfiniteOrder : terms_.begin()->first.degree(); }
  /// Maximal total degree; 0 for zero.
  std::uint32_t degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }

  /// Drops every term of total degree > max_degree.
  Poly truncated(std::uint32_t max_degree) const {
    Poly r(ring_);
    for (const auto& [m, c] : terms_) {
      if (m.degree() > max_degree) break;
      r.terms_.emplace_hint(r.terms_.end(), m, c);
    }
    return r;
  }

  void truncate_in_place(std::uint32_t max_degree) {
    while (!terms_.empty() && terms_.rbegin()->first.degree() > max_degree)
      terms_.erase(std::prev(terms_.end()));
  }

  Poly homogeneous_part(std::uint32_t d) const {
    Poly r(ring_);
    for (const auto& [m, c] : terms_)
      if (m.degree() == d) r.terms_.emplace_hint(r.terms_.end(), m, c);
    return r;
  }

  Poly operator-() const {
    Poly r(*this);
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  Poly& operator+=(const Poly& o) { return axpy(Coefficient(1), Monomial(), o); }
  Poly& operator-=(const Poly& o) { return axpy(Coefficient(-1), Monomial(), o); }

  /// this += c * x^shift * o. An empty shift means the unit monomial.
  Poly& axpy(const Coefficient& c, const Monomial& shift, const Poly& o) {
    check_ring(o);
    if (c.is_zero()) return *this;
    const bool has_shift = shift.size() != 0 && !shift.is_one();
    for (const auto& [m, oc] : o.terms_) {
      Monomial key = has_shift ? m * shift : m;
      auto [it, inserted] = terms_.try_emplace(std::move(key));
      it->second += c * oc;
      if (it->second.is_zero()) terms_.erase(it);
    }
    return *this;
  }

  Poly scaled(const Coefficient& c) const {
    if (c.is_zero()) return Poly(ring_);
    Poly r(*this);
    for (auto& [m, v] : r.terms_) v *= c;
    return r;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_ring(b);
    Poly r(a.ring_);
    for (const auto& [mb, cb] : b.terms_) r.axpy(cb, mb, a);
    return r;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  /// Product truncated at total degree max_degree (jet multiplication).
  static Poly mul_truncated(const Poly& a, const Poly& b, std::uint32_t max_degree) {
    a.check_ring(b);
    Poly r(a.ring_);
    for (const auto& [mb, cb] : b.terms_) {
      auto db = mb.degree();
      if (db > max_degree) break;
      for (const auto& [ma, ca] : a.terms_) {
        if (ma.degree() + db > max_degree) break;
        auto [it, inserted] = r.terms_.try_emplace(ma * mb);
        it->second += ca * cb;
        if (it->second.is_zero()) r.terms_.erase(it);
      }
    }
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    return same_ring(a.ring_, b.ring_) && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Removes a single term (used by reduction routines that consume terms).
  void erase_term(const Monomial& m) { terms_.erase(m); }

  void check_ring(const Poly& o) const {
    if (!ring_ || !o.ring_ || !same_ring(ring_, o.ring_))
      precondition_failed("ring mismatch between polynomial operands");
  }

 private:
  Ring ring_;
  TermMap terms_;
};

inline Poly add(const Poly& p, const Poly& q) { return p + q; }
inline Poly mul(const Poly& p, const Poly& q) { return p * q; }
inline std::uint32_t order(const Poly& p) { return p.order(); }

inline Poly pow(const Poly& p, std::uint32_t e) {
  Poly r = Poly::constant(p.ring(), Coefficient(1));
  Poly base = p;
  while (e) {
    if (e & 1u) r *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return r;
}

inline Poly partial_derivative(const Poly& p, std::size_t var_index) {
  if (var_index >= p.ring()->var_count())
    precondition_failed("partial derivative: variable index " + std::to_string(var_index) +
                        " out of range");
  Poly::TermMap out;
  for (const auto& [m, c] : p.terms()) {
    auto e = m[var_index];
    if (e == 0) continue;
    Monomial d(m);
    d[var_index] = e - 1;
    out.emplace(std::move(d), c * Coefficient(static_cast<long>(e)));
  }
  return Poly(p.ring(), std::move(out));
}

/// Replaces variable j of p by images[j]. All images live in one target ring
/// and vanish at the origin. With max_degree set, the result is the jet of
/// that degree (cheaper: every intermediate product is truncated).
inline Poly substitute(const Poly& p, std::span<const Poly> images,
                       std::optional<std::uint32_t> max_degree = std::nullopt) {
  if (images.size() != p.ring()->var_count())
    precondition_failed("substitute: expected one image per source variable");
  if (images.empty()) internal_error("substitute: empty image list");
  const Ring& target = images.front().ring();
  for (const auto& im : images) {
    if (!same_ring(im.ring(), target)) precondition_failed("substitute: images live in different rings");
    if (!im.constant_term().is_zero())
      precondition_failed("substitute: image with nonzero constant term does not fix the origin");
  }
  auto mult = [&](const Poly& a, const Poly& b) {
    return max_degree ? Poly::mul_truncated(a, b, *max_degree) : a * b;
  };
  // powers[j][e] = images[j]^e, filled lazily
  std::vector<std::vector<Poly>> powers(images.size());
  auto power = [&](std::size_t j, std::uint32_t e) -> const Poly& {
    auto& pw = powers[j];
    if (pw.empty()) pw.push_back(Poly::constant(target, Coefficient(1)));
    while (pw.size() <= e) pw.push_back(mult(pw.back(), images[j]));
    return pw[e];
  };
  Poly result(target);
  for (const auto& [m, c] : p.terms()) {
    if (max_degree && m.degree() > *max_degree) break;  // images have order >= 1
    Poly t = Poly::constant(target, c);
    for (std::size_t j = 0; j < m.size() && !t.is_zero(); ++j)
      if (m[j] != 0) t = mult(t, power(j, m[j]));
    result += t;
  }
  return result;
}

/// Reinterprets p in a ring whose variables include all of p's variable names.
inline Poly embed(const Poly& p, const Ring& target) {
  const auto& names = p.ring()->var_names();
  std::vector<std::size_t> where(names.size());
  for (std::size_t j = 0; j < names.size(); ++j) {
    auto idx = target->index_of(names[j]);
    if (!idx) precondition_failed("embed: variable '" + names[j] + "' missing from target ring");
    where[j] = *idx;
  }
  Poly::TermMap out;
  for (const auto& [m, c] : p.terms()) {
    Monomial t(target->var_count());
    for (std::size_t j = 0; j < m.size(); ++j) t[where[j]] = m[j];
    out.emplace(std::move(t), c);
  }
  return Poly(target, std::move(out));
}

/// Reinterprets p in a ring with the same variable count, matching variables by position.
inline Poly rename(const Poly& p, const Ring& target) {
  if (target->var_count() != p.ring()->var_count())
    precondition_failed("rename: variable counts differ");
  return Poly(target, p.terms());
}

/// H[j][k] = d_j d_k p evaluated at the origin.
inline DenseMatrix hessian_at_zero(const Poly& p) {
  const std::size_t n = p.ring()->var_count();
  DenseMatrix h(n, n);
  for (const auto& [m, c] : p.terms()) {
    if (m.degree() < 2) continue;
    if (m.degree() > 2) break;
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j)
      for (std::uint32_t e = 0; e < m[j]; ++e) idx.push_back(j);
    if (idx[0] == idx[1]) {
      h(idx[0], idx[0]) = c * Coefficient(2);
    } else {
      h(idx[0], idx[1]) = c;
      h(idx[1], idx[0]) = c;
    }
  }
  return h;
}

}  // namespace mfsing
