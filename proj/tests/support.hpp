#pragma once

#include <random>
#include <string>
#include <vector>

#include "mfsing/classify.hpp"
#include "mfsing/mf.hpp"
#include "mfsing/text.hpp"
#include "oracle/jet_oracle.hpp"

namespace testing_support {

using namespace mfsing;

inline Ring ring_of(std::initializer_list<const char*> names) {
  std::vector<std::string> v(names.begin(), names.end());
  return make_ring(v);
}

inline Poly P(const Ring& r, const char* text) { return parse_poly(text, r); }
inline Germ G(const Ring& r, const char* text) { return Germ(parse_poly(text, r)); }

/// Simple singularities in two variables with their Milnor numbers, plus the
/// same polynomial for the oracle.
struct AdeCase {
  std::string name;
  std::string text;
  std::size_t mu;
  oracle::Poly oracle_f;
};

inline std::vector<AdeCase> ade_suite() {
  using oracle::make;
  return {
      {"A1", "z0^2 + z1^2", 1, make({{1, {2, 0}}, {1, {0, 2}}})},
      {"A2", "z0^3 + z1^2", 2, make({{1, {3, 0}}, {1, {0, 2}}})},
      {"A3", "z0^4 + z1^2", 3, make({{1, {4, 0}}, {1, {0, 2}}})},
      {"A4", "z0^5 + z1^2", 4, make({{1, {5, 0}}, {1, {0, 2}}})},
      {"A5", "z0^6 + z1^2", 5, make({{1, {6, 0}}, {1, {0, 2}}})},
      {"A6", "z0^7 + z1^2", 6, make({{1, {7, 0}}, {1, {0, 2}}})},
      {"D4", "z0^2*z1 + z1^3", 4, make({{1, {2, 1}}, {1, {0, 3}}})},
      {"D5", "z0^2*z1 + z1^4", 5, make({{1, {2, 1}}, {1, {0, 4}}})},
      {"D6", "z0^2*z1 + z1^5", 6, make({{1, {2, 1}}, {1, {0, 5}}})},
      {"E6", "z0^3 + z1^4", 6, make({{1, {3, 0}}, {1, {0, 4}}})},
      {"E7", "z0^3 + z0*z1^3", 7, make({{1, {3, 0}}, {1, {1, 3}}})},
      {"E8", "z0^3 + z1^5", 8, make({{1, {3, 0}}, {1, {0, 5}}})},
  };
}

inline Ring ade_ring() { return ring_of({"z0", "z1"}); }

class Random {
 public:
  explicit Random(unsigned seed) : gen_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(gen_); }

  Coefficient coefficient(bool complex = false) {
    Rational re(integer(-5, 5), integer(1, 3));
    Rational im = complex && chance(0.3) ? Rational(integer(-3, 3), integer(1, 2)) : Rational(0);
    return Coefficient(re, im);
  }

  /// Random polynomial with terms of degree in [min_deg, max_deg].
  Poly poly(const Ring& r, std::uint32_t min_deg, std::uint32_t max_deg, int terms, bool complex = false) {
    Poly p(r);
    for (int t = 0; t < terms; ++t) {
      std::uint32_t d = static_cast<std::uint32_t>(integer(min_deg, max_deg));
      auto monos = monomials_of_degree(r->var_count(), d);
      const Monomial& m = monos[static_cast<std::size_t>(integer(0, static_cast<long>(monos.size()) - 1))];
      p += Poly::term(r, m, coefficient(complex));
    }
    return p;
  }

  /// Nonzero polynomial in the maximal ideal.
  Poly in_m(const Ring& r, std::uint32_t max_deg, int terms) {
    for (;;) {
      Poly p = poly(r, 1, max_deg, terms);
      if (!p.is_zero()) return p;
    }
  }

  std::mt19937& engine() { return gen_; }

 private:
  std::mt19937 gen_;
};

/// Random invertible constant matrix with its inverse, as a product of
/// elementary matrices with small integer entries.
inline std::pair<PolyMatrix, PolyMatrix> random_unimodular(Random& rnd, const Ring& r, std::size_t n) {
  auto M = PolyMatrix::identity(r, n), Minv = M;
  if (n < 2) {
    long s = rnd.chance(0.5) ? 1 : -1;
    return {PolyMatrix::scalar(r, n, Poly::constant(r, s)), PolyMatrix::scalar(r, n, Poly::constant(r, s))};
  }
  for (int k = 0; k < 4; ++k) {
    auto i = static_cast<std::size_t>(rnd.integer(0, static_cast<long>(n) - 1));
    auto j = static_cast<std::size_t>(rnd.integer(0, static_cast<long>(n) - 2));
    if (j >= i) ++j;
    long c = rnd.integer(-2, 2);
    if (c == 0) c = 1;
    auto E = PolyMatrix::identity(r, n), Einv = E;
    E(i, j) = Poly::constant(r, c);
    Einv(i, j) = Poly::constant(r, -c);
    M = M * E;
    Minv = Einv * Minv;
  }
  return {M, Minv};
}

/// Random factorization of size <= 4 with entries of degree <= 3: a direct sum
/// of Koszul blocks for f = a*b + c*d, their shifts and trivial summands,
/// conjugated by random constant invertible matrices.
inline MatrixFactorization random_mf(Random& rnd, const Ring& r) {
  Poly f(r), a(r), b(r), c(r), d(r);
  while (f.is_zero() || f.degree() > 3) {
    a = rnd.in_m(r, 2, 2);
    b = rnd.in_m(r, 1, 2);
    c = rnd.chance(0.8) ? rnd.in_m(r, 2, 2) : Poly(r);
    d = rnd.in_m(r, 1, 2);
    f = a * b + c * d;
  }
  auto K = validate(PolyMatrix::from_rows(r, {{a, c}, {-d, b}}), PolyMatrix::from_rows(r, {{b, -c}, {d, a}}), f);
  auto [T1, T2] = trivial_pair(f);
  std::vector<MatrixFactorization> blocks{K, shift(K), T1, T2};

  MatrixFactorization m = MatrixFactorization::zero(f);
  const std::size_t target = static_cast<std::size_t>(rnd.integer(1, 4));
  while (m.size() < target) {
    const auto& blk = blocks[static_cast<std::size_t>(rnd.integer(0, 3))];
    if (m.size() + blk.size() > 4) {
      if (m.size() > 0) break;
      continue;
    }
    m = direct_sum(m, blk);
  }
  if (rnd.chance(0.7)) {
    auto [Pm, Pinv] = random_unimodular(rnd, r, m.size());
    auto [Qm, Qinv] = random_unimodular(rnd, r, m.size());
    m = validate(Pm * m.A() * Qm, Qinv * m.B() * Pinv, f);
  }
  return m;
}

/// Random coordinate change fixing the origin: invertible integer linear part
/// plus small higher-order terms.
inline std::vector<Poly> random_coordinate_change(Random& rnd, const Ring& r) {
  const std::size_t n = r->var_count();
  auto [L, Linv] = random_unimodular(rnd, r, n);
  std::vector<Poly> images;
  for (std::size_t j = 0; j < n; ++j) {
    Poly p(r);
    for (std::size_t k = 0; k < n; ++k) p += L(j, k) * Poly::variable(r, k);
    if (rnd.chance(0.5)) p += rnd.poly(r, 2, 3, 1);
    images.push_back(std::move(p));
  }
  return images;
}

}  // namespace testing_support
