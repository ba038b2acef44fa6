#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mfsing/linalg.hpp"
#include "mfsing/ring.hpp"
#include "mfsing/stdbasis.hpp"

namespace mfsing {

/// A polynomial germ at the origin: f vanishes at 0.
class Germ {
 public:
  explicit Germ(Poly f) : f_(std::move(f)) {
    if (!f_.ring()) precondition_failed("germ without a ring");
    if (f_.order() < 1) precondition_failed("germ must vanish at the origin (order >= 1)");
  }

  const Poly& f() const { return f_; }
  const Ring& ring() const { return f_.ring(); }
  std::size_t var_count() const { return f_.ring()->var_count(); }

  friend bool operator==(const Germ&, const Germ&) = default;

 private:
  Poly f_;
};

inline std::vector<Poly> jacobian_generators(const Poly& f) {
  std::vector<Poly> out;
  for (std::size_t j = 0; j < f.ring()->var_count(); ++j) out.push_back(partial_derivative(f, j));
  return out;
}

inline std::vector<Poly> tyurina_generators(const Poly& f) {
  std::vector<Poly> out{f};
  for (auto& d : jacobian_generators(f)) out.push_back(std::move(d));
  return out;
}

namespace detail {
inline StandardBasis complete_basis(std::span<const Poly> gens, std::uint32_t degree_cap, const char* what) {
  StandardBasis sb = standard_basis(gens, LocalOrder{}, degree_cap);
  require_complete(sb, what);
  return sb;
}
}  // namespace detail

/// dim P/(d_0 f, ..., d_n f) in the local ring; nullopt for a non-isolated
/// critical point. Throws a budget error if the basis could not be certified.
inline Dimension milnor_number(const Germ& g, std::uint32_t degree_cap = kDefaultDegreeCap) {
  auto gens = jacobian_generators(g.f());
  return quotient_dimension(detail::complete_basis(gens, degree_cap, "milnor_number"));
}

/// P/(f, d_0 f, ..., d_n f) with the structure needed to compare algebras.
struct TyurinaAlgebra {
  QuotientBasis basis;
  std::size_t tau = 0;
  HilbertFunction hilbert;
  /// mult_table[a][b] = coordinates of basis[a]*basis[b] in the basis.
  std::vector<std::vector<std::vector<Coefficient>>> mult_table;
  std::size_t socle_dim = 0;
  /// dim(m^k T) for k = 1, 2, ... while nonzero.
  std::vector<std::size_t> m_power_dims;
  StandardBasis ideal;

  std::size_t m_squared_dim() const { return m_power_dims.size() > 1 ? m_power_dims[1] : 0; }

  std::vector<Coefficient> coordinates(const Poly& p) const {
    Poly r = normal_form(p, ideal);
    std::vector<Coefficient> v(tau);
    for (std::size_t a = 0; a < tau; ++a) v[a] = r.coefficient(basis.monomials[a]);
    return v;
  }
};

inline TyurinaAlgebra tyurina_algebra(const Germ& g, std::uint32_t degree_cap = kDefaultDegreeCap) {
  auto gens = tyurina_generators(g.f());
  TyurinaAlgebra t;
  t.ideal = detail::complete_basis(gens, degree_cap, "tyurina_algebra");
  if (!quotient_dimension(t.ideal))
    precondition_failed("non-isolated singularity: the Tyurina ideal has infinite colength");
  t.basis = monomial_basis(t.ideal);
  t.tau = *t.basis.dimension;
  t.hilbert = hilbert_function(t.basis);

  const Ring& ring = g.ring();
  const std::size_t n = ring->var_count();
  std::vector<Poly> basis_polys;
  for (const auto& m : t.basis.monomials) basis_polys.push_back(Poly::term(ring, m, Coefficient(1)));

  t.mult_table.assign(t.tau, std::vector<std::vector<Coefficient>>(t.tau));
  for (std::size_t a = 0; a < t.tau; ++a)
    for (std::size_t b = a; b < t.tau; ++b) {
      t.mult_table[a][b] = t.coordinates(basis_polys[a] * basis_polys[b]);
      t.mult_table[b][a] = t.mult_table[a][b];
    }

  // xmul[j] = matrix of multiplication by z_j, column b = coords(z_j * basis[b])
  std::vector<DenseMatrix> xmul;
  for (std::size_t j = 0; j < n; ++j) {
    DenseMatrix m(t.tau, t.tau);
    Poly zj = Poly::variable(ring, j);
    for (std::size_t b = 0; b < t.tau; ++b) {
      auto col = t.coordinates(zj * basis_polys[b]);
      for (std::size_t a = 0; a < t.tau; ++a) m(a, b) = col[a];
    }
    xmul.push_back(std::move(m));
  }

  DenseMatrix stacked(n * t.tau, t.tau);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t a = 0; a < t.tau; ++a)
      for (std::size_t b = 0; b < t.tau; ++b) stacked(j * t.tau + a, b) = xmul[j](a, b);
  t.socle_dim = t.tau == 0 ? 0 : t.tau - rank(stacked);

  // m^k T, iterated as the span of z_j * (spanning set of m^(k-1) T)
  std::vector<std::vector<Coefficient>> current;
  for (std::size_t b = 0; b < t.tau; ++b) {
    std::vector<Coefficient> e(t.tau);
    e[b] = Coefficient(1);
    current.push_back(std::move(e));
  }
  while (true) {
    EchelonSpace space;
    std::vector<std::vector<Coefficient>> next;
    for (const auto& v : current)
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<Coefficient> w(t.tau);
        SparseVector sw;
        for (std::size_t a = 0; a < t.tau; ++a) {
          for (std::size_t b = 0; b < t.tau; ++b)
            if (!v[b].is_zero() && !xmul[j](a, b).is_zero()) w[a] += xmul[j](a, b) * v[b];
          if (!w[a].is_zero()) sw.emplace(a, w[a]);
        }
        if (space.insert(std::move(sw))) next.push_back(std::move(w));
      }
    if (space.dimension() == 0) break;
    t.m_power_dims.push_back(space.dimension());
    current = std::move(next);
  }
  return t;
}

inline Dimension tyurina_number(const Germ& g, std::uint32_t degree_cap = kDefaultDegreeCap) {
  auto gens = tyurina_generators(g.f());
  return quotient_dimension(detail::complete_basis(gens, degree_cap, "tyurina_number"));
}

/// var_count - rank of the Hessian at the origin.
inline std::size_t corank(const Germ& g) { return g.var_count() - rank(hessian_at_zero(g.f())); }

/// Smallest k <= degree_cap with m^(k+1) inside m^2 * J(f), which makes f
/// k-determined. nullopt when no such k was certified.
inline std::optional<std::uint32_t> determinacy_bound(const Germ& g,
                                                      std::uint32_t degree_cap = kDefaultDegreeCap) {
  const Ring& ring = g.ring();
  const std::size_t n = ring->var_count();
  std::vector<Poly> gens;
  auto jac = jacobian_generators(g.f());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      Poly q = Poly::variable(ring, a) * Poly::variable(ring, b);
      for (const auto& d : jac)
        if (!d.is_zero()) gens.push_back(q * d);
    }
  if (gens.empty()) precondition_failed("determinacy_bound: f is constant along every direction");
  StandardBasis sb = standard_basis(std::span<const Poly>(gens), LocalOrder{}, degree_cap);
  if (!sb.complete) return std::nullopt;
  if (!sb.highest_corner) precondition_failed("determinacy_bound: non-isolated singularity");

  for (std::uint32_t k = 1; k <= degree_cap; ++k) {
    bool all = true;
    for (const auto& m : monomials_of_degree(n, k + 1))
      if (!ideal_membership(Poly::term(ring, m, Coefficient(1)), sb)) {
        all = false;
        break;
      }
    if (all) return k;
  }
  return std::nullopt;
}

/// Output of the algorithmic splitting lemma.
struct SplitResult {
  std::uint32_t jet_degree = 0;
  /// Images of the original variables; f(transform) agrees with
  /// residual + sum squares up to jet_degree.
  std::vector<Poly> transform;
  /// Variables of the original ring that carry the residual germ, in order.
  std::vector<std::size_t> residual_vars;
  /// Residual germ (zero Hessian) in a ring made of residual_vars; absent at corank 0.
  std::optional<Germ> residual;
  /// (variable index, a): a nondegenerate square a * z_index^2.
  std::vector<std::pair<std::size_t, Coefficient>> squares;

  /// residual (embedded back into the original ring) + sum of squares.
  Poly normal_form(const Ring& ring) const {
    Poly out(ring);
    if (residual) {
      std::vector<Poly> images;
      for (auto v : residual_vars) images.push_back(Poly::variable(ring, v));
      out += substitute(residual->f(), images);
    }
    for (const auto& [v, a] : squares) {
      Poly z = Poly::variable(ring, v);
      out += (z * z).scaled(a);
    }
    return out;
  }
};

namespace detail {

inline std::vector<Poly> identity_images(const Ring& ring) {
  std::vector<Poly> out;
  for (std::size_t j = 0; j < ring->var_count(); ++j) out.push_back(Poly::variable(ring, j));
  return out;
}

inline std::vector<Poly> compose(std::span<const Poly> outer, std::span<const Poly> inner, std::uint32_t jet) {
  std::vector<Poly> out;
  for (const auto& p : outer) out.push_back(substitute(p, inner, jet));
  return out;
}

/// Coefficient of z_j^1 in f, as a polynomial free of z_j.
inline Poly linear_coefficient_in(const Poly& f, std::size_t j) {
  Poly::TermMap out;
  for (const auto& [m, c] : f.terms())
    if (m[j] == 1) {
      Monomial r(m);
      r[j] = 0;
      out.emplace(std::move(r), c);
    }
  return Poly(f.ring(), std::move(out));
}

inline Poly drop_variable(const Poly& f, std::size_t j) {
  Poly::TermMap out;
  for (const auto& [m, c] : f.terms())
    if (m[j] == 0) out.emplace(m, c);
  return Poly(f.ring(), std::move(out));
}

/// (f - f|_{z_j=0}) / z_j^2; precondition: no z_j^1 terms.
inline Poly quadratic_cofactor(const Poly& f, std::size_t j) {
  Poly::TermMap out;
  for (const auto& [m, c] : f.terms()) {
    if (m[j] == 0) continue;
    if (m[j] == 1) internal_error("split_squares: linear term left after completing the square");
    Monomial r(m);
    r[j] -= 2;
    out.emplace(std::move(r), c);
  }
  return Poly(f.ring(), std::move(out));
}

}  // namespace detail

/// Splitting lemma on the jet of degree jet_degree: completes squares exactly
/// over Q(i) until the remaining quadratic part vanishes.
inline SplitResult split_squares(const Germ& g, std::uint32_t jet_degree) {
  if (jet_degree < 2) precondition_failed("split_squares: jet_degree must be >= 2");
  if (g.f().order() < 2) precondition_failed("split_squares: germ must lie in m^2");
  const Ring& ring = g.ring();
  const std::size_t n = ring->var_count();
  const std::uint32_t J = jet_degree;

  Poly f = g.f().truncated(J);
  std::vector<Poly> phi = detail::identity_images(ring);
  std::vector<bool> split(n, false);
  SplitResult out;
  out.jet_degree = J;

  auto apply = [&](std::vector<Poly> psi) {
    f = substitute(f, psi, J);
    phi = detail::compose(phi, psi, J);
  };
  auto square_coeff = [&](std::size_t j) { return f.coefficient(Monomial::variable(n, j, 2)); };

  while (true) {
    std::optional<std::size_t> pivot;
    for (std::size_t j = 0; j < n && !pivot; ++j)
      if (!split[j] && !square_coeff(j).is_zero()) pivot = j;
    if (!pivot) {
      // all diagonal entries vanish: look for a mixed term z_j z_k
      for (std::size_t j = 0; j < n && !pivot; ++j)
        for (std::size_t k = j + 1; k < n && !pivot; ++k) {
          if (split[j] || split[k]) continue;
          Monomial mk(n);
          mk[j] = 1;
          mk[k] = 1;
          if (f.coefficient(mk).is_zero()) continue;
          auto psi = detail::identity_images(ring);
          psi[k] = psi[k] + Poly::variable(ring, j);  // z_k -> z_k + z_j creates c z_j^2
          apply(std::move(psi));
          pivot = j;
        }
    }
    if (!pivot) break;
    const std::size_t j = *pivot;
    const Coefficient a = square_coeff(j);
    const Coefficient inv2a = (a * Coefficient(2)).inverse();

    // Remove z_j * b(y) terms: z_j -> z_j - b / (2a), raising ord(b) each round.
    for (std::uint32_t round = 0;; ++round) {
      Poly b = detail::linear_coefficient_in(f, j);
      if (b.is_zero()) break;
      if (round > J + 1) internal_error("split_squares: completing the square did not converge");
      auto psi = detail::identity_images(ring);
      psi[j] = psi[j] - b.scaled(inv2a);
      apply(std::move(psi));
    }

    // f = c(y) + z_j^2 R(z_j, y) with R(0) = a. Rescale z_j by a unit w so the
    // z_j-part becomes exactly a z_j^2.
    const Poly zj = Poly::variable(ring, j);
    const Poly a_zj2 = (zj * zj).scaled(a);
    Poly w = Poly::constant(ring, Coefficient(1));
    for (std::uint32_t round = 0;; ++round) {
      auto psi = detail::identity_images(ring);
      psi[j] = zj * w;
      Poly F = substitute(f, psi, J);
      Poly defect = F - detail::drop_variable(F, j) - a_zj2;
      if (defect.is_zero()) {
        f = F;
        phi = detail::compose(phi, psi, J);
        break;
      }
      if (round > J + 1) internal_error("split_squares: unit rescaling did not converge");
      Poly d = detail::quadratic_cofactor(defect, j);  // w^2 R(z_j w, y) - a
      w = Poly::mul_truncated(w, Poly::constant(ring, Coefficient(1)) - d.scaled(inv2a), J);
    }
    split[j] = true;
    out.squares.emplace_back(j, a);
  }

  // f should now be residual(unsplit vars) + sum a_j z_j^2
  Poly rest = f;
  for (const auto& [v, a] : out.squares) {
    Poly z = Poly::variable(ring, v);
    rest -= (z * z).scaled(a);
  }
  for (const auto& [m, c] : rest.terms())
    for (const auto& [v, a] : out.squares)
      if (m[v] != 0) internal_error("split_squares: split variable still coupled to the residual");

  out.transform = std::move(phi);
  std::sort(out.squares.begin(), out.squares.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t v = 0; v < n; ++v)
    if (!split[v]) out.residual_vars.push_back(v);
  if (!out.residual_vars.empty()) {
    std::vector<std::string> names;
    for (auto v : out.residual_vars) names.push_back(ring->var_names()[v]);
    Ring sub = make_ring(std::move(names));
    Poly::TermMap terms;
    for (const auto& [m, c] : rest.terms()) {
      Monomial r(sub->var_count());
      for (std::size_t k = 0; k < out.residual_vars.size(); ++k) r[k] = m[out.residual_vars[k]];
      terms.emplace(std::move(r), c);
    }
    out.residual = Germ(Poly(sub, std::move(terms)));
  }
  return out;
}

enum class ADEFamily { A, D, E };

struct ADEType {
  ADEFamily family;
  unsigned index;

  std::string to_string() const {
    const char* f = family == ADEFamily::A ? "A" : family == ADEFamily::D ? "D" : "E";
    return f + std::to_string(index);
  }

  static std::optional<ADEType> parse(const std::string& s) {
    if (s.size() < 2) return std::nullopt;
    ADEFamily fam;
    switch (s[0]) {
      case 'A': fam = ADEFamily::A; break;
      case 'D': fam = ADEFamily::D; break;
      case 'E': fam = ADEFamily::E; break;
      default: return std::nullopt;
    }
    unsigned idx = 0;
    for (std::size_t k = 1; k < s.size(); ++k) {
      if (!std::isdigit(static_cast<unsigned char>(s[k]))) return std::nullopt;
      idx = idx * 10 + static_cast<unsigned>(s[k] - '0');
      if (idx > 1000000) return std::nullopt;
    }
    ADEType t{fam, idx};
    if (!t.valid()) return std::nullopt;
    return t;
  }

  bool valid() const {
    switch (family) {
      case ADEFamily::A: return index >= 1;
      case ADEFamily::D: return index >= 4;
      case ADEFamily::E: return index >= 6 && index <= 8;
    }
    return false;
  }

  friend bool operator==(const ADEType&, const ADEType&) = default;
};

namespace detail {
inline Dimension require_isolated_mu(const Germ& g, std::uint32_t degree_cap, const char* what) {
  Dimension mu = milnor_number(g, degree_cap);
  if (!mu) precondition_failed(std::string(what) + ": non-isolated singularity (infinite Milnor number)");
  return mu;
}
}  // namespace detail

/// Simple-singularity recognition. Uses the jet of degree mu+1, which
/// determines an isolated germ up to right equivalence.
inline std::optional<ADEType> ade_recognize(const Germ& g, std::uint32_t degree_cap = kDefaultDegreeCap) {
  const std::size_t mu = *detail::require_isolated_mu(g, degree_cap, "ade_recognize");
  if (g.f().order() < 2) return std::nullopt;  // smooth point, mu = 0
  SplitResult s = split_squares(g, static_cast<std::uint32_t>(mu) + 1);
  const std::size_t cr = s.residual_vars.size();
  if (cr == 0) {
    if (mu == 1) return ADEType{ADEFamily::A, 1};
    return std::nullopt;
  }
  if (cr == 1) return ADEType{ADEFamily::A, static_cast<unsigned>(mu)};
  if (cr != 2) return std::nullopt;

  const Poly cubic = s.residual->f().homogeneous_part(3);
  if (cubic.is_zero()) return std::nullopt;
  // a x^3 + b x^2 y + c x y^2 + d y^3
  auto coeff = [&](std::uint32_t ex, std::uint32_t ey) {
    return cubic.coefficient(Monomial(std::vector<std::uint32_t>{ex, ey}));
  };
  const Coefficient a = coeff(3, 0), b = coeff(2, 1), c = coeff(1, 2), d = coeff(0, 3);
  const Coefficient k3(3), k4(4), k9(9), k18(18), k27(27);
  // Hessian covariant vanishes iff the cubic is a perfect cube (triple root)
  const bool triple = (b * b - k3 * a * c).is_zero() && (b * c - k9 * a * d).is_zero() &&
                      (c * c - k3 * b * d).is_zero();
  const Coefficient disc = b * b * c * c - k4 * a * c * c * c - k4 * b * b * b * d - k27 * a * a * d * d +
                           k18 * a * b * c * d;
  if (triple) {
    if (mu >= 6 && mu <= 8) return ADEType{ADEFamily::E, static_cast<unsigned>(mu)};
    return std::nullopt;
  }
  if (!disc.is_zero()) {
    if (mu == 4) return ADEType{ADEFamily::D, 4};
    return std::nullopt;
  }
  if (mu >= 5) return ADEType{ADEFamily::D, static_cast<unsigned>(mu)};
  return std::nullopt;
}

struct SingularityInvariants {
  Dimension mu;
  Dimension tau;
  std::size_t corank = 0;
  std::optional<std::uint32_t> determinacy;
  std::optional<ADEType> ade;
};

/// Full invariant battery; refuses non-isolated germs.
inline SingularityInvariants invariants(const Germ& g, std::uint32_t degree_cap = kDefaultDegreeCap) {
  SingularityInvariants inv;
  inv.mu = milnor_number(g, degree_cap);
  if (!inv.mu) precondition_failed("non-isolated singularity (infinite Milnor number)");
  inv.tau = tyurina_number(g, degree_cap);
  inv.corank = corank(g);
  inv.determinacy = determinacy_bound(g, degree_cap);
  inv.ade = ade_recognize(g, degree_cap);
  return inv;
}

/// A sound proof that two Tyurina algebras are not isomorphic.
struct DistinctCertificate {
  std::string invariant;  // "tau", "hilbert", "socle_dim", "m_power_dims", "m_squared_dim"
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
};

namespace detail {
inline std::map<std::string, std::vector<std::size_t>> invariant_battery(const TyurinaAlgebra& t) {
  return {
      {"tau", {t.tau}},
      {"hilbert", t.hilbert.values},
      {"socle_dim", {t.socle_dim}},
      {"m_power_dims", t.m_power_dims},
      {"m_squared_dim", {t.m_squared_dim()}},
  };
}
}  // namespace detail

inline const std::vector<std::string>& tyurina_invariant_names() {
  static const std::vector<std::string> names{"tau", "hilbert", "socle_dim", "m_power_dims", "m_squared_dim"};
  return names;
}

/// Value of a named isomorphism invariant of a Tyurina algebra.
inline std::vector<std::size_t> tyurina_invariant(const TyurinaAlgebra& t, const std::string& name) {
  auto battery = detail::invariant_battery(t);
  auto it = battery.find(name);
  if (it == battery.end()) precondition_failed("unknown Tyurina invariant '" + name + "'");
  return it->second;
}

/// nullopt means every invariant in the battery agrees (not a proof of
/// isomorphism); a certificate means the algebras are provably distinct.
inline std::optional<DistinctCertificate> tyurina_compare(const TyurinaAlgebra& t1, const TyurinaAlgebra& t2) {
  auto b1 = detail::invariant_battery(t1), b2 = detail::invariant_battery(t2);
  for (const auto& name : tyurina_invariant_names())
    if (b1[name] != b2[name]) return DistinctCertificate{name, b1[name], b2[name]};
  return std::nullopt;
}

}  // namespace mfsing
