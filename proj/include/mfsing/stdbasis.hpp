#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <tuple>
#include <vector>

#include "mfsing/ring.hpp"

namespace mfsing {

/// Negative-degree reverse-lexicographic order ("ds"). Lower total degree is
/// larger, so constants dominate and the leading term of a polynomial sits
/// among its lowest-degree terms. This is what makes computations happen in
/// the local ring at the origin.
struct LocalOrder {
  /// True iff a > b.
  static bool greater(const Monomial& a, const Monomial& b) {
    auto da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    for (std::size_t j = a.size(); j-- > 0;)
      if (a[j] != b[j]) return a[j] < b[j];
    return false;
  }

  friend bool operator==(const LocalOrder&, const LocalOrder&) = default;
};

struct LeadingTerm {
  Monomial monomial;
  Coefficient coefficient;
};

/// Precondition: p nonzero.
inline LeadingTerm leading_term(const Poly& p) {
  auto it = p.terms().begin();
  const auto d = it->first.degree();
  auto best = it;
  for (++it; it != p.terms().end() && it->first.degree() == d; ++it)
    if (LocalOrder::greater(it->first, best->first)) best = it;
  return {best->first, best->second};
}

/// deg(p) - deg(LM(p)); the quantity Mora's selection strategy minimizes.
inline std::uint32_t ecart(const Poly& p) { return p.degree() - p.order(); }

struct StandardBasis {
  Ring ring;
  std::vector<Poly> generators;  // nonzero, leading coefficient 1, minimal
  LocalOrder order;
  bool complete = false;
  std::uint32_t degree_bound = 0;  // the degree cap the completion ran with
  /// Smallest k with m^k inside the leading ideal, if one exists.
  std::optional<std::uint32_t> highest_corner;

  std::vector<Monomial> leading_monomials() const {
    std::vector<Monomial> out;
    out.reserve(generators.size());
    for (const auto& g : generators) out.push_back(leading_term(g).monomial);
    return out;
  }
};

/// nullopt means infinite.
using Dimension = std::optional<std::size_t>;

struct QuotientBasis {
  std::vector<Monomial> monomials;  // sorted by GradedLexLess
  Dimension dimension;
};

struct HilbertFunction {
  std::vector<std::size_t> values;  // values[k] = number of standard monomials of degree k
  friend bool operator==(const HilbertFunction&, const HilbertFunction&) = default;
};

namespace detail {

inline bool divisible_by_any(const Monomial& m, std::span<const Monomial> leads) {
  for (const auto& l : leads)
    if (l.divides(m)) return true;
  return false;
}

/// Standard monomials of a zero-dimensional monomial ideal. Returns nullopt
/// when some variable has no pure power among the generators.
inline std::optional<std::vector<Monomial>> standard_monomials(std::span<const Monomial> leads,
                                                               std::size_t nvars) {
  std::vector<std::uint32_t> bound(nvars, 0);  // exclusive bound per variable
  for (const auto& l : leads) {
    std::size_t support = 0, var = 0;
    for (std::size_t j = 0; j < nvars; ++j)
      if (l[j] != 0) {
        ++support;
        var = j;
      }
    if (support == 0) return std::vector<Monomial>{};  // unit ideal
    if (support == 1 && (bound[var] == 0 || l[var] < bound[var])) bound[var] = l[var];
  }
  for (auto b : bound)
    if (b == 0) return std::nullopt;
  std::vector<Monomial> out;
  Monomial cur(nvars);
  // odometer over the box; every divisor of a standard monomial is standard,
  // but a plain box walk with a divisibility filter is simpler and small here
  while (true) {
    if (!divisible_by_any(cur, leads)) out.push_back(cur);
    std::size_t j = 0;
    while (j < nvars) {
      if (++cur[j] < bound[j]) break;
      cur[j] = 0;
      ++j;
    }
    if (j == nvars) break;
  }
  std::sort(out.begin(), out.end(), GradedLexLess{});
  return out;
}

inline std::optional<std::uint32_t> highest_corner(std::span<const Monomial> leads, std::size_t nvars) {
  auto std_monos = standard_monomials(leads, nvars);
  if (!std_monos) return std::nullopt;
  if (std_monos->empty()) return 0u;
  return std_monos->back().degree() + 1;
}

/// Reduction inside P/m^k: every term of degree >= k is dropped, which is
/// legitimate once m^k is known to lie in the ideal. Terminates because the
/// monomials of degree < k form a finite set and each step only introduces
/// terms smaller in the local order. The result has no term divisible by a
/// leading monomial of gens.
inline Poly reduce_truncated(Poly h, std::span<const Poly> gens, std::span<const Monomial> leads,
                             std::uint32_t corner) {
  Poly result(h.ring());
  if (corner == 0) return result;
  h.truncate_in_place(corner - 1);
  while (!h.is_zero()) {
    LeadingTerm lt = leading_term(h);
    std::size_t which = leads.size();
    for (std::size_t j = 0; j < leads.size(); ++j)
      if (leads[j].divides(lt.monomial)) {
        which = j;
        break;
      }
    if (which == leads.size()) {
      result += Poly::term(h.ring(), lt.monomial, lt.coefficient);
      h.erase_term(lt.monomial);
      continue;
    }
    const Coefficient lc = leading_term(gens[which]).coefficient;
    h.axpy(-(lt.coefficient / lc), leads[which].quotient_into(lt.monomial), gens[which]);
    h.truncate_in_place(corner - 1);
  }
  return result;
}

/// Mora's weak normal form: returns h with LM(h) outside the leading ideal of
/// gens (or h = 0) and u*p - h in the ideal for some local unit u.
inline Poly weak_normal_form(const Poly& p, std::span<const Poly> gens) {
  struct Reducer {
    Poly poly;
    Monomial lead;
    Coefficient lc;
    std::uint32_t ecart;
  };
  std::vector<Reducer> pool;
  pool.reserve(gens.size());
  for (const auto& g : gens) {
    auto lt = leading_term(g);
    pool.push_back({g, lt.monomial, lt.coefficient, ecart(g)});
  }
  Poly h = p;
  while (!h.is_zero()) {
    LeadingTerm lt = leading_term(h);
    const Reducer* best = nullptr;
    for (const auto& r : pool)
      if (r.lead.divides(lt.monomial) && (!best || r.ecart < best->ecart)) best = &r;
    if (!best) break;
    const std::uint32_t eh = ecart(h);
    Reducer chosen = *best;
    if (chosen.ecart > eh) pool.push_back({h, lt.monomial, lt.coefficient, eh});
    h.axpy(-(lt.coefficient / chosen.lc), chosen.lead.quotient_into(lt.monomial), chosen.poly);
  }
  return h;
}

inline Poly normalized(const Poly& p) { return p.scaled(leading_term(p).coefficient.inverse()); }

inline Poly s_polynomial(const Poly& f, const Poly& g) {
  auto lf = leading_term(f), lg = leading_term(g);
  Monomial l = lcm(lf.monomial, lg.monomial);
  Poly s(f.ring());
  s.axpy(lf.coefficient.inverse(), lf.monomial.quotient_into(l), f);
  s.axpy(-lg.coefficient.inverse(), lg.monomial.quotient_into(l), g);
  return s;
}

}  // namespace detail

/// Normal form of p with respect to basis under the local order. When the
/// leading monomials of basis contain a power of the maximal ideal the result
/// is fully reduced (no term divisible by a leading monomial); otherwise it is
/// Mora's weak normal form (only the leading term is guaranteed irreducible).
/// If basis is a standard basis, the result is zero iff p lies in the ideal
/// the basis generates in the local ring.
inline Poly mora_normal_form(const Poly& p, std::span<const Poly> basis, LocalOrder = {}) {
  if (p.is_zero()) return p;
  for (const auto& g : basis) {
    if (g.is_zero()) precondition_failed("mora_normal_form: zero basis element");
    p.check_ring(g);
  }
  std::vector<Monomial> leads;
  for (const auto& g : basis) leads.push_back(leading_term(g).monomial);
  if (auto corner = detail::highest_corner(leads, p.ring()->var_count()))
    return detail::reduce_truncated(p, basis, leads, *corner);
  return detail::weak_normal_form(p, basis);
}

inline constexpr std::uint32_t kDefaultDegreeCap = 32;

namespace detail {

struct Completion {
  std::vector<Poly> basis;
  std::vector<Monomial> leads;
  std::optional<std::uint32_t> corner;
  bool left_behind = false;
};

/// Mora's tangent-cone completion. S-pairs are processed by increasing lcm
/// degree; pairs of lcm degree >= the highest corner are discharged (their
/// s-polynomials lie in m^k, inside the ideal), pairs above degree_cap are
/// left unprocessed.
///
/// With a truncation K the ideal completed is I + m^K: all arithmetic happens
/// in P/m^K, so reduction is finite linear algebra and never needs the weak
/// normal form.
inline Completion complete(std::span<const Poly> gens, std::size_t nvars, std::uint32_t degree_cap,
                           std::optional<std::uint32_t> truncation) {
  Completion c;
  auto effective_corner = [&]() -> std::optional<std::uint32_t> {
    if (!truncation) return c.corner;
    return c.corner && *c.corner < *truncation ? *c.corner : *truncation;
  };

  using Pair = std::tuple<std::uint32_t, std::size_t, std::size_t>;  // lcm degree, i, j
  std::priority_queue<Pair, std::vector<Pair>, std::greater<>> pairs;
  auto add = [&](Poly g) {
    g = normalized(g);
    Monomial lm = leading_term(g).monomial;
    for (std::size_t j = 0; j < c.basis.size(); ++j) pairs.emplace(lcm(lm, c.leads[j]).degree(), j, c.basis.size());
    c.basis.push_back(std::move(g));
    c.leads.push_back(std::move(lm));
    c.corner = highest_corner(c.leads, nvars);
  };
  auto reduce = [&](const Poly& p) {
    auto k = effective_corner();
    return k ? reduce_truncated(p, c.basis, c.leads, *k) : weak_normal_form(p, c.basis);
  };

  for (const auto& g : gens) {
    Poly r = reduce(g);
    if (!r.is_zero()) add(std::move(r));
  }
  while (!pairs.empty()) {
    auto [deg, i, j] = pairs.top();
    pairs.pop();
    if (auto k = effective_corner(); k && deg >= *k) continue;
    if (deg > degree_cap) {
      c.left_behind = true;
      continue;
    }
    Poly r = reduce(s_polynomial(c.basis[i], c.basis[j]));
    if (!r.is_zero()) add(std::move(r));
  }
  return c;
}

}  // namespace detail

/// Local standard basis. Zero-dimensional ideals with a small corner are first
/// completed modulo m^K for K = 8, 16: if the corner c found there is below K,
/// then m^c lies in I + m^(c+1) and hence in I by Nakayama, so the basis found
/// is a standard basis of I itself. Otherwise the plain completion runs. The
/// result is complete iff nothing was left behind or a corner k <= degree_cap
/// certifies zero-dimensionality.
inline StandardBasis standard_basis(std::span<const Poly> gens, LocalOrder order = {},
                                    std::uint32_t degree_cap = kDefaultDegreeCap) {
  if (degree_cap < 1) precondition_failed("standard_basis: degree_cap must be >= 1");
  if (gens.empty()) precondition_failed("standard_basis: empty generator list");
  const Ring ring = gens.front().ring();
  const std::size_t nvars = ring->var_count();

  std::vector<Poly> nonzero;
  for (const auto& g : gens) {
    if (!same_ring(g.ring(), ring)) precondition_failed("standard_basis: generators from different rings");
    if (!g.is_zero()) nonzero.push_back(g);
  }

  std::optional<detail::Completion> done;
  for (std::uint32_t K : {8u, 16u}) {
    if (K > degree_cap + 1) break;
    auto c = detail::complete(nonzero, nvars, degree_cap, K);
    if (c.corner && *c.corner < K) {
      done = std::move(c);
      break;
    }
  }
  if (!done) done = detail::complete(nonzero, nvars, degree_cap, std::nullopt);
  const auto& basis = done->basis;
  const auto& leads = done->leads;

  // Keep only generators whose leading monomial is minimal.
  StandardBasis sb;
  sb.ring = ring;
  sb.order = order;
  sb.degree_bound = degree_cap;
  for (std::size_t a = 0; a < basis.size(); ++a) {
    bool redundant = false;
    for (std::size_t b = 0; b < basis.size() && !redundant; ++b) {
      if (a == b || !leads[b].divides(leads[a])) continue;
      redundant = leads[a] != leads[b] || b < a;
    }
    if (!redundant) sb.generators.push_back(basis[a]);
  }
  sb.highest_corner = done->corner;
  sb.complete = !done->left_behind || (done->corner && *done->corner <= degree_cap);
  return sb;
}

inline StandardBasis standard_basis(std::initializer_list<Poly> gens, LocalOrder order = {},
                                    std::uint32_t degree_cap = kDefaultDegreeCap) {
  std::vector<Poly> v(gens);
  return standard_basis(std::span<const Poly>(v), order, degree_cap);
}

namespace detail {
inline void require_complete(const StandardBasis& sb, const char* what) {
  if (!sb.complete)
    budget_exhausted(std::string(what) + ": standard basis incomplete at degree cap " +
                     std::to_string(sb.degree_bound));
}
}  // namespace detail

inline Dimension quotient_dimension(const StandardBasis& sb) {
  detail::require_complete(sb, "quotient_dimension");
  auto leads = sb.leading_monomials();
  auto monos = detail::standard_monomials(leads, sb.ring->var_count());
  if (!monos) return std::nullopt;
  return monos->size();
}

inline QuotientBasis monomial_basis(const StandardBasis& sb) {
  detail::require_complete(sb, "monomial_basis");
  auto leads = sb.leading_monomials();
  auto monos = detail::standard_monomials(leads, sb.ring->var_count());
  if (!monos) precondition_failed("monomial_basis: quotient is infinite-dimensional");
  QuotientBasis qb;
  qb.dimension = monos->size();
  qb.monomials = std::move(*monos);
  return qb;
}

inline HilbertFunction hilbert_function(const QuotientBasis& qb) {
  if (!qb.dimension) precondition_failed("hilbert_function: infinite-dimensional quotient");
  HilbertFunction h;
  for (const auto& m : qb.monomials) {
    auto d = m.degree();
    if (h.values.size() <= d) h.values.resize(d + 1, 0);
    ++h.values[d];
  }
  return h;
}

inline Poly normal_form(const Poly& p, const StandardBasis& sb) {
  return mora_normal_form(p, sb.generators, sb.order);
}

inline bool ideal_membership(const Poly& p, const StandardBasis& sb) {
  detail::require_complete(sb, "ideal_membership");
  if (p.is_zero()) return true;
  if (sb.generators.empty()) return false;
  return normal_form(p, sb).is_zero();
}

}  // namespace mfsing
