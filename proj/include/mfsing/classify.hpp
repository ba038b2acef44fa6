#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mfsing/linalg.hpp"
#include "mfsing/ring.hpp"
#include "mfsing/singularity.hpp"
#include "mfsing/stdbasis.hpp"

namespace mfsing {

/// Effort limits for the decision procedure.
struct Budget {
  std::uint32_t degree_cap = kDefaultDegreeCap;
  /// Linear parts tried per direction by the coordinate-change search.
  std::size_t witness_candidates = 384;
  /// Linearized correction steps per candidate.
  std::uint32_t newton_steps = 24;
};

inline std::size_t krull_dimension(const Germ& g) { return g.var_count() - 1; }

/// Fresh variable names w1, w2, ... that do not clash with ring.
inline std::vector<std::string> fresh_names(const RingContext& ring, std::size_t m) {
  std::vector<std::string> out;
  for (std::size_t k = 1; out.size() < m; ++k) {
    std::string name = "w" + std::to_string(k);
    if (!ring.index_of(name)) out.push_back(std::move(name));
  }
  return out;
}

/// g + w1^2 + ... + wm^2 over the ring extended by m fresh variables.
inline Germ stabilize(const Germ& g, std::size_t m) {
  if (m == 0) return g;
  std::vector<std::string> names = g.ring()->var_names();
  for (auto& n : fresh_names(*g.ring(), m)) names.push_back(std::move(n));
  Ring big = make_ring(std::move(names));
  Poly f = embed(g.f(), big);
  for (std::size_t j = g.var_count(); j < big->var_count(); ++j) {
    Poly w = Poly::variable(big, j);
    f += w * w;
  }
  return Germ(std::move(f));
}

struct ParityObstruction {
  std::size_t d = 0;
  std::size_t e = 0;
};

inline std::optional<ParityObstruction> parity_check(std::size_t d, std::size_t e) {
  if ((d > e ? d - e : e - d) % 2 == 1) return ParityObstruction{d, e};
  return std::nullopt;
}

enum class Side { First, Second };

inline const char* side_name(Side s) { return s == Side::First ? "first" : "second"; }

struct TyurinaInvariantMismatch {
  std::string invariant;
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
};

struct AdeWitness {
  ADEType type;
};

/// images[j] is the image of variable j of the target side's stabilized germ,
/// written in the source side's stabilized ring; target(images) agrees with
/// source up to degree jet_degree, and source is jet_degree-determined.
struct SubstitutionWitness {
  Side source = Side::First;
  std::uint32_t jet_degree = 0;
  std::vector<Poly> images;
};

struct Equivalent {
  std::size_t m = 0;                    // squares added
  std::optional<Side> stabilized_side;  // set iff m > 0
  std::variant<AdeWitness, SubstitutionWitness> witness;
};

struct NotEquivalent {
  std::variant<ParityObstruction, TyurinaInvariantMismatch> certificate;
};

struct Unknown {
  std::string reason;
};

struct EquivalenceVerdict {
  Germ first;
  Germ second;
  std::variant<Equivalent, NotEquivalent, Unknown> outcome;

  bool equivalent() const { return std::holds_alternative<Equivalent>(outcome); }
  bool not_equivalent() const { return std::holds_alternative<NotEquivalent>(outcome); }
  bool unknown() const { return std::holds_alternative<Unknown>(outcome); }
  const char* outcome_name() const {
    return equivalent() ? "Equivalent" : not_equivalent() ? "NotEquivalent" : "Unknown";
  }
};

namespace detail {

inline void require_classifiable(const Germ& g, Side side, const Budget& budget) {
  if (g.f().order() < 2)
    precondition_failed(std::string(side_name(side)) + " germ has order < 2 (smooth point, not a singularity)");
  auto sb = standard_basis(tyurina_generators(g.f()), LocalOrder{}, budget.degree_cap);
  require_complete(sb, side == Side::First ? "first germ" : "second germ");
  if (!quotient_dimension(sb))
    precondition_failed(std::string(side_name(side)) + " germ is not an isolated singularity");
}

/// The two germs after adding squares to the lower-dimensional one.
struct Stabilized {
  Germ first;
  Germ second;
  std::size_t m = 0;
  std::optional<Side> side;
};

inline Stabilized stabilize_pair(const Germ& g1, const Germ& g2) {
  const std::size_t n1 = g1.var_count(), n2 = g2.var_count();
  if (n1 < n2) return {stabilize(g1, n2 - n1), g2, n2 - n1, Side::First};
  if (n2 < n1) return {g1, stabilize(g2, n1 - n2), n1 - n2, Side::Second};
  return {g1, g2, 0, std::nullopt};
}

inline Poly jet(const Poly& p, std::uint32_t k) { return p.truncated(k); }

/// Linear-part matrix of a substitution; invertible iff the map is a local
/// coordinate change.
inline bool invertible_linear_part(const std::vector<Poly>& images) {
  const std::size_t n = images.size();
  DenseMatrix lin(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t v = 0; v < n; ++v)
      lin(j, v) = images[j].coefficient(Monomial::variable(n, v));
  return rank(lin) == n;
}

/// Does target(images) agree with source up to degree k?
inline bool substitution_matches(const Poly& source, const Poly& target, const std::vector<Poly>& images,
                                 std::uint32_t k) {
  return jet(substitute(target, images, k), k) == jet(source, k);
}

/// Largest bit length of a numerator or denominator among the coefficients.
inline std::size_t coefficient_height(const std::vector<Poly>& polys) {
  std::size_t bits = 0;
  auto see = [&](const Rational& q) {
    bits = std::max({bits, mpz_sizeinbase(q.get_num_mpz_t(), 2), mpz_sizeinbase(q.get_den_mpz_t(), 2)});
  };
  for (const auto& p : polys)
    for (const auto& [m, c] : p.terms()) {
      see(c.re());
      see(c.im());
    }
  return bits;
}

/// Beyond this many bits a correction sequence is treated as diverging: from a
/// wrong linear part the iteration approaches an irrational or distant root
/// and the rational iterates roughly double in size per step.
inline constexpr std::size_t kNewtonHeightLimit = 256;

/// Degree-by-degree linearized correction of phi so that target(phi) matches
/// source up to degree k.
inline std::optional<std::vector<Poly>> newton_complete(const Poly& source, const Poly& target,
                                                        std::vector<Poly> phi, std::uint32_t k,
                                                        std::uint32_t max_steps) {
  const Ring& R = source.ring();
  const std::size_t n = R->var_count();
  const Poly goal = jet(source, k);
  std::vector<Poly> grads;
  for (std::size_t j = 0; j < n; ++j) grads.push_back(partial_derivative(target, j));
  std::uint32_t last_order = 0, stalls = 0;
  for (std::uint32_t step = 0; step <= max_steps; ++step) {
    Poly residual = goal - jet(substitute(target, phi, k), k);
    if (residual.is_zero()) return phi;
    if (step == max_steps) return std::nullopt;
    const std::uint32_t d = residual.order();
    if (d <= last_order && ++stalls > 3) return std::nullopt;
    if (d > last_order) stalls = 0;
    last_order = d;
    if (d < 2) return std::nullopt;  // the linear parts already disagree in degree <= 1

    std::vector<Poly> dphi;
    for (const auto& g : grads) dphi.push_back(jet(substitute(g, phi, d), d));
    std::vector<Monomial> monos;
    for (std::uint32_t e = 1; e < d; ++e)
      for (auto& m : monomials_of_degree(n, e)) monos.push_back(std::move(m));

    // unknown (j, t): coefficient of monomial t in the correction of phi_j
    std::map<Monomial, std::size_t, GradedLexLess> row_of;
    auto row = [&](const Monomial& m) { return row_of.try_emplace(m, row_of.size()).first->second; };
    std::vector<std::vector<std::pair<std::size_t, Coefficient>>> cols;
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& t : monos) {
        std::vector<std::pair<std::size_t, Coefficient>> col;
        for (const auto& [m, c] : dphi[j].terms()) {
          Monomial prod = t * m;
          if (prod.degree() <= d) col.emplace_back(row(prod), c);
        }
        cols.push_back(std::move(col));
      }
    for (const auto& [m, c] : residual.terms())
      if (m.degree() == d) row(m);
    DenseMatrix M(row_of.size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (const auto& [r, v] : cols[c]) M(r, c) = v;
    std::vector<Coefficient> rhs(row_of.size());
    for (const auto& [m, c] : residual.terms())
      if (m.degree() == d) rhs[row_of.at(m)] = c;
    auto x = solve(M, rhs);
    if (!x) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t t = 0; t < monos.size(); ++t) {
        const auto& c = (*x)[j * monos.size() + t];
        if (!c.is_zero()) phi[j] += Poly::term(R, monos[t], c);
      }
    for (auto& p : phi) p.truncate_in_place(k);
    if (coefficient_height(phi) > kNewtonHeightLimit) return std::nullopt;
  }
  return std::nullopt;
}

/// Bounded search for a coordinate change with target(phi) = source up to
/// degree k: linear parts are signed/imaginary-scaled variable permutations.
/// Candidates are ranked by how far target(phi) already agrees with source in
/// low degrees, and the best witness_candidates of them are completed.
inline std::optional<std::vector<Poly>> search_substitution(const Poly& source, const Poly& target, std::uint32_t k,
                                                            const Budget& budget) {
  const Ring& R = source.ring();
  const std::size_t n = R->var_count();
  if (target.ring()->var_count() != n) internal_error("search_substitution: variable counts differ");
  const Coefficient scales[4] = {Coefficient(1), Coefficient(-1), Coefficient::i(), -Coefficient::i()};
  const std::size_t raw_limit = 16 * budget.witness_candidates;
  const std::uint32_t probe = std::min<std::uint32_t>(k, static_cast<std::uint32_t>(source.order()) + 3);
  const Poly source_probe = jet(source, probe);

  struct Candidate {
    std::uint32_t agreement;
    std::vector<Poly> phi;
  };
  std::vector<Candidate> candidates;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<std::size_t> digits(n, 0);
    for (;;) {
      if (candidates.size() >= raw_limit) break;
      std::vector<Poly> phi;
      for (std::size_t j = 0; j < n; ++j) phi.push_back(Poly::variable(R, perm[j]).scaled(scales[digits[j]]));
      Poly residual = source_probe - jet(substitute(target, phi, probe), probe);
      std::uint32_t agreement = residual.is_zero() ? probe + 1 : static_cast<std::uint32_t>(residual.order());
      candidates.push_back({agreement, std::move(phi)});
      std::size_t pos = 0;
      while (pos < n && ++digits[pos] == 4) digits[pos++] = 0;
      if (pos == n) break;
    }
  } while (candidates.size() < raw_limit && std::next_permutation(perm.begin(), perm.end()));

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.agreement > b.agreement; });
  if (candidates.size() > budget.witness_candidates) candidates.resize(budget.witness_candidates);
  for (auto& c : candidates)
    if (auto found = newton_complete(source, target, std::move(c.phi), k, budget.newton_steps))
      if (invertible_linear_part(*found) && substitution_matches(source, target, *found, k)) return found;
  return std::nullopt;
}

inline const Germ& side_germ(const Stabilized& s, Side side) { return side == Side::First ? s.first : s.second; }

}  // namespace detail

/// Decides whether the dg singularity categories of two isolated hypersurface
/// germs are quasi-equivalent. NotEquivalent and Equivalent carry certificates
/// that verify_verdict replays; Unknown means no certificate was found.
inline EquivalenceVerdict decide_dg_equivalence(const Germ& g1, const Germ& g2, const Budget& budget = {}) {
  detail::require_classifiable(g1, Side::First, budget);
  detail::require_classifiable(g2, Side::Second, budget);

  const std::size_t d = krull_dimension(g1), e = krull_dimension(g2);
  if (auto obstruction = parity_check(d, e)) return {g1, g2, NotEquivalent{*obstruction}};

  detail::Stabilized st = detail::stabilize_pair(g1, g2);
  TyurinaAlgebra t1 = tyurina_algebra(st.first, budget.degree_cap);
  TyurinaAlgebra t2 = tyurina_algebra(st.second, budget.degree_cap);
  if (auto cert = tyurina_compare(t1, t2))
    return {g1, g2, NotEquivalent{TyurinaInvariantMismatch{cert->invariant, cert->first, cert->second}}};

  auto a1 = ade_recognize(g1, budget.degree_cap);
  auto a2 = a1 ? ade_recognize(g2, budget.degree_cap) : std::nullopt;
  if (a1 && a2 && *a1 == *a2) return {g1, g2, Equivalent{st.m, st.side, AdeWitness{*a1}}};

  for (Side source : {Side::First, Side::Second}) {
    const Germ& src = detail::side_germ(st, source);
    const Germ& tgt = detail::side_germ(st, source == Side::First ? Side::Second : Side::First);
    auto k = determinacy_bound(src, budget.degree_cap);
    if (!k) continue;
    if (auto images = detail::search_substitution(src.f(), tgt.f(), *k, budget))
      return {g1, g2, Equivalent{st.m, st.side, SubstitutionWitness{source, *k, std::move(*images)}}};
  }
  return {g1, g2,
          Unknown{"Tyurina invariants agree but neither a common ADE normal form nor a coordinate change "
                  "was found within the search budget"}};
}

struct VerifyReport {
  bool ok = false;
  std::string detail;
};

/// Replays the certificate of a verdict through the lower modules.
inline VerifyReport verify_verdict(const EquivalenceVerdict& v, const Budget& budget = {}) {
  auto fail = [](std::string why) { return VerifyReport{false, std::move(why)}; };
  try {
    detail::require_classifiable(v.first, Side::First, budget);
    detail::require_classifiable(v.second, Side::Second, budget);
  } catch (const Error& e) {
    return fail(std::string("inputs are not classifiable: ") + e.what());
  }
  const std::size_t d = krull_dimension(v.first), e = krull_dimension(v.second);
  auto parity = parity_check(d, e);

  if (const auto* ne = std::get_if<NotEquivalent>(&v.outcome)) {
    if (const auto* p = std::get_if<ParityObstruction>(&ne->certificate)) {
      if (p->d != d || p->e != e) return fail("recorded dimensions do not match the germs");
      if (!parity) return fail("dimensions differ by an even number");
      return {true, "parity obstruction recomputed"};
    }
    const auto& mm = std::get<TyurinaInvariantMismatch>(ne->certificate);
    if (parity) return fail("Tyurina mismatch recorded for a pair with a parity obstruction");
    auto st = detail::stabilize_pair(v.first, v.second);
    auto x = tyurina_invariant(tyurina_algebra(st.first, budget.degree_cap), mm.invariant);
    auto y = tyurina_invariant(tyurina_algebra(st.second, budget.degree_cap), mm.invariant);
    if (x != mm.first || y != mm.second) return fail("recomputed " + mm.invariant + " values differ from the record");
    if (x == y) return fail("recorded invariant " + mm.invariant + " agrees on both sides");
    return {true, mm.invariant + " recomputed and differs"};
  }

  if (parity) return fail("verdict without parity obstruction for dimensions of odd difference");
  auto st = detail::stabilize_pair(v.first, v.second);

  if (const auto* u = std::get_if<Unknown>(&v.outcome)) {
    (void)u;
    auto t1 = tyurina_algebra(st.first, budget.degree_cap), t2 = tyurina_algebra(st.second, budget.degree_cap);
    if (auto cert = tyurina_compare(t1, t2)) return fail("Unknown recorded but invariant " + cert->invariant + " differs");
    return {true, "abstention consistent: parity even and Tyurina invariants agree"};
  }

  const auto& eq = std::get<Equivalent>(v.outcome);
  if (eq.m != st.m || eq.stabilized_side != st.side) return fail("recorded stabilization does not match the germs");
  if (const auto* ade = std::get_if<AdeWitness>(&eq.witness)) {
    auto a1 = ade_recognize(v.first, budget.degree_cap), a2 = ade_recognize(v.second, budget.degree_cap);
    if (!a1 || !a2 || !(*a1 == ade->type) || !(*a2 == ade->type))
      return fail("ADE recognition does not reproduce " + ade->type.to_string() + " on both sides");
    return {true, "both sides recognized as " + ade->type.to_string()};
  }
  const auto& sub = std::get<SubstitutionWitness>(eq.witness);
  const Germ& src = detail::side_germ(st, sub.source);
  const Germ& tgt = detail::side_germ(st, sub.source == Side::First ? Side::Second : Side::First);
  if (sub.images.size() != tgt.var_count()) return fail("substitution has the wrong number of images");
  for (const auto& p : sub.images)
    if (!same_ring(p.ring(), src.ring())) return fail("substitution images live in the wrong ring");
  for (const auto& p : sub.images)
    if (!p.constant_term().is_zero()) return fail("substitution does not fix the origin");
  if (!detail::invertible_linear_part(sub.images)) return fail("substitution has a singular linear part");
  auto k = determinacy_bound(src, budget.degree_cap);
  if (!k || *k > sub.jet_degree) return fail("determinacy of the source germ is not certified at the recorded degree");
  if (!detail::substitution_matches(src.f(), tgt.f(), sub.images, sub.jet_degree))
    return fail("substituted germ does not agree with the source jet");
  return {true, "coordinate change replayed up to degree " + std::to_string(sub.jet_degree)};
}

}  // namespace mfsing
