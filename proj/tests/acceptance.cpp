// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "mfsing/cli.hpp"
#include "support.hpp"

using namespace mfsing;
using namespace testing_support;

namespace {

struct Check {
  std::string failure;
  void require(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<void(Check&)>& body) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > limit_s) c.require(false, "took longer than the time limit");
  bool ok = c.failure.empty();
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << std::fixed
            << std::setprecision(2) << secs << " s, limit " << limit_s << " s)";
  if (!ok) std::cout << " -- " << c.failure;
  std::cout << std::endl;
}

bool revalidates(const MatrixFactorization& m) {
  try {
    MatrixFactorization::validate(m.A(), m.B(), m.f());
    return true;
  } catch (const Error&) {
    return false;
  }
}

oracle::Poly to_oracle(const Poly& p) {
  oracle::Poly out;
  for (const auto& [m, c] : p.terms()) out[oracle::Exponents(m.exponents().begin(), m.exponents().end())] = c.re();
  return out;
}

std::vector<EquivalenceVerdict> parity_verdicts;

}  // namespace

int main() {
  criterion(1, "parity suite: Equivalent for m in {0,2,4}, ParityObstruction for m in {1,3}", 10, [](Check& c) {
    for (const auto& ade : ade_suite()) {
      Germ g = G(ade_ring(), ade.text.c_str());
      for (std::size_t m = 0; m <= 4; ++m) {
        auto v = decide_dg_equivalence(g, stabilize(g, m));
        std::string tag = ade.name + " m=" + std::to_string(m);
        if (m % 2 == 0) {
          c.require(v.equivalent() && std::get<Equivalent>(v.outcome).m == m, tag + " not Equivalent");
        } else {
          c.require(v.not_equivalent() &&
                        std::holds_alternative<ParityObstruction>(std::get<NotEquivalent>(v.outcome).certificate),
                    tag + " not ParityObstruction");
        }
        parity_verdicts.push_back(std::move(v));
      }
    }
  });

  criterion(2, "Tyurina algebra invariants of f and f + u^2 + v^2 agree on the ADE suite", 10, [](Check& c) {
    for (const auto& ade : ade_suite()) {
      Germ g = G(ade_ring(), ade.text.c_str());
      TyurinaAlgebra a = tyurina_algebra(g), b = tyurina_algebra(stabilize(g, 2));
      c.require(a.tau == b.tau, ade.name + " tau");
      c.require(a.hilbert.values == b.hilbert.values, ade.name + " Hilbert function");
      c.require(a.socle_dim == b.socle_dim, ade.name + " socle dimension");
      c.require(a.m_power_dims == b.m_power_dims, ade.name + " m-power dimensions");
    }
  });

  criterion(3, "mu and tau of the ADE suite match the jet-space oracle (D = 12)", 30, [](Check& c) {
    for (const auto& ade : ade_suite()) {
      SingularityInvariants inv = invariants(G(ade_ring(), ade.text.c_str()));
      std::size_t om = oracle::milnor(ade.oracle_f, 2, 12), ot = oracle::tyurina(ade.oracle_f, 2, 12);
      c.require(inv.mu && *inv.mu == om && om == ade.mu, ade.name + " mu");
      c.require(inv.tau && *inv.tau == ot && ot == ade.mu, ade.name + " tau");
    }
  });

  criterion(4, "200 random matrix factorizations: closure, shift^2, Knoerrer, cone, reduce", 60, [](Check& c) {
    Random rnd(2024);
    Ring r = ring_of({"x", "y"});
    for (int trial = 0; trial < 200; ++trial) {
      auto m = random_mf(rnd, r);
      std::string tag = "instance " + std::to_string(trial);
      auto s = shift(m);
      c.require(revalidates(s) && shift(s) == m, tag + ": shift");
      auto k = knoerrer(m, "u", "v");
      Poly uv = Poly::variable(k.ring(), 2) * Poly::variable(k.ring(), 3);
      c.require(revalidates(k) && k.size() == 2 * m.size() && k.f() == embed(m.f(), k.ring()) + uv, tag + ": knoerrer");
      c.require(!m.is_reduced() || k.is_reduced(), tag + ": knoerrer reducedness");
      auto cid = cone(MFMorphism::identity(m));
      c.require(revalidates(cid) && reduce(cid).size() == 0, tag + ": cone(identity)");
      auto czero = cone(MFMorphism::zero(m, m));
      c.require(revalidates(czero), tag + ": cone(zero)");
      auto red = reduce(m);
      c.require(revalidates(red) && red.size() <= m.size() && red.is_reduced() && reduce(red) == red,
                tag + ": reduce");
      c.require(revalidates(direct_sum(m, s)), tag + ": direct sum");
    }
  });

  criterion(5, "stable Hom over z^2: End(z,z) = 1 stabilized by bound 4, Hom into trivial = 0", 5, [](Check& c) {
    Ring r = ring_of({"z"});
    Poly z = Poly::variable(r, 0);
    auto m = validate(PolyMatrix::scalar(r, 1, z), PolyMatrix::scalar(r, 1, z), z * z);
    auto h = stable_hom_dimension(m, m, 4);
    c.require(h.value == 1 && h.stabilized, "End((z,z))");
    auto t = trivial_pair(z * z);
    c.require(stable_hom_dimension(m, t.first, 4).value == 0, "Hom((z,z), (1,z^2))");
    c.require(stable_hom_dimension(m, t.second, 4).value == 0, "Hom((z,z), (z^2,1))");
  });

  criterion(6, "every verdict from criterion 1 and a random batch passes --verify replay", 30, [](Check& c) {
    std::vector<EquivalenceVerdict> verdicts = parity_verdicts;
    c.require(!verdicts.empty(), "criterion 1 produced no verdicts");
    Random rnd(606);
    Ring r = ring_of({"x", "y"});
    std::size_t random_pairs = 0;
    while (random_pairs < 40) {
      Germ g(rnd.poly(r, 2, 5, 3));
      if (g.f().order() < 2) continue;
      Germ h = rnd.chance(0.5) ? Germ(substitute(g.f(), random_coordinate_change(rnd, r))) : Germ(rnd.poly(r, 2, 5, 3));
      if (h.f().order() < 2) continue;
      if (rnd.chance(0.3)) h = stabilize(h, static_cast<std::size_t>(rnd.integer(1, 2)));
      try {
        verdicts.push_back(decide_dg_equivalence(g, h));
        ++random_pairs;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Precondition) throw;  // non-isolated draws are skipped
      }
    }
    for (const auto& v : verdicts) {
      std::ostringstream out, err;
      std::istringstream in(cli::detail::verdict_manifest(v).dump());
      int code = cli::run({"classify", "--verify", "-"}, out, err, in);
      c.require(code == 0, to_string(v.first.f()) + " vs " + to_string(v.second.f()) + ": " + err.str());
    }
  });

  criterion(7, "locality: mu(z^2 + z^3) = 1 while the global count is 2", 5, [](Check& c) {
    Ring r = ring_of({"z"});
    Poly f = P(r, "z^2 + z^3");
    auto inv = invariants(Germ(f));
    c.require(inv.mu && *inv.mu == 1, "local Milnor number");
    // globally Q[z]/(f') has dimension deg f' = 2 (critical points 0 and -2/3)
    Poly df = partial_derivative(f, 0);
    c.require(df.degree() == 2 && *inv.mu != df.degree(), "global count");
    c.require(oracle::milnor(to_oracle(f), 1, 12) == 1, "oracle local Milnor number");
  });

  return failures == 0 ? 0 : 1;
}
