#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "mfsing/classify.hpp"
#include "mfsing/manifest.hpp"
#include "mfsing/mf.hpp"
#include "mfsing/singularity.hpp"
#include "mfsing/text.hpp"

namespace mfsing::cli {

/// Process exit codes. Every failure maps to exactly one of these.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kParse = 2,         // malformed polynomial, JSON, manifest or command line
  kPrecondition = 3,  // non-isolated germ, ring mismatch, invalid factorization, unsupported input
  kBudget = 4,        // a degree cap or search budget ran out
  kVerifyFailed = 5,  // --verify replay disagreed with the manifest
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return kParse;
    case ErrorKind::Precondition: return kPrecondition;
    case ErrorKind::Unsupported: return kPrecondition;
    case ErrorKind::Budget: return kBudget;
    case ErrorKind::Internal: return kInternal;
  }
  return kInternal;
}

namespace detail {

struct Options {
  std::vector<std::string> vars;
  std::vector<std::string> positional;
  std::uint32_t degree_cap = kDefaultDegreeCap;
  std::size_t budget = Budget{}.witness_candidates;
  std::string format = "json";
  // mf inputs given inline
  std::string f, a, b;
  // mf-knoerrer
  std::string names = "x,y";
  bool squares = false;
  // mf-cone
  std::string morphism;
  // mf-hom
  std::uint32_t degree_bound = 4;
  // classify
  bool batch = false;
  bool verify = false;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n"), e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline Ring ring_from_list(const std::string& list) {
  std::vector<std::string> names;
  for (const auto& n : split(list, ',')) names.push_back(trim(n));
  try {
    return make_ring(std::move(names));
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, std::string("--vars: ") + e.what());
  }
}

inline std::string read_source(const std::string& path, std::istream& in) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(in), {});
  std::ifstream file(path);
  if (!file) throw Error(ErrorKind::Parse, "cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(file), {});
}

/// "a, b; c, d" -> 2 x 2 matrix; "" -> 0 x 0.
inline PolyMatrix inline_matrix(const std::string& text, const Ring& ring) {
  std::vector<std::vector<Poly>> rows;
  if (!trim(text).empty())
    for (const auto& row : split(text, ';')) {
      std::vector<Poly> entries;
      for (const auto& e : split(row, ',')) entries.push_back(parse_poly(e, ring));
      rows.push_back(std::move(entries));
    }
  return PolyMatrix::from_rows(ring, rows);
}

inline Germ single_germ(const Options& o) {
  if (o.vars.size() != 1 || o.positional.size() != 1)
    throw Error(ErrorKind::Parse, "expected exactly one --vars list and one polynomial");
  return Germ(parse_poly(o.positional[0], ring_from_list(o.vars[0])));
}

inline MatrixFactorization mf_from_manifest_text(const std::string& text) {
  Json manifest = parse_json(text);
  Ring ring = manifest_ring(manifest);
  return mf_from_json(manifest_payload(manifest, "mf"), ring);
}

/// Factorizations from manifest files (positional) or from --vars/--f/--A/--B.
inline std::vector<MatrixFactorization> load_mfs(const Options& o, std::istream& in) {
  std::vector<MatrixFactorization> out;
  if (!o.positional.empty()) {
    for (const auto& path : o.positional) out.push_back(mf_from_manifest_text(read_source(path, in)));
    return out;
  }
  if (o.vars.size() != 1 || o.f.empty())
    throw Error(ErrorKind::Parse, "give a manifest file, or --vars with --f, --A and --B");
  Ring ring = ring_from_list(o.vars[0]);
  out.push_back(validate(inline_matrix(o.a, ring), inline_matrix(o.b, ring), parse_poly(o.f, ring)));
  return out;
}

inline MatrixFactorization single_mf(const Options& o, std::istream& in) {
  auto all = load_mfs(o, in);
  if (all.size() != 1) throw Error(ErrorKind::Parse, "expected exactly one matrix factorization");
  return all[0];
}

inline Json mf_manifest(const MatrixFactorization& m) { return make_manifest(m.ring(), Json{{"mf", mf_to_json(m)}}); }

inline Budget budget_of(const Options& o) {
  Budget b;
  b.degree_cap = o.degree_cap;
  b.witness_candidates = o.budget;
  return b;
}

inline Json cmd_invariants(const Options& o) {
  Germ g = single_germ(o);
  SingularityInvariants inv = invariants(g, o.degree_cap);
  auto dim = [](const Dimension& d) { return d ? Json(*d) : Json("infinite"); };
  Json body{{"mu", dim(inv.mu)},
            {"tau", dim(inv.tau)},
            {"corank", inv.corank},
            {"determinacy", inv.determinacy ? Json(*inv.determinacy) : Json("unknown")},
            {"ade", inv.ade ? Json(inv.ade->to_string()) : Json(nullptr)}};
  return make_manifest(g.ring(), Json{{"germ", to_string(g.f())}, {"invariants", std::move(body)}});
}

inline Json cmd_tyurina(const Options& o) {
  Germ g = single_germ(o);
  TyurinaAlgebra t = tyurina_algebra(g, o.degree_cap);
  Json basis = Json::array();
  for (const auto& m : t.basis.monomials) basis.push_back(to_string(Poly::term(g.ring(), m, Coefficient(1))));
  Json body{{"tau", t.tau},
            {"basis", std::move(basis)},
            {"hilbert", t.hilbert.values},
            {"socle_dim", t.socle_dim},
            {"m_power_dims", t.m_power_dims}};
  return make_manifest(g.ring(), Json{{"germ", to_string(g.f())}, {"tyurina", std::move(body)}});
}

inline Json cmd_mf_validate(const Options& o, std::istream& in) {
  MatrixFactorization m = single_mf(o, in);
  Json manifest = mf_manifest(m);
  manifest["payload"]["properties"] = Json{{"size", m.size()}, {"reduced", m.is_reduced()}};
  return manifest;
}

inline Json cmd_mf_knoerrer(const Options& o, std::istream& in) {
  MatrixFactorization m = single_mf(o, in);
  auto names = split(o.names, ',');
  if (names.size() != 2) throw Error(ErrorKind::Parse, "--names expects two comma-separated variable names");
  names[0] = trim(names[0]);
  names[1] = trim(names[1]);
  for (const auto& n : names)
    if (!is_identifier(n) || n == "i") throw Error(ErrorKind::Parse, "--names: '" + n + "' is not a valid variable name");
  return mf_manifest(o.squares ? knoerrer_squares(m, names[0], names[1]) : knoerrer(m, names[0], names[1]));
}

inline Json cmd_mf_cone(const Options& o, std::istream& in) {
  if (!o.morphism.empty()) {
    MatrixFactorization m = single_mf(o, in);
    if (o.morphism == "identity") return mf_manifest(cone(MFMorphism::identity(m)));
    if (o.morphism == "zero") return mf_manifest(cone(MFMorphism::zero(m, m)));
    throw Error(ErrorKind::Parse, "--morphism must be 'identity' or 'zero'");
  }
  if (o.positional.size() != 1) throw Error(ErrorKind::Parse, "mf-cone expects a morphism manifest or --morphism");
  Json manifest = parse_json(read_source(o.positional[0], in));
  Ring ring = manifest_ring(manifest);
  const Json& mor = manifest_payload(manifest, "morphism");
  MatrixFactorization src = mf_from_json(mfsing::detail::field(mor, "source"), ring);
  MatrixFactorization tgt = mf_from_json(mfsing::detail::field(mor, "target"), ring);
  PolyMatrix u = matrix_from_json(mfsing::detail::field(mor, "u"), ring);
  PolyMatrix v = matrix_from_json(mfsing::detail::field(mor, "v"), ring);
  if (tgt.size() == 0 || src.size() == 0) {
    u = PolyMatrix(ring, tgt.size(), src.size());
    v = u;
  }
  return mf_manifest(cone(MFMorphism::make(src, tgt, u, v)));
}

inline Json cmd_mf_hom(const Options& o, std::istream& in) {
  auto all = load_mfs(o, in);
  if (all.size() > 2) throw Error(ErrorKind::Parse, "mf-hom takes at most two factorizations");
  const MatrixFactorization& M = all[0];
  const MatrixFactorization& N = all.size() == 2 ? all[1] : all[0];
  if (o.degree_bound < 1) throw Error(ErrorKind::Parse, "--degree-bound must be >= 1");
  StableHomDimension h = stable_hom_dimension(M, N, o.degree_bound);
  return make_manifest(M.ring(), Json{{"hom", Json{{"dimension", h.value},
                                                   {"stabilized", h.stabilized},
                                                   {"degree_bound", o.degree_bound}}}});
}

inline Json verdict_manifest(const EquivalenceVerdict& v) {
  return make_manifest(v.first.ring(), Json{{"verdict", verdict_to_json(v)}});
}

inline Json cmd_classify_pair(const Options& o) {
  if (o.vars.size() != 2 || o.positional.size() != 2)
    throw Error(ErrorKind::Parse, "classify expects two '--vars LIST POLYNOMIAL' pairs");
  Germ g1(parse_poly(o.positional[0], ring_from_list(o.vars[0])));
  Germ g2(parse_poly(o.positional[1], ring_from_list(o.vars[1])));
  return verdict_manifest(decide_dg_equivalence(g1, g2, budget_of(o)));
}

inline std::pair<Json, bool> cmd_verify(const Options& o, std::istream& in) {
  if (o.positional.size() != 1) throw Error(ErrorKind::Parse, "--verify expects one manifest file (or '-')");
  Json manifest = parse_json(read_source(o.positional[0], in));
  manifest_ring(manifest);
  EquivalenceVerdict v = verdict_from_json(manifest_payload(manifest, "verdict"));
  VerifyReport r = verify_verdict(v, budget_of(o));
  Json out = make_manifest(v.first.ring(), Json{{"verify", Json{{"ok", r.ok},
                                                                {"outcome", v.outcome_name()},
                                                                {"detail", r.detail}}}});
  return {out, r.ok};
}

/// One JSON object per input line: {"first": {"variables": [...], "germ": "..."}, "second": {...}}.
/// Answers are written one compact manifest per line; failing lines are
/// reported on err and the first failure decides the exit code.
inline int cmd_batch(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  int code = kOk;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      Json pair = parse_json(line);
      Germ g1 = germ_from_json(mfsing::detail::field(pair, "first"));
      Germ g2 = germ_from_json(mfsing::detail::field(pair, "second"));
      out << verdict_manifest(decide_dg_equivalence(g1, g2, budget_of(o))).dump() << "\n";
    } catch (const Error& e) {
      err << "error: line " << lineno << ": " << e.what() << "\n";
      out << Json{{"error", Json{{"line", lineno}, {"message", e.what()}}}}.dump() << "\n";
      if (code == kOk) code = exit_code_for(e.kind());
    }
  }
  return code;
}

inline void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--vars", o.vars, "comma-separated variable names (repeat once per input)")
      ->allow_extra_args(false)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sub->add_option("--degree-cap", o.degree_cap, "degree cap for standard bases")->capture_default_str();
  sub->add_option("--budget", o.budget, "coordinate-change candidates tried per direction")->capture_default_str();
  sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json"}))->capture_default_str();
  sub->add_option("inputs", o.positional, "polynomials or manifest files ('-' for stdin)");
}

inline void add_mf_inline(CLI::App* sub, Options& o) {
  sub->add_option("--f", o.f, "polynomial f of an inline factorization");
  sub->add_option("--A", o.a, "matrix A, rows separated by ';', entries by ','");
  sub->add_option("--B", o.b, "matrix B, same syntax as --A");
}

}  // namespace detail

/// Runs one command line (without the program name). Writes the result
/// manifest to out and diagnostics to err; returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               std::istream& in = std::cin) {
  detail::Options o;
  CLI::App app{"Singularity invariants, matrix factorizations and singularity-category equivalence"};
  app.name("mfsing");
  app.require_subcommand(1);

  auto* invariants_cmd = app.add_subcommand("invariants", "Milnor/Tyurina numbers, corank, determinacy, ADE type");
  auto* tyurina_cmd = app.add_subcommand("tyurina", "Tyurina algebra: basis, Hilbert function, socle, m-powers");
  auto* validate_cmd = app.add_subcommand("mf-validate", "check A*B = B*A = f*I");
  auto* shift_cmd = app.add_subcommand("mf-shift", "(A, B) -> (B, A)");
  auto* knoerrer_cmd = app.add_subcommand("mf-knoerrer", "Knoerrer's functor into f + x*y (or f + u^2 + v^2)");
  auto* reduce_cmd = app.add_subcommand("mf-reduce", "split off trivial summands");
  auto* cone_cmd = app.add_subcommand("mf-cone", "cone of a morphism");
  auto* hom_cmd = app.add_subcommand("mf-hom", "dimension of the stable Hom space");
  auto* classify_cmd = app.add_subcommand("classify", "decide dg singularity category equivalence");

  for (auto* sub : {invariants_cmd, tyurina_cmd, validate_cmd, shift_cmd, knoerrer_cmd, reduce_cmd, cone_cmd, hom_cmd,
                    classify_cmd})
    detail::add_common(sub, o);
  for (auto* sub : {validate_cmd, shift_cmd, knoerrer_cmd, reduce_cmd, cone_cmd, hom_cmd}) detail::add_mf_inline(sub, o);
  knoerrer_cmd->add_option("--names", o.names, "two fresh variable names")->capture_default_str();
  knoerrer_cmd->add_flag("--squares", o.squares, "target f + u^2 + v^2 instead of f + x*y");
  cone_cmd->add_option("--morphism", o.morphism, "'identity' or 'zero' endomorphism of the input");
  hom_cmd->add_option("--degree-bound", o.degree_bound, "jet degree for morphisms and homotopies")->capture_default_str();
  classify_cmd->add_flag("--batch", o.batch, "read one JSON germ pair per line from stdin");
  classify_cmd->add_flag("--verify", o.verify, "replay the certificate in a verdict manifest");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }

  auto emit = [&](const Json& j) { out << j.dump(2) << "\n"; };
  try {
    if (*invariants_cmd) emit(detail::cmd_invariants(o));
    else if (*tyurina_cmd) emit(detail::cmd_tyurina(o));
    else if (*validate_cmd) emit(detail::cmd_mf_validate(o, in));
    else if (*shift_cmd) emit(detail::mf_manifest(shift(detail::single_mf(o, in))));
    else if (*knoerrer_cmd) emit(detail::cmd_mf_knoerrer(o, in));
    else if (*reduce_cmd) emit(detail::mf_manifest(reduce(detail::single_mf(o, in))));
    else if (*cone_cmd) emit(detail::cmd_mf_cone(o, in));
    else if (*hom_cmd) emit(detail::cmd_mf_hom(o, in));
    else if (*classify_cmd) {
      if (o.batch && o.verify) throw Error(ErrorKind::Parse, "--batch and --verify cannot be combined");
      if (o.batch) return detail::cmd_batch(o, in, out, err);
      if (o.verify) {
        auto [manifest, ok] = detail::cmd_verify(o, in);
        emit(manifest);
        if (!ok) {
          err << "error: certificate replay failed: " << manifest["payload"]["verify"]["detail"].get<std::string>()
              << "\n";
          return kVerifyFailed;
        }
      } else {
        emit(detail::cmd_classify_pair(o));
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}

}  // namespace mfsing::cli
