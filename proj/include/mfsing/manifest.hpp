#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "mfsing/classify.hpp"
#include "mfsing/mf.hpp"
#include "mfsing/text.hpp"

namespace mfsing {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

namespace detail {

[[noreturn]] inline void bad_manifest(const std::string& what) {
  throw Error(ErrorKind::Parse, "malformed manifest: " + what);
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad_manifest(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) bad_manifest(std::string("missing field '") + key + "'");
  return *it;
}

inline std::string string_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) bad_manifest(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::size_t count_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned()) bad_manifest(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

inline std::vector<std::size_t> counts(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) bad_manifest(std::string("field '") + key + "' must be an array");
  std::vector<std::size_t> out;
  for (const auto& x : v) {
    if (!x.is_number_unsigned()) bad_manifest(std::string("field '") + key + "' must hold non-negative integers");
    out.push_back(x.get<std::size_t>());
  }
  return out;
}

}  // namespace detail

inline Json ring_to_json(const Ring& ring) { return Json{{"variables", ring->var_names()}}; }

inline Ring ring_from_json(const Json& j) {
  const Json& vars = detail::field(j, "variables");
  if (!vars.is_array()) detail::bad_manifest("ring.variables must be an array");
  std::vector<std::string> names;
  for (const auto& v : vars) {
    if (!v.is_string()) detail::bad_manifest("ring.variables must hold strings");
    names.push_back(v.get<std::string>());
  }
  try {
    return make_ring(std::move(names));
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, std::string("malformed manifest: ") + e.what());
  }
}

inline Json matrix_to_json(const PolyMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline PolyMatrix matrix_from_json(const Json& j, const Ring& ring) {
  if (!j.is_array()) detail::bad_manifest("matrix must be an array of rows");
  std::vector<std::vector<Poly>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) detail::bad_manifest("matrix rows must be arrays");
    std::vector<Poly> entries;
    for (const auto& e : row) {
      if (!e.is_string()) detail::bad_manifest("matrix entries must be polynomial strings");
      entries.push_back(parse_poly(e.get<std::string>(), ring));
    }
    rows.push_back(std::move(entries));
  }
  if (!rows.empty() && rows[0].empty()) detail::bad_manifest("matrix rows must not be empty");
  for (const auto& r : rows)
    if (r.size() != rows[0].size()) detail::bad_manifest("matrix rows have different lengths");
  return PolyMatrix::from_rows(ring, rows);
}

inline Json mf_to_json(const MatrixFactorization& m) {
  return Json{{"A", matrix_to_json(m.A())}, {"B", matrix_to_json(m.B())}, {"f", to_string(m.f())}};
}

/// Parses and validates; a non-factorization is a precondition failure.
inline MatrixFactorization mf_from_json(const Json& j, const Ring& ring) {
  return validate(matrix_from_json(detail::field(j, "A"), ring), matrix_from_json(detail::field(j, "B"), ring),
                  parse_poly(detail::string_field(j, "f"), ring));
}

inline Json germ_to_json(const Germ& g) {
  return Json{{"variables", g.ring()->var_names()}, {"germ", to_string(g.f())}};
}

inline Germ germ_from_json(const Json& j) {
  Ring ring = ring_from_json(j);
  Poly f = parse_poly(detail::string_field(j, "germ"), ring);
  return Germ(std::move(f));
}

inline Json verdict_to_json(const EquivalenceVerdict& v) {
  Json out{{"outcome", v.outcome_name()}, {"first", germ_to_json(v.first)}, {"second", germ_to_json(v.second)}};
  if (const auto* eq = std::get_if<Equivalent>(&v.outcome)) {
    Json w{{"m", eq->m}, {"stabilized_side", eq->stabilized_side ? side_name(*eq->stabilized_side) : "none"}};
    if (const auto* ade = std::get_if<AdeWitness>(&eq->witness)) {
      w["kind"] = "ade";
      w["ade"] = ade->type.to_string();
    } else {
      const auto& sub = std::get<SubstitutionWitness>(eq->witness);
      w["kind"] = "substitution";
      w["source"] = side_name(sub.source);
      w["jet_degree"] = sub.jet_degree;
      w["source_variables"] = sub.images.empty() ? std::vector<std::string>{} : sub.images[0].ring()->var_names();
      Json images = Json::array();
      for (const auto& p : sub.images) images.push_back(to_string(p));
      w["images"] = std::move(images);
    }
    out["witness"] = std::move(w);
  } else if (const auto* ne = std::get_if<NotEquivalent>(&v.outcome)) {
    if (const auto* p = std::get_if<ParityObstruction>(&ne->certificate)) {
      out["certificate"] = Json{{"kind", "ParityObstruction"}, {"d", p->d}, {"e", p->e}};
    } else {
      const auto& t = std::get<TyurinaInvariantMismatch>(ne->certificate);
      out["certificate"] = Json{
          {"kind", "TyurinaInvariantMismatch"}, {"invariant", t.invariant}, {"first", t.first}, {"second", t.second}};
    }
  } else {
    out["reason"] = std::get<Unknown>(v.outcome).reason;
  }
  return out;
}

inline Side side_from_string(const std::string& s) {
  if (s == "first") return Side::First;
  if (s == "second") return Side::Second;
  detail::bad_manifest("side must be 'first' or 'second', got '" + s + "'");
}

inline EquivalenceVerdict verdict_from_json(const Json& j) {
  Germ first = germ_from_json(detail::field(j, "first"));
  Germ second = germ_from_json(detail::field(j, "second"));
  const std::string outcome = detail::string_field(j, "outcome");
  if (outcome == "Equivalent") {
    const Json& w = detail::field(j, "witness");
    Equivalent eq;
    eq.m = detail::count_field(w, "m");
    const std::string ss = detail::string_field(w, "stabilized_side");
    if (ss != "none") eq.stabilized_side = side_from_string(ss);
    const std::string kind = detail::string_field(w, "kind");
    if (kind == "ade") {
      auto t = ADEType::parse(detail::string_field(w, "ade"));
      if (!t) detail::bad_manifest("unrecognized ADE type");
      eq.witness = AdeWitness{*t};
    } else if (kind == "substitution") {
      SubstitutionWitness sub;
      sub.source = side_from_string(detail::string_field(w, "source"));
      sub.jet_degree = static_cast<std::uint32_t>(detail::count_field(w, "jet_degree"));
      Ring ring = ring_from_json(Json{{"variables", detail::field(w, "source_variables")}});
      const Json& images = detail::field(w, "images");
      if (!images.is_array()) detail::bad_manifest("images must be an array");
      for (const auto& im : images) {
        if (!im.is_string()) detail::bad_manifest("images must be polynomial strings");
        sub.images.push_back(parse_poly(im.get<std::string>(), ring));
      }
      eq.witness = std::move(sub);
    } else {
      detail::bad_manifest("unknown witness kind '" + kind + "'");
    }
    return {std::move(first), std::move(second), std::move(eq)};
  }
  if (outcome == "NotEquivalent") {
    const Json& c = detail::field(j, "certificate");
    const std::string kind = detail::string_field(c, "kind");
    if (kind == "ParityObstruction")
      return {std::move(first), std::move(second),
              NotEquivalent{ParityObstruction{detail::count_field(c, "d"), detail::count_field(c, "e")}}};
    if (kind == "TyurinaInvariantMismatch")
      return {std::move(first), std::move(second),
              NotEquivalent{TyurinaInvariantMismatch{detail::string_field(c, "invariant"), detail::counts(c, "first"),
                                                     detail::counts(c, "second")}}};
    detail::bad_manifest("unknown certificate kind '" + kind + "'");
  }
  if (outcome == "Unknown") return {std::move(first), std::move(second), Unknown{detail::string_field(j, "reason")}};
  detail::bad_manifest("unknown outcome '" + outcome + "'");
}

/// {"schema_version": "1", "ring": {"variables": [...]}, "payload": {...}}
inline Json make_manifest(const Ring& ring, Json payload) {
  return Json{{"schema_version", kSchemaVersion}, {"ring", ring_to_json(ring)}, {"payload", std::move(payload)}};
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
  }
}

/// Checks the envelope and returns the ring it declares.
inline Ring manifest_ring(const Json& manifest) {
  if (detail::string_field(manifest, "schema_version") != kSchemaVersion)
    detail::bad_manifest("unsupported schema_version");
  detail::field(manifest, "payload");
  return ring_from_json(detail::field(manifest, "ring"));
}

inline const Json& manifest_payload(const Json& manifest, const char* kind) {
  return detail::field(detail::field(manifest, "payload"), kind);
}

}  // namespace mfsing
