#pragma once

// JSON encodings of symbols, scalars, polygons, decompositions, forms,
// homology classes and classification results. Objects use sorted keys so
// dumps are byte-for-byte deterministic.

#include <string>
#include <vector>

#include "json.hpp"

#include "delzant/classification.hpp"
#include "delzant/decomposition.hpp"
#include "delzant/edge_homology.hpp"
#include "delzant/minkowski.hpp"

namespace delzant::io {

using Json = nlohmann::json;

namespace detail {

inline std::string rational_text(const Json& j, const std::string& what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw InvalidInput(what + " must be a rational string or an integer");
}

inline const Json& member(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(what + " is missing \"" + key + "\"");
  return j.at(key);
}

}  // namespace detail

inline Rational rational_from_json(const Json& j) { return parse_rational(detail::rational_text(j, "value")); }

// ---- symbols ---------------------------------------------------------------

/// {"name": {"enclosure": [lo, hi], "sqrt_of": r, "digits": "1.414"}, ...}
inline Json to_json(const SymbolTable& t) {
  Json out = Json::object();
  for (const auto& s : t.symbols()) {
    Json e;
    e["enclosure"] = {format_rational(s.enclosure.lo), format_rational(s.enclosure.hi)};
    if (s.sqrt_of) e["sqrt_of"] = format_rational(*s.sqrt_of);
    if (s.digits) e["digits"] = *s.digits;
    out[s.name] = std::move(e);
  }
  return out;
}

/// Reads the "symbols" member of a document (absent means no symbols) and the
/// optional "independent" declaration. Symbol indices follow name order.
inline SymbolTablePtr symbols_from_document(const Json& doc, int precision_cap = SymbolTable::kDefaultPrecisionCap) {
  std::vector<SymbolSpec> specs;
  if (doc.is_object() && doc.contains("symbols")) {
    const Json& syms = doc.at("symbols");
    if (!syms.is_object()) throw InvalidInput("\"symbols\" must be an object");
    for (const auto& [name, body] : syms.items()) {
      SymbolSpec s;
      s.name = name;
      const Json& enc = detail::member(body, "enclosure", "symbol " + name);
      if (!enc.is_array() || enc.size() != 2) throw InvalidInput("enclosure of " + name + " must be [lo, hi]");
      s.enclosure = {rational_from_json(enc[0]), rational_from_json(enc[1])};
      if (body.contains("sqrt_of")) s.sqrt_of = rational_from_json(body.at("sqrt_of"));
      if (body.contains("digits")) {
        if (!body.at("digits").is_string()) throw InvalidInput("digits of " + name + " must be a string");
        s.digits = body.at("digits").get<std::string>();
      }
      specs.push_back(std::move(s));
    }
  }
  bool independent = doc.is_object() && doc.value("independent", false);
  return std::make_shared<const SymbolTable>(std::move(specs), independent, precision_cap);
}

// ---- scalars ---------------------------------------------------------------

/// Rational scalars become "p/q"; others an object keyed by monomial, with ""
/// for the constant term and "a*b" for products.
inline Json to_json(const Scalar& x, const SymbolTable& t) {
  if (x.is_rational()) return format_rational(x.as_rational());
  Json out = Json::object();
  for (const auto& term : x.terms()) {
    std::string key;
    for (std::size_t i = 0; i < term.monomial.size(); ++i) {
      if (i) key += '*';
      if (term.monomial[i] >= t.size()) throw ContractViolation("scalar refers to a symbol outside its table");
      key += t.symbol(term.monomial[i]).name;
    }
    out[key] = format_rational(term.coefficient);
  }
  return out;
}

inline Scalar scalar_from_json(const Json& j, const SymbolTable& t) {
  if (j.is_string() || j.is_number_integer()) return Scalar(rational_from_json(j));
  if (!j.is_object()) throw InvalidInput("scalar must be a rational string, an integer or a monomial map");
  std::vector<Scalar::Term> terms;
  for (const auto& [key, coeff] : j.items()) {
    Monomial m;
    std::size_t start = 0;
    while (!key.empty() && start <= key.size()) {
      std::size_t star = key.find('*', start);
      std::string name = key.substr(start, star == std::string::npos ? std::string::npos : star - start);
      auto idx = t.find(name);
      if (!idx) throw InvalidInput("unknown symbol in scalar: " + name);
      m.push_back(static_cast<std::uint32_t>(*idx));
      if (star == std::string::npos) break;
      start = star + 1;
    }
    terms.push_back({std::move(m), rational_from_json(coeff)});
  }
  return Scalar::from_terms(std::move(terms));
}

// ---- points and polygons -----------------------------------------------------

inline Json to_json(const Point& p, const SymbolTable& t) { return Json::array({to_json(p.x, t), to_json(p.y, t)}); }

inline Point point_from_json(const Json& j, const SymbolTable& t) {
  if (!j.is_array() || j.size() != 2) throw InvalidInput("point must be a pair [x, y]");
  return {scalar_from_json(j[0], t), scalar_from_json(j[1], t)};
}

inline Json vertices_json(const DelzantPolygon& p) {
  Json vs = Json::array();
  for (const auto& v : p.vertices()) vs.push_back(to_json(v, p.symbols()));
  return vs;
}

/// {"symbols": {...}, "vertices": [[x, y], ...]}
inline Json to_json(const DelzantPolygon& p) {
  Json out;
  out["symbols"] = to_json(p.symbols());
  out["vertices"] = vertices_json(p);
  return out;
}

inline DelzantPolygon polygon_from_json(const Json& doc, SymbolTablePtr table) {
  const Json& vs = detail::member(doc, "vertices", "polygon");
  if (!vs.is_array()) throw InvalidInput("\"vertices\" must be an array");
  std::vector<Point> pts;
  for (const auto& v : vs) pts.push_back(point_from_json(v, *table));
  return DelzantPolygon::validate(std::move(pts), std::move(table));
}

inline DelzantPolygon polygon_from_json(const Json& doc, int precision_cap = SymbolTable::kDefaultPrecisionCap) {
  return polygon_from_json(doc, symbols_from_document(doc, precision_cap));
}

// ---- affine maps and decompositions -------------------------------------------

inline Json to_json(const UnimodularAffineMap& g, const SymbolTable& t) {
  const IntMat2& m = g.matrix();
  Json out;
  out["matrix"] = {{m.a, m.b}, {m.c, m.d}};
  out["translation"] = to_json(g.translation(), t);
  return out;
}

inline UnimodularAffineMap affine_map_from_json(const Json& j, const SymbolTable& t) {
  const Json& m = detail::member(j, "matrix", "affine map");
  if (!m.is_array() || m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
    throw InvalidInput("affine map matrix must be 2x2");
  IntMat2 a{m[0][0].get<std::int64_t>(), m[0][1].get<std::int64_t>(), m[1][0].get<std::int64_t>(),
            m[1][1].get<std::int64_t>()};
  return UnimodularAffineMap(a, point_from_json(detail::member(j, "translation", "affine map"), t));
}

/// {"root": {"triangle": l} | {"hirzebruch": [a, b, k]}, "steps": [...], "witness": {...}}.
/// The witness is optional on input; without it replay is only congruent.
inline Json to_json(const Decomposition& d) {
  const SymbolTable& t = *d.table;
  Json out;
  if (const auto* tr = std::get_if<TriangleRoot>(&d.root)) {
    out["root"]["triangle"] = to_json(tr->lambda, t);
  } else {
    const auto& h = std::get<HirzebruchRoot>(d.root);
    out["root"]["hirzebruch"] = Json::array({to_json(h.a, t), to_json(h.b, t), h.k});
  }
  out["steps"] = Json::array();
  for (const auto& s : d.steps) out["steps"].push_back({{"vertex", to_json(s.vertex, t)}, {"delta", to_json(s.delta, t)}});
  out["witness"] = to_json(d.witness, t);
  return out;
}

inline Decomposition decomposition_from_json(const Json& j, SymbolTablePtr table) {
  Decomposition d;
  d.table = table;
  const Json& root = detail::member(j, "root", "decomposition");
  if (root.contains("triangle")) {
    d.root = TriangleRoot{scalar_from_json(root.at("triangle"), *table)};
  } else if (root.contains("hirzebruch")) {
    const Json& h = root.at("hirzebruch");
    if (!h.is_array() || h.size() != 3 || !h[2].is_number_integer())
      throw InvalidInput("hirzebruch root must be [a, b, k] with integer k");
    d.root = HirzebruchRoot{scalar_from_json(h[0], *table), scalar_from_json(h[1], *table), h[2].get<long long>()};
  } else {
    throw InvalidInput("decomposition root must be a triangle or a hirzebruch trapezoid");
  }
  if (j.contains("steps"))
    for (const auto& s : j.at("steps"))
      d.steps.push_back({point_from_json(detail::member(s, "vertex", "step"), *table),
                         scalar_from_json(detail::member(s, "delta", "step"), *table)});
  if (j.contains("witness")) d.witness = affine_map_from_json(j.at("witness"), *table);
  return d;
}

// ---- forms, classes, classification --------------------------------------------

inline Json to_json(const IntersectionForm& f) {
  Json out;
  out["rank"] = f.rank;
  out["gram"] = f.gram;
  out["parity"] = to_string(f.parity);
  out["signature"] = {f.b_plus, f.b_minus};
  out["determinant"] = f.determinant;
  return out;
}

inline Json to_json(const BlowupForm& f, const MinkowskiClass& e) {
  ClassValues v = evaluate(f, e);
  Json out;
  out["d"] = e.d;
  out["m"] = e.m;
  out["period"] = to_json(v.period, f.symbols());
  out["c1"] = v.c1;
  return out;
}

inline Json to_json(const BlowupForm& f, const std::vector<MinkowskiClass>& classes) {
  Json out = Json::array();
  for (const auto& e : classes) out.push_back(to_json(f, e));
  return out;
}

inline Json to_json(const ClassificationResult& r, const SymbolTable& t) {
  Json out;
  out["exactness"] = to_string(r.exactness);
  out["classes"] = Json::array();
  for (const auto& c : r.classes)
    out["classes"].push_back(
        {{"polygon", to_json(c.polygon)}, {"decomposition", to_json(c.decomposition)}, {"type", c.type.label(t)}});
  return out;
}

/// {"cp2": {"lambda": l, "deltas": [...]}} | {"s2s2": [a, b]} |
/// {"raw": {"perimeter", "area", "b2", "candidate_sizes", "parity"}}, plus
/// an optional "symbols" header.
inline ManifoldSpec manifold_from_json(const Json& doc, int precision_cap = SymbolTable::kDefaultPrecisionCap) {
  ManifoldSpec spec;
  spec.table = symbols_from_document(doc, precision_cap);
  const SymbolTable& t = *spec.table;
  auto scalars = [&](const Json& arr) {
    std::vector<Scalar> out;
    if (!arr.is_array()) throw InvalidInput("expected an array of scalars");
    for (const auto& x : arr) out.push_back(scalar_from_json(x, t));
    return out;
  };
  if (doc.contains("cp2")) {
    const Json& c = doc.at("cp2");
    CP2Blowups cp{scalar_from_json(detail::member(c, "lambda", "cp2"), t), {}};
    if (c.contains("deltas")) cp.deltas = scalars(c.at("deltas"));
    spec.data = std::move(cp);
  } else if (doc.contains("s2s2")) {
    auto ab = scalars(doc.at("s2s2"));
    if (ab.size() != 2) throw InvalidInput("s2s2 needs exactly [a, b]");
    spec.data = S2xS2{ab[0], ab[1]};
  } else if (doc.contains("raw")) {
    const Json& r = doc.at("raw");
    RawInvariants raw;
    raw.perimeter = scalar_from_json(detail::member(r, "perimeter", "raw"), t);
    raw.area = scalar_from_json(detail::member(r, "area", "raw"), t);
    const Json& b2 = detail::member(r, "b2", "raw");
    if (!b2.is_number_unsigned()) throw InvalidInput("b2 must be a non-negative integer");
    raw.b2 = b2.get<std::size_t>();
    if (r.contains("candidate_sizes")) raw.candidate_sizes = scalars(r.at("candidate_sizes"));
    if (r.contains("parity")) {
      std::string p = r.at("parity").get<std::string>();
      if (p != "even" && p != "odd") throw InvalidInput("parity must be \"even\" or \"odd\"");
      raw.parity = p == "even" ? Parity::Even : Parity::Odd;
    }
    spec.data = std::move(raw);
  } else {
    throw InvalidInput("manifold document needs one of \"cp2\", \"s2s2\", \"raw\"");
  }
  return spec;
}

}  // namespace delzant::io
