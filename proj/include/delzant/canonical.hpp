#pragma once

#include <string>
#include <utility>
#include <vector>

#include "delzant/polygon.hpp"

namespace delzant {

struct CanonicalForm {
  DelzantPolygon polygon;
  /// witness(input) == polygon
  UnimodularAffineMap witness;
};

namespace detail {

/// Lexicographic comparison of vertex sequences (x before y, vertex by vertex).
inline Ordering compare_vertex_sequences(const std::vector<Point>& a, const std::vector<Point>& b,
                                         const SymbolTable& table) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (Ordering o = compare(a[i].x, b[i].x, table); o != Ordering::Equal) return o;
    if (Ordering o = compare(a[i].y, b[i].y, table); o != Ordering::Equal) return o;
  }
  if (a.size() == b.size()) return Ordering::Equal;
  return a.size() < b.size() ? Ordering::Less : Ordering::Greater;
}

/// Map sending vertex i to the origin and the primitive edge vectors at i to
/// the standard basis. `reflect` chooses which edge goes to e1.
inline UnimodularAffineMap corner_frame(const DelzantPolygon& p, std::size_t i, bool reflect) {
  IntVec2 outgoing = p.direction(i);
  IntVec2 incoming_reversed = -p.direction(p.prev(i));
  IntMat2 basis = reflect ? IntMat2::from_columns(incoming_reversed, outgoing)
                          : IntMat2::from_columns(outgoing, incoming_reversed);
  IntMat2 A = basis.inverse();
  Point t = A * p.vertex(i);
  return {A, Point{-t.x, -t.y}};
}

}  // namespace detail

/// Lexicographically least image over all corner frames; congruent polygons
/// share it.
inline CanonicalForm canonical_form(const DelzantPolygon& p) {
  const std::size_t n = p.size();
  const SymbolTable& table = p.symbols();
  std::vector<Point> best;
  UnimodularAffineMap best_map;
  std::vector<Point> candidate(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (bool reflect : {false, true}) {
      UnimodularAffineMap g = detail::corner_frame(p, i, reflect);
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t src = reflect ? (i + n - j) % n : (i + j) % n;
        candidate[j] = g(p.vertex(src));
      }
      if (best.empty() || detail::compare_vertex_sequences(candidate, best, table) == Ordering::Less) {
        best = candidate;
        best_map = g;
      }
    }
  }
  DelzantPolygon image = apply_map(best_map, p);
  // apply_map keeps g(vertex 0) first; rotate so the list starts at the origin.
  std::size_t start = image.find_vertex(best.front()).value();
  std::vector<Point> vs(n);
  std::vector<IntVec2> dirs(n);
  std::vector<Scalar> lens(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t src = (start + j) % n;
    vs[j] = image.vertex(src);
    dirs[j] = image.direction(src);
    lens[j] = image.length(src);
  }
  if (vs != best) throw ContractViolation("canonical form reconstruction mismatch");
  return {DelzantPolygon::from_trusted_parts(std::move(vs), std::move(dirs), std::move(lens), p.symbol_table()),
          best_map};
}

/// Hashable serialization-independent key of a vertex list.
inline std::string vertex_key(const DelzantPolygon& p) {
  std::string out;
  for (const auto& v : p.vertices()) {
    out += v.x.key();
    out += ',';
    out += v.y.key();
    out += '|';
  }
  return out;
}

inline std::string canonical_key(const DelzantPolygon& p) { return vertex_key(canonical_form(p).polygon); }

inline bool congruent(const DelzantPolygon& p, const DelzantPolygon& q) {
  if (p.size() != q.size()) return false;
  return canonical_form(p).polygon == canonical_form(q).polygon;
}

}  // namespace delzant
