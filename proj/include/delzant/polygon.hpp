#pragma once

#include <algorithm>
#include <atomic>
#include <limits>
#include <optional>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "delzant/errors.hpp"
#include "delzant/lattice.hpp"
#include "delzant/scalar.hpp"

namespace delzant {

namespace diagnostics {
/// Number of polygons whose self-intersection sum was checked against 12 - 3n.
inline std::atomic<std::uint64_t> polygons_checked{0};
}  // namespace diagnostics

struct EdgeData {
  std::size_t index = 0;  // joins vertex index to vertex index + 1
  IntVec2 primitive_direction;
  IntVec2 outward_normal;
  Scalar rational_length;
  int self_intersection = 0;
};

/// Compact convex polygon in the plane, counterclockwise, whose edges have
/// rational slopes and whose primitive edge vectors form a Z-basis at every
/// vertex. Immutable once constructed.
class DelzantPolygon {
 public:
  /// Validates a vertex list. A clockwise list is accepted and reversed.
  static DelzantPolygon validate(std::vector<Point> vertices, SymbolTablePtr table = empty_symbol_table()) {
    if (!table) table = empty_symbol_table();
    const std::size_t n = vertices.size();
    if (n < 3) throw NotDelzant(NotDelzantReason::TooFewVertices, n, "need at least 3 vertices");

    std::vector<IntVec2> dirs(n);
    std::vector<Scalar> lengths(n);
    for (std::size_t i = 0; i < n; ++i) {
      Point e = vertices[(i + 1) % n] - vertices[i];
      auto [dir, len] = edge_direction(e, i, *table);
      dirs[i] = dir;
      lengths[i] = std::move(len);
    }

    std::vector<std::int64_t> turns(n);
    bool all_negative = true;
    for (std::size_t i = 0; i < n; ++i) {
      turns[i] = cross(dirs[(i + n - 1) % n], dirs[i]);
      if (turns[i] >= 0) all_negative = false;
    }
    if (all_negative) {
      std::reverse(vertices.begin(), vertices.end());
      return validate(std::move(vertices), std::move(table));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (turns[i] <= 0) throw NotDelzant(NotDelzantReason::NonConvex, i, "reflex or flat vertex");
      if (turns[i] != 1)
        throw NotDelzant(NotDelzantReason::NonUnimodular, i,
                         "edge directions at this vertex have determinant " + std::to_string(turns[i]));
    }
    if (winding_number(dirs) != 1) throw NotDelzant(NotDelzantReason::NonConvex, 0, "boundary winds more than once");
    return DelzantPolygon(std::move(vertices), std::move(dirs), std::move(lengths), std::move(table));
  }

  /// Assembles a polygon whose geometry the caller has already established
  /// (the vertex list, primitive directions, and lengths agree). Integer
  /// invariants are still re-checked.
  static DelzantPolygon from_trusted_parts(std::vector<Point> vertices, std::vector<IntVec2> directions,
                                           std::vector<Scalar> lengths, SymbolTablePtr table) {
    const std::size_t n = vertices.size();
    if (n < 3 || directions.size() != n || lengths.size() != n)
      throw ContractViolation("inconsistent polygon parts");
    for (std::size_t i = 0; i < n; ++i)
      if (cross(directions[(i + n - 1) % n], directions[i]) != 1)
        throw ContractViolation("trusted polygon parts violate the Delzant condition at vertex " + std::to_string(i));
    return DelzantPolygon(std::move(vertices), std::move(directions), std::move(lengths), std::move(table));
  }

  std::size_t size() const { return vertices_.size(); }
  std::size_t next(std::size_t i) const { return (i + 1) % size(); }
  std::size_t prev(std::size_t i) const { return (i + size() - 1) % size(); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(std::size_t i) const { return vertices_.at(i); }
  const std::vector<IntVec2>& directions() const { return directions_; }
  const IntVec2& direction(std::size_t i) const { return directions_.at(i); }
  IntVec2 outward_normal(std::size_t i) const { return rotate_clockwise(directions_.at(i)); }
  const std::vector<Scalar>& lengths() const { return lengths_; }
  const Scalar& length(std::size_t i) const { return lengths_.at(i); }
  const std::vector<int>& self_intersections() const { return self_intersections_; }
  int self_intersection(std::size_t i) const { return self_intersections_.at(i); }

  const SymbolTable& symbols() const { return *table_; }
  const SymbolTablePtr& symbol_table() const { return table_; }

  /// Same vertex list (not merely congruent).
  bool operator==(const DelzantPolygon& o) const { return vertices_ == o.vertices_; }

  std::optional<std::size_t> find_vertex(const Point& p) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (vertices_[i] == p) return i;
    return std::nullopt;
  }

 private:
  DelzantPolygon(std::vector<Point> vertices, std::vector<IntVec2> directions, std::vector<Scalar> lengths,
                 SymbolTablePtr table)
      : vertices_(std::move(vertices)),
        directions_(std::move(directions)),
        lengths_(std::move(lengths)),
        table_(table ? std::move(table) : empty_symbol_table()) {
    const std::size_t n = vertices_.size();
    self_intersections_.resize(n);
    long long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const IntVec2& d = directions_[i];
      IntVec2 w = directions_[(i + n - 1) % n] + directions_[(i + 1) % n];
      if (cross(w, d) != 0) throw ContractViolation("neighbouring normals do not satisfy u + u'' = k u'");
      std::int64_t k = dot(w, d) / dot(d, d);
      self_intersections_[i] = static_cast<int>(-k);
      total += -k;
    }
    // Sum of self-intersections of a smooth toric surface with n boundary divisors.
    if (total != 12 - 3 * static_cast<long long>(n))
      throw ContractViolation("self-intersection sum " + std::to_string(total) + " != 12 - 3n for n = " +
                              std::to_string(n));
    diagnostics::polygons_checked.fetch_add(1, std::memory_order_relaxed);
  }

  static std::int64_t to_int64(const BigInt& v) {
    if (v > BigInt(std::numeric_limits<std::int32_t>::max()) || v < BigInt(std::numeric_limits<std::int32_t>::min()))
      throw InvalidInput("edge slope has an unreasonably large denominator");
    return v.convert_to<std::int64_t>();
  }

  static std::pair<IntVec2, Scalar> edge_direction(const Point& e, std::size_t edge, const SymbolTable& table) {
    if (e.x.is_zero() && e.y.is_zero()) throw NotDelzant(NotDelzantReason::DegenerateEdge, edge, "repeated vertex");
    if (e.x.is_zero()) {
      int s = certified_sign(e.y, table, table.precision_cap());
      return {{0, s}, e.y * static_cast<long long>(s)};
    }
    if (e.y.is_zero()) {
      int s = certified_sign(e.x, table, table.precision_cap());
      return {{s, 0}, e.x * static_cast<long long>(s)};
    }
    const auto& lead = e.x.terms().front();
    Rational ratio = e.y.coefficient(lead.monomial) / lead.coefficient;
    if (!(e.x * ratio == e.y)) throw NotDelzant(NotDelzantReason::IrrationalSlope, edge, "edge vector is not a multiple of a lattice vector");
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    IntVec2 dir{to_int64(denominator(ratio)), to_int64(numerator(ratio))};
    Scalar t = e.x / Rational(denominator(ratio));
    int s = certified_sign(t, table, table.precision_cap());
    return {dir * s, t * static_cast<long long>(s)};
  }

  static long winding_number(const std::vector<IntVec2>& dirs) {
    double total = 0;
    const std::size_t n = dirs.size();
    for (std::size_t i = 0; i < n; ++i) {
      const IntVec2& a = dirs[i];
      const IntVec2& b = dirs[(i + 1) % n];
      total += std::atan2(static_cast<double>(cross(a, b)), static_cast<double>(dot(a, b)));
    }
    return std::lround(total / (2 * std::numbers::pi));
  }

  std::vector<Point> vertices_;
  std::vector<IntVec2> directions_;
  std::vector<Scalar> lengths_;
  std::vector<int> self_intersections_;
  SymbolTablePtr table_;
};

inline std::vector<EdgeData> edge_data(const DelzantPolygon& p) {
  std::vector<EdgeData> out;
  out.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    out.push_back({i, p.direction(i), p.outward_normal(i), p.length(i), p.self_intersection(i)});
  return out;
}

struct PerimeterArea {
  Scalar perimeter;
  Scalar area;
};

/// Perimeter is the sum of rational lengths; area is the Euclidean area.
inline PerimeterArea perimeter_area(const DelzantPolygon& p) {
  Scalar perimeter;
  for (const auto& l : p.lengths()) perimeter += l;
  Scalar twice_area;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point& a = p.vertex(i);
    const Point& b = p.vertex(p.next(i));
    twice_area += a.x * b.y - b.x * a.y;
  }
  return {std::move(perimeter), twice_area / 2};
}

/// Image of p under g, listed counterclockwise and keeping g(vertex 0) first.
inline DelzantPolygon apply_map(const UnimodularAffineMap& g, const DelzantPolygon& p) {
  const std::size_t n = p.size();
  std::vector<Point> vs(n);
  std::vector<IntVec2> dirs(n);
  std::vector<Scalar> lens(n);
  if (g.det() == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      vs[i] = g(p.vertex(i));
      dirs[i] = g.apply_linear(p.direction(i));
      lens[i] = p.length(i);
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      vs[j] = g(p.vertex((n - j) % n));
      std::size_t src = (2 * n - j - 1) % n;
      dirs[j] = -g.apply_linear(p.direction(src));
      lens[j] = p.length(src);
    }
  }
  return DelzantPolygon::from_trusted_parts(std::move(vs), std::move(dirs), std::move(lens), p.symbol_table());
}

/// Conversions between polygons with a shared symbol table.
inline void require_same_table(const DelzantPolygon& a, const DelzantPolygon& b) {
  if (a.symbol_table() != b.symbol_table() && !(a.symbols().empty() && b.symbols().empty()))
    throw InvalidInput("polygons use different symbol tables");
}

}  // namespace delzant
