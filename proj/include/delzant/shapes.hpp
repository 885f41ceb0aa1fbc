#pragma once

#include <vector>

#include "delzant/polygon.hpp"

namespace delzant {

/// {x >= 0, y >= 0, x + y <= lambda}
inline DelzantPolygon delzant_triangle(const Scalar& lambda, SymbolTablePtr table = empty_symbol_table()) {
  return DelzantPolygon::validate({{Scalar(), Scalar()}, {lambda, Scalar()}, {Scalar(), lambda}}, std::move(table));
}

/// {-b/2 <= y <= b/2, 0 <= x <= a - k y}, listed from the lower-left corner.
/// Edge 1 is the right (slanted) edge; from it, counterclockwise, the
/// self-intersections are (0, -k, 0, k).
inline DelzantPolygon hirzebruch_trapezoid(const Scalar& a, const Scalar& b, long long k,
                                           SymbolTablePtr table = empty_symbol_table()) {
  if (k < 0) throw InvalidInput("Hirzebruch parameter k must be non-negative");
  Scalar half_b = b / 2;
  Scalar shift = half_b * k;
  return DelzantPolygon::validate({{Scalar(), -half_b}, {a + shift, -half_b}, {a - shift, half_b}, {Scalar(), half_b}},
                                  std::move(table));
}

/// Polygon from integer or rational literal coordinates, for tests and samples.
inline DelzantPolygon polygon_from_rationals(const std::vector<std::pair<Rational, Rational>>& pts) {
  std::vector<Point> vs;
  vs.reserve(pts.size());
  for (const auto& [x, y] : pts) vs.push_back({Scalar(x), Scalar(y)});
  return DelzantPolygon::validate(std::move(vs));
}

}  // namespace delzant
