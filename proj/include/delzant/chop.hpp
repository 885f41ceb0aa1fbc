#pragma once

#include <string>
#include <utility>
#include <vector>

#include "delzant/polygon.hpp"

namespace delzant {

/// Corner chopping of size delta at vertex v: intersect with the half-space
/// {v + s1*a1 + s2*a2 : s1 + s2 >= delta} where a1, a2 are the primitive
/// edge vectors at v. Vertex v becomes two vertices; the new edge takes
/// index v, and edges after it shift by one.
inline DelzantPolygon chop(const DelzantPolygon& p, std::size_t vertex, const Scalar& delta) {
  const std::size_t n = p.size();
  if (vertex >= n) throw InvalidInput("vertex index " + std::to_string(vertex) + " out of range");
  const SymbolTable& table = p.symbols();
  if (!positive(delta, table)) throw InvalidInput("chop size must be positive");
  const std::size_t before = p.prev(vertex);
  if (!less(delta, p.length(before), table) || !less(delta, p.length(vertex), table))
    throw ChopTooLarge("chop size " + delta.to_string(table) + " is not smaller than the edges at vertex " +
                       std::to_string(vertex));

  std::vector<Point> vs;
  std::vector<IntVec2> dirs;
  std::vector<Scalar> lens;
  vs.reserve(n + 1);
  dirs.reserve(n + 1);
  lens.reserve(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == vertex) {
      const Point& v = p.vertex(j);
      vs.push_back(v - delta * p.direction(before));
      vs.push_back(v + delta * p.direction(j));
      dirs.push_back(p.direction(before) + p.direction(j));
      lens.push_back(delta);
      dirs.push_back(p.direction(j));
      lens.push_back(p.length(j) - delta);
    } else {
      vs.push_back(p.vertex(j));
      dirs.push_back(p.direction(j));
      lens.push_back(j == before ? p.length(j) - delta : p.length(j));
    }
  }
  return DelzantPolygon::from_trusted_parts(std::move(vs), std::move(dirs), std::move(lens), p.symbol_table());
}

struct BlowDownResult {
  DelzantPolygon polygon;
  Scalar delta;
  /// Index in `polygon` of the restored corner; chop(polygon, vertex, delta)
  /// reproduces the input up to rotation of the vertex list.
  std::size_t vertex = 0;
};

/// Inverse of chop: collapses an edge of self-intersection -1 by extending its
/// neighbours to their intersection.
inline BlowDownResult blow_down(const DelzantPolygon& p, std::size_t edge) {
  const std::size_t n = p.size();
  if (edge >= n) throw InvalidInput("edge index " + std::to_string(edge) + " out of range");
  if (n < 4) throw TooFewEdges("blow-down needs at least 4 edges, polygon has " + std::to_string(n));
  if (p.self_intersection(edge) != -1)
    throw NotBlowDownable("edge " + std::to_string(edge) + " has self-intersection " +
                          std::to_string(p.self_intersection(edge)) + ", not -1");
  const Scalar& delta = p.length(edge);
  Point corner = p.vertex(edge) + delta * p.direction(p.prev(edge));
  const std::size_t removed = p.next(edge);
  std::vector<Point> vs;
  vs.reserve(n - 1);
  std::size_t corner_index = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == removed) continue;
    if (j == edge) {
      corner_index = vs.size();
      vs.push_back(corner);
    } else {
      vs.push_back(p.vertex(j));
    }
  }
  DelzantPolygon result = DelzantPolygon::validate(std::move(vs), p.symbol_table());
  if (result.size() != n - 1 || !(result.vertex(corner_index) == corner))
    throw ContractViolation("blow-down changed the vertex layout");
  return {std::move(result), delta, corner_index};
}

}  // namespace delzant
