#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "delzant/chop.hpp"

namespace delzant {

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ResourceCapExceeded("edge-class coefficient overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ResourceCapExceeded("edge-class coefficient overflow");
  return r;
}

}  // namespace detail

using PolygonPtr = std::shared_ptr<const DelzantPolygon>;

inline PolygonPtr share(DelzantPolygon p) { return std::make_shared<const DelzantPolygon>(std::move(p)); }

/// Element of the free abelian group on the edges of a polygon.
struct EdgeClass {
  PolygonPtr polygon;
  std::vector<std::int64_t> coefficients;

  static EdgeClass zero(PolygonPtr p) {
    std::size_t n = p->size();
    return {std::move(p), std::vector<std::int64_t>(n, 0)};
  }
  static EdgeClass generator(PolygonPtr p, std::size_t edge) {
    EdgeClass c = zero(std::move(p));
    c.coefficients.at(edge) = 1;
    return c;
  }
  /// Sum of all edges; pairs with each edge as the first Chern class does.
  static EdgeClass boundary(PolygonPtr p) {
    std::size_t n = p->size();
    return {std::move(p), std::vector<std::int64_t>(n, 1)};
  }

  std::size_t size() const { return coefficients.size(); }

  EdgeClass& operator+=(const EdgeClass& o);
  EdgeClass operator+(const EdgeClass& o) const { return EdgeClass(*this) += o; }
  EdgeClass operator*(std::int64_t k) const {
    EdgeClass r = *this;
    for (auto& c : r.coefficients) c = detail::checked_mul(c, k);
    return r;
  }
  bool operator==(const EdgeClass& o) const { return coefficients == o.coefficients && same_polygon(o); }

  bool same_polygon(const EdgeClass& o) const {
    return polygon == o.polygon || (polygon && o.polygon && *polygon == *o.polygon);
  }
};

inline void require_same_polygon(const EdgeClass& a, const EdgeClass& b) {
  if (!a.polygon || !b.polygon || !a.same_polygon(b) || a.size() != b.size())
    throw InvalidInput("edge classes live on different polygons");
}

inline EdgeClass& EdgeClass::operator+=(const EdgeClass& o) {
  require_same_polygon(*this, o);
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    coefficients[i] = detail::checked_add(coefficients[i], o.coefficients[i]);
  return *this;
}

/// Generator pairing on edges i, j of p: self-intersection on the diagonal,
/// 1 for adjacent edges, 0 otherwise.
inline std::int64_t edge_pairing(const DelzantPolygon& p, std::size_t i, std::size_t j) {
  if (i == j) return p.self_intersection(i);
  if (p.next(i) == j || p.next(j) == i) return 1;
  return 0;
}

inline std::int64_t pair(const EdgeClass& x, const EdgeClass& y) {
  require_same_polygon(x, y);
  const DelzantPolygon& p = *x.polygon;
  const std::size_t n = p.size();
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x.coefficients[i] == 0) continue;
    // only i-1, i, i+1 pair nontrivially with i
    for (std::size_t j : {p.prev(i), i, p.next(i)}) {
      if (y.coefficients[j] == 0) continue;
      total = detail::checked_add(
          total, detail::checked_mul(detail::checked_mul(x.coefficients[i], y.coefficients[j]), edge_pairing(p, i, j)));
    }
  }
  return total;
}

inline Scalar length_functional(const EdgeClass& x) {
  Scalar total;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x.coefficients[i] != 0) total += x.polygon->length(i) * static_cast<long long>(x.coefficients[i]);
  return total;
}

/// One corner chopping: source, chopped vertex, size, and the result.
struct ChopStep {
  PolygonPtr source;
  std::size_t vertex = 0;
  Scalar delta;
  PolygonPtr result;

  static ChopStep make(PolygonPtr source, std::size_t vertex, const Scalar& delta) {
    PolygonPtr result = share(chop(*source, vertex, delta));
    return {std::move(source), vertex, delta, std::move(result)};
  }
};

/// Homomorphism Z[edges of source] -> Z[edges of result] induced by a chop:
/// an edge away from the corner maps to the edge with the same normal; each
/// of the two edges at the corner maps to its remainder plus the new edge.
class ChopInjection {
 public:
  explicit ChopInjection(ChopStep step) : step_(std::move(step)) { check(); }

  const ChopStep& step() const { return step_; }

  /// Index in the result of the edge with the same normal as source edge j.
  std::size_t image_index(std::size_t j) const { return j < step_.vertex ? j : j + 1; }
  std::size_t new_edge() const { return step_.vertex; }

  EdgeClass operator()(const EdgeClass& x) const {
    if (!x.polygon || !(*x.polygon == *step_.source)) throw InvalidInput("edge class is not on the chopped polygon");
    EdgeClass y = EdgeClass::zero(step_.result);
    const DelzantPolygon& src = *step_.source;
    for (std::size_t j = 0; j < src.size(); ++j) {
      std::int64_t c = x.coefficients[j];
      if (c == 0) continue;
      std::size_t img = image_index(j);
      y.coefficients[img] = detail::checked_add(y.coefficients[img], c);
      if (j == step_.vertex || j == src.prev(step_.vertex))
        y.coefficients[new_edge()] = detail::checked_add(y.coefficients[new_edge()], c);
    }
    return y;
  }

 private:
  void check() const {
    const auto& [src, v, delta, res] = step_;
    if (!src || !res) throw InvalidInput("incomplete chop record");
    const std::size_t n = src->size();
    if (v >= n || res->size() != n + 1) throw InvalidInput("inconsistent chop record: edge counts");
    for (std::size_t j = 0; j < n; ++j)
      if (!(res->direction(image_index(j)) == src->direction(j)))
        throw InvalidInput("inconsistent chop record: edge " + std::to_string(j) + " changed direction");
    if (!(res->direction(v) == src->direction(src->prev(v)) + src->direction(v)) || !(res->length(v) == delta))
      throw InvalidInput("inconsistent chop record: new edge");
    if (!(res->length(image_index(v)) == src->length(v) - delta) ||
        !(res->length(image_index(src->prev(v))) == src->length(src->prev(v)) - delta))
      throw InvalidInput("inconsistent chop record: lengths");
  }

  ChopStep step_;
};

/// Image of edge e0 of the first source polygon under the composed injections.
inline EdgeClass pushforward(const std::vector<ChopStep>& steps, const PolygonPtr& start, std::size_t e0) {
  EdgeClass x = EdgeClass::generator(start, e0);
  for (const auto& s : steps) x = ChopInjection(s)(x);
  return x;
}

/// Replays choppings (vertex, delta) from p and records each step.
inline std::vector<ChopStep> chop_sequence(PolygonPtr p, const std::vector<std::pair<std::size_t, Scalar>>& chops) {
  std::vector<ChopStep> out;
  out.reserve(chops.size());
  for (const auto& [v, d] : chops) {
    out.push_back(ChopStep::make(p, v, d));
    p = out.back().result;
  }
  return out;
}

enum class Parity { Even, Odd };

inline const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

struct IntersectionForm {
  std::size_t rank = 0;
  std::vector<std::vector<std::int64_t>> gram;
  Parity parity = Parity::Odd;
  std::size_t b_plus = 0;
  std::size_t b_minus = 0;
  std::int64_t determinant = 0;
};

namespace detail {

/// Exact determinant of an integer matrix (fraction-free elimination).
inline BigInt integer_determinant(const std::vector<std::vector<std::int64_t>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// Numbers of positive and negative squares of a symmetric integer form, by
/// rational congruence diagonalisation.
inline std::pair<std::size_t, std::size_t> signature(const std::vector<std::vector<std::int64_t>>& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  std::size_t pos = 0, neg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][piv] == 0) ++piv;
    if (piv == n) {
      // zero diagonal: x_i += x_j makes the (i,i) entry 2 a_ij
      std::size_t pi = n, pj = n;
      for (std::size_t i = k; i < n && pi == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (a[i][j] != 0) {
            pi = i;
            pj = j;
            break;
          }
      if (pi == n) break;  // remaining block is zero
      for (std::size_t c = 0; c < n; ++c) a[pi][c] += a[pj][c];
      for (std::size_t r = 0; r < n; ++r) a[r][pi] += a[r][pj];
      piv = pi;
    }
    std::swap(a[k], a[piv]);
    for (auto& row : a) std::swap(row[k], row[piv]);
    const Rational d = a[k][k];
    (d > 0 ? pos : neg) += 1;
    // Schur complement of the pivot
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      Rational f = a[i][k] / d;
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] -= f * a[k][j];
    }
    for (std::size_t i = k + 1; i < n; ++i) a[i][k] = a[k][i] = 0;
  }
  return {pos, neg};
}

}  // namespace detail

/// Intersection form on H2 of the toric surface of p. The edge classes span
/// H2 subject to the two relations sum_i <m, u_i> d_i = 0; since the last
/// two edges meet at a unimodular corner, the first n - 2 edges are a basis.
inline IntersectionForm intersection_form(const DelzantPolygon& p) {
  const std::size_t n = p.size();
  const std::size_t r = n - 2;

  // The relations must lie in the radical of the edge pairing.
  for (int coord = 0; coord < 2; ++coord)
    for (std::size_t j = 0; j < n; ++j) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::int64_t w = coord == 0 ? p.direction(i).x : p.direction(i).y;
        s += w * edge_pairing(p, i, j);
      }
      if (s != 0) throw ContractViolation("edge relations are not in the radical of the pairing");
    }

  IntersectionForm f;
  f.rank = r;
  f.gram.assign(r, std::vector<std::int64_t>(r, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) f.gram[i][j] = edge_pairing(p, i, j);
  f.parity = Parity::Even;
  for (std::size_t i = 0; i < r; ++i)
    if (f.gram[i][i] % 2 != 0) f.parity = Parity::Odd;
  BigInt det = detail::integer_determinant(f.gram);
  if (det != 1 && det != -1) throw ContractViolation("intersection form is not unimodular: det " + det.str());
  f.determinant = det.convert_to<std::int64_t>();
  std::tie(f.b_plus, f.b_minus) = detail::signature(f.gram);
  if (f.b_plus + f.b_minus != r) throw ContractViolation("degenerate intersection form");
  return f;
}

}  // namespace delzant
