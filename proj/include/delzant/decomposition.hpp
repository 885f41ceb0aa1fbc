#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "delzant/canonical.hpp"
#include "delzant/chop.hpp"
#include "delzant/shapes.hpp"

namespace delzant {

struct TriangleRoot {
  Scalar lambda;
  bool operator==(const TriangleRoot&) const = default;
};

struct HirzebruchRoot {
  Scalar a;
  Scalar b;
  long long k = 0;
  bool operator==(const HirzebruchRoot&) const = default;
};

using RootShape = std::variant<TriangleRoot, HirzebruchRoot>;

/// Root shape in the standard position of the shape constructors.
inline DelzantPolygon root_polygon(const RootShape& root, SymbolTablePtr table = empty_symbol_table()) {
  if (const auto* t = std::get_if<TriangleRoot>(&root)) return delzant_triangle(t->lambda, std::move(table));
  const auto& h = std::get<HirzebruchRoot>(root);
  return hirzebruch_trapezoid(h.a, h.b, h.k, std::move(table));
}

struct ChopRecord {
  Point vertex;  // corner being chopped, in the coordinates of the replayed polygon
  Scalar delta;
  bool operator==(const ChopRecord&) const = default;
};

struct Decomposition {
  RootShape root;
  std::vector<ChopRecord> steps;
  /// Sends the replayed polygon onto the input, vertex for vertex.
  UnimodularAffineMap witness;
  SymbolTablePtr table = empty_symbol_table();
};

namespace detail {

/// Map h with h(R) = Q as vertex sets, for congruent R and Q.
inline UnimodularAffineMap congruence_between(const DelzantPolygon& r, const DelzantPolygon& q) {
  CanonicalForm cr = canonical_form(r), cq = canonical_form(q);
  if (!(cr.polygon == cq.polygon)) throw ContractViolation("polygons expected to be congruent are not");
  return cq.witness.inverse().compose(cr.witness);
}

}  // namespace detail

/// Reads off H_{a,b,k} from a 4-edge polygon whose self-intersection cycle is
/// (0,-k,0,k).
inline HirzebruchRoot hirzebruch_normalize(const DelzantPolygon& p) {
  if (p.size() != 4) throw NotTrapezoid("a trapezoid has 4 edges, got " + std::to_string(p.size()));
  const auto& s = p.self_intersections();
  const SymbolTable& table = p.symbols();
  std::optional<HirzebruchRoot> found;
  const Scalar perimeter = perimeter_area(p).perimeter;
  for (std::size_t i = 0; i < 4; ++i) {
    if (s[i] != 0 || s[(i + 2) % 4] != 0 || s[(i + 1) % 4] > 0 || s[(i + 1) % 4] != -s[(i + 3) % 4]) continue;
    HirzebruchRoot h;
    h.k = -s[(i + 1) % 4];
    h.b = p.length(i);
    h.a = (perimeter - h.b * 2LL) / 2;
    if (!found) {
      found = h;
    } else if (h.k == 0 && less(found->a, found->b, table)) {
      // k = 0 admits both orientations; prefer a >= b
      found = h;
    }
  }
  if (!found) throw NotTrapezoid("self-intersection cycle is not of the form (0,-k,0,k)");
  if (!positive(found->a - found->b * found->k / 2, table))
    throw ContractViolation("trapezoid with a - kb/2 <= 0");
  return *found;
}

namespace detail {

/// Indices of -1 edges of a canonical polygon in blow-down preference order:
/// shortest first, then by position.
inline std::vector<std::size_t> blow_down_order(const DelzantPolygon& c) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.self_intersection(i) == -1) idx.push_back(i);
  const SymbolTable& table = c.symbols();
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t x, std::size_t y) { return less(c.length(x), c.length(y), table); });
  return idx;
}

struct Stage {
  DelzantPolygon polygon;  // blown-down polygon, input coordinates
  Point corner;            // restored corner, input coordinates
  Scalar delta;
};

/// Blow down edge `e` of the canonical form and express the result in the
/// coordinates of p.
inline Stage blow_down_in_frame(const CanonicalForm& cf, std::size_t e) {
  BlowDownResult bd = blow_down(cf.polygon, e);
  UnimodularAffineMap back = cf.witness.inverse();
  return {apply_map(back, bd.polygon), back(bd.polygon.vertex(bd.vertex)), bd.delta};
}

inline RootShape root_of(const DelzantPolygon& q) {
  if (q.size() == 3) return TriangleRoot{perimeter_area(q).perimeter / 3};
  return hirzebruch_normalize(q);
}

}  // namespace detail

/// Writes p as a triangle or trapezoid followed by corner choppings. With
/// prefer_odd_k, the last blow-down is chosen so that a trapezoid root has odd k.
inline Decomposition decompose(const DelzantPolygon& p, bool prefer_odd_k = false) {
  std::vector<detail::Stage> stages;
  DelzantPolygon cur = p;
  while (cur.size() > 4) {
    CanonicalForm cf = canonical_form(cur);
    std::vector<std::size_t> order = detail::blow_down_order(cf.polygon);
    if (order.empty()) throw ContractViolation("no edge of self-intersection -1 on a polygon with >= 5 edges");
    std::size_t pick = order.front();
    if (prefer_odd_k && cur.size() == 5) {
      for (std::size_t e : order) {
        BlowDownResult trial = blow_down(cf.polygon, e);
        if (hirzebruch_normalize(trial.polygon).k % 2 == 1) {
          pick = e;
          break;
        }
      }
    }
    stages.push_back(detail::blow_down_in_frame(cf, pick));
    cur = stages.back().polygon;
  }

  Decomposition d;
  d.table = p.symbol_table();
  d.root = detail::root_of(cur);
  DelzantPolygon standard = root_polygon(d.root, d.table);
  UnimodularAffineMap h = detail::congruence_between(standard, cur);
  UnimodularAffineMap h_inv = h.inverse();
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) d.steps.push_back({h_inv(it->corner), it->delta});
  d.witness = h;
  return d;
}

/// Root polygon followed by each chop, before the witness is applied.
inline std::vector<DelzantPolygon> replay_stages(const Decomposition& d) {
  std::vector<DelzantPolygon> out{root_polygon(d.root, d.table)};
  for (const auto& step : d.steps) {
    const DelzantPolygon& cur = out.back();
    auto v = cur.find_vertex(step.vertex);
    if (!v) throw InvalidInput("decomposition step names a point that is not a vertex");
    out.push_back(chop(cur, *v, step.delta));
  }
  return out;
}

inline DelzantPolygon replay(const Decomposition& d) { return apply_map(d.witness, replay_stages(d).back()); }

enum class SymplecticKind { CP2, S2xS2, CP2OneBlowup };

struct SymplecticType {
  SymplecticKind kind;
  Scalar first;   // lambda, or a
  Scalar second;  // unused for CP2, else b

  std::string label(const SymbolTable& table) const {
    switch (kind) {
      case SymplecticKind::CP2: return "CP2(" + first.to_string(table) + ")";
      case SymplecticKind::S2xS2: return "S2xS2(" + first.to_string(table) + ", " + second.to_string(table) + ")";
      case SymplecticKind::CP2OneBlowup:
        return "CP2-one-blow-up(" + first.to_string(table) + ", " + second.to_string(table) + ")";
    }
    return {};
  }
};

/// H_{a,b,k} and H_{a,b,k-2} are symplectomorphic, so only the parity of k matters.
inline SymplecticType symplectomorphism_type(const RootShape& root) {
  if (const auto* t = std::get_if<TriangleRoot>(&root)) return {SymplecticKind::CP2, t->lambda, Scalar()};
  const auto& h = std::get<HirzebruchRoot>(root);
  return {h.k % 2 == 0 ? SymplecticKind::S2xS2 : SymplecticKind::CP2OneBlowup, h.a, h.b};
}

}  // namespace delzant
