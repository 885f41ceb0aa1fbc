#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "delzant/delzant.hpp"

namespace delzant::testing {

inline Rational q(const std::string& s) { return parse_rational(s); }

inline DelzantPolygon poly(std::initializer_list<std::pair<long, long>> pts) {
  std::vector<std::pair<Rational, Rational>> v;
  for (auto [x, y] : pts) v.emplace_back(Rational(x), Rational(y));
  return polygon_from_rationals(v);
}

/// The pentagon of the worked table: lengths (4,2,2,2,8), self-intersections (0,-2,-1,-1,1).
inline DelzantPolygon table_pentagon() { return poly({{1, 1}, {5, 1}, {5, 3}, {3, 7}, {1, 9}}); }

/// Table with one symbol s, an enclosure of sqrt(2), refinable by bisection.
inline SymbolTablePtr sqrt2_table() {
  SymbolSpec s;
  s.name = "s";
  s.enclosure = {q("141/100"), q("142/100")};
  s.sqrt_of = Rational(2);
  return std::make_shared<const SymbolTable>(std::vector<SymbolSpec>{s}, true);
}

/// Table with a free symbol "lambda" enclosed in [3.14159, 3.1416].
inline SymbolTablePtr lambda_table() {
  SymbolSpec s;
  s.name = "lambda";
  s.enclosure = {q("314159/100000"), q("31416/10000")};
  return std::make_shared<const SymbolTable>(std::vector<SymbolSpec>{s}, true);
}

/// Random element of AGL(2,Z) with matrix entries bounded by `bound`.
inline UnimodularAffineMap random_unimodular(std::mt19937_64& rng, int bound, const Scalar& tx, const Scalar& ty) {
  std::uniform_int_distribution<int> entry(-bound, bound);
  for (;;) {
    IntMat2 m{entry(rng), entry(rng), entry(rng), entry(rng)};
    if (m.det() == 1 || m.det() == -1) return {m, Point{tx, ty}};
  }
}

/// Random Delzant polygon: a root shape followed by random valid choppings.
inline DelzantPolygon random_polygon(std::mt19937_64& rng, int max_chops) {
  std::uniform_int_distribution<int> small(1, 6);
  std::uniform_int_distribution<int> coin(0, 3);
  DelzantPolygon p = coin(rng) == 0 ? delzant_triangle(Scalar(small(rng)))
                                    : [&] {
                                        Rational b(small(rng), 2);
                                        Rational a = b + Rational(small(rng) - 1, 2);
                                        long long k = 0;
                                        std::uniform_int_distribution<int> kd(0, 3);
                                        k = kd(rng);
                                        while (k > 0 && !(a - Rational(k) * b / 2 > 0)) --k;
                                        return hirzebruch_trapezoid(Scalar(a), Scalar(b), k);
                                      }();
  std::uniform_int_distribution<int> nchops(0, max_chops);
  int chops = nchops(rng);
  for (int c = 0; c < chops; ++c) {
    std::uniform_int_distribution<std::size_t> vd(0, p.size() - 1);
    std::size_t v = vd(rng);
    Rational limit = std::min(p.length(p.prev(v)).as_rational(), p.length(v).as_rational());
    std::uniform_int_distribution<int> frac(1, 7);
    Rational delta = limit * Rational(frac(rng), 8);
    p = chop(p, v, Scalar(delta));
  }
  return p;
}

}  // namespace delzant::testing
