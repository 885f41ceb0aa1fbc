#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "delzant/canonical.hpp"
#include "delzant/chop.hpp"
#include "delzant/shapes.hpp"

namespace delzant {

struct CensusOptions {
  std::size_t max_edges = 4;
  Rational bound = 2;
  Rational step = 1;
  unsigned threads = 1;
  std::size_t max_polygons = 1'000'000;
};

/// Canonical forms of all polygons reachable from grid triangles and
/// trapezoids by grid choppings, without duplicates, ordered by edge count
/// and then by vertex sequence.
inline std::vector<DelzantPolygon> census(const CensusOptions& opt) {
  if (opt.max_edges < 3) throw InvalidInput("census needs max_edges >= 3");
  if (opt.step <= 0 || opt.bound <= 0) throw InvalidInput("census grid step and bound must be positive");
  std::vector<Rational> grid;
  for (Rational x = opt.step; x <= opt.bound; x += opt.step) grid.push_back(x);

  std::map<std::string, DelzantPolygon> seen;
  auto admit = [&](std::vector<DelzantPolygon>& level, DelzantPolygon p) {
    DelzantPolygon c = canonical_form(p).polygon;
    auto [it, fresh] = seen.emplace(vertex_key(c), c);
    if (!fresh) return;
    if (seen.size() > opt.max_polygons) throw ResourceCapExceeded("census exceeded its polygon budget");
    level.push_back(std::move(c));
  };

  std::vector<std::vector<DelzantPolygon>> levels(opt.max_edges + 1);
  for (const auto& l : grid) admit(levels[3], delzant_triangle(Scalar(l)));
  if (opt.max_edges >= 4)
    for (const auto& a : grid)
      for (const auto& b : grid)
        for (long long k = 0; a - Rational(k) * b / 2 > 0; ++k) admit(levels[4], hirzebruch_trapezoid(Scalar(a), Scalar(b), k));

  for (std::size_t n = 3; n < opt.max_edges; ++n) {
    const auto& src = levels[n];
    std::vector<std::vector<DelzantPolygon>> chopped(src.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= src.size()) return;
        try {
          const DelzantPolygon& p = src[i];
          for (std::size_t v = 0; v < p.size(); ++v) {
            Rational limit = std::min(p.length(p.prev(v)).as_rational(), p.length(v).as_rational());
            for (const auto& d : grid) {
              if (d >= limit) break;
              chopped[i].push_back(chop(p, v, Scalar(d)));
            }
          }
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(src.size());
          return;
        }
      }
    };
    unsigned threads = std::max(1u, opt.threads);
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    for (auto& list : chopped)
      for (auto& p : list) admit(levels[n + 1], std::move(p));
  }

  std::vector<DelzantPolygon> out;
  for (auto& level : levels) {
    std::sort(level.begin(), level.end(), [](const DelzantPolygon& x, const DelzantPolygon& y) {
      return detail::compare_vertex_sequences(x.vertices(), y.vertices(), x.symbols()) == Ordering::Less;
    });
    for (auto& p : level) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace delzant
