#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "delzant/canonical.hpp"
#include "delzant/chop.hpp"
#include "delzant/decomposition.hpp"
#include "delzant/edge_homology.hpp"
#include "delzant/minkowski.hpp"
#include "delzant/shapes.hpp"

namespace delzant {

/// CP2 with line of size lambda, blown up at sizes deltas.
struct CP2Blowups {
  Scalar lambda;
  std::vector<Scalar> deltas;
};

/// S2 x S2 with sphere sizes a >= b.
struct S2xS2 {
  Scalar a;
  Scalar b;
};

/// Only perimeter, area, and b2 are known; candidate chop sizes are supplied.
struct RawInvariants {
  Scalar perimeter;
  Scalar area;
  std::size_t b2 = 1;
  std::vector<Scalar> candidate_sizes;
  std::optional<Parity> parity;
};

struct ManifoldSpec {
  std::variant<CP2Blowups, S2xS2, RawInvariants> data;
  SymbolTablePtr table = empty_symbol_table();

  const SymbolTable& symbols() const { return *table; }
};

enum class Exactness { Exact, CandidateSuperset };

inline const char* to_string(Exactness e) { return e == Exactness::Exact ? "exact" : "candidate_superset"; }

struct ClassifiedPolygon {
  DelzantPolygon polygon;  // canonical form
  Decomposition decomposition;
  SymplecticType type;
};

struct ClassificationResult {
  std::vector<ClassifiedPolygon> classes;
  Exactness exactness = Exactness::Exact;
};

struct ClassifyOptions {
  bool parity_filter = true;
  /// Use multiples of the common denominator as chop sizes and rational roots
  /// for b, instead of lattice periods. Only for rational data.
  bool rational_fast_path = false;
  /// Replaces the computed candidate set when non-empty.
  std::vector<Scalar> candidate_sizes_override;
  /// Replaces the 2^b2 * P window for candidate sizes when set.
  std::optional<Scalar> max_omega;
  unsigned threads = 1;
  std::size_t max_search_states = std::size_t(1) << 22;
};

namespace detail {

inline void require_valid(const ManifoldSpec& spec) {
  const SymbolTable& t = spec.symbols();
  if (const auto* c = std::get_if<CP2Blowups>(&spec.data)) {
    BlowupForm{c->lambda, c->deltas, spec.table}.require_proper();
  } else if (const auto* s = std::get_if<S2xS2>(&spec.data)) {
    if (!positive(s->a, t) || !positive(s->b, t)) throw NotProperInput("S2 x S2 sizes must be positive");
  } else {
    const auto& r = std::get<RawInvariants>(spec.data);
    if (!positive(r.perimeter, t) || !positive(r.area, t)) throw NotProperInput("perimeter and area must be positive");
    if (r.b2 < 1) throw NotProperInput("b2 must be at least 1");
  }
}

inline std::size_t second_betti(const ManifoldSpec& spec) {
  if (const auto* c = std::get_if<CP2Blowups>(&spec.data)) return c->deltas.size() + 1;
  if (std::holds_alternative<S2xS2>(spec.data)) return 2;
  return std::get<RawInvariants>(spec.data).b2;
}

/// Perimeter and area of any moment polygon of the manifold.
inline std::pair<Scalar, Scalar> perimeter_and_area(const ManifoldSpec& spec) {
  if (const auto* c = std::get_if<CP2Blowups>(&spec.data)) {
    Scalar p = c->lambda * 3LL, s = c->lambda * c->lambda;
    for (const auto& d : c->deltas) {
      p -= d;
      s -= d * d;
    }
    return {p, s / 2};
  }
  if (const auto* s = std::get_if<S2xS2>(&spec.data)) return {(s->a + s->b) * 2LL, s->a * s->b};
  const auto& r = std::get<RawInvariants>(spec.data);
  return {r.perimeter, r.area};
}

inline std::optional<Parity> expected_parity(const ManifoldSpec& spec) {
  if (std::holds_alternative<CP2Blowups>(spec.data)) return Parity::Odd;
  if (std::holds_alternative<S2xS2>(spec.data)) return Parity::Even;
  return std::get<RawInvariants>(spec.data).parity;
}

inline bool all_rational(const std::vector<Scalar>& xs) {
  return std::all_of(xs.begin(), xs.end(), [](const Scalar& x) { return x.is_rational(); });
}

/// Sorts by certified order and removes exact duplicates.
inline void sort_unique(std::vector<Scalar>& xs, const SymbolTable& table) {
  std::sort(xs.begin(), xs.end(), [&](const Scalar& x, const Scalar& y) { return less(x, y, table); });
  xs.erase(std::unique(xs.begin(), xs.end(), [&](const Scalar& x, const Scalar& y) { return equal(x, y, table); }),
           xs.end());
}

inline Scalar candidate_window(const ManifoldSpec& spec, const ClassifyOptions& opt) {
  if (opt.max_omega) return *opt.max_omega;
  Scalar p = perimeter_and_area(spec).first;
  return p * (1LL << std::min<std::size_t>(second_betti(spec), 60));
}

inline Rational lcm_of_denominators(const std::vector<Scalar>& xs) {
  BigInt l = 1;
  for (const auto& x : xs) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x.as_rational()));
  return Rational(l);
}

}  // namespace detail

/// Finite set of positive numbers containing every chop size of every moment
/// polygon of the manifold, sorted ascending.
inline std::vector<Scalar> candidate_sizes(const ManifoldSpec& spec, const ClassifyOptions& opt = {}) {
  detail::require_valid(spec);
  const SymbolTable& table = spec.symbols();
  std::vector<Scalar> out;
  if (!opt.candidate_sizes_override.empty()) {
    out = opt.candidate_sizes_override;
  } else if (const auto* c = std::get_if<CP2Blowups>(&spec.data)) {
    if (c->deltas.empty()) return {};
    Scalar K = detail::candidate_window(spec, opt);
    std::vector<Scalar> inputs = c->deltas;
    inputs.push_back(c->lambda);
    if (opt.rational_fast_path && detail::all_rational(inputs)) {
      Rational h = detail::lcm_of_denominators(inputs);
      Rational k = K.as_rational();
      for (BigInt j = 1; Rational(j) / h < k; ++j) {
        out.push_back(Scalar(Rational(j) / h));
        if (out.size() > opt.max_search_states) throw ResourceCapExceeded("rational candidate set is too large");
      }
    } else {
      BlowupForm f{c->lambda, c->deltas, spec.table};
      for (const auto& e : enumerate_classes(f, -1, K, std::nullopt, opt.threads)) {
        Scalar p = period(f, e);
        if (positive(p, table) && less(p, K, table)) out.push_back(p);
      }
    }
  } else if (std::holds_alternative<S2xS2>(spec.data)) {
    return {};
  } else {
    out = std::get<RawInvariants>(spec.data).candidate_sizes;
  }
  std::erase_if(out, [&](const Scalar& x) { return !positive(x, table); });
  detail::sort_unique(out, table);
  return out;
}

/// Number of even k >= 0 with a - k b / 2 > 0: the inequivalent toric
/// actions on S2 x S2 with sizes a >= b.
inline std::size_t count_s2s2_actions(Scalar a, Scalar b, const SymbolTable& table = *empty_symbol_table()) {
  if (!positive(a, table) || !positive(b, table)) throw NotProperInput("S2 x S2 sizes must be positive");
  if (less(a, b, table)) std::swap(a, b);
  std::size_t count = 0;
  for (long long k = 0; positive(a - b * k / 2, table); k += 2) ++count;
  return count;
}

namespace detail {

struct RootCandidate {
  Scalar a, b;
  long long k;
  std::vector<std::size_t> multiset;  // indices into the candidate sizes
};

/// Depth-first chopping search from one root, memoized on
/// (canonical form, remaining multiset).
class ChopSearch {
 public:
  ChopSearch(const std::vector<Scalar>& sizes, const SymbolTable& table, std::size_t max_states)
      : sizes_(sizes), table_(table), max_states_(max_states) {}

  void run(const DelzantPolygon& root, std::vector<std::size_t> remaining, std::map<std::string, DelzantPolygon>& out) {
    visit(canonical_form(root).polygon, std::move(remaining), out);
  }

 private:
  void visit(const DelzantPolygon& p, std::vector<std::size_t> remaining, std::map<std::string, DelzantPolygon>& out) {
    std::string key = vertex_key(p) + "#";
    for (auto i : remaining) key += std::to_string(i) + ",";
    if (!seen_.insert(key).second) return;
    if (seen_.size() > max_states_) throw ResourceCapExceeded("chopping search exceeded its state budget");
    if (remaining.empty()) {
      out.emplace(vertex_key(p), p);
      return;
    }
    for (std::size_t r = 0; r < remaining.size(); ++r) {
      if (r > 0 && remaining[r] == remaining[r - 1]) continue;
      const Scalar& delta = sizes_[remaining[r]];
      std::vector<std::size_t> rest = remaining;
      rest.erase(rest.begin() + static_cast<long>(r));
      for (std::size_t v = 0; v < p.size(); ++v) {
        if (!less(delta, p.length(p.prev(v)), table_) || !less(delta, p.length(v), table_)) continue;
        visit(canonical_form(chop(p, v, delta)).polygon, rest, out);
      }
    }
  }

  const std::vector<Scalar>& sizes_;
  const SymbolTable& table_;
  std::size_t max_states_;
  std::set<std::string> seen_;
};

/// Values b with b (sigma - b) = pi and 0 < b < sigma.
inline std::vector<Scalar> recover_b(const ManifoldSpec& spec, const Scalar& sigma, const Scalar& pi,
                                     const std::vector<Scalar>& f_periods, bool rational_path) {
  const SymbolTable& table = spec.symbols();
  std::vector<Scalar> out;
  auto accept = [&](const Scalar& b) {
    if (positive(b, table) && less(b, sigma, table) && equal(b * (sigma - b), pi, table)) out.push_back(b);
  };
  if (const auto* s = std::get_if<S2xS2>(&spec.data)) {
    accept(s->a);
    accept(s->b);
  } else if (rational_path && sigma.is_rational() && pi.is_rational()) {
    // b^2 - sigma b + pi = 0 with a rational root
    Rational sg = sigma.as_rational(), disc = sg * sg - 4 * pi.as_rational();
    if (disc >= 0) {
      BigInt num = boost::multiprecision::numerator(disc), den = boost::multiprecision::denominator(disc);
      BigInt rn = boost::multiprecision::sqrt(num), rd = boost::multiprecision::sqrt(den);
      if (rn * rn == num && rd * rd == den) {
        Rational root = Rational(rn) / Rational(rd);
        accept(Scalar((sg - root) / 2));
        accept(Scalar((sg + root) / 2));
      }
    }
  } else {
    for (const auto& b : f_periods) accept(b);
  }
  sort_unique(out, table);
  return out;
}

}  // namespace detail

/// Every moment polygon of the manifold, up to congruence.
inline ClassificationResult classify(const ManifoldSpec& spec, const ClassifyOptions& opt = {}) {
  detail::require_valid(spec);
  const SymbolTable& table = spec.symbols();
  const std::size_t b2 = detail::second_betti(spec);
  auto [P, S] = detail::perimeter_and_area(spec);
  ClassificationResult result;

  if (b2 == 1) {
    Scalar lambda = P / 3;
    if (equal(lambda * lambda / 2, S, table)) {
      DelzantPolygon canon = canonical_form(delzant_triangle(lambda, spec.table)).polygon;
      Decomposition d = decompose(canon);
      result.classes.push_back({canon, d, symplectomorphism_type(d.root)});
    }
    result.exactness = Exactness::Exact;
    return result;
  }

  const std::size_t s = b2 - 2;
  const std::size_t n = b2 + 2;
  std::vector<Scalar> sizes = candidate_sizes(spec, opt);
  if (s > 0 && sizes.empty()) return result;

  // Periods of square-zero classes with c1 = 2: the possible lengths of the
  // trapezoid's parallel sides.
  std::vector<Scalar> f_periods;
  const bool rational_path = opt.rational_fast_path || std::holds_alternative<RawInvariants>(spec.data);
  if (const auto* c = std::get_if<CP2Blowups>(&spec.data); c && !opt.rational_fast_path) {
    Scalar sigma_max = P;  // sigma <= (P + s * max size) / 2
    if (!sizes.empty()) sigma_max = (P + sizes.back() * static_cast<long long>(s)) / 2;
    BlowupForm f{c->lambda, c->deltas, spec.table};
    for (const auto& e : enumerate_classes(f, 0, sigma_max, 2, opt.threads)) f_periods.push_back(period(f, e));
    detail::sort_unique(f_periods, table);
  }
  const bool use_quadratic = rational_path && P.is_rational() && S.is_rational() && detail::all_rational(sizes);
  // Raw invariants with irrational data: b must be among the supplied sizes.
  if (std::holds_alternative<RawInvariants>(spec.data) && !use_quadratic) f_periods = sizes;

  // Roots for every multiset of s sizes.
  std::vector<detail::RootCandidate> roots;
  std::vector<std::size_t> idx(s, 0);
  for (;;) {
    Scalar sum, sum_sq;
    for (auto i : idx) {
      sum += sizes[i];
      sum_sq += sizes[i] * sizes[i];
    }
    Scalar sigma = (P + sum) / 2, pi = S + sum_sq / 2;
    if (certified_sign(sigma * sigma - pi * 4LL, table, table.precision_cap()) >= 0) {
      for (const auto& b : detail::recover_b(spec, sigma, pi, f_periods, use_quadratic)) {
        Scalar a = sigma - b;
        for (long long k = 0; positive(a - b * k / 2, table); ++k) roots.push_back({a, b, k, idx});
      }
    }
    // next non-decreasing index tuple
    std::size_t j = s;
    while (j > 0 && idx[j - 1] + 1 == sizes.size()) --j;
    if (j == 0) break;
    ++idx[j - 1];
    for (std::size_t t = j; t < s; ++t) idx[t] = idx[j - 1];
  }

  std::vector<std::map<std::string, DelzantPolygon>> found(roots.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= roots.size()) return;
      try {
        const auto& r = roots[i];
        detail::ChopSearch search(sizes, table, opt.max_search_states);
        search.run(hirzebruch_trapezoid(r.a, r.b, r.k, spec.table), r.multiset, found[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(roots.size());
        return;
      }
    }
  };
  unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(std::max<std::size_t>(roots.size(), 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::map<std::string, DelzantPolygon> merged;
  for (auto& m : found) merged.merge(m);

  const auto parity = detail::expected_parity(spec);
  std::vector<DelzantPolygon> kept;
  for (auto& [key, poly] : merged) {
    if (poly.size() != n) continue;
    auto pa = perimeter_area(poly);
    if (!equal(pa.perimeter, P, table) || !equal(pa.area, S, table)) continue;
    if (opt.parity_filter && parity && intersection_form(poly).parity != *parity) continue;
    kept.push_back(poly);
  }
  std::sort(kept.begin(), kept.end(), [&](const DelzantPolygon& x, const DelzantPolygon& y) {
    return detail::compare_vertex_sequences(x.vertices(), y.vertices(), table) == Ordering::Less;
  });
  for (const auto& poly : kept) {
    Decomposition d = decompose(poly);
    // Every blow-down of a genuine moment polygon has a size in the candidate set.
    bool sizes_ok = std::all_of(d.steps.begin(), d.steps.end(), [&](const ChopRecord& st) {
      return std::any_of(sizes.begin(), sizes.end(), [&](const Scalar& x) { return equal(x, st.delta, table); });
    });
    if (!sizes_ok) continue;
    result.classes.push_back({poly, d, symplectomorphism_type(d.root)});
  }

  // With two edges' worth of H2 the parity and (P, S) pin the manifold.
  const bool pinned = opt.parity_filter && parity && b2 <= 2;
  result.exactness = pinned ? Exactness::Exact : Exactness::CandidateSuperset;
  return result;
}

}  // namespace delzant
