#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <compare>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "delzant/errors.hpp"
#include "delzant/scalar.hpp"

namespace delzant {

/// Cohomology class of CP2 blown up k times: lambda on the line L, delta_i
/// on the exceptional classes E_i (periods in units of 2 pi).
struct BlowupForm {
  Scalar lambda;
  std::vector<Scalar> deltas;
  SymbolTablePtr table = empty_symbol_table();

  std::size_t k() const { return deltas.size(); }
  const SymbolTable& symbols() const { return *table; }

  /// lambda^2 - sum delta_i^2, the square of the class.
  Scalar volume() const {
    Scalar v = lambda * lambda;
    for (const auto& d : deltas) v -= d * d;
    return v;
  }

  void require_proper() const {
    if (!table) throw InvalidInput("blow-up form without a symbol table");
    if (!positive(lambda, *table)) throw NotProperInput("lambda must be positive");
    for (const auto& d : deltas)
      if (!positive(d, *table)) throw NotProperInput("blow-up sizes must be positive");
    if (!positive(volume(), *table)) throw NotProperInput("lambda^2 - sum delta_i^2 must be positive");
  }
};

/// d L - sum m_i E_i.
struct MinkowskiClass {
  long long d = 0;
  std::vector<long long> m;
  auto operator<=>(const MinkowskiClass&) const = default;
  bool operator==(const MinkowskiClass&) const = default;

  static MinkowskiClass exceptional(std::size_t k, std::size_t i) {
    MinkowskiClass e{0, std::vector<long long>(k, 0)};
    e.m.at(i) = -1;
    return e;
  }
};

struct ClassValues {
  long long self_intersection = 0;
  Scalar period;
  long long c1 = 0;
};

inline long long self_intersection(const MinkowskiClass& e) {
  long long s = e.d * e.d;
  for (auto x : e.m) s -= x * x;
  return s;
}

inline long long first_chern(const MinkowskiClass& e) {
  long long s = 3 * e.d;
  for (auto x : e.m) s -= x;
  return s;
}

inline Scalar period(const BlowupForm& f, const MinkowskiClass& e) {
  if (e.m.size() != f.k()) throw InvalidInput("class and form have different numbers of blow-ups");
  Scalar p = f.lambda * e.d;
  for (std::size_t i = 0; i < e.m.size(); ++i)
    if (e.m[i] != 0) p -= f.deltas[i] * e.m[i];
  return p;
}

inline ClassValues evaluate(const BlowupForm& f, const MinkowskiClass& e) {
  return {self_intersection(e), period(f, e), first_chern(e)};
}

struct EnumerationOptions {
  long long alpha = -1;
  /// Periods must lie in [0, window_max].
  Scalar window_max;
  std::optional<long long> c1;
  unsigned threads = 1;
  std::uint64_t max_nodes = std::uint64_t(1) << 36;
};

namespace detail {

inline long long isqrt(long long n) {
  if (n < 0) return -1;
  auto r = static_cast<long long>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline DoubleInterval double_enclosure(const Scalar& x, const SymbolTable& table, int rounds) {
  return to_double_interval(enclose(x, table, rounds));
}

/// Depth-first search over m for fixed d with sum m_i^2 = d^2 - alpha.
class ClassSearch {
 public:
  struct PeriodBounds {
    std::vector<DoubleInterval> deltas;
    std::vector<double> suffix_norm;  // upper bound on |(delta_j, ..., delta_k)|
    DoubleInterval lambda;
    DoubleInterval window_max;
  };

  ClassSearch(std::size_t k, long long alpha, std::optional<long long> c1, std::optional<PeriodBounds> bounds,
              std::atomic<std::uint64_t>& nodes, std::uint64_t max_nodes)
      : k_(k), alpha_(alpha), c1_(c1), bounds_(std::move(bounds)), nodes_(nodes), max_nodes_(max_nodes) {}

  std::vector<MinkowskiClass> run(long long d) {
    out_.clear();
    long long target = d * d - alpha_;
    if (target < 0) return {};
    d_ = d;
    m_.assign(k_, 0);
    if (bounds_) {
      const auto& b = *bounds_;
      // sum m_i delta_i must lie in [d lambda - K, d lambda]
      double dl_lo = d >= 0 ? d * b.lambda.lo : d * b.lambda.hi;
      double dl_hi = d >= 0 ? d * b.lambda.hi : d * b.lambda.lo;
      lo_target_ = dl_lo - b.window_max.hi;
      hi_target_ = dl_hi;
    }
    long long s = c1_ ? 3 * d - *c1_ : 0;
    recurse(0, target, s, 0.0, 0.0);
    return std::move(out_);
  }

 private:
  bool period_feasible(std::size_t next, long long remaining, double pre_lo, double pre_hi) const {
    if (!bounds_) return true;
    double rest = std::sqrt(static_cast<double>(remaining)) * bounds_->suffix_norm[next] * (1 + 1e-12);
    double tol = 1e-9 * (1 + std::abs(pre_lo) + std::abs(pre_hi) + rest + std::abs(lo_target_) + std::abs(hi_target_));
    return !(pre_lo - rest > hi_target_ + tol || pre_hi + rest < lo_target_ - tol);
  }

  std::pair<double, double> extend(std::size_t j, long long m, double lo, double hi) const {
    if (!bounds_ || m == 0) return {lo, hi};
    const auto& dj = bounds_->deltas[j];
    double md = static_cast<double>(m);
    return m > 0 ? std::pair{lo + md * dj.lo, hi + md * dj.hi} : std::pair{lo + md * dj.hi, hi + md * dj.lo};
  }

  void recurse(std::size_t j, long long remaining, long long sum_rem, double pre_lo, double pre_hi) {
    if (nodes_.fetch_add(1, std::memory_order_relaxed) > max_nodes_)
      throw ResourceCapExceeded("class enumeration exceeded its node budget");
    const std::size_t left = k_ - j;
    if (left == 0) {
      if (remaining == 0 && (!c1_ || sum_rem == 0) && period_feasible(j, 0, pre_lo, pre_hi))
        out_.push_back({d_, m_});
      return;
    }
    if (left == 1) {
      long long r = isqrt(remaining);
      if (r * r != remaining) return;
      for (long long m : {-r, r}) {
        if (c1_ && m != sum_rem) continue;
        auto [lo, hi] = extend(j, m, pre_lo, pre_hi);
        if (!period_feasible(j + 1, 0, lo, hi)) continue;
        m_[j] = m;
        out_.push_back({d_, m_});
        if (r == 0) break;
      }
      m_[j] = 0;
      return;
    }
    long long bound = isqrt(remaining);
    for (long long m = -bound; m <= bound; ++m) {
      long long rem = remaining - m * m;
      long long srem = sum_rem - m;
      if (c1_) {
        // Cauchy-Schwarz on the remaining coordinates, and m^2 = m mod 2
        if (static_cast<long double>(srem) * srem > static_cast<long double>(left - 1) * rem) continue;
        if (((srem - rem) % 2 + 2) % 2 != 0) continue;
      }
      auto [lo, hi] = extend(j, m, pre_lo, pre_hi);
      if (!period_feasible(j + 1, rem, lo, hi)) continue;
      m_[j] = m;
      recurse(j + 1, rem, srem, lo, hi);
    }
    m_[j] = 0;
  }

  std::size_t k_;
  long long alpha_;
  std::optional<long long> c1_;
  std::optional<PeriodBounds> bounds_;
  std::atomic<std::uint64_t>& nodes_;
  std::uint64_t max_nodes_;
  long long d_ = 0;
  double lo_target_ = 0, hi_target_ = 0;
  std::vector<long long> m_;
  std::vector<MinkowskiClass> out_;
};

/// Runs `work(d)` for each d, sharded across threads, and concatenates the
/// per-d results in the order of ds.
template <class Work>
std::vector<MinkowskiClass> shard_by_d(const std::vector<long long>& ds, unsigned threads, Work work) {
  std::vector<std::vector<MinkowskiClass>> per_d(ds.size());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(ds.size(), 1))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= ds.size()) return;
      try {
        per_d[i] = work(ds[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(ds.size());
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<MinkowskiClass> out;
  for (auto& v : per_d) out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  return out;
}

/// Range of d for which some class of square alpha can have period in [0, K].
/// With mu = |delta| < lambda and A = lambda^2 - mu^2:
///   d >= 0: period <= K forces d <= (K lambda + mu sqrt(K^2 - A alpha)) / A (or d <= K / lambda);
///   d < 0:  period >= 0 forces d^2 <= -mu^2 alpha / A.
inline std::pair<long long, long long> period_d_range(const BlowupForm& f, long long alpha, const Scalar& K) {
  const SymbolTable& table = f.symbols();
  Scalar mu2;
  for (const auto& d : f.deltas) mu2 += d * d;
  for (int rounds : {16, 40, table.precision_cap()}) {
    DoubleInterval lam = double_enclosure(f.lambda, table, rounds);
    DoubleInterval m2 = double_enclosure(mu2, table, rounds);
    DoubleInterval A = double_enclosure(f.volume(), table, rounds);
    DoubleInterval k = double_enclosure(K, table, rounds);
    if (!(A.lo > 0) || !(lam.lo > 0)) continue;
    double mu_hi = std::sqrt(std::max(0.0, m2.hi)) * (1 + 1e-12);
    double khi = std::max(0.0, k.hi);
    double disc = khi * khi - (alpha < 0 ? A.hi : A.lo) * static_cast<double>(alpha);
    double root = (khi * lam.hi + mu_hi * std::sqrt(std::max(0.0, disc))) / A.lo;
    double upper = std::max(root, khi / lam.lo) * (1 + 1e-9) + 1;
    double lower = alpha < 0 ? -(mu_hi * std::sqrt(-static_cast<double>(alpha) / A.lo) * (1 + 1e-9) + 1) : 0.0;
    if (!std::isfinite(upper) || upper > 1e9) throw ResourceCapExceeded("class enumeration window is too large");
    return {static_cast<long long>(std::floor(lower)), static_cast<long long>(std::ceil(upper))};
  }
  throw Undecidable("enclosure of the form volume does not separate it from zero", table.precision_cap());
}

}  // namespace detail

/// All classes E with E.E = alpha and 0 <= period(E) <= K (and c1(E) = c1 if
/// given), sorted by (d, m). The zero class is never reported.
inline std::vector<MinkowskiClass> enumerate_classes(const BlowupForm& f, const EnumerationOptions& opt) {
  f.require_proper();
  const SymbolTable& table = f.symbols();
  if (less(opt.window_max, Scalar(), table)) throw InvalidInput("period window upper bound must be non-negative");

  detail::ClassSearch::PeriodBounds b;
  const int rounds = std::min(40, table.precision_cap());
  for (const auto& d : f.deltas) b.deltas.push_back(detail::double_enclosure(d, table, rounds));
  b.suffix_norm.assign(f.k() + 1, 0.0);
  for (std::size_t j = f.k(); j-- > 0;) {
    double h = std::max(std::abs(b.deltas[j].lo), std::abs(b.deltas[j].hi));
    b.suffix_norm[j] = std::sqrt(b.suffix_norm[j + 1] * b.suffix_norm[j + 1] + h * h) * (1 + 1e-12);
  }
  b.lambda = detail::double_enclosure(f.lambda, table, rounds);
  b.window_max = detail::double_enclosure(opt.window_max, table, rounds);

  auto [d_lo, d_hi] = detail::period_d_range(f, opt.alpha, opt.window_max);
  std::vector<long long> ds;
  for (long long d = d_lo; d <= d_hi; ++d) ds.push_back(d);

  std::atomic<std::uint64_t> nodes{0};
  auto classes = detail::shard_by_d(ds, opt.threads, [&](long long d) {
    detail::ClassSearch search(f.k(), opt.alpha, opt.c1, b, nodes, opt.max_nodes);
    std::vector<MinkowskiClass> kept;
    for (auto& e : search.run(d)) {
      if (e.d == 0 && std::all_of(e.m.begin(), e.m.end(), [](long long x) { return x == 0; })) continue;
      Scalar p = period(f, e);
      if (compare(p, Scalar(), table) == Ordering::Less) continue;
      if (compare(p, opt.window_max, table) == Ordering::Greater) continue;
      if (self_intersection(e) != opt.alpha || (opt.c1 && first_chern(e) != *opt.c1))
        throw ContractViolation("enumerated class violates its defining equations");
      kept.push_back(std::move(e));
    }
    return kept;
  });
  std::sort(classes.begin(), classes.end());
  return classes;
}

inline std::vector<MinkowskiClass> enumerate_classes(const BlowupForm& f, long long alpha, const Scalar& K,
                                                     std::optional<long long> c1 = std::nullopt,
                                                     unsigned threads = 1) {
  EnumerationOptions opt;
  opt.alpha = alpha;
  opt.window_max = K;
  opt.c1 = c1;
  opt.threads = threads;
  return enumerate_classes(f, opt);
}

/// Classes of square alpha and first Chern number c1 in k blow-ups, with no
/// period constraint. Finite for k <= 8: Cauchy-Schwarz gives
/// (3d - c1)^2 <= k (d^2 - alpha).
inline std::vector<MinkowskiClass> enumerate_c1_classes(std::size_t k, long long alpha, long long c1,
                                                        unsigned threads = 1) {
  if (k > 8) throw InvalidInput("the first Chern class bounds d only for at most 8 blow-ups");
  const long long a = 9 - static_cast<long long>(k);
  const long long b = -6 * c1;
  const long long c = c1 * c1 + static_cast<long long>(k) * alpha;
  auto admissible = [&](long long d) { return a * d * d + b * d + c <= 0 && d * d - alpha >= 0; };
  double disc = static_cast<double>(b) * b - 4.0 * a * c;
  if (disc < 0) return {};
  double r1 = (-b - std::sqrt(disc)) / (2.0 * a), r2 = (-b + std::sqrt(disc)) / (2.0 * a);
  std::vector<long long> ds;
  for (long long d = static_cast<long long>(std::floor(r1)) - 2; d <= static_cast<long long>(std::ceil(r2)) + 2; ++d)
    if (admissible(d)) ds.push_back(d);
  std::atomic<std::uint64_t> nodes{0};
  auto classes = detail::shard_by_d(ds, threads, [&](long long d) {
    detail::ClassSearch search(k, alpha, c1, std::nullopt, nodes, EnumerationOptions{}.max_nodes);
    auto found = search.run(d);
    std::erase_if(found, [](const MinkowskiClass& e) {
      return e.d == 0 && std::all_of(e.m.begin(), e.m.end(), [](long long x) { return x == 0; });
    });
    return found;
  });
  std::sort(classes.begin(), classes.end());
  return classes;
}

/// Number of classes E with E.E = -1 and c1(E) = 1 after k blow-ups of CP2.
inline std::size_t del_pezzo_exceptional_count(std::size_t k, unsigned threads = 1) {
  if (k < 1 || k > 8) throw InvalidInput("del Pezzo count is defined for 1 <= k <= 8");
  return enumerate_c1_classes(k, -1, 1, threads).size();
}

}  // namespace delzant
