#pragma once

// Exact scalars: polynomials with rational coefficients in a finite set of
// positive "period" symbols, each known through a refinable rational
// enclosure. Equality is structural (coefficient-wise). It is the true
// equality only if the symbols are algebraically independent, which the
// caller declares on the SymbolTable. Order is decided by certified interval
// evaluation and is allowed to fail with Undecidable.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "delzant/errors.hpp"
#include "delzant/rational.hpp"

namespace delzant {

struct SymbolSpec {
  std::string name;
  Interval enclosure;
  /// When set, the symbol is the positive square root of this rational.
  std::optional<Rational> sqrt_of;
  /// When set, a truncated decimal expansion of the symbol.
  std::optional<std::string> digits;
  /// Optional user refinement: returns a sub-interval of its argument that
  /// still contains the symbol.
  std::function<Interval(const Interval&)> refiner;
};

class SymbolTable {
 public:
  static constexpr int kDefaultPrecisionCap = 64;

  SymbolTable() = default;

  explicit SymbolTable(std::vector<SymbolSpec> symbols, bool independence_declared = false,
                       int precision_cap = kDefaultPrecisionCap)
      : symbols_(std::move(symbols)),
        independence_declared_(independence_declared),
        precision_cap_(precision_cap) {
    if (precision_cap_ <= 0) throw InvalidInput("precision cap must be positive");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      const auto& s = symbols_[i];
      if (s.name.empty()) throw InvalidInput("symbol name must be non-empty");
      for (char c : s.name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
          throw InvalidInput("symbol name is not an identifier: " + s.name);
      for (std::size_t j = 0; j < i; ++j)
        if (symbols_[j].name == s.name) throw InvalidInput("duplicate symbol: " + s.name);
      if (s.enclosure.lo > s.enclosure.hi) throw InvalidInput("empty enclosure for symbol " + s.name);
      if (s.enclosure.lo <= 0) throw InvalidInput("enclosure of symbol " + s.name + " must have a positive lower bound");
      if (s.sqrt_of) {
        if (*s.sqrt_of <= 0) throw InvalidInput("sqrt radicand must be positive for symbol " + s.name);
        if (s.enclosure.lo * s.enclosure.lo > *s.sqrt_of || s.enclosure.hi * s.enclosure.hi < *s.sqrt_of)
          throw InvalidInput("enclosure of " + s.name + " does not contain the square root");
      }
      if (s.digits) {
        auto iv = digits_enclosure(*s.digits);
        if (iv.hi < s.enclosure.lo || iv.lo > s.enclosure.hi)
          throw InvalidInput("digits of " + s.name + " are outside its enclosure");
      }
    }
  }

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  const SymbolSpec& symbol(std::size_t i) const { return symbols_.at(i); }
  const std::vector<SymbolSpec>& symbols() const { return symbols_; }
  bool independence_declared() const { return independence_declared_; }
  int precision_cap() const { return precision_cap_; }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i].name == name) return i;
    return std::nullopt;
  }

  std::size_t index_of(const std::string& name) const {
    if (auto i = find(name)) return *i;
    throw InvalidInput("unknown symbol: " + name);
  }

  bool refinable(std::size_t i) const {
    const auto& s = symbols_.at(i);
    return s.sqrt_of.has_value() || s.digits.has_value() || static_cast<bool>(s.refiner);
  }

  /// One refinement step: roughly halves the width where the source allows.
  Interval refine_once(std::size_t i, const Interval& current) const {
    const auto& s = symbols_.at(i);
    if (s.sqrt_of) {
      Rational mid = current.midpoint();
      if (mid * mid < *s.sqrt_of) return {mid, current.hi};
      return {current.lo, mid};
    }
    if (s.refiner) {
      Interval next = s.refiner(current);
      if (next.lo < current.lo) next.lo = current.lo;
      if (next.hi > current.hi) next.hi = current.hi;
      if (next.lo > next.hi) throw InvalidInput("refiner for " + s.name + " left its enclosure");
      return next;
    }
    if (s.digits) {
      Interval d = digits_enclosure(*s.digits);
      return {std::max(d.lo, current.lo), std::min(d.hi, current.hi)};
    }
    return current;
  }

  /// A copy whose enclosures have been refined `rounds` times.
  SymbolTable refined(int rounds) const {
    SymbolTable out = *this;
    for (std::size_t i = 0; i < out.symbols_.size(); ++i)
      for (int r = 0; r < rounds; ++r) out.symbols_[i].enclosure = refine_once(i, out.symbols_[i].enclosure);
    return out;
  }

  SymbolTable with_precision_cap(int cap) const {
    SymbolTable out = *this;
    if (cap <= 0) throw InvalidInput("precision cap must be positive");
    out.precision_cap_ = cap;
    return out;
  }

  std::vector<Interval> enclosures() const {
    std::vector<Interval> out;
    out.reserve(symbols_.size());
    for (const auto& s : symbols_) out.push_back(s.enclosure);
    return out;
  }

  /// [v, v + 10^-n] for a truncated expansion with n fractional digits.
  static Interval digits_enclosure(const std::string& digits) {
    Rational v = parse_rational(digits);
    auto dot = digits.find('.');
    std::size_t n = dot == std::string::npos ? 0 : digits.size() - dot - 1;
    BigInt den(1);
    for (std::size_t i = 0; i < n; ++i) den *= 10;
    Rational ulp(BigInt(1), den);
    if (v >= 0) return {v, v + ulp};
    return {v - ulp, v};
  }

 private:
  std::vector<SymbolSpec> symbols_;
  bool independence_declared_ = false;
  int precision_cap_ = kDefaultPrecisionCap;
};

using SymbolTablePtr = std::shared_ptr<const SymbolTable>;

inline SymbolTablePtr empty_symbol_table() {
  static const SymbolTablePtr table = std::make_shared<const SymbolTable>();
  return table;
}

/// Sorted multiset of symbol indices; the empty monomial is 1.
using Monomial = std::vector<std::uint32_t>;

class Scalar {
 public:
  struct Term {
    Monomial monomial;
    Rational coefficient;
    bool operator==(const Term&) const = default;
  };

  Scalar() = default;
  Scalar(const Rational& r) {  // NOLINT(google-explicit-constructor)
    if (r != 0) terms_.push_back({{}, r});
  }
  template <std::integral I>
  Scalar(I v) : Scalar(Rational(static_cast<long long>(v))) {}  // NOLINT(google-explicit-constructor)

  static Scalar symbol(std::uint32_t index) {
    Scalar s;
    s.terms_.push_back({{index}, Rational(1)});
    return s;
  }

  /// Builds from arbitrary terms, merging duplicates and dropping zeros.
  static Scalar from_terms(std::vector<Term> terms) {
    for (auto& t : terms) std::sort(t.monomial.begin(), t.monomial.end());
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.monomial < b.monomial; });
    Scalar s;
    for (auto& t : terms) {
      if (!s.terms_.empty() && s.terms_.back().monomial == t.monomial)
        s.terms_.back().coefficient += t.coefficient;
      else
        s.terms_.push_back(std::move(t));
      if (s.terms_.back().coefficient == 0) s.terms_.pop_back();
    }
    return s;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.empty()); }

  /// Value of a rational scalar; throws for symbolic ones.
  Rational as_rational() const {
    if (!is_rational()) throw InvalidInput("scalar is not rational");
    return terms_.empty() ? Rational(0) : terms_[0].coefficient;
  }

  /// Coefficient of a monomial (0 when absent).
  Rational coefficient(const Monomial& m) const {
    for (const auto& t : terms_)
      if (t.monomial == m) return t.coefficient;
    return Rational(0);
  }

  std::vector<std::uint32_t> symbols_used() const {
    std::vector<std::uint32_t> out;
    for (const auto& t : terms_) out.insert(out.end(), t.monomial.begin(), t.monomial.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::uint32_t max_symbol_index() const {
    std::uint32_t m = 0;
    for (const auto& t : terms_)
      for (auto i : t.monomial) m = std::max(m, i + 1);
    return m;
  }

  bool operator==(const Scalar& o) const { return terms_ == o.terms_; }

  Scalar operator-() const {
    Scalar out = *this;
    for (auto& t : out.terms_) t.coefficient = -t.coefficient;
    return out;
  }

  Scalar& operator+=(const Scalar& o) {
    if (o.terms_.empty()) return *this;
    if (terms_.empty()) return *this = o;
    std::vector<Term> merged;
    merged.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      if (j == o.terms_.size() || (i < terms_.size() && terms_[i].monomial < o.terms_[j].monomial)) {
        merged.push_back(std::move(terms_[i++]));
      } else if (i == terms_.size() || o.terms_[j].monomial < terms_[i].monomial) {
        merged.push_back(o.terms_[j++]);
      } else {
        Rational c = terms_[i].coefficient + o.terms_[j].coefficient;
        if (c != 0) merged.push_back({std::move(terms_[i].monomial), std::move(c)});
        ++i;
        ++j;
      }
    }
    terms_ = std::move(merged);
    return *this;
  }

  Scalar& operator-=(const Scalar& o) { return *this += -o; }

  Scalar& operator*=(const Rational& r) {
    if (r == 0) {
      terms_.clear();
    } else {
      for (auto& t : terms_) t.coefficient *= r;
    }
    return *this;
  }

  Scalar& operator/=(const Rational& r) {
    if (r == 0) throw InvalidInput("division of scalar by zero");
    for (auto& t : terms_) t.coefficient /= r;
    return *this;
  }

  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Rational& r) { return a *= r; }
  friend Scalar operator*(const Rational& r, Scalar a) { return a *= r; }
  friend Scalar operator*(Scalar a, long long r) { return a *= Rational(r); }
  friend Scalar operator*(long long r, Scalar a) { return a *= Rational(r); }
  friend Scalar operator/(Scalar a, const Rational& r) { return a /= r; }
  friend Scalar operator/(Scalar a, long long r) { return a /= Rational(r); }

  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_rational()) return b * a.as_rational();
    if (b.is_rational()) return a * b.as_rational();
    std::vector<Term> prod;
    prod.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) {
        Monomial m;
        m.reserve(x.monomial.size() + y.monomial.size());
        std::merge(x.monomial.begin(), x.monomial.end(), y.monomial.begin(), y.monomial.end(), std::back_inserter(m));
        prod.push_back({std::move(m), x.coefficient * y.coefficient});
      }
    return from_terms(std::move(prod));
  }

  /// Interval enclosure given per-symbol boxes (all with positive lower bound).
  Interval enclose(const std::vector<Interval>& boxes) const {
    Interval acc{Rational(0), Rational(0)};
    for (const auto& t : terms_) {
      Interval mono{Rational(1), Rational(1)};
      for (auto idx : t.monomial) {
        if (idx >= boxes.size()) throw InvalidInput("scalar refers to a symbol outside its table");
        mono = {mono.lo * boxes[idx].lo, mono.hi * boxes[idx].hi};
      }
      acc = acc + t.coefficient * mono;
    }
    return acc;
  }

  /// Stable, table-independent key used for hashing and dedup.
  std::string key() const {
    std::string out;
    for (const auto& t : terms_) {
      for (std::size_t i = 0; i < t.monomial.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(t.monomial[i]);
      }
      out += ':';
      out += format_rational(t.coefficient);
      out += ';';
    }
    return out;
  }

  /// Human-readable rendering such as "3/2 + 2*lambda".
  std::string to_string(const SymbolTable& table) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms_) {
      Rational c = t.coefficient;
      bool negative = c < 0;
      if (negative) c = -c;
      if (first) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      first = false;
      if (t.monomial.empty()) {
        out += format_rational(c);
        continue;
      }
      if (c != 1) out += format_rational(c) + "*";
      for (std::size_t i = 0; i < t.monomial.size(); ++i) {
        if (i) out += "*";
        out += t.monomial[i] < table.size() ? table.symbol(t.monomial[i]).name : "#" + std::to_string(t.monomial[i]);
      }
    }
    return out;
  }

 private:
  std::vector<Term> terms_;
};

enum class Ordering { Less = -1, Equal = 0, Greater = 1 };

namespace detail {

inline int subdivided_sign(const Scalar& x, std::vector<Interval>& boxes, const std::vector<std::uint32_t>& split_symbols,
                           int depth) {
  int s = x.enclose(boxes).certified_sign();
  if (s != 0 || depth == 0 || split_symbols.empty()) return s;
  std::uint32_t widest = split_symbols.front();
  for (auto i : split_symbols)
    if (boxes[i].width() > boxes[widest].width()) widest = i;
  Interval saved = boxes[widest];
  Rational mid = saved.midpoint();
  boxes[widest] = {saved.lo, mid};
  int left = subdivided_sign(x, boxes, split_symbols, depth - 1);
  int right = 0;
  if (left != 0) {
    boxes[widest] = {mid, saved.hi};
    right = subdivided_sign(x, boxes, split_symbols, depth - 1);
  }
  boxes[widest] = saved;
  return (left != 0 && left == right) ? left : 0;
}

}  // namespace detail

/// Rewrites s*s as r for every symbol s declared as the square root of r.
inline Scalar reduce_radicals(const Scalar& x, const SymbolTable& table) {
  bool any = false;
  for (const auto& t : x.terms())
    for (std::size_t i = 0; i + 1 < t.monomial.size(); ++i)
      if (t.monomial[i] == t.monomial[i + 1] && t.monomial[i] < table.size() && table.symbol(t.monomial[i]).sqrt_of)
        any = true;
  if (!any) return x;
  std::vector<Scalar::Term> out;
  for (const auto& t : x.terms()) {
    Scalar::Term r{{}, t.coefficient};
    for (std::size_t i = 0; i < t.monomial.size(); ++i) {
      std::uint32_t s = t.monomial[i];
      if (i + 1 < t.monomial.size() && t.monomial[i + 1] == s && s < table.size() && table.symbol(s).sqrt_of) {
        r.coefficient *= *table.symbol(s).sqrt_of;
        ++i;
      } else {
        r.monomial.push_back(s);
      }
    }
    out.push_back(std::move(r));
  }
  return Scalar::from_terms(std::move(out));
}

/// Certified sign of x; throws Undecidable if the enclosure still straddles
/// zero after `precision_cap` refinement rounds.
inline int certified_sign(const Scalar& input, const SymbolTable& table, int precision_cap,
                          const std::string& what = "") {
  const Scalar x = reduce_radicals(input, table);
  if (x.is_zero()) return 0;
  if (x.is_rational()) return sign(x.as_rational());
  if (x.max_symbol_index() > table.size()) throw InvalidInput("scalar refers to a symbol outside its table");

  std::vector<Interval> boxes = table.enclosures();
  std::vector<std::uint32_t> refinable, fixed;
  for (auto i : x.symbols_used()) (table.refinable(i) ? refinable : fixed).push_back(i);

  constexpr int kMaxSubdivisionDepth = 10;
  for (int round = 0;; ++round) {
    int s = detail::subdivided_sign(x, boxes, fixed, std::min(round, kMaxSubdivisionDepth));
    if (s != 0) return s;
    if (round >= precision_cap) break;
    bool progress = false;
    for (auto i : refinable) {
      Interval next = table.refine_once(i, boxes[i]);
      if (next.width() < boxes[i].width()) progress = true;
      boxes[i] = next;
    }
    if (!progress && (fixed.empty() || round >= kMaxSubdivisionDepth)) {
      throw Undecidable(what.empty() ? "sign of " + x.to_string(table) : what, round);
    }
  }
  throw Undecidable(what.empty() ? "sign of " + x.to_string(table) : what, precision_cap);
}

inline Ordering compare(const Scalar& x, const Scalar& y, const SymbolTable& table, int precision_cap) {
  Scalar diff = reduce_radicals(x - y, table);
  if (diff.is_zero()) return Ordering::Equal;
  int s = certified_sign(diff, table, precision_cap,
                         "compare(" + x.to_string(table) + ", " + y.to_string(table) + ")");
  return s < 0 ? Ordering::Less : Ordering::Greater;
}

inline Ordering compare(const Scalar& x, const Scalar& y, const SymbolTable& table) {
  return compare(x, y, table, table.precision_cap());
}

inline bool less(const Scalar& x, const Scalar& y, const SymbolTable& t) { return compare(x, y, t) == Ordering::Less; }
inline bool greater(const Scalar& x, const Scalar& y, const SymbolTable& t) {
  return compare(x, y, t) == Ordering::Greater;
}
inline bool positive(const Scalar& x, const SymbolTable& t) { return greater(x, Scalar(), t); }
/// Exact equality modulo the declared square-root relations.
inline bool equal(const Scalar& x, const Scalar& y, const SymbolTable& t) {
  return reduce_radicals(x - y, t).is_zero();
}

/// Enclosure of x after `rounds` refinements of every refinable symbol.
inline Interval enclose(const Scalar& x, const SymbolTable& table, int rounds) {
  if (x.is_rational()) {
    Rational r = x.as_rational();
    return {r, r};
  }
  return x.enclose(table.refined(rounds).enclosures());
}

}  // namespace delzant
