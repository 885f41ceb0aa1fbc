#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <set>

#include "json.hpp"

#include "support/fixtures.hpp"

using namespace delzant;
using delzant::testing::q;

namespace {

BlowupForm form(const std::string& lambda, std::vector<std::string> deltas) {
  BlowupForm f;
  f.lambda = Scalar(q(lambda));
  for (const auto& d : deltas) f.deltas.push_back(Scalar(q(d)));
  return f;
}

/// Exhaustive search over |d|, |m_i| <= box.
std::vector<MinkowskiClass> brute_force(const BlowupForm& f, long long alpha, const Rational& K,
                                        std::optional<long long> c1, long long box) {
  std::vector<MinkowskiClass> out;
  const std::size_t k = f.k();
  MinkowskiClass e{0, std::vector<long long>(k, -box)};
  for (e.d = -box; e.d <= box; ++e.d) {
    std::fill(e.m.begin(), e.m.end(), -box);
    for (;;) {
      bool zero = e.d == 0 && std::all_of(e.m.begin(), e.m.end(), [](long long x) { return x == 0; });
      if (!zero && self_intersection(e) == alpha && (!c1 || first_chern(e) == *c1)) {
        Rational p = period(f, e).as_rational();
        if (p >= 0 && p <= K) out.push_back(e);
      }
      std::size_t i = 0;
      while (i < k && e.m[i] == box) e.m[i++] = -box;
      if (i == k) break;
      ++e.m[i];
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("evaluate basis classes", "[minkowski]") {
  auto f = form("3", {"1", "1/2"});
  auto e1 = evaluate(f, MinkowskiClass::exceptional(2, 0));
  CHECK(e1.self_intersection == -1);
  CHECK(e1.period == Scalar(1));
  CHECK(e1.c1 == 1);
  auto l = evaluate(f, {1, {0, 0}});
  CHECK(l.self_intersection == 1);
  CHECK(l.period == Scalar(3));
  CHECK(l.c1 == 3);
  auto lee = evaluate(f, {1, {1, 1}});
  CHECK(lee.self_intersection == -1);
  CHECK(lee.period == Scalar(q("3/2")));
  CHECK(lee.c1 == 1);
  CHECK_THROWS_AS(period(f, {1, {0}}), InvalidInput);
}

TEST_CASE("enumeration examples", "[minkowski]") {
  auto f1 = form("3", {"1"});
  CHECK(enumerate_classes(f1, -1, Scalar(10)) == std::vector<MinkowskiClass>{MinkowskiClass::exceptional(1, 0)});

  auto f2 = form("3", {"1", "1"});
  auto got = enumerate_classes(f2, -1, Scalar(10), 1);
  std::vector<MinkowskiClass> want{MinkowskiClass::exceptional(2, 0), MinkowskiClass::exceptional(2, 1), {1, {1, 1}}};
  std::sort(want.begin(), want.end());
  CHECK(got == want);

  CHECK(enumerate_classes(f1, 0, Scalar(10), 2) == std::vector<MinkowskiClass>{{1, {1}}});
}

TEST_CASE("improper forms are rejected", "[minkowski]") {
  CHECK_THROWS_AS(enumerate_classes(form("1", {"1"}), -1, Scalar(5)), NotProperInput);
  CHECK_THROWS_AS(enumerate_classes(form("2", {"3/2", "3/2"}), -1, Scalar(5)), NotProperInput);
  CHECK_THROWS_AS(enumerate_classes(form("2", {"0"}), -1, Scalar(5)), NotProperInput);
  CHECK_THROWS_AS(enumerate_classes(form("-2", {}), 1, Scalar(5)), NotProperInput);
}

TEST_CASE("enumeration agrees with brute force", "[minkowski][property]") {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> num(1, 8);
  std::uniform_int_distribution<int> kd(0, 3);
  std::uniform_int_distribution<int> ad(-2, 1);
  int compared = 0;
  while (compared < 60) {
    BlowupForm f;
    f.lambda = Scalar(Rational(num(rng) + 4, 2));
    int k = kd(rng);
    for (int i = 0; i < k; ++i) f.deltas.push_back(Scalar(Rational(num(rng), 4)));
    if (!positive(f.volume(), f.symbols())) continue;
    long long alpha = ad(rng);
    Rational K(num(rng) + 2, 2);
    std::optional<long long> c1;
    if (rng() % 2) c1 = static_cast<long long>(rng() % 3);
    auto fast = enumerate_classes(f, alpha, Scalar(K), c1);
    // the box must contain the derived d range
    auto [dlo, dhi] = detail::period_d_range(f, alpha, Scalar(K));
    long long box = std::max<long long>({std::abs(dlo), std::abs(dhi), 4}) + 1;
    auto slow = brute_force(f, alpha, K, c1, box);
    CHECK(fast == slow);
    for (const auto& e : fast) {
      CHECK(self_intersection(e) == alpha);
      Rational p = period(f, e).as_rational();
      CHECK(p >= 0);
      CHECK(p <= K);
    }
    ++compared;
  }
}

TEST_CASE("enumeration is monotone in the window", "[minkowski][property]") {
  auto f = form("5", {"1", "3/2", "1/2"});
  std::vector<MinkowskiClass> prev;
  for (int K = 0; K <= 12; ++K) {
    auto cur = enumerate_classes(f, -1, Scalar(K));
    CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
    prev = std::move(cur);
  }
  CHECK(prev.size() > 3);
}

TEST_CASE("enumeration is independent of the thread count", "[minkowski]") {
  auto f = form("7", {"1", "2", "3/2", "1/2"});
  auto one = enumerate_classes(f, -1, Scalar(30), std::nullopt, 1);
  auto four = enumerate_classes(f, -1, Scalar(30), std::nullopt, 4);
  CHECK(one == four);
  CHECK_FALSE(one.empty());
}

TEST_CASE("enumeration with irrational periods", "[minkowski]") {
  BlowupForm f;
  f.table = testing::sqrt2_table();
  f.lambda = Scalar(3);
  f.deltas = {Scalar::symbol(0), Scalar(1)};
  auto got = enumerate_classes(f, -1, Scalar(3));
  // periods s, 1, 2 - s, 4 - s, 5 - 2s, 4 - s; the rest of d <= 3 falls outside [0, 3]
  std::vector<MinkowskiClass> want{MinkowskiClass::exceptional(2, 0), MinkowskiClass::exceptional(2, 1),
                                   {1, {1, 1}}, {1, {1, -1}}, {2, {2, 1}}, {2, {1, 2}}};
  std::sort(want.begin(), want.end());
  CHECK(got == want);
}

TEST_CASE("del Pezzo exceptional counts match the oracle", "[minkowski]") {
  std::ifstream in(std::string(DELZANT_TEST_DATA_DIR) + "/oracle/del_pezzo_counts.json");
  REQUIRE(in);
  auto oracle = nlohmann::json::parse(in);
  for (std::size_t k = 1; k <= 8; ++k)
    CHECK(del_pezzo_exceptional_count(k) == oracle[std::to_string(k)]["count"].get<std::size_t>());
  CHECK(del_pezzo_exceptional_count(6, 3) == 27);
  CHECK_THROWS_AS(del_pezzo_exceptional_count(0), InvalidInput);
  CHECK_THROWS_AS(del_pezzo_exceptional_count(9), InvalidInput);
  for (const auto& e : enumerate_c1_classes(5, -1, 1)) {
    CHECK(self_intersection(e) == -1);
    CHECK(first_chern(e) == 1);
  }
}
