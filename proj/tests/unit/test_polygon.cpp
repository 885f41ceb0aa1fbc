#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "support/fixtures.hpp"

using namespace delzant;
using delzant::testing::poly;
using delzant::testing::q;

namespace {

std::vector<Rational> rational_lengths(const DelzantPolygon& p) {
  std::vector<Rational> out;
  for (const auto& l : p.lengths()) out.push_back(l.as_rational());
  return out;
}

}  // namespace

TEST_CASE("validate accepts standard shapes", "[polygon]") {
  CHECK_NOTHROW(poly({{0, 0}, {1, 0}, {0, 1}}));
  CHECK_NOTHROW(poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  // clockwise input is reoriented
  auto cw = poly({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(cw.size() == 4);
  CHECK(cross(cw.direction(0), cw.direction(1)) == 1);
}

TEST_CASE("validate names the first violated condition", "[polygon]") {
  try {
    poly({{0, 0}, {2, 0}, {0, 1}});
    FAIL("expected NotDelzant");
  } catch (const NotDelzant& e) {
    CHECK(e.reason() == NotDelzantReason::NonUnimodular);
    CHECK(e.location() == 2);  // the vertex (0,1)
  }
  try {
    poly({{0, 0}, {1, 0}, {1, 0}, {0, 1}});
    FAIL("expected NotDelzant");
  } catch (const NotDelzant& e) {
    CHECK(e.reason() == NotDelzantReason::DegenerateEdge);
    CHECK(e.location() == 1);
  }
  try {
    poly({{0, 0}, {2, 0}, {1, 1}, {2, 2}, {0, 2}});
    FAIL("expected NotDelzant");
  } catch (const NotDelzant& e) {
    CHECK(e.reason() == NotDelzantReason::NonConvex);
  }
  CHECK_THROWS_AS(poly({{0, 0}, {1, 0}}), NotDelzant);

  // An edge of slope sqrt(2)-ish: (0,0) -> (1, s) is not along a lattice vector.
  auto table = testing::sqrt2_table();
  Scalar s = Scalar::symbol(0);
  try {
    DelzantPolygon::validate({{Scalar(), Scalar()}, {Scalar(1), s}, {Scalar(), Scalar(1)}}, table);
    FAIL("expected NotDelzant");
  } catch (const NotDelzant& e) {
    CHECK(e.reason() == NotDelzantReason::IrrationalSlope);
    CHECK(e.location() == 0);
  }
}

TEST_CASE("edge data of the worked pentagon", "[polygon]") {
  auto p = testing::table_pentagon();
  CHECK(rational_lengths(p) == std::vector<Rational>{4, 2, 2, 2, 8});
  CHECK(p.self_intersections() == std::vector<int>{0, -2, -1, -1, 1});
  auto data = edge_data(p);
  REQUIRE(data.size() == 5);
  CHECK(data[0].primitive_direction == IntVec2{1, 0});
  CHECK(data[0].outward_normal == IntVec2{0, -1});
  CHECK(data[2].primitive_direction == IntVec2{-1, 2});
  for (const auto& e : data) CHECK(e.outward_normal == rotate_clockwise(e.primitive_direction));
}

TEST_CASE("triangle and trapezoid formulas on symbolic parameters", "[polygon]") {
  auto table = testing::lambda_table();
  Scalar lambda = Scalar::symbol(0);
  auto tri = delzant_triangle(lambda, table);
  for (const auto& l : tri.lengths()) CHECK(l == lambda);
  auto pa = perimeter_area(tri);
  CHECK(pa.perimeter == lambda * 3LL);
  CHECK(pa.area == lambda * lambda / 2);
  CHECK(tri.self_intersections() == std::vector<int>{1, 1, 1});

  SymbolSpec a, b;
  a.name = "a";
  a.enclosure = {q("5"), q("6")};
  b.name = "b";
  b.enclosure = {q("1"), q("2")};
  auto ab = std::make_shared<const SymbolTable>(std::vector<SymbolSpec>{a, b}, true);
  Scalar A = Scalar::symbol(0), B = Scalar::symbol(1);
  for (long long k = 0; k <= 2; ++k) {
    auto h = hirzebruch_trapezoid(A, B, k, ab);
    auto hpa = perimeter_area(h);
    CHECK(hpa.perimeter == (A + B) * 2LL);
    CHECK(hpa.area == A * B);
    // right edge is index 1; (0,-k,0,k) counterclockwise from it
    std::vector<int> cycle{h.self_intersection(1), h.self_intersection(2), h.self_intersection(3),
                           h.self_intersection(0)};
    CHECK(cycle == std::vector<int>{0, static_cast<int>(-k), 0, static_cast<int>(k)});
    CHECK(h.length(1) == B);
    CHECK(h.length(0) == A + B * k / 2);
    CHECK(h.length(2) == A - B * k / 2);
  }
}

TEST_CASE("perimeter and area of the unit square", "[polygon]") {
  auto pa = perimeter_area(poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  CHECK(pa.perimeter == Scalar(4));
  CHECK(pa.area == Scalar(1));
}

TEST_CASE("apply_map examples", "[polygon]") {
  auto tri = delzant_triangle(Scalar(3));
  CHECK(apply_map(UnimodularAffineMap::identity(), tri).vertices() == tri.vertices());

  auto table = testing::lambda_table();
  Scalar lambda = Scalar::symbol(0);
  auto tl = delzant_triangle(lambda, table);
  auto sheared = apply_map(UnimodularAffineMap({1, 1, 0, 1}, {}), tl);
  for (const auto& l : sheared.lengths()) CHECK(l == lambda);

  auto h = hirzebruch_trapezoid(Scalar(3), Scalar(1), 2);
  auto flipped = apply_map(UnimodularAffineMap({0, 1, 1, 0}, {}), h);
  auto a = h.self_intersections(), b = flipped.self_intersections();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  CHECK(perimeter_area(flipped).area == perimeter_area(h).area);
}

TEST_CASE("apply_map preserves the edge table", "[polygon][property]") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto p = testing::random_polygon(rng, 4);
    auto g = testing::random_unimodular(rng, 10, Scalar(q("1/3")), Scalar(-7));
    auto img = apply_map(g, p);
    // det -1 lists the image in reverse, keeping vertex 0 first
    std::vector<std::pair<Scalar, int>> before, after;
    for (std::size_t i = 0; i < p.size(); ++i) before.emplace_back(p.length(i), p.self_intersection(i));
    for (std::size_t i = 0; i < img.size(); ++i) after.emplace_back(img.length(i), img.self_intersection(i));
    if (g.det() == -1) std::reverse(after.begin(), after.end());
    // rotate to align
    bool matched = false;
    for (std::size_t r = 0; r < after.size() && !matched; ++r) {
      std::rotate(after.begin(), after.begin() + 1, after.end());
      matched = after == before;
    }
    CHECK(matched);
    CHECK(perimeter_area(img).perimeter == perimeter_area(p).perimeter);
    CHECK(perimeter_area(img).area == perimeter_area(p).area);
    // validation of the image agrees with the trusted construction
    auto revalidated = DelzantPolygon::validate(img.vertices());
    CHECK(revalidated.self_intersections() == img.self_intersections());
    CHECK(revalidated.lengths() == img.lengths());
  }
}

TEST_CASE("canonical form examples", "[polygon][canonical]") {
  auto tri = delzant_triangle(Scalar(3));
  auto img = apply_map(UnimodularAffineMap({2, 1, 1, 1}, {Scalar(5), Scalar(q("1/2"))}), tri);
  CHECK(canonical_form(tri).polygon == canonical_form(img).polygon);
  CHECK(congruent(tri, img));

  CHECK_FALSE(congruent(hirzebruch_trapezoid(Scalar(2), Scalar(2), 0), hirzebruch_trapezoid(Scalar(2), Scalar(2), 1)));

  auto square = poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  auto moved = poly({{7, -3}, {8, -3}, {8, -2}, {7, -2}});
  CHECK(canonical_form(square).polygon.vertices() == canonical_form(moved).polygon.vertices());

  auto cf = canonical_form(testing::table_pentagon());
  CHECK(apply_map(cf.witness, testing::table_pentagon()).vertices().size() == 5);
  CHECK(cf.polygon.vertex(0) == Point{Scalar(), Scalar()});
  CHECK(congruent(apply_map(cf.witness, testing::table_pentagon()), cf.polygon));
}

TEST_CASE("canonical form is invariant under random congruences", "[polygon][canonical][property]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto p = testing::random_polygon(rng, 4);
    auto g = testing::random_unimodular(rng, 10, Scalar(q("-2/3")), Scalar(11));
    auto cp = canonical_form(p);
    auto cg = canonical_form(apply_map(g, p));
    CHECK(cp.polygon == cg.polygon);
    // witness maps the input onto the canonical vertex set
    auto mapped = apply_map(cp.witness, p);
    CHECK(congruent(mapped, cp.polygon));
    for (const auto& v : mapped.vertices()) CHECK(cp.polygon.find_vertex(v).has_value());
  }
}

TEST_CASE("canonical form with symbolic coordinates", "[polygon][canonical]") {
  auto table = testing::sqrt2_table();
  Scalar s = Scalar::symbol(0);
  auto h = hirzebruch_trapezoid(Scalar(1) + s, Scalar(1), 2, table);
  auto img = apply_map(UnimodularAffineMap({1, 3, 0, 1}, {s, Scalar(2)}), h);
  CHECK(congruent(h, img));
  CHECK_FALSE(congruent(h, hirzebruch_trapezoid(Scalar(1) + s, Scalar(1), 0, table)));
}

TEST_CASE("affine maps compose and invert", "[polygon]") {
  UnimodularAffineMap g({2, 1, 1, 1}, {Scalar(3), Scalar(-1)});
  UnimodularAffineMap h({0, 1, 1, 0}, {Scalar(q("1/2")), Scalar(0)});
  Point p{Scalar(4), Scalar(q("2/3"))};
  CHECK(g.compose(h)(p) == g(h(p)));
  CHECK(g.inverse()(g(p)) == p);
  CHECK(h.compose(h.inverse()) == UnimodularAffineMap::identity());
  CHECK_THROWS_AS(UnimodularAffineMap({2, 0, 0, 1}, {}), InvalidInput);
}
