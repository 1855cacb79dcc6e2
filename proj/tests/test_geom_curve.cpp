#include <catch2/catch_amalgamated.hpp>

#include <peg/curve.hpp>
#include <peg/geom.hpp>
#include <peg/numeric.hpp>

using namespace peg;

static PLCurve<double> unit_square() {
  return PLCurve<double>::from_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

TEST_CASE("rotate_pair preserves midpoint and chord length") {
  P2 z{0.3, 1.2}, w{-0.7, 0.4};
  for (double th : {0.1, 0.7, 1.5707963267948966}) {
    auto ang = make_angle_d(th);
    auto [zp, wp] = rotate_pair(z, w, ang);
    CHECK(norm(P2{(zp.x + wp.x) - (z.x + w.x), (zp.y + wp.y) - (z.y + w.y)}) < 1e-15);
    CHECK(std::abs(norm(zp - wp) - norm(z - w)) < 1e-15);
    // chord turns clockwise by th
    P2 a = z - w, b = zp - wp;
    CHECK(std::atan2(cross(b, a), dot(b, a)) == Catch::Approx(th).margin(1e-12));
  }
}

TEST_CASE("segment intersection cases") {
  SECTION("proper crossing") {
    auto x = segment_intersect<double>({0, 0}, {1, 1}, {0, 1}, {1, 0}, 1e-12);
    REQUIRE(x.kind == SegX::Point);
    CHECK(x.s == Catch::Approx(0.5));
    CHECK(x.t == Catch::Approx(0.5));
  }
  SECTION("parallel disjoint") {
    auto x = segment_intersect<double>({0, 0}, {1, 0}, {0, 1}, {1, 1}, 1e-12);
    CHECK(x.kind == SegX::None);
  }
  SECTION("collinear overlap") {
    auto x = segment_intersect<double>({0, 0}, {2, 0}, {1, 0}, {3, 0}, 1e-12);
    CHECK(x.kind == SegX::Overlap);
  }
  SECTION("touch at endpoint") {
    auto x = segment_intersect<double>({0, 0}, {1, 0}, {1, 0}, {1, 1}, 1e-12);
    REQUIRE(x.kind == SegX::Point);
    CHECK(x.s == Catch::Approx(1.0));
  }
}

TEST_CASE("curve construction normalizes orientation and validates") {
  SECTION("clockwise input flipped to positive area") {
    auto c = PLCurve<double>::from_vertices({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(to_d(c.area()) == Catch::Approx(1.0));
    CHECK(to_d(unit_square().area()) == Catch::Approx(1.0));
  }
  SECTION("too few vertices") {
    CHECK_THROWS_AS(PLCurve<double>::from_vertices({{0, 0}, {1, 0}}), ContractError);
  }
  SECTION("repeated vertex") {
    CHECK_THROWS_AS(PLCurve<double>::from_vertices({{0, 0}, {1, 0}, {1, 0}, {0, 1}}),
                    ContractError);
  }
  SECTION("self-intersecting figure eight") {
    CHECK_THROWS_AS(PLCurve<double>::from_vertices({{0, 0}, {2, 2}, {2, 0}, {0, 2}}),
                    ContractError);
  }
  SECTION("vertex lying on a non-adjacent segment") {
    CHECK_THROWS_AS(
        PLCurve<double>::from_vertices({{0, 0}, {2, 0}, {2, 2}, {1, 0}, {0, 2}}),
        ContractError);
  }
}

TEST_CASE("arclength parametrization round trip") {
  auto c = PLCurve<double>::from_vertices({{0, 0}, {3, 0}, {3, 1}, {0, 1}});
  double per = to_d(c.perimeter());
  CHECK(per == Catch::Approx(8.0));
  for (double s : {0.0, 0.5, 2.9, 3.0, 5.5, 7.999}) {
    auto cp = c.at_arclength(s);
    CHECK(c.arc_pos(cp) == Catch::Approx(s).margin(1e-12));
    auto p = c.point_at(cp);
    CHECK(to_d(c.distance_to(to_p2(p))) < 1e-12);
  }
}

TEST_CASE("winding number and point location") {
  auto c = unit_square();
  CHECK(winding_number(c.vertices(), P2{0.5, 0.5}, 1e-12) == 1);
  CHECK(winding_number(c.vertices(), P2{2.0, 0.5}, 1e-12) == 0);
  CHECK(winding_number(c.vertices(), P2{-0.3, 1.7}, 1e-12) == 0);
  CHECK_THROWS_AS(winding_number(c.vertices(), P2{1.0, 0.5}, 1e-12), ContractError);

  CHECK(locate_point(c, P2{0.5, 0.5}, 1e-9) == Where::Inside);
  CHECK(locate_point(c, P2{1.0, 0.5}, 1e-9) == Where::On);
  CHECK(locate_point(c, P2{1.5, 0.5}, 1e-9) == Where::Outside);
}

TEST_CASE("nesting predicate") {
  auto outer = unit_square();
  auto inner = PLCurve<double>::from_vertices(
      {{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}});
  CHECK(is_nested(inner, outer, /*strict=*/true));
  CHECK(is_nested(inner, outer, /*strict=*/false));
  CHECK_FALSE(is_nested(outer, inner, false));

  // boundary contact: closed nesting holds, strict does not
  auto touching = PLCurve<double>::from_vertices(
      {{0.0, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.0, 0.75}});
  CHECK(is_nested(touching, outer, /*strict=*/false));
  CHECK_FALSE(is_nested(touching, outer, /*strict=*/true));

  auto crossing = PLCurve<double>::from_vertices(
      {{0.5, 0.25}, {1.5, 0.25}, {1.5, 0.75}, {0.5, 0.75}});
  CHECK_FALSE(is_nested(crossing, outer, false));
}

TEST_CASE("hausdorff distance between shifted squares") {
  auto a = unit_square();
  auto b = PLCurve<double>::from_vertices({{0.2, 0}, {1.2, 0}, {1.2, 1}, {0.2, 1}});
  CHECK(hausdorff_distance(a, b) == Catch::Approx(0.2).margin(1e-9));
  CHECK(hausdorff_distance(a, a) < 1e-12);
}

TEST_CASE("rational curve arithmetic is exact") {
  auto c = PLCurve<Rat>::from_vertices(
      {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(1), Rat(1)}, {Rat(0), Rat(1)}});
  CHECK(c.area() == Rat(1));
  CHECK(c.perimeter() == 4.0);
  CHECK(winding_number(c.vertices(), Vec2<Rat>{Rat(1, 2), Rat(1, 2)}, 0.0) == 1);
}
