#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numbers>

#include <peg/inscribe.hpp>

using namespace peg;

static PLCurve<double> unit_square() {
  return PLCurve<double>::from_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

static PLCurve<double> triangle() {
  return PLCurve<double>::from_vertices({{0, 0}, {1, 0}, {0.5, 0.8}});
}

static const double kRight = std::numbers::pi / 2;

// Every reported inscription must actually satisfy the defining relation:
// vertices on the curve and (z', w') = rotate_pair(z, w, theta).
template <class S>
static void check_valid(const PLCurve<S>& c, const Inscription<S>& ins, double theta,
                        double tol) {
  for (int k = 0; k < 4; ++k)
    CHECK(to_d(c.distance_to(to_p2(ins.verts[k]))) < tol);
  auto [zp, wp] = rotate_pair(to_p2(ins.verts[0]), to_p2(ins.verts[1]), make_angle_d(theta));
  CHECK(dist(zp, to_p2(ins.verts[2])) < tol);
  CHECK(dist(wp, to_p2(ins.verts[3])) < tol);
}

TEST_CASE("unit square at the right angle: one closed segment family") {
  auto c = unit_square();
  auto en = enumerate_inscriptions(c, make_angle_d(kRight));
  REQUIRE(en.families.size() == 1);
  const auto& fam = en.families[0];
  CHECK(fam.kind == FamilyKind::Segment);
  CHECK(fam.closed_loop);
  CHECK(fam.pieces.size() == 4);
  check_valid(c, fam.rep, kRight, 1e-9);

  // Members are exactly (x,0), (1,x), (1-x,1), (0,1-x).
  for (const auto& m : family_samples(c, fam, 17)) {
    double x = -1;
    for (const auto& v : m.verts)
      if (std::abs(to_d(v.y)) < 1e-7) x = to_d(v.x);
    REQUIRE(x >= -1e-9);
    std::array<P2, 4> want{{{x, 0}, {1, x}, {1 - x, 1}, {0, 1 - x}}};
    for (const auto& q : want) {
      double best = 1e9;
      for (const auto& v : m.verts) best = std::min(best, dist(q, to_p2(v)));
      CHECK(best < 1e-9);
    }
  }
}

TEST_CASE("unit square at sixty degrees: four families") {
  auto en = enumerate_inscriptions(unit_square(), make_angle_d(std::numbers::pi / 3));
  CHECK(en.families.size() == 4);
  int seg = 0;
  for (const auto& f : en.families) {
    if (f.kind == FamilyKind::Segment) ++seg;
    check_valid(unit_square(), f.rep, std::numbers::pi / 3, 1e-9);
  }
  CHECK(seg == 2);
}

TEST_CASE("triangle at the right angle: three isolated inscribed squares") {
  auto c = triangle();
  auto en = enumerate_inscriptions(c, make_angle_d(kRight));
  REQUIRE(en.families.size() == 3);
  for (const auto& f : en.families) {
    CHECK(f.kind == FamilyKind::Isolated);
    check_valid(c, f.rep, kRight, 1e-9);
    CHECK(f.rep.d > 0.1);
  }
}

TEST_CASE("rational scalar reproduces the square family exactly") {
  auto c = PLCurve<Rat>::from_vertices(
      {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(1), Rat(1)}, {Rat(0), Rat(1)}});
  auto ang = make_angle_q(std::numbers::pi / 2);  // exact: cos = 0, sin = 1
  REQUIRE(ang.c == Rat(0));
  REQUIRE(ang.s == Rat(1));
  auto en = enumerate_inscriptions(c, ang);
  REQUIRE(en.families.size() == 1);
  CHECK(en.families[0].kind == FamilyKind::Segment);
  CHECK(en.families[0].closed_loop);
  for (const auto& m : family_samples(c, en.families[0], 9)) {
    auto [zp, wp] = rotate_pair(m.verts[0], m.verts[1], ang);
    CHECK(zp == m.verts[2]);
    CHECK(wp == m.verts[3]);
  }
}

TEST_CASE("pruning does not change the family list") {
  auto c = triangle();
  InscribeOpts a, b;
  a.prune = true;
  b.prune = false;
  auto ea = enumerate_inscriptions(c, make_angle_d(1.1), a);
  auto eb = enumerate_inscriptions(c, make_angle_d(1.1), b);
  REQUIRE(ea.families.size() == eb.families.size());
  for (size_t i = 0; i < ea.families.size(); ++i)
    for (int k = 0; k < 4; ++k)
      CHECK(dist(to_p2(ea.families[i].rep.verts[k]), to_p2(eb.families[i].rep.verts[k])) <
            1e-12);
  CHECK(ea.stats.candidates_box <= eb.stats.candidates_box);
}

TEST_CASE("thread count does not change results") {
  auto c = PLCurve<double>::from_vertices(
      {{0, 0}, {2, 0.1}, {2.3, 1.4}, {1.1, 2.2}, {-0.4, 1.3}});
  InscribeOpts one, three;
  one.threads = 1;
  three.threads = 3;
  auto e1 = enumerate_inscriptions(c, make_angle_d(1.0), one);
  auto e3 = enumerate_inscriptions(c, make_angle_d(1.0), three);
  REQUIRE(e1.families.size() == e3.families.size());
  for (size_t i = 0; i < e1.families.size(); ++i) {
    const auto& a = e1.families[i].rep;
    const auto& b = e3.families[i].rep;
    for (int k = 0; k < 4; ++k) {
      CHECK(a.cp[k].seg == b.cp[k].seg);
      CHECK(to_d(a.cp[k].t) == to_d(b.cp[k].t));  // bitwise equal
    }
  }
}

TEST_CASE("grid oracle agrees with the enumeration on the triangle") {
  auto c = triangle();
  auto ang = make_angle_d(kRight);
  auto en = enumerate_inscriptions(c, ang);
  OracleOpts oo;
  oo.grid_n = 400;
  auto hits = brute_force_oracle(c, ang, oo);
  REQUIRE(hits.size() >= en.families.size());
  double worst = 0;
  for (const auto& h : hits) {
    double best = 1e9;
    for (const auto& f : en.families)
      best = std::min(best, family_vertex_distance(c, f, true, h.verts));
    worst = std::max(worst, best);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("oracle finds the square family members") {
  auto c = unit_square();
  OracleOpts oo;
  oo.grid_n = 200;
  auto hits = brute_force_oracle(c, make_angle_d(kRight), oo);
  CHECK(hits.size() >= 4);  // many members of the one-parameter family
  for (const auto& h : hits) CHECK(h.residual < 1e-6);
}
