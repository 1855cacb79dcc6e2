#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numbers>

#include <peg/action.hpp>

using namespace peg;

static const double kRight = std::numbers::pi / 2;

static PLCurve<double> unit_square() {
  return PLCurve<double>::from_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

static PLCurve<double> triangle() {
  return PLCurve<double>::from_vertices({{0, 0}, {1, 0}, {0.5, 0.8}});
}

static std::vector<double> actions(const std::vector<SpectrumEntry>& sp) {
  std::vector<double> a;
  for (const auto& e : sp) a.push_back(e.action);
  return a;
}

TEST_CASE("square family carries action one half") {
  auto c = unit_square();
  auto en = enumerate_inscriptions(c, make_angle_d(kRight));
  REQUIRE(en.families.size() == 1);
  auto av = action(c, make_angle_d(kRight), en.families[0].rep);
  CHECK(av.action == Catch::Approx(0.5).margin(1e-12));
  CHECK(av.area == Catch::Approx(1.0).margin(1e-12));

  // The action is constant along the family.
  for (const auto& m : family_samples(c, en.families[0], 13))
    CHECK(action(c, make_angle_d(kRight), m).action == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("hand-built midpoint square evaluates to one half") {
  auto c = unit_square();
  Inscription<double> ins;
  // z, w and z', w' are the two diagonals of the inscribed midpoint square.
  int segs[4] = {0, 2, 3, 1};
  for (int k = 0; k < 4; ++k) {
    ins.cp[k] = c.canonical({segs[k], 0.5});
    ins.verts[k] = c.point_at(ins.cp[k]);
  }
  ins.d = norm(ins.verts[0] - ins.verts[1]);
  CHECK(ins.d == Catch::Approx(1.0).margin(1e-15));
  auto av = action(c, make_angle_d(kRight), ins);
  CHECK(av.action == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("triangle spectrum is frozen") {
  auto sp = action_spectrum(triangle(), make_angle_d(kRight));
  REQUIRE(sp.size() == 3);
  CHECK(sp[0].action == Catch::Approx(0.18934911242603555).margin(1e-12));
  CHECK(sp[1].action == Catch::Approx(0.21065088757396452).margin(1e-12));
  CHECK(sp[2].action == Catch::Approx(0.22222222222222224).margin(1e-12));
  CHECK(sp[0].d == Catch::Approx(0.63155806220716371).margin(1e-12));
  CHECK(sp[2].d == Catch::Approx(0.62853936105470887).margin(1e-12));
  for (const auto& e : sp) {
    CHECK(e.graceful);
    CHECK(e.elegance == Elegance::Elegant);
  }
}

TEST_CASE("duality pairs the square spectrum at sixty degrees") {
  auto c = unit_square();
  auto rep = check_duality(c, make_angle_d(std::numbers::pi / 3));
  REQUIRE(rep.complete);
  REQUIRE(rep.pairs.size() == 4);
  CHECK(rep.max_defect < 1e-12);
  CHECK(rep.max_match_distance < 1e-9);
  for (const auto& p : rep.pairs)
    CHECK(p.action + p.dual_action == Catch::Approx(1.0).margin(1e-12));

  // The square's quarter-turn symmetry doubles each family, so the spectrum
  // holds two distinct values twice; their duals live at the complement angle.
  auto sp = actions(action_spectrum(c, make_angle_d(std::numbers::pi / 3)));
  std::sort(sp.begin(), sp.end());
  double s3 = std::sqrt(3.0);
  CHECK(sp[0] == Catch::Approx(1.0 / (2 * s3)).margin(1e-9));
  CHECK(sp[1] == Catch::Approx(1.0 / (2 * s3)).margin(1e-9));
  CHECK(sp[2] == Catch::Approx((s3 - 1) / 2).margin(1e-9));
  CHECK(sp[3] == Catch::Approx((s3 - 1) / 2).margin(1e-9));
}

TEST_CASE("duality on the octagon and the triangle") {
  auto oct = PLCurve<double>::from_vertices(
      {{1, 0}, {0.707106781186547, 0.707106781186547}, {0, 1},
       {-0.707106781186547, 0.707106781186547}, {-1, 0},
       {-0.707106781186547, -0.707106781186547}, {0, -1},
       {0.707106781186547, -0.707106781186547}});
  for (double th : {std::numbers::pi / 6, std::numbers::pi / 3, kRight}) {
    auto r1 = check_duality(oct, make_angle_d(th));
    CHECK(r1.complete);
    CHECK(r1.max_defect < 1e-9);
    auto r2 = check_duality(triangle(), make_angle_d(th));
    CHECK(r2.complete);
    CHECK(r2.max_defect < 1e-9);
  }
}

TEST_CASE("dual of the dual is the chord swap") {
  auto c = triangle();
  auto en = enumerate_inscriptions(c, make_angle_d(1.1));
  REQUIRE(!en.families.empty());
  for (const auto& f : en.families) {
    auto dd = dual_inscription(dual_inscription(f.rep));
    CHECK(to_p2(dd.verts[0]) == to_p2(f.rep.verts[1]));
    CHECK(to_p2(dd.verts[1]) == to_p2(f.rep.verts[0]));
    CHECK(to_p2(dd.verts[2]) == to_p2(f.rep.verts[3]));
    CHECK(to_p2(dd.verts[3]) == to_p2(f.rep.verts[2]));
  }
}

TEST_CASE("scaling multiplies the spectrum by the square of the factor") {
  auto base = triangle();
  double s = 2.0;
  std::vector<P2> vs;
  for (const auto& v : base.vertices()) vs.push_back({s * v.x, s * v.y});
  auto scaled = PLCurve<double>::from_vertices(vs);
  auto a0 = actions(action_spectrum(base, make_angle_d(kRight)));
  auto a1 = actions(action_spectrum(scaled, make_angle_d(kRight)));
  REQUIRE(a0.size() == a1.size());
  for (size_t i = 0; i < a0.size(); ++i)
    CHECK(a1[i] == Catch::Approx(s * s * a0[i]).margin(1e-10));
}

TEST_CASE("translation leaves the spectrum unchanged") {
  auto base = triangle();
  std::vector<P2> vs;
  for (const auto& v : base.vertices()) vs.push_back({v.x + 3.7, v.y - 1.2});
  auto moved = PLCurve<double>::from_vertices(vs);
  auto a0 = actions(action_spectrum(base, make_angle_d(1.0)));
  auto a1 = actions(action_spectrum(moved, make_angle_d(1.0)));
  REQUIRE(a0.size() == a1.size());
  for (size_t i = 0; i < a0.size(); ++i)
    CHECK(a1[i] == Catch::Approx(a0[i]).margin(1e-9));
}

TEST_CASE("angle continuation walks the square family toward zero") {
  auto c = unit_square();
  auto ang = make_angle_d(kRight);
  auto en = enumerate_inscriptions(c, ang);
  REQUIRE(en.families.size() == 1);
  std::vector<double> sched{1.45, 1.3, 1.15, 1.0, 0.85, 0.7, 0.55, 0.4, 0.3, 0.2, 0.15, 0.1};
  auto track = continue_family(c, ang, en.families[0], sched);
  REQUIRE(track.size() == sched.size() + 1);
  CHECK(track.front().action == Catch::Approx(0.5).margin(1e-9));
  for (size_t i = 0; i + 1 < track.size(); ++i) CHECK(track[i + 1].action < track[i].action);
  CHECK(track.back().theta == Catch::Approx(0.1).margin(1e-12));
  CHECK(track.back().action < 0.1);
}

TEST_CASE("rational angle is effectively the requested one") {
  auto aq = make_angle_q(std::numbers::pi / 3);
  CHECK(effective_theta(aq) == Catch::Approx(std::numbers::pi / 3).margin(1e-9));
  // the rotation pair stays exactly on the unit circle
  CHECK(aq.c * aq.c + aq.s * aq.s == Rat(1));
}
