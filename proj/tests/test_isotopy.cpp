#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include <peg/isotopy.hpp>

using namespace peg;

static const double kRight = std::numbers::pi / 2;

static PLCurve<double> square(double s) {
  return PLCurve<double>::from_vertices({{0, 0}, {s, 0}, {s, s}, {0, s}});
}

TEST_CASE("isotopy construction validates its inputs") {
  std::vector<std::vector<P2>> tri{{{0, 0}, {0, 0}}, {{1, 0}, {2, 0}}, {{0, 1}, {0, 2}}};
  CHECK_NOTHROW(make_isotopy({0.0, 1.0}, tri));
  CHECK_THROWS_AS(make_isotopy({0.0, 0.5}, tri), ContractError);          // range
  CHECK_THROWS_AS(make_isotopy({0.0, 0.0, 1.0}, tri), ContractError);     // not increasing
  CHECK_THROWS_AS(make_isotopy({0.0, 1.0}, {tri[0], tri[1]}), ContractError);  // < 3 vertices

  auto bad = tri;
  bad[1] = {{1, 0}};  // missing a shared breakpoint position
  CHECK_THROWS_AS(make_isotopy({0.0, 1.0}, bad), ContractError);
}

TEST_CASE("frames interpolate linearly between breakpoints") {
  auto iso = make_linear_isotopy(square(1), square(2));
  auto fr = isotopy_frame(iso, 0.25);
  CHECK(dist(fr[1], P2{1.25, 0}) < 1e-15);
  CHECK(dist(fr[2], P2{1.25, 1.25}) < 1e-15);
}

TEST_CASE("non-simple frames are reported with the failing time") {
  std::vector<std::vector<P2>> paths{
      {{0, 0}, {0, 0}}, {{1, 0}, {1, 0}}, {{1, 1}, {0.5, -1}}, {{0, 1}, {0, 1}}};
  auto iso = make_isotopy({0.0, 1.0}, paths);
  CHECK_NOTHROW(isotopy_curve(iso, 0.0));
  try {
    isotopy_curve(iso, 1.0);
    FAIL("expected NonSimpleAtT");
  } catch (const ContractError& e) {
    CHECK(e.code() == Err::NonSimpleAtT);
  }
}

TEST_CASE("widening a square changes the spectrum immediately") {
  auto rect = PLCurve<double>::from_vertices({{0, 0}, {3, 0}, {3, 1}, {0, 1}});
  auto iso = make_linear_isotopy(square(1), rect);
  auto events = critical_times(iso, make_angle_d(kRight));
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == "spectrum-change");
  CHECK(events[0].t < 1e-6);  // the closed square family opens up for any t > 0
}

TEST_CASE("branch tracking follows the scaling square") {
  // Doubling the square moves every family member ~0.1 per tenth of the
  // deformation; the matcher needs a time grid fine enough to stay inside
  // its matching radius.
  auto iso = make_linear_isotopy(square(1), square(2));
  TrackOpts topts;
  topts.samples = 33;
  auto dg = track_branches(iso, make_angle_d(kRight), topts);
  CHECK(dg.branch_count == 1);
  REQUIRE(!dg.rows.empty());
  CHECK(dg.rows.front().t == 0.0);
  CHECK(dg.rows.back().t == 1.0);
  // action of the family on a side-s square is s^2 / 2
  for (const auto& r : dg.rows) {
    double s = 1 + r.t;
    CHECK(r.action == Catch::Approx(s * s / 2).margin(1e-9));
    CHECK(r.area == Catch::Approx(s * s).margin(1e-12));
  }
}

TEST_CASE("nested monotonicity audit accepts the expanding square") {
  auto iso = make_linear_isotopy(square(1), square(2));
  AuditOpts opts;
  opts.samples = 33;  // fine grid: see the tracking test above
  auto rep = audit_nested_monotonicity(iso, make_angle_d(kRight), opts);
  CHECK(rep.precondition_ok);
  CHECK(rep.monotone_ok);
  CHECK(rep.worst_decrease <= 1e-9);
  CHECK(rep.worst_excess <= 1e-9);
  CHECK(rep.pairs_checked >= 32);
}

TEST_CASE("audit rejects a shrinking isotopy") {
  auto iso = make_linear_isotopy(square(2), square(1));
  auto rep = audit_nested_monotonicity(iso, make_angle_d(kRight));
  CHECK_FALSE(rep.precondition_ok);
  CHECK(rep.first_bad_t >= 0.0);
}

TEST_CASE("audit honors an explicit time grid") {
  // A gentle expansion, so the coarse explicit grid still matches branches.
  auto gentle = PLCurve<double>::from_vertices({{0, 0}, {1.05, 0}, {1.05, 1.05}, {0, 1.05}});
  auto iso = make_linear_isotopy(square(1), gentle);
  AuditOpts opts;
  opts.at_times = {0.0, 0.5, 1.0};
  auto rep = audit_nested_monotonicity(iso, make_angle_d(kRight), opts);
  CHECK(rep.precondition_ok);
  CHECK(rep.monotone_ok);
  CHECK(rep.pairs_checked == 2);
}

TEST_CASE("area proxy for equal-area curves") {
  auto a = square(1);
  auto b = PLCurve<double>::from_vertices({{0.5, 0}, {1.5, 0}, {1.5, 1}, {0.5, 1}});
  CHECK(hofer_area_proxy(a, b) == Catch::Approx(0.5).margin(1e-12));
  CHECK(hofer_area_proxy(a, a) == Catch::Approx(0.0).margin(1e-12));
  CHECK_THROWS_AS(hofer_area_proxy(a, square(2)), ContractError);
}

TEST_CASE("linear isotopies need matching vertex counts") {
  auto tri = PLCurve<double>::from_vertices({{0, 0}, {1, 0}, {0.5, 0.8}});
  CHECK_THROWS_AS(make_linear_isotopy(square(1), tri), ContractError);
}
