#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include <peg/tendril.hpp>

using namespace peg;

static const double kRight = std::numbers::pi / 2;

static GraphPair<double> tent() {
  GraphPair<double> gp;
  gp.f.pts = {{0, 0}, {0.5, 0.4}, {1, 0}};
  gp.g.pts = {{0, 0}, {0.5, -0.4}, {1, 0}};
  gp.validate();
  return gp;
}

TEST_CASE("tent tendril at depth two is frozen") {
  auto tr = tendril_isotopy(tent(), make_angle_d(kRight), 2);
  CHECK(tr.omega == Catch::Approx(0.17777777777777778).margin(1e-12));
  CHECK(tr.stages_left == 3);
  CHECK(tr.stages_right == 3);
  CHECK(tr.retries == 0);
  CHECK(tr.eta == 1.0);
  CHECK(tr.delta_star_min > 0);
  CHECK(tr.curve.size() == 16);
  CHECK(to_d(tr.curve.area()) == Catch::Approx(0.4).margin(1e-9));
  CHECK(to_d(tr.seed.area()) == Catch::Approx(4 * tr.omega * tr.omega).margin(1e-12));

  // endpoints of the isotopy are the seed square and the final curve
  CHECK(hausdorff_distance(isotopy_curve(tr.isotopy, 0.0), tr.seed) < 1e-12);
  CHECK(hausdorff_distance(isotopy_curve(tr.isotopy, 1.0), tr.curve) < 1e-12);

  // stage ladder: one time per travel substage plus the landing at 1
  CHECK(tr.stage_times.size() == size_t(std::max(tr.stages_left, tr.stages_right)) + 1);
  CHECK(tr.stage_times.back() == 1.0);

  // every breakpoint frame is a simple curve
  for (double t : tr.isotopy.times) CHECK_NOTHROW(isotopy_curve(tr.isotopy, t));
}

TEST_CASE("tendril frames stay nested and monotone") {
  for (int n : {2, 4}) {
    auto tr = tendril_isotopy(tent(), make_angle_d(kRight), n);
    auto rep = audit_nested_monotonicity(tr.isotopy, make_angle_d(kRight));
    CHECK(rep.precondition_ok);
    CHECK(rep.monotone_ok);
    CHECK(rep.pairs_checked > 0);
  }
}

TEST_CASE("tendrils of any depth land on a piecewise-linear boundary") {
  // The region boundary is itself piecewise linear, so every stage curve's
  // vertices lie exactly on it and the Hausdorff gap is roundoff at any depth.
  auto gp = tent();
  auto boundary = gp.to_curve();
  for (int n : {2, 4, 8}) {
    auto tr = tendril_isotopy(gp, make_angle_d(kRight), n);
    CHECK(hausdorff_distance(tr.curve, boundary) < 1e-12);
  }
}

TEST_CASE("tendril handles an asymmetric random pair") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  GraphPair<double> gp;
  int m = 5;
  gp.f.pts.resize(m + 1);
  gp.g.pts.resize(m + 1);
  for (int j = 0; j <= m; ++j) {
    double x = double(j) / m;
    bool end = j == 0 || j == m;
    gp.f.pts[j] = {x, end ? 0.0 : 0.1 + 0.25 * u(rng)};
    gp.g.pts[j] = {x, end ? 0.0 : -0.1 - 0.25 * u(rng)};
  }
  gp.validate();
  REQUIRE(std::max(gp.f.lipschitz(), gp.g.lipschitz()) < 2.0);

  auto tr = tendril_isotopy(gp, make_angle_d(kRight), 3);
  CHECK(hausdorff_distance(tr.curve, gp.to_curve()) < 0.1);
  auto rep = audit_nested_monotonicity(tr.isotopy, make_angle_d(kRight));
  CHECK(rep.precondition_ok);
  CHECK(rep.monotone_ok);
}

TEST_CASE("tendril rejects bad parameters") {
  CHECK_THROWS_AS(tendril_isotopy(tent(), make_angle_d(kRight), 0), ContractError);
  TendrilParams par;
  par.r = 0.7;
  CHECK_THROWS_AS(tendril_isotopy(tent(), make_angle_d(kRight), 2, par), ContractError);
}
