#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include <peg/certify.hpp>

using namespace peg;

static const double kRight = std::numbers::pi / 2;

static GraphPair<double> tent() {
  GraphPair<double> gp;
  gp.f.pts = {{0, 0}, {0.5, 0.4}, {1, 0}};
  gp.g.pts = {{0, 0}, {0.5, -0.4}, {1, 0}};
  gp.validate();
  return gp;
}

TEST_CASE("seed square delta is its smallest positive action") {
  auto sq = PLCurve<double>::from_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(square_delta(sq, make_angle_d(kRight)) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("tent certificate at a short schedule is frozen") {
  CertifyOpts opts;
  opts.schedule = {4, 8};
  auto cert = certify_existence(tent(), make_angle_d(kRight), opts);

  CHECK(cert.theta == Catch::Approx(kRight).margin(1e-15));
  CHECK(cert.lipschitz == Catch::Approx(0.8).margin(1e-12));
  CHECK(cert.threshold == Catch::Approx(1 + std::sqrt(2.0)).margin(1e-12));
  // delta = 2 omega^2 for the seed square of half-width omega = 8/45
  CHECK(cert.delta == Catch::Approx(0.063209876543209892).margin(1e-9));

  REQUIRE(cert.stages.size() == 2);
  for (const auto& st : cert.stages) {
    CHECK(st.area == Catch::Approx(0.4).margin(1e-9));
    CHECK(st.window_count >= 1);
    CHECK(st.audit_precondition);
    CHECK(st.audit_monotone);
  }
  CHECK(cert.converged);
  CHECK(cert.witness_action == Catch::Approx(0.22222222222222224).margin(1e-6));
  CHECK(cert.witness_d == Catch::Approx(0.6285).margin(1e-3));
  CHECK(cert.witness_residual < 1e-12);
}

TEST_CASE("hypothesis gate rejects steep pairs") {
  GraphPair<double> steep;
  steep.f.pts = {{0, 0}, {0.5, 1.5}, {1, 0}};
  steep.g.pts = {{0, 0}, {0.5, -1.5}, {1, 0}};
  steep.validate();
  CHECK(std::max(steep.f.lipschitz(), steep.g.lipschitz()) == Catch::Approx(3.0));
  try {
    certify_existence(steep, make_angle_d(kRight));
    FAIL("expected HypothesisFailed");
  } catch (const ContractError& e) {
    CHECK(e.code() == Err::HypothesisFailed);
  }
}

TEST_CASE("empty schedules are rejected") {
  CertifyOpts opts;
  opts.schedule = {};
  CHECK_THROWS_AS(certify_existence(tent(), make_angle_d(kRight), opts), ContractError);
}

TEST_CASE("angle sweep certifies the tent at all three angles") {
  CertifyOpts opts;
  opts.schedule = {4, 8};
  auto certs = angle_sweep(tent(), opts);
  REQUIRE(certs.size() == 3);

  CHECK(certs[0].theta == Catch::Approx(std::numbers::pi / 6).margin(1e-15));
  CHECK(certs[0].delta == Catch::Approx(0.016937).margin(1e-4));
  CHECK(certs[0].witness_action == Catch::Approx(0.100360).margin(1e-4));

  CHECK(certs[1].theta == Catch::Approx(std::numbers::pi / 3).margin(1e-15));
  CHECK(certs[1].delta == Catch::Approx(0.036494).margin(1e-4));
  CHECK(certs[1].witness_action == Catch::Approx(0.167670).margin(1e-4));

  CHECK(certs[2].delta == Catch::Approx(0.063210).margin(1e-4));
  CHECK(certs[2].witness_action == Catch::Approx(0.222222).margin(1e-4));

  for (const auto& c : certs) {
    CHECK(c.converged);
    CHECK(c.witness_residual < 1e-9);
    CHECK(c.witness_d > 0.5);
    for (const auto& st : c.stages) {
      CHECK(st.window_count >= 1);
      CHECK(st.audit_precondition);
      CHECK(st.audit_monotone);
    }
  }
}
