#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <numbers>

#include <peg/io.hpp>

using namespace peg;

static PLCurve<double> unit_square() {
  return PLCurve<double>::from_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

TEST_CASE("curve serialization is canonical and stable") {
  // same polygon entered with different starting vertices
  auto a = PLCurve<double>::from_vertices({{1, 1}, {0, 1}, {0, 0}, {1, 0}});
  auto b = unit_square();
  CHECK(curve_to_json(a).dump() == curve_to_json(b).dump());
  CHECK(curve_to_json(a)["vertices"][0] == json::array({0.0, 0.0}));

  auto back = curve_from_json<double>(curve_to_json(a));
  CHECK(hausdorff_distance(a, back) < 1e-15);
  CHECK(curve_to_json(back).dump() == curve_to_json(a).dump());
}

TEST_CASE("rational coordinates round trip exactly") {
  json j{{"vertices", json::array({json::array({"0", "0"}),
                                   json::array({"1", "0"}),
                                   json::array({"1/3", "2/3"})})}};
  auto cq = curve_from_json<Rat>(j);
  CHECK(cq.vertex(2).x == Rat(1, 3));
  auto again = curve_from_json<Rat>(curve_to_json(cq));
  CHECK(again.vertex(2).y == Rat(2, 3));

  auto cd = curve_from_json<double>(j);  // the same file loads in double mode
  CHECK(to_d(cd.vertex(2).x) == Catch::Approx(1.0 / 3).margin(1e-15));
}

TEST_CASE("curve parse errors carry the right code") {
  auto code_of = [](const json& j) -> Err {
    try {
      curve_from_json<double>(j);
    } catch (const ContractError& e) {
      return e.code();
    }
    FAIL("expected a parse error");
    return Err::ParseError;
  };
  CHECK(code_of(json{{"points", json::array()}}) == Err::ParseError);
  CHECK(code_of(json{{"vertices", json::array({json::array({1.0})})}}) == Err::ParseError);
  CHECK(code_of(json{{"vertices", json::array({json::array({"x", "1"}),
                                               json::array({0.0, 0.0}),
                                               json::array({1.0, 0.0})})}}) == Err::ParseError);
}

TEST_CASE("graph pair serialization validates the domain echo") {
  GraphPair<double> gp;
  gp.f.pts = {{0, 0}, {0.5, 0.4}, {1, 0}};
  gp.g.pts = {{0, 0}, {0.5, -0.4}, {1, 0}};
  gp.validate();
  auto j = graph_pair_to_json(gp);
  auto back = graph_pair_from_json<double>(j);
  CHECK(back.f.pts.size() == 3);
  CHECK(to_d(back.f.eval(0.25)) == Catch::Approx(0.2).margin(1e-15));

  j["domain"] = json::array({0.0, 2.0});
  CHECK_THROWS_AS(graph_pair_from_json<double>(j), ContractError);
}

TEST_CASE("isotopy serialization keeps the shared breakpoints") {
  auto iso = make_linear_isotopy(
      unit_square(), PLCurve<double>::from_vertices({{0, 0}, {2, 0}, {2, 2}, {0, 2}}));
  auto j = isotopy_to_json(iso);
  auto back = isotopy_from_json(j);
  REQUIRE(back.times == iso.times);
  for (size_t v = 0; v < iso.paths.size(); ++v)
    for (size_t k = 0; k < iso.times.size(); ++k)
      CHECK(dist(back.paths[v][k], iso.paths[v][k]) == 0.0);

  j["vertex_paths"][0][1][0] = 0.75;  // time entry disagrees with breakpoints
  try {
    isotopy_from_json(j);
    FAIL("expected SharedBreakpointsViolated");
  } catch (const ContractError& e) {
    CHECK(e.code() == Err::SharedBreakpointsViolated);
  }
}

TEST_CASE("inscription JSON uses one-based segment indices") {
  auto c = unit_square();
  auto en = enumerate_inscriptions(c, make_angle_d(std::numbers::pi / 2));
  REQUIRE(!en.families.empty());
  auto j = inscription_to_json(en.families[0].rep);
  for (auto& p : j["vertex_params"]) {
    int seg = p["segment"].get<int>();
    CHECK(seg >= 1);
    CHECK(seg <= 4);
  }
}

TEST_CASE("spectrum CSV schema and float fidelity") {
  auto tri = PLCurve<double>::from_vertices({{0, 0}, {1, 0}, {0.5, 0.8}});
  auto sp = action_spectrum(tri, make_angle_d(std::numbers::pi / 2));
  auto csv = spectrum_to_csv(sp);
  CHECK(csv.rfind("family_id,kind,action,d,graceful,elegant\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == int(sp.size()) + 1);

  for (double v : {0.1, 1.0 / 3, 1e-17, 12345.6789, -0.4}) {
    CHECK(std::strtod(fmt_g17(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("artifact envelope embeds tool, version and config") {
  json cfg{{"command", "spectrum"}, {"theta", 1.5}};
  auto art = artifact(cfg, json{{"rows", json::array()}});
  CHECK(art["tool"] == "peg");
  CHECK(art["version"].get<std::string>() == version_string);
  CHECK(art["config"]["command"] == "spectrum");
  CHECK(art.contains("rows"));
}

TEST_CASE("file helpers round trip through disk") {
  auto dir = std::filesystem::temp_directory_path();
  auto path = (dir / "peg_io_test.json").string();
  write_text_file(path, json{{"vertices", json::array({json::array({0.0, 0.0}),
                                                       json::array({1.0, 0.0}),
                                                       json::array({0.5, 0.8})})}}
                            .dump());
  auto j = read_json_file(path);
  auto c = curve_from_json<double>(j);
  CHECK(to_d(c.area()) == Catch::Approx(0.4).margin(1e-15));
  std::filesystem::remove(path);

  CHECK_THROWS_AS(read_json_file("/nonexistent/peg.json"), ContractError);
}

TEST_CASE("bundled fixtures load") {
  auto sq = curve_from_json<double>(read_json_file(std::string(PEG_TEST_DATA) + "/square.json"));
  CHECK(to_d(sq.area()) == Catch::Approx(1.0));
  auto gp = graph_pair_from_json<double>(
      read_json_file(std::string(PEG_TEST_DATA) + "/tent.json"));
  CHECK(gp.f.lipschitz() == Catch::Approx(0.8));
}
