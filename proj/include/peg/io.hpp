#pragma once

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "peg/certify.hpp"
#include "peg/version.hpp"

// JSON/CSV serialization for every artifact type.  All JSON uses insertion
// order (deterministic layout); all CSV doubles use %.17g (round-trip exact).
// Curves serialize canonically: counterclockwise, starting at the
// lexicographically smallest vertex.  Rational coordinates serialize as "p/q"
// strings; plain numbers parse into either scalar mode.

namespace peg {

using json = nlohmann::ordered_json;

// ---- scalar encoding ---------------------------------------------------------

inline json scalar_to_json(double x) { return json(x); }

inline json scalar_to_json(const Rat& x) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(x) << "/" << boost::multiprecision::denominator(x);
  return json(os.str());
}

template <class S>
S scalar_from_json(const json& j) {
  if (j.is_number()) return scalar_traits<S>::from_double(j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    auto slash = s.find('/');
    try {
      Rat r = slash == std::string::npos
                  ? Rat(boost::multiprecision::cpp_int(s))
                  : Rat(boost::multiprecision::cpp_int(s.substr(0, slash)),
                        boost::multiprecision::cpp_int(s.substr(slash + 1)));
      if constexpr (scalar_traits<S>::exact)
        return r;
      else
        return to_d(r);
    } catch (const std::exception&) {
      fail(Err::ParseError, "bad rational literal '" + s + "'");
    }
  }
  fail(Err::ParseError, "coordinate must be a number or a 'p/q' string");
}

template <class S>
Vec2<S> point_from_json(const json& j) {
  require(j.is_array() && j.size() == 2, Err::ParseError, "point must be a [x, y] pair");
  return {scalar_from_json<S>(j[0]), scalar_from_json<S>(j[1])};
}

template <class S>
json point_to_json(const Vec2<S>& p) {
  return json::array({scalar_to_json(p.x), scalar_to_json(p.y)});
}

// ---- curves --------------------------------------------------------------------

template <class S>
json curve_to_json(const PLCurve<S>& c) {
  int n = c.size(), start = 0;
  for (int i = 1; i < n; ++i) {
    const Vec2<S>&v = c.vertex(i), &b = c.vertex(start);
    if (v.x < b.x || (v.x == b.x && v.y < b.y)) start = i;
  }
  json verts = json::array();
  for (int i = 0; i < n; ++i) verts.push_back(point_to_json(c.vertex(start + i)));
  return json{{"vertices", std::move(verts)}};
}

template <class S>
PLCurve<S> curve_from_json(const json& j, const Tols& tol = {}) {
  require(j.is_object() && j.contains("vertices") && j["vertices"].is_array(), Err::ParseError,
          "curve JSON must be an object with a 'vertices' array");
  std::vector<Vec2<S>> vs;
  for (auto& p : j["vertices"]) vs.push_back(point_from_json<S>(p));
  return PLCurve<S>::from_vertices(std::move(vs), tol);
}

// ---- graph pairs ----------------------------------------------------------------

template <class S>
json graph_pair_to_json(const GraphPair<S>& gp) {
  auto fn = [](const PLFunction<S>& f) {
    json a = json::array();
    for (auto& p : f.pts) a.push_back(point_to_json(p));
    return a;
  };
  return json{{"domain", json::array({scalar_to_json(gp.domain_lo()), scalar_to_json(gp.domain_hi())})},
              {"f", fn(gp.f)},
              {"g", fn(gp.g)}};
}

template <class S>
GraphPair<S> graph_pair_from_json(const json& j) {
  require(j.is_object() && j.contains("f") && j.contains("g"), Err::ParseError,
          "graph pair JSON must be an object with 'f' and 'g' arrays");
  auto fn = [](const json& a) {
    require(a.is_array(), Err::ParseError, "graph must be an array of [x, y] pairs");
    PLFunction<S> f;
    for (auto& p : a) f.pts.push_back(point_from_json<S>(p));
    return f;
  };
  GraphPair<S> gp{fn(j["f"]), fn(j["g"])};
  gp.validate();
  if (j.contains("domain")) {
    require(j["domain"].is_array() && j["domain"].size() == 2, Err::ParseError,
            "'domain' must be [a, b]");
    require(scalar_from_json<S>(j["domain"][0]) == gp.domain_lo() &&
                scalar_from_json<S>(j["domain"][1]) == gp.domain_hi(),
            Err::ParseError, "'domain' disagrees with the graph breakpoints");
  }
  return gp;
}

// ---- isotopies ------------------------------------------------------------------

inline json isotopy_to_json(const Isotopy& iso) {
  json paths = json::array();
  for (auto& path : iso.paths) {
    json p = json::array();
    for (size_t j = 0; j < iso.times.size(); ++j)
      p.push_back(json::array({iso.times[j], path[j].x, path[j].y}));
    paths.push_back(std::move(p));
  }
  return json{{"breakpoints", iso.times}, {"vertex_paths", std::move(paths)}};
}

inline Isotopy isotopy_from_json(const json& j) {
  require(j.is_object() && j.contains("breakpoints") && j.contains("vertex_paths"),
          Err::ParseError, "isotopy JSON needs 'breakpoints' and 'vertex_paths'");
  std::vector<double> times = j["breakpoints"].get<std::vector<double>>();
  std::vector<std::vector<P2>> paths;
  for (auto& pj : j["vertex_paths"]) {
    std::vector<P2> path;
    for (size_t k = 0; k < pj.size(); ++k) {
      auto& e = pj[k];
      require(e.is_array() && e.size() == 3, Err::ParseError,
              "vertex path entries must be [t, x, y]");
      require(k < times.size() && std::abs(e[0].get<double>() - times[k]) <= 1e-12,
              Err::SharedBreakpointsViolated, "vertex path times must equal the breakpoints");
      path.push_back({e[1].get<double>(), e[2].get<double>()});
    }
    paths.push_back(std::move(path));
  }
  return make_isotopy(std::move(times), std::move(paths));
}

// ---- enumeration output -----------------------------------------------------------

// Vertex parameters are 1-based segment indices (segment i runs from vertex i
// to vertex i+1 of the canonical curve).
template <class S>
json inscription_to_json(const Inscription<S>& ins) {
  json params = json::array(), verts = json::array();
  for (int k = 0; k < 4; ++k) {
    params.push_back(json{{"segment", ins.cp[k].seg + 1}, {"t", to_d(ins.cp[k].t)}});
    verts.push_back(json::array({to_d(ins.verts[k].x), to_d(ins.verts[k].y)}));
  }
  return json{{"vertex_params", std::move(params)}, {"vertices", std::move(verts)},
              {"d", to_d(ins.d)}};
}

template <class S>
json families_to_json(const PLCurve<S>& c, const Angle<S>& ang, const Enumeration<S>& en,
                      bool with_action, const ActionOpts& aopts = {}) {
  json fams = json::array();
  for (size_t i = 0; i < en.families.size(); ++i) {
    const Family<S>& f = en.families[i];
    json jf{{"id", static_cast<int>(i)},
            {"kind", f.kind == FamilyKind::Segment ? "segment_family" : "isolated"}};
    jf.update(inscription_to_json(f.rep));
    if (f.kind == FamilyKind::Segment) {
      jf["pieces"] = static_cast<int>(f.pieces.size());
      jf["closed_loop"] = f.closed_loop;
    }
    if (with_action) jf["action"] = action(c, ang, f.rep, aopts).action;
    fams.push_back(std::move(jf));
  }
  return json{{"theta", effective_theta(ang)},
              {"area", to_d(c.area())},
              {"families", std::move(fams)}};
}

// ---- spectrum / diagram -------------------------------------------------------------

inline json spectrum_to_json(const std::vector<SpectrumEntry>& sp) {
  json rows = json::array();
  for (auto& e : sp)
    rows.push_back(json{{"family_id", e.family_id},
                        {"kind", e.kind == FamilyKind::Segment ? "segment_family" : "isolated"},
                        {"action", e.action},
                        {"d", e.d},
                        {"graceful", e.graceful},
                        {"elegant", elegance_name(e.elegance)}});
  return rows;
}

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string spectrum_to_csv(const std::vector<SpectrumEntry>& sp) {
  std::string out = "family_id,kind,action,d,graceful,elegant\n";
  for (auto& e : sp) {
    out += std::to_string(e.family_id) + ",";
    out += (e.kind == FamilyKind::Segment ? "segment_family," : "isolated,");
    out += fmt_g17(e.action) + "," + fmt_g17(e.d) + ",";
    out += (e.graceful ? "true," : "false,");
    out += elegance_name(e.elegance);
    out += "\n";
  }
  return out;
}

inline std::string diagram_to_csv(const Diagram& dg) {
  std::string out = "t,branch_id,action,area,d\n";
  for (auto& r : dg.rows)
    out += fmt_g17(r.t) + "," + std::to_string(r.branch) + "," + fmt_g17(r.action) + "," +
           fmt_g17(r.area) + "," + fmt_g17(r.d) + "\n";
  return out;
}

// ---- certificates ---------------------------------------------------------------------

inline json quad_to_json(const std::array<P2, 4>& q) {
  json a = json::array();
  for (auto& p : q) a.push_back(json::array({p.x, p.y}));
  return a;
}

inline json certificate_to_json(const Certificate& c) {
  json stages = json::array();
  for (auto& s : c.stages)
    stages.push_back(json{{"n", s.n},
                          {"stages", s.stages},
                          {"area", s.area},
                          {"spectrum_size", s.spectrum_size},
                          {"window_count", s.window_count},
                          {"witness_action", s.witness_action},
                          {"witness_d", s.witness_d},
                          {"witness", quad_to_json(s.witness)},
                          {"match_dist", s.match_dist},
                          {"audit_precondition", s.audit_precondition},
                          {"audit_monotone", s.audit_monotone}});
  return json{{"theta", c.theta},
              {"lipschitz", c.lipschitz},
              {"threshold", c.threshold},
              {"delta", c.delta},
              {"seed_area", c.seed_area},
              {"stages", std::move(stages)},
              {"witness", quad_to_json(c.witness)},
              {"witness_action", c.witness_action},
              {"witness_d", c.witness_d},
              {"witness_residual", c.witness_residual},
              {"converged", c.converged},
              {"conv_tol", c.conv_tol}};
}

// ---- artifact envelope -------------------------------------------------------------------

// Every artifact embeds the run configuration and tool version, so identical
// configs produce byte-identical files.
inline json artifact(const json& config, json payload) {
  json out{{"tool", "peg"}, {"version", version_string}, {"config", config}};
  out.update(payload);
  return out;
}

// ---- file helpers ---------------------------------------------------------------------------

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Err::ParseError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(Err::ParseError, "'" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Err::ParseError, "cannot write '" + path + "'");
  out << content;
}

}  // namespace peg
