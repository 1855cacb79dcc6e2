// Command-line front door: curve / graph-pair / isotopy I/O and one
// subcommand per pipeline stage.  Every artifact embeds its run config and
// the tool version; identical configs produce byte-identical artifacts
// regardless of the parallelism degree (PEG_THREADS).
//
// Exit codes: 0 success, 2 contract violation (bad input, failed hypothesis,
// lost witness, ...), 1 internal error.

#include <CLI11.hpp>

#include "peg/io.hpp"

namespace {

using peg::json;

struct Common {
  std::string curve_path, graphpair_path, isotopy_path, out_path;
  double theta = -1, theta_deg = -1;
  int threads = 0;
  bool rational = false;
};

void add_theta(CLI::App* cmd, Common& c) {
  auto* t = cmd->add_option("--theta", c.theta, "angle in radians, in (0, pi]");
  auto* td = cmd->add_option("--theta-deg", c.theta_deg, "angle in degrees");
  t->excludes(td);
}

double resolve_theta(const Common& c) {
  if (c.theta_deg >= 0) return c.theta_deg * std::numbers::pi / 180.0;
  peg::require(c.theta >= 0, peg::Err::InvalidParams, "--theta or --theta-deg is required");
  return c.theta;
}

json base_config(const std::string& command, const Common& c) {
  json cfg{{"command", command}};
  if (!c.curve_path.empty()) cfg["curve"] = c.curve_path;
  if (!c.graphpair_path.empty()) cfg["graphpair"] = c.graphpair_path;
  if (!c.isotopy_path.empty()) cfg["isotopy"] = c.isotopy_path;
  if (c.theta >= 0 || c.theta_deg >= 0) cfg["theta"] = resolve_theta(c);
  cfg["mode"] = c.rational ? "rational" : "double";
  cfg["threads"] = c.threads;  // 0 = PEG_THREADS env or serial
  return cfg;
}

void emit(const json& art, const std::string& out_path) {
  std::string text = art.dump(2) + "\n";
  if (out_path.empty())
    std::fputs(text.c_str(), stdout);
  else
    peg::write_text_file(out_path, text);
}

// ---- inscribe -----------------------------------------------------------------

template <class S>
json run_inscribe(const Common& c, int oracle_check) {
  auto ang = peg::make_angle<S>(resolve_theta(c));
  auto curve = peg::curve_from_json<S>(peg::read_json_file(c.curve_path));
  peg::InscribeOpts opts;
  opts.threads = c.threads;
  auto en = peg::enumerate_inscriptions(curve, ang, opts);
  json payload = peg::families_to_json(curve, ang, en, true);
  payload["stats"] = json{{"segments", en.stats.n_segments},
                          {"quadruples_total", en.stats.quadruples_total},
                          {"candidates_box", en.stats.candidates_box},
                          {"candidates_len", en.stats.candidates_len},
                          {"families", en.stats.families}};
  if (oracle_check > 0) {
    auto cd = peg::curve_from_json<double>(peg::read_json_file(c.curve_path));
    auto angd = peg::make_angle_d(resolve_theta(c));
    peg::OracleOpts oo;
    oo.grid_n = oracle_check;
    auto hits = peg::brute_force_oracle(cd, angd, oo);
    auto end = peg::enumerate_inscriptions(cd, angd, peg::InscribeOpts{});
    bool right = peg::to_d(angd.c) == 0.0;
    double worst = 0;
    for (auto& h : hits) {
      double best = std::numeric_limits<double>::infinity();
      for (auto& f : end.families)
        best = std::min(best, peg::family_vertex_distance(cd, f, right, h.verts));
      worst = std::max(worst, best);
    }
    payload["oracle_check"] = json{{"grid", oracle_check},
                                   {"hits", static_cast<int>(hits.size())},
                                   {"max_gap", worst}};
    std::printf("oracle: %d hits, max gap %.3e\n", static_cast<int>(hits.size()), worst);
  }
  return payload;
}

// ---- main ---------------------------------------------------------------------

int run(int argc, char** argv) {
  CLI::App app{"inscribed theta-rectangle engine"};
  app.require_subcommand(1);

  // inscribe
  Common ci;
  int oracle_check = 0;
  auto* inscribe = app.add_subcommand("inscribe", "enumerate inscribed theta-rectangles");
  inscribe->add_option("--curve", ci.curve_path, "curve JSON")->required();
  add_theta(inscribe, ci);
  inscribe->add_flag("--rational", ci.rational, "exact rational arithmetic");
  inscribe->add_option("--oracle-check", oracle_check, "verify against a brute-force grid of this size");
  inscribe->add_option("--threads", ci.threads, "worker threads (0 = PEG_THREADS env)");
  inscribe->add_option("-o,--out", ci.out_path, "artifact path (default stdout)");

  // spectrum
  Common cs;
  std::string spectrum_csv;
  auto* spectrum = app.add_subcommand("spectrum", "action spectrum with classification");
  spectrum->add_option("--curve", cs.curve_path, "curve JSON")->required();
  add_theta(spectrum, cs);
  spectrum->add_option("--threads", cs.threads, "worker threads");
  spectrum->add_option("--csv", spectrum_csv, "also write rows as CSV");
  spectrum->add_option("-o,--out", cs.out_path, "artifact path (default stdout)");

  // duality-check
  Common cd;
  auto* duality = app.add_subcommand("duality-check", "verify A + A* = Area against pi - theta");
  duality->add_option("--curve", cd.curve_path, "curve JSON")->required();
  add_theta(duality, cd);
  duality->add_option("--threads", cd.threads, "worker threads");
  duality->add_option("-o,--out", cd.out_path, "artifact path (default stdout)");

  // classify
  Common cc;
  auto* classify = app.add_subcommand("classify", "graceful / elegant classification");
  auto* cc_curve = classify->add_option("--curve", cc.curve_path, "curve JSON");
  auto* cc_gp = classify->add_option("--graphpair", cc.graphpair_path, "graph pair JSON");
  cc_curve->excludes(cc_gp);
  add_theta(classify, cc);
  classify->add_option("--threads", cc.threads, "worker threads");
  classify->add_option("-o,--out", cc.out_path, "artifact path (default stdout)");

  // threshold
  Common ct;
  auto* threshold = app.add_subcommand("threshold", "Lipschitz threshold tan((theta + pi)/4)");
  add_theta(threshold, ct);

  // isotopy-track
  Common cit;
  std::string diagram_csv;
  int samples = 25;
  bool critical = false;
  auto* itrack = app.add_subcommand("isotopy-track", "track action branches through an isotopy");
  itrack->add_option("--isotopy", cit.isotopy_path, "isotopy JSON")->required();
  add_theta(itrack, cit);
  itrack->add_option("--samples", samples, "uniform sample count");
  itrack->add_flag("--critical", critical, "also locate spectrum-change times");
  itrack->add_option("--threads", cit.threads, "worker threads");
  itrack->add_option("--csv", diagram_csv, "diagram CSV path");
  itrack->add_option("-o,--out", cit.out_path, "artifact path (default stdout)");

  // tendril
  Common ctd;
  int tn = 4;
  std::string iso_out, curve_out;
  auto* tendril = app.add_subcommand("tendril", "grow a seed square into the region boundary");
  tendril->add_option("--graphpair", ctd.graphpair_path, "graph pair JSON")->required();
  add_theta(tendril, ctd);
  tendril->add_option("--n", tn, "ladder depth")->required();
  tendril->add_option("--isotopy-out", iso_out, "write the isotopy JSON here");
  tendril->add_option("--curve-out", curve_out, "write the final curve JSON here");
  tendril->add_option("-o,--out", ctd.out_path, "artifact path (default stdout)");

  // certify
  Common cct;
  std::string schedule_str = "4,8,16,32";
  auto* certify = app.add_subcommand("certify", "desk-scale existence certificate");
  certify->add_option("--graphpair", cct.graphpair_path, "graph pair JSON")->required();
  add_theta(certify, cct);
  certify->add_option("--schedule", schedule_str, "comma-separated ladder depths");
  certify->add_option("--threads", cct.threads, "worker threads");
  certify->add_option("-o,--out", cct.out_path, "artifact path (default stdout)");

  // oracle
  Common co;
  int grid = 600;
  bool match = false;
  auto* oracle = app.add_subcommand("oracle", "brute-force grid search for inscriptions");
  oracle->add_option("--curve", co.curve_path, "curve JSON")->required();
  add_theta(oracle, co);
  oracle->add_option("--grid", grid, "grid resolution");
  oracle->add_flag("--match", match, "report worst gap to the enumerated families");
  oracle->add_option("-o,--out", co.out_path, "artifact path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (inscribe->parsed()) {
    json cfg = base_config("inscribe", ci);
    cfg["oracle_check"] = oracle_check;
    json payload = ci.rational ? run_inscribe<peg::Rat>(ci, oracle_check)
                               : run_inscribe<double>(ci, oracle_check);
    emit(peg::artifact(cfg, payload), ci.out_path);
  } else if (spectrum->parsed()) {
    auto curve = peg::curve_from_json<double>(peg::read_json_file(cs.curve_path));
    auto ang = peg::make_angle_d(resolve_theta(cs));
    peg::InscribeOpts opts;
    opts.threads = cs.threads;
    auto sp = peg::action_spectrum(curve, ang, opts);
    if (!spectrum_csv.empty()) peg::write_text_file(spectrum_csv, peg::spectrum_to_csv(sp));
    emit(peg::artifact(base_config("spectrum", cs),
                       json{{"area", curve.area()}, {"spectrum", peg::spectrum_to_json(sp)}}),
         cs.out_path);
  } else if (duality->parsed()) {
    auto curve = peg::curve_from_json<double>(peg::read_json_file(cd.curve_path));
    auto ang = peg::make_angle_d(resolve_theta(cd));
    peg::InscribeOpts opts;
    opts.threads = cd.threads;
    auto rep = peg::check_duality(curve, ang, opts);
    json pairs = json::array();
    for (auto& p : rep.pairs)
      pairs.push_back(json{{"family_id", p.family_id},
                           {"dual_family_id", p.dual_family_id},
                           {"action", p.action},
                           {"dual_action", p.dual_action},
                           {"defect", p.defect}});
    emit(peg::artifact(base_config("duality-check", cd),
                       json{{"complete", rep.complete},
                            {"max_defect", rep.max_defect},
                            {"max_match_distance", rep.max_match_distance},
                            {"pairs", std::move(pairs)}}),
         cd.out_path);
    std::printf("duality: complete=%d max_defect=%.3e\n", rep.complete ? 1 : 0, rep.max_defect);
    peg::require(rep.complete, peg::Err::UnmatchedFamily, "duality pairing is not a bijection");
  } else if (classify->parsed()) {
    peg::PLCurve<double> curve;
    json extra;
    double theta = resolve_theta(cc);
    if (!cc.graphpair_path.empty()) {
      auto gp = peg::graph_pair_from_json<double>(peg::read_json_file(cc.graphpair_path));
      curve = gp.to_curve();
      double lam = std::max(gp.f.lipschitz(), gp.g.lipschitz());
      double thr = peg::lipschitz_threshold(std::min(theta, std::numbers::pi - theta));
      extra = json{{"lipschitz", lam}, {"threshold", thr}, {"below_threshold", lam < thr}};
    } else {
      peg::require(!cc.curve_path.empty(), peg::Err::InvalidParams,
                   "classify needs --curve or --graphpair");
      curve = peg::curve_from_json<double>(peg::read_json_file(cc.curve_path));
    }
    auto ang = peg::make_angle_d(theta);
    peg::InscribeOpts opts;
    opts.threads = cc.threads;
    auto sp = peg::action_spectrum(curve, ang, opts);
    int non_graceful = 0;
    for (auto& e : sp)
      if (!e.graceful) ++non_graceful;
    json payload{{"families", peg::spectrum_to_json(sp)},
                 {"non_graceful", non_graceful},
                 {"all_graceful", non_graceful == 0}};
    if (!extra.is_null()) payload["graph_pair"] = extra;
    emit(peg::artifact(base_config("classify", cc), payload), cc.out_path);
  } else if (threshold->parsed()) {
    std::printf("%.12g\n", peg::lipschitz_threshold(resolve_theta(ct)));
  } else if (itrack->parsed()) {
    auto iso = peg::isotopy_from_json(peg::read_json_file(cit.isotopy_path));
    auto ang = peg::make_angle_d(resolve_theta(cit));
    peg::TrackOpts topts;
    topts.samples = samples;
    topts.iopts.threads = cit.threads;
    auto dg = peg::track_branches(iso, ang, topts);
    if (!diagram_csv.empty()) peg::write_text_file(diagram_csv, peg::diagram_to_csv(dg));
    json payload{{"branch_count", dg.branch_count},
                 {"sample_count", static_cast<int>(dg.times.size())},
                 {"rows", static_cast<int>(dg.rows.size())}};
    if (critical) {
      peg::CriticalOpts copts;
      copts.iopts.threads = cit.threads;
      json events = json::array();
      for (auto& e : peg::critical_times(iso, ang, copts))
        events.push_back(json{{"t", e.t}, {"kind", e.kind}});
      payload["critical_events"] = std::move(events);
    }
    json cfg = base_config("isotopy-track", cit);
    cfg["samples"] = samples;
    emit(peg::artifact(cfg, payload), cit.out_path);
  } else if (tendril->parsed()) {
    auto gp = peg::graph_pair_from_json<double>(peg::read_json_file(ctd.graphpair_path));
    auto ang = peg::make_angle_d(resolve_theta(ctd));
    auto tr = peg::tendril_isotopy(gp, ang, tn);
    json cfg = base_config("tendril", ctd);
    cfg["n"] = tn;
    if (!iso_out.empty())
      emit(peg::artifact(cfg, peg::isotopy_to_json(tr.isotopy)), iso_out);
    if (!curve_out.empty()) emit(peg::artifact(cfg, peg::curve_to_json(tr.curve)), curve_out);
    emit(peg::artifact(cfg, json{{"omega", tr.omega},
                                 {"stages_left", tr.stages_left},
                                 {"stages_right", tr.stages_right},
                                 {"delta_star_min", tr.delta_star_min},
                                 {"eta", tr.eta},
                                 {"retries", tr.retries},
                                 {"breakpoints", static_cast<int>(tr.isotopy.times.size())},
                                 {"vertices", static_cast<int>(tr.isotopy.paths.size())},
                                 {"final_area", tr.curve.area()}}),
         ctd.out_path);
  } else if (certify->parsed()) {
    auto gp = peg::graph_pair_from_json<double>(peg::read_json_file(cct.graphpair_path));
    auto ang = peg::make_angle_d(resolve_theta(cct));
    peg::CertifyOpts opts;
    opts.schedule.clear();
    std::stringstream ss(schedule_str);
    for (std::string tok; std::getline(ss, tok, ',');)
      if (!tok.empty()) opts.schedule.push_back(std::stoi(tok));
    opts.iopts.threads = cct.threads;
    auto cert = peg::certify_existence(gp, ang, opts);
    json cfg = base_config("certify", cct);
    cfg["schedule"] = opts.schedule;
    emit(peg::artifact(cfg, peg::certificate_to_json(cert)), cct.out_path);
    std::printf("certificate: delta=%.6g witness_action=%.6g residual=%.3e converged=%d\n",
                cert.delta, cert.witness_action, cert.witness_residual, cert.converged ? 1 : 0);
  } else if (oracle->parsed()) {
    auto curve = peg::curve_from_json<double>(peg::read_json_file(co.curve_path));
    auto ang = peg::make_angle_d(resolve_theta(co));
    peg::OracleOpts oo;
    oo.grid_n = grid;
    auto hits = peg::brute_force_oracle(curve, ang, oo);
    json jhits = json::array();
    for (auto& h : hits) {
      json verts = json::array();
      for (auto& v : h.verts) verts.push_back(json::array({v.x, v.y}));
      jhits.push_back(json{{"s1", h.s1}, {"s2", h.s2}, {"residual", h.residual},
                           {"vertices", std::move(verts)}});
    }
    json payload{{"grid", grid}, {"hits", std::move(jhits)}};
    if (match) {
      auto en = peg::enumerate_inscriptions(curve, ang, peg::InscribeOpts{});
      bool right = peg::to_d(ang.c) == 0.0;
      double worst = 0;
      for (auto& h : hits) {
        double best = std::numeric_limits<double>::infinity();
        for (auto& f : en.families)
          best = std::min(best, peg::family_vertex_distance(curve, f, right, h.verts));
        worst = std::max(worst, best);
      }
      payload["families"] = static_cast<int>(en.families.size());
      payload["max_gap"] = worst;
      std::printf("oracle: %zu hits, %zu families, max gap %.3e\n", hits.size(),
                  en.families.size(), worst);
    }
    json cfg = base_config("oracle", co);
    cfg["grid"] = grid;
    emit(peg::artifact(cfg, payload), co.out_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const peg::ContractError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}
