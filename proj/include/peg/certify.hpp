#pragma once

#include "peg/tendril.hpp"

// Desk-scale certification pipeline for the main existence statement: given a
// Lipschitz graph pair strictly below the angle threshold, grow tendril
// isotopies at increasing depth, audit nesting and action monotonicity, check
// that each stage's boundary approximation carries spectrum mass inside the
// sandwich window [delta, area - delta], match a witness inscription across
// stages, and polish the limit witness onto the exact region boundary by a
// local linear solve with segment reassignment.

namespace peg {

struct CertifyOpts {
  std::vector<int> schedule = {4, 8, 16, 32};
  double conv_tol_rel = 0.02;   // witness convergence tolerance, x (b - a)
  double residual_tol = 1e-6;   // polished witness defect, x max(1, diameter)
  int polish_iters = 5;
  double hypothesis_margin = 0.0;  // require lipschitz < threshold - margin
  TendrilParams tendril{};
  InscribeOpts iopts{};
  ActionOpts aopts{};
  AuditOpts audit{};
};

struct StageCertificate {
  int n = 0;       // requested ladder depth
  int stages = 0;  // realized stage count (max of the two sides)
  double area = 0;
  int spectrum_size = 0;
  int window_count = 0;  // entries with action in [delta, area - delta]
  double witness_action = 0, witness_d = 0;
  std::array<P2, 4> witness{};
  double match_dist = 0;  // vertex-set Hausdorff to the previous stage witness
  bool audit_precondition = false, audit_monotone = false;
};

struct Certificate {
  double theta = 0;
  double lipschitz = 0, threshold = 0;
  double delta = 0;  // smallest positive action of the seed square
  double seed_area = 0;
  std::vector<StageCertificate> stages;
  std::array<P2, 4> witness{};  // polished onto the region boundary
  double witness_action = 0, witness_d = 0, witness_residual = 0;
  bool converged = false;
  double conv_tol = 0;
};

namespace detail {

inline double quad_hausdorff(const std::array<P2, 4>& A, const std::array<P2, 4>& B) {
  double h = 0;
  for (int i = 0; i < 4; ++i) {
    double ma = std::numeric_limits<double>::infinity();
    double mb = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 4; ++j) {
      ma = std::min(ma, dist(A[i], B[j]));
      mb = std::min(mb, dist(B[i], A[j]));
    }
    h = std::max({h, ma, mb});
  }
  return h;
}

// Solve the inscription system on a fixed segment quadruple of c.  Returns
// the parameter 4-tuple; for a one-parameter (rank 3) solution set, returns
// the point of the line closest to `guess`.
inline std::optional<std::array<double, 4>> polish_solve(const PLCurve<double>& c,
                                                         const Angle<double>& ang,
                                                         const std::array<int, 4>& quad,
                                                         const std::array<double, 4>& guess) {
  std::array<Vec2<double>, 4> A, U;
  for (int k = 0; k < 4; ++k) {
    auto [a, b] = c.segment(quad[k]);
    A[k] = a;
    U[k] = b - a;
  }
  auto Pv = [&](const Vec2<double>& v) { return 0.5 * (v + rotate_neg(v, ang)); };
  auto Qv = [&](const Vec2<double>& v) { return 0.5 * (v - rotate_neg(v, ang)); };
  Vec2<double> c1 = Pv(U[0]), d1 = Qv(U[0]);
  Vec2<double> c2 = Qv(U[1]), d2 = Pv(U[1]);
  Vec2<double> r1 = A[2] - Pv(A[0]) - Qv(A[1]);
  Vec2<double> r2 = A[3] - Qv(A[0]) - Pv(A[1]);
  std::array<std::array<double, 4>, 4> M{{{c1.x, c2.x, -U[2].x, 0.0},
                                          {c1.y, c2.y, -U[2].y, 0.0},
                                          {d1.x, d2.x, 0.0, -U[3].x},
                                          {d1.y, d2.y, 0.0, -U[3].y}}};
  std::array<double, 4> b{r1.x, r1.y, r2.x, r2.y};
  auto sol = solve4<double>(M, b, c.tols());
  if (sol.rank == 4) return sol.part;
  if (sol.rank == 3 && sol.consistent) {
    double nn = 0, pn = 0;
    for (int k = 0; k < 4; ++k) {
      nn += sol.nullv[k] * sol.nullv[k];
      pn += (guess[k] - sol.part[k]) * sol.nullv[k];
    }
    if (nn <= 0) return std::nullopt;
    double s = pn / nn;
    std::array<double, 4> t;
    for (int k = 0; k < 4; ++k) t[k] = sol.part[k] + s * sol.nullv[k];
    return t;
  }
  return std::nullopt;
}

struct PolishResult {
  std::array<P2, 4> verts{};
  std::array<int, 4> quad{};
  std::array<double, 4> t{};
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

inline PolishResult polish_witness(const PLCurve<double>& c, const Angle<double>& ang,
                                   const std::array<P2, 4>& init, int max_iters) {
  const int n = c.size();
  PolishResult pr;
  for (int k = 0; k < 4; ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      auto [a, b] = c.segment(i);
      double t;
      double d = point_segment_dist(init[k], to_p2(a), to_p2(b), &t);
      if (d < best) {
        best = d;
        pr.quad[k] = i;
        pr.t[k] = t;
      }
    }
  }
  for (int it = 0; it < max_iters; ++it) {
    pr.iterations = it + 1;
    auto t = polish_solve(c, ang, pr.quad, pr.t);
    if (!t) break;
    pr.t = *t;
    bool moved = false;
    for (int k = 0; k < 4; ++k) {
      if (pr.t[k] < -1e-12) {
        pr.quad[k] = (pr.quad[k] + n - 1) % n;
        moved = true;
      } else if (pr.t[k] > 1 + 1e-12) {
        pr.quad[k] = (pr.quad[k] + 1) % n;
        moved = true;
      }
    }
    if (!moved) break;
  }
  for (int k = 0; k < 4; ++k) {
    double tc = std::clamp(pr.t[k], 0.0, 1.0);
    pr.verts[k] = to_p2(c.point_at({pr.quad[k], tc}));
  }
  auto [zp, wp] = rotate_pair(pr.verts[0], pr.verts[1], ang);
  pr.residual = std::max(dist(zp, pr.verts[2]), dist(wp, pr.verts[3]));
  return pr;
}

}  // namespace detail

// Smallest positive action in the spectrum of `seed` at the given angle.
inline double square_delta(const PLCurve<double>& seed, const Angle<double>& ang,
                           const InscribeOpts& iopts = {}, const ActionOpts& aopts = {}) {
  auto sp = action_spectrum(seed, ang, iopts, aopts);
  double floor = 1e-12 * std::max(1.0, seed.area());
  double best = std::numeric_limits<double>::infinity();
  for (auto& e : sp)
    if (e.action > floor) best = std::min(best, e.action);
  if (!std::isfinite(best))
    fail(Err::EmptySpectrum, "seed square carries no positive-action inscription");
  return best;
}

inline Certificate certify_existence(const GraphPair<double>& gp, const Angle<double>& ang,
                                     const CertifyOpts& opts = {}) {
  require(!opts.schedule.empty(), Err::InvalidParams, "empty certification schedule");
  Certificate cert;
  cert.theta = effective_theta(ang);
  cert.lipschitz = std::max(gp.f.lipschitz(), gp.g.lipschitz());
  cert.threshold = lipschitz_threshold(std::min(cert.theta, std::numbers::pi - cert.theta));
  if (!(cert.lipschitz < cert.threshold - opts.hypothesis_margin))
    fail(Err::HypothesisFailed,
         "graph pair lipschitz " + std::to_string(cert.lipschitz) +
             " is not below the angle threshold " + std::to_string(cert.threshold));
  const double B = to_d(gp.domain_hi()) - to_d(gp.domain_lo());
  cert.conv_tol = opts.conv_tol_rel * B;

  TrackOpts topts;
  topts.iopts = opts.iopts;
  topts.aopts = opts.aopts;

  bool have_prev = false;
  std::array<P2, 4> prev_witness{};
  for (size_t si = 0; si < opts.schedule.size(); ++si) {
    int n = opts.schedule[si];
    auto tr = tendril_isotopy(gp, ang, n, opts.tendril);
    if (si == 0) {
      cert.seed_area = tr.seed.area();
      cert.delta = square_delta(tr.seed, ang, opts.iopts, opts.aopts);
    }
    StageCertificate sc;
    sc.n = n;
    sc.stages = std::max(tr.stages_left, tr.stages_right);
    sc.area = tr.curve.area();

    AuditOpts au = opts.audit;
    if (au.at_times.empty()) {
      // Construction already validates nesting at every breakpoint; the
      // independent action audit runs at stage boundaries.
      au.at_times = tr.stage_times;
      au.at_times.push_back(0.0);
    }
    auto audit = audit_nested_monotonicity(tr.isotopy, ang, au);
    sc.audit_precondition = audit.precondition_ok;
    sc.audit_monotone = audit.monotone_ok;

    auto fams = detail::tracked_families(tr.curve, ang, topts);
    sc.spectrum_size = static_cast<int>(fams.size());
    double lo = cert.delta, hi = sc.area - cert.delta;
    std::vector<const detail::TrackedFamily*> window;
    for (auto& f : fams)
      if (f.action >= lo && f.action <= hi) window.push_back(&f);
    sc.window_count = static_cast<int>(window.size());
    if (window.empty())
      fail(Err::SandwichEmpty, "no inscription with action in [delta, area - delta] at depth " +
                                   std::to_string(n));

    const detail::TrackedFamily* pick = nullptr;
    if (!have_prev) {
      double best = std::numeric_limits<double>::infinity();
      for (auto* f : window) {
        double v = std::abs(f->action - sc.area / 2);
        if (v < best) {
          best = v;
          pick = f;
        }
      }
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (auto* f : window) {
        double v = detail::quad_hausdorff(f->verts, prev_witness);
        if (v < best) {
          best = v;
          pick = f;
        }
      }
      sc.match_dist = best;
      if (best > 10 * cert.conv_tol)
        fail(Err::UnmatchedFamily,
             "witness lost between stages: nearest candidate at distance " + std::to_string(best));
    }
    sc.witness = pick->verts;
    sc.witness_action = pick->action;
    sc.witness_d = pick->d;
    prev_witness = pick->verts;
    have_prev = true;
    cert.stages.push_back(sc);
  }

  cert.converged = cert.stages.size() < 2 ||
                   cert.stages.back().match_dist <= cert.conv_tol;

  auto gamma = gp.to_curve();
  auto pol = detail::polish_witness(gamma, ang, prev_witness, opts.polish_iters);
  double scale = std::max(1.0, gamma.diameter());
  if (!(pol.residual < opts.residual_tol * scale))
    fail(Err::NoConvergence, "witness polish stalled with defect " + std::to_string(pol.residual));
  cert.witness = pol.verts;
  cert.witness_d = dist(pol.verts[0], pol.verts[1]);
  Inscription<double> ins;
  for (int k = 0; k < 4; ++k) {
    ins.cp[k] = CurvePoint<double>{pol.quad[k], std::clamp(pol.t[k], 0.0, 1.0)};
    ins.verts[k] = Vec2<double>(pol.verts[k].x, pol.verts[k].y);
  }
  ins.d = cert.witness_d;
  cert.witness_residual = pol.residual;
  cert.witness_action = action(gamma, ang, ins, opts.aopts).action;
  return cert;
}

// Fixed-angle sweep at pi/6, pi/3, pi/2.
inline std::vector<Certificate> angle_sweep(const GraphPair<double>& gp,
                                            const CertifyOpts& opts = {}) {
  std::vector<Certificate> out;
  for (double th : {std::numbers::pi / 6, std::numbers::pi / 3, std::numbers::pi / 2})
    out.push_back(certify_existence(gp, make_angle_d(th), opts));
  return out;
}

}  // namespace peg
