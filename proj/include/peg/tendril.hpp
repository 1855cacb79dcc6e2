#pragma once

#include "peg/isotopy.hpp"

// Tendril isotopies: grow a seed square inside a graph-pair region into a
// polygonal approximation of the region boundary, through a strictly nested
// family of simple curves.
//
// The construction works symmetrically toward both tips of the region.  A
// "beak" stage opens the square's face toward the first waypoint; after
// that, each stage opens a funnel (a lip pair lifts off the walls just
// behind the tip, with slope offsets that keep the wall-slope recursion
// contractive) and then travels the tip to the next waypoint.  Waypoints
// follow the barycentric spine between f and g, refined so that every stage
// interval is free of f/g kinks (stage chords then stay inside the locally
// convex strip) and so that the final vertex stations meet the target mesh.
// Phase 2 moves every vertex vertically onto f or g.
//
// All vertices exist from t = 0: future lips ride the moving wall segments
// at fixed barycentric fractions per substep (collinear, so they never
// change the curve as a set), with fractions rebased at substep boundaries
// for continuity.  Within a substep every vertex moves linearly, so for
// graphical frames the chain height at fixed x is a Moebius function of
// time; nesting validated at breakpoints is then rigorous throughout.  All
// clearances scale with an adaptive factor eta that halves on validation
// failure.

namespace peg {

struct TendrilParams {
  double r = 0.25;           // ladder master fraction: first waypoint at a + r(b-a)
  double eta = 1.0;          // initial clearance scale
  int max_retries = 30;      // eta halvings before giving up
  double mu_fraction = 0.25; // funnel slope margin = mu_fraction * (threshold - lipschitz)
  double mesh_factor = 1.0;  // target station mesh = mesh_factor * (b-a)/n
};

struct TendrilResult {
  Isotopy isotopy;
  PLCurve<double> seed;   // Z(0): the seed square
  PLCurve<double> curve;  // Z(1): the boundary approximation C_n
  double omega = 0;       // seed square half-width
  int stages_left = 0, stages_right = 0;
  double delta_star_min = 0;  // smallest funnel clearance used
  double eta = 1;             // final clearance scale after retries
  int retries = 0;
  std::vector<double> stage_times;  // travel-substep end times plus 1.0
};

namespace detail {

inline double pl_min_over(const PLFunction<double>& fn, double lo, double hi, bool maximum) {
  double best = fn.eval(lo);
  auto upd = [&](double v) { best = maximum ? std::max(best, v) : std::min(best, v); };
  upd(fn.eval(hi));
  for (auto& p : fn.pts)
    if (p.x > lo && p.x < hi) upd(p.y);
  return best;
}

// Barycentric parameter of p along segment [A, B].
inline double seg_param(const P2& p, const P2& A, const P2& B) {
  P2 u = B - A;
  double uu = dot(u, u);
  return uu > 0 ? dot(p - A, u) / uu : 0.0;
}

struct TendrilSide {
  int dir = -1;                  // -1: toward a (left), +1: toward b (right)
  double face_x = 0;             // seed square face x
  double s_bar = 0.5;            // spine barycentric fraction
  std::vector<double> wx;        // waypoint xs in travel order, last = tip x
  P2 start{0, 0};                // tip start position on the face
  int tip = -1;                  // vertex index of the tip
  std::vector<int> up, lo;       // lip vertex indices for stages 2..K (index k-2)
  int up_corner = -1, lo_corner = -1;  // TL/BL (left) or TR/BR (right)
};

}  // namespace detail

inline TendrilResult tendril_isotopy(const GraphPair<double>& gp, const Angle<double>& ang,
                                     int n, const TendrilParams& par = {}) {
  require(n >= 1, Err::InvalidParams, "tendril stage parameter must be positive");
  require(par.r > 0 && par.r < 0.5, Err::InvalidParams, "ladder fraction must be in (0, 1/2)");
  const PLFunction<double>& f = gp.f;
  const PLFunction<double>& g = gp.g;
  const double a = to_d(gp.domain_lo()), b = to_d(gp.domain_hi());
  const double B = b - a, mid = (a + b) / 2;
  const double cy = (f.eval(mid) + g.eval(mid)) / 2;
  const double h = (0.5 - par.r) * B;

  double theta = effective_theta(ang);
  double lam_theta = lipschitz_threshold(std::min(theta, std::numbers::pi - theta));
  double lam0 = std::max(f.lipschitz(), g.lipschitz());
  double mu = par.mu_fraction * std::max(1e-3, lam_theta - lam0);

  // Seed square half-width: largest omega (capped by the zone half-width h)
  // such that [mid-om, mid+om]^2 around (mid, cy) fits strictly inside (f, g).
  auto fits = [&](double om) {
    return detail::pl_min_over(f, mid - om, mid + om, false) > cy + om &&
           detail::pl_min_over(g, mid - om, mid + om, true) < cy - om;
  };
  double omega;
  if (fits(h)) {
    omega = 0.8 * h;
  } else {
    double lo = 0, hi = h;
    for (int it = 0; it < 100; ++it) {
      double m = (lo + hi) / 2;
      (fits(m) ? lo : hi) = m;
    }
    omega = 0.8 * lo;
  }
  omega = std::min(omega, 0.9 * h);
  require(omega > 1e-9 * B, Err::InvalidConfiguration, "seed square degenerate");

  // Waypoint ladders: geometric stations a + rB/(j+1) toward each tip, plus
  // every f/g kink, plus mesh subdivisions, ending at the tip itself.
  double mesh = par.mesh_factor * B / n;
  auto build_side = [&](int dir) {
    detail::TendrilSide s;
    s.dir = dir;
    s.face_x = dir < 0 ? mid - omega : mid + omega;
    double tip_x = dir < 0 ? a : b;
    double x1 = dir < 0 ? a + par.r * B : b - par.r * B;
    double fg = f.eval(x1) - g.eval(x1);
    s.s_bar = std::clamp((cy - g.eval(x1)) / (fg > 0 ? fg : 1.0), 0.1, 0.9);
    std::vector<double> xs;
    for (int j = 0; j < n; ++j) {
      double x = dir < 0 ? a + par.r * B / (j + 1) : b - par.r * B / (j + 1);
      if ((dir < 0 && x < s.face_x - 1e-12 * B) || (dir > 0 && x > s.face_x + 1e-12 * B))
        xs.push_back(x);
    }
    auto add_kinks = [&](const PLFunction<double>& fn) {
      for (size_t i = 1; i + 1 < fn.pts.size(); ++i) {
        double x = fn.pts[i].x;
        if (dir < 0 ? (x > a + 1e-12 * B && x < s.face_x - 1e-12 * B)
                    : (x < b - 1e-12 * B && x > s.face_x + 1e-12 * B))
          xs.push_back(x);
      }
    };
    add_kinks(f);
    add_kinks(g);
    // Sort in travel order (away from the face) and dedup.
    std::sort(xs.begin(), xs.end());
    if (dir < 0) std::reverse(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [&](double p, double q) { return std::abs(p - q) < 1e-9 * B; }),
             xs.end());
    xs.push_back(tip_x);
    // Mesh subdivision, including the first gap from the face.
    std::vector<double> out;
    double prev = s.face_x;
    for (double x : xs) {
      double gap = std::abs(x - prev);
      int extra = gap > mesh ? static_cast<int>(std::ceil(gap / mesh)) - 1 : 0;
      for (int i = 1; i <= extra; ++i) out.push_back(prev + (x - prev) * i / (extra + 1));
      out.push_back(x);
      prev = x;
    }
    s.wx = std::move(out);
    return s;
  };
  detail::TendrilSide left = build_side(-1), right = build_side(+1);
  int KL = static_cast<int>(left.wx.size()), KR = static_cast<int>(right.wx.size());
  int K = std::max(KL, KR);

  auto ybar = [&](const detail::TendrilSide& s, double x) {
    return s.s_bar * f.eval(x) + (1 - s.s_bar) * g.eval(x);
  };
  left.start = {left.face_x, std::clamp(ybar(left, left.face_x), cy - 0.9 * omega, cy + 0.9 * omega)};
  right.start = {right.face_x, std::clamp(ybar(right, right.face_x), cy - 0.9 * omega, cy + 0.9 * omega)};

  // ---- vertex inventory (cyclic CCW, starting at the left tip) ----
  // Zone stations: uniform grid at the target mesh plus every f/g kink, so
  // the final chains sample the graphs at their own breakpoints.
  std::vector<double> zone_xs;
  {
    int cells = std::max(1, static_cast<int>(std::ceil(2 * omega / mesh)));
    for (int i = 1; i < cells; ++i) zone_xs.push_back(mid - omega + 2 * omega * i / cells);
    auto add_zone_kinks = [&](const PLFunction<double>& fn) {
      for (auto& p : fn.pts)
        if (p.x > mid - omega + 1e-9 * B && p.x < mid + omega - 1e-9 * B) zone_xs.push_back(p.x);
    };
    add_zone_kinks(f);
    add_zone_kinks(g);
    std::sort(zone_xs.begin(), zone_xs.end());
    zone_xs.erase(std::unique(zone_xs.begin(), zone_xs.end(),
                              [&](double p, double q) { return std::abs(p - q) < 1e-9 * B; }),
                  zone_xs.end());
  }
  int m_top = static_cast<int>(zone_xs.size());
  std::vector<int> chain_upper, chain_lower;  // membership for phase 2
  int next_idx = 0;
  auto take = [&]() { return next_idx++; };

  left.tip = take();
  for (int k = KL; k >= 2; --k) left.lo.push_back(take());  // built in reverse; fix below
  std::reverse(left.lo.begin(), left.lo.end());             // lo[k-2] = stage-k lip
  int BL = take();
  std::vector<int> bot_extra, top_extra;
  for (int i = 0; i < m_top; ++i) bot_extra.push_back(take());
  int BR = take();
  for (int k = 2; k <= KR; ++k) right.lo.push_back(take());
  right.tip = take();
  for (int k = KR; k >= 2; --k) right.up.push_back(take());
  std::reverse(right.up.begin(), right.up.end());
  int TR = take();
  for (int i = 0; i < m_top; ++i) top_extra.push_back(take());
  int TL = take();
  for (int k = 2; k <= KL; ++k) left.up.push_back(take());
  int N = next_idx;
  left.up_corner = TL;
  left.lo_corner = BL;
  right.up_corner = TR;
  right.lo_corner = BR;

  chain_lower = {left.tip};
  for (int v : left.lo) chain_lower.push_back(v);
  chain_lower.push_back(BL);
  for (int v : bot_extra) chain_lower.push_back(v);
  chain_lower.push_back(BR);
  for (int v : right.lo) chain_lower.push_back(v);
  chain_lower.push_back(right.tip);
  chain_upper = {left.tip};
  for (int v : left.up) chain_upper.push_back(v);
  chain_upper.push_back(TL);
  for (int v : top_extra) chain_upper.push_back(v);
  chain_upper.push_back(TR);
  for (int v : right.up) chain_upper.push_back(v);
  chain_upper.push_back(right.tip);

  std::vector<double> times;
  times.push_back(0.0);
  for (int j = 1; j <= 2 * K; ++j) times.push_back(double(j) / (4 * K));
  times.push_back(1.0);
  const int BPs = static_cast<int>(times.size());

  TendrilResult res;
  res.omega = omega;
  res.stages_left = KL;
  res.stages_right = KR;
  res.seed = PLCurve<double>::from_vertices({{mid - omega, cy - omega},
                                             {mid + omega, cy - omega},
                                             {mid + omega, cy + omega},
                                             {mid - omega, cy + omega}});
  for (int k = 1; k <= K; ++k) res.stage_times.push_back(double(k) / (2 * K));
  res.stage_times.push_back(1.0);

  double eta = par.eta;
  std::string last_error;
  for (int attempt = 0; attempt <= par.max_retries; ++attempt, eta /= 2) {
    std::vector<std::vector<P2>> paths(N, std::vector<P2>(BPs));
    std::vector<P2> cur(N);
    double dstar_min = std::numeric_limits<double>::infinity();

    // t = 0: square with everything parked.
    cur[TL] = {mid - omega, cy + omega};
    cur[TR] = {mid + omega, cy + omega};
    cur[BL] = {mid - omega, cy - omega};
    cur[BR] = {mid + omega, cy - omega};
    for (int i = 0; i < m_top; ++i) {
      cur[top_extra[i]] = {zone_xs[m_top - 1 - i], cy + omega};
      cur[bot_extra[i]] = {zone_xs[i], cy - omega};
    }
    auto park_side = [&](detail::TendrilSide& s) {
      cur[s.tip] = s.start;
      int Ks = s.dir < 0 ? KL : KR;
      for (int k = 2; k <= Ks; ++k) {
        double psi = double(Ks + 2 - k) / (Ks + 2);
        cur[s.up[k - 2]] = cur[s.tip] + psi * (cur[s.up_corner] - cur[s.tip]);
        cur[s.lo[k - 2]] = cur[s.tip] + psi * (cur[s.lo_corner] - cur[s.tip]);
      }
    };
    park_side(left);
    park_side(right);
    for (int v = 0; v < N; ++v) paths[v][0] = cur[v];

    // Stage loop.  bp index: funnel k ends at 2k-1, travel k ends at 2k.
    bool build_ok = true;
    for (int k = 1; k <= K && build_ok; ++k) {
      // -- funnel substep --
      for (detail::TendrilSide* sp : {&left, &right}) {
        detail::TendrilSide& s = *sp;
        int Ks = s.dir < 0 ? KL : KR;
        if (k < 2 || k > Ks) continue;
        P2 P = cur[s.tip];
        P2 Q{s.wx[k - 1], k == Ks ? f.eval(s.wx[k - 1]) : ybar(s, s.wx[k - 1])};
        double dx = std::abs(P.x - Q.x);
        P2 Au = k == 2 ? cur[s.up_corner] : cur[s.up[k - 3]];
        P2 Al = k == 2 ? cur[s.lo_corner] : cur[s.lo[k - 3]];
        double span_prev = f.eval(P.x) - g.eval(P.x);
        double xm = (P.x + Q.x) / 2;
        double clear = std::min(std::min(f.eval(P.x) - ybar(s, P.x), ybar(s, P.x) - g.eval(P.x)),
                                std::min(f.eval(xm) - ybar(s, xm), ybar(s, xm) - g.eval(xm)));
        double dstar = eta * std::min({0.25 * dx, 0.25 * span_prev, 0.25 * clear,
                                       0.5 * std::abs(Au.x - P.x)});
        if (k == 2) dstar = std::min(dstar, eta * h / (2 * (Ks + 1)));
        if (!(dstar > 0)) {
          last_error = "nonpositive funnel clearance";
          build_ok = false;
          break;
        }
        dstar_min = std::min(dstar_min, dstar);
        // slopes per unit run backward from the tip (toward the anchors)
        double bw_u = (Au.y - P.y) / std::abs(Au.x - P.x);
        double bw_l = (Al.y - P.y) / std::abs(Al.x - P.x);
        double bw_sp = (P.y - Q.y) / std::abs(Q.x - P.x);
        double lip_x = P.x - s.dir * dstar;  // behind the tip
        P2 u_t{lip_x, P.y + dstar * (std::max(bw_u, bw_sp) + mu)};
        P2 l_t{lip_x, P.y + dstar * (std::min(bw_l, bw_sp) - mu)};
        // riders (stages m > k) keep their fraction of the moving carrier
        std::vector<double> fr_u, fr_l;
        for (int m = k + 1; m <= Ks; ++m) {
          fr_u.push_back(detail::seg_param(cur[s.up[m - 2]], cur[s.up[k - 2]], cur[s.tip]));
          fr_l.push_back(detail::seg_param(cur[s.lo[m - 2]], cur[s.lo[k - 2]], cur[s.tip]));
        }
        cur[s.up[k - 2]] = u_t;
        cur[s.lo[k - 2]] = l_t;
        for (int m = k + 1; m <= Ks; ++m) {
          cur[s.up[m - 2]] = u_t + fr_u[m - k - 1] * (cur[s.tip] - u_t);
          cur[s.lo[m - 2]] = l_t + fr_l[m - k - 1] * (cur[s.tip] - l_t);
        }
      }
      if (!build_ok) break;
      for (int v = 0; v < N; ++v) paths[v][2 * k - 1] = cur[v];

      // -- travel substep --
      for (detail::TendrilSide* sp : {&left, &right}) {
        detail::TendrilSide& s = *sp;
        int Ks = s.dir < 0 ? KL : KR;
        if (k > Ks) continue;
        P2 Q{s.wx[k - 1], k == Ks ? f.eval(s.wx[k - 1]) : ybar(s, s.wx[k - 1])};
        P2 Au = k == 1 ? cur[s.up_corner] : cur[s.up[k - 2]];
        P2 Al = k == 1 ? cur[s.lo_corner] : cur[s.lo[k - 2]];
        std::vector<double> fr_u, fr_l;
        for (int m = k + 1; m <= Ks; ++m) {
          fr_u.push_back(detail::seg_param(cur[s.up[m - 2]], Au, cur[s.tip]));
          fr_l.push_back(detail::seg_param(cur[s.lo[m - 2]], Al, cur[s.tip]));
        }
        cur[s.tip] = Q;
        for (int m = k + 1; m <= Ks; ++m) {
          cur[s.up[m - 2]] = Au + fr_u[m - k - 1] * (Q - Au);
          cur[s.lo[m - 2]] = Al + fr_l[m - k - 1] * (Q - Al);
        }
      }
      for (int v = 0; v < N; ++v) paths[v][2 * k] = cur[v];
    }
    if (!build_ok) continue;

    // Phase 2: vertical landing onto f and g.
    for (int v : chain_upper)
      if (v != left.tip && v != right.tip) cur[v] = {cur[v].x, f.eval(cur[v].x)};
    for (int v : chain_lower)
      if (v != left.tip && v != right.tip) cur[v] = {cur[v].x, g.eval(cur[v].x)};
    for (int v = 0; v < N; ++v) paths[v][BPs - 1] = cur[v];

    // ---- validation at breakpoints ----
    bool ok = true;
    std::vector<PLCurve<double>> frames;
    frames.reserve(BPs);
    for (int j = 0; j < BPs && ok; ++j) {
      std::vector<Vec2<double>> vs;
      vs.reserve(N);
      for (int v = 0; v < N; ++v) vs.push_back(paths[v][j]);
      try {
        frames.push_back(PLCurve<double>::from_vertices(vs));
      } catch (const ContractError& e) {
        last_error = std::string("frame ") + std::to_string(j) + ": " + e.what();
        ok = false;
      }
    }
    if (ok && std::abs(frames[0].area() - 4 * omega * omega) > 1e-9 * B * B) {
      last_error = "seed frame does not match the square";
      ok = false;
    }
    for (int j = 0; j + 1 < BPs && ok; ++j) {
      bool same = true;
      for (int v = 0; v < N && same; ++v)
        same = dist(paths[v][j], paths[v][j + 1]) <= 1e-15 * std::max(1.0, B);
      if (same) continue;
      auto gi = try_graph_pair(frames[j]);
      auto go = try_graph_pair(frames[j + 1]);
      bool nested = gi && go ? graph_pair_nested(*gi, *go, false, 1e-12 * std::max(1.0, B))
                             : is_nested(frames[j], frames[j + 1], false, frames[j].tols());
      if (!nested) {
        last_error = "nesting fails across breakpoint " + std::to_string(j);
        ok = false;
      }
    }
    if (ok) {
      auto gfin = try_graph_pair(frames.back());
      if (!gfin) {
        last_error = "final frame is not a graph pair";
        ok = false;
      } else {
        for (auto& p : gfin->f.pts)
          if (std::abs(p.y - f.eval(p.x)) > 1e-9 * std::max(1.0, B)) {
            last_error = "final frame does not sample the upper graph";
            ok = false;
            break;
          }
      }
    }
    if (!ok) continue;

    res.isotopy = make_isotopy(times, paths);
    res.curve = frames.back();
    res.delta_star_min = dstar_min;
    res.eta = eta;
    res.retries = attempt;
    return res;
  }
  fail(Err::NoConvergence, "tendril validation failed after eta retries: " + last_error);
}

}  // namespace peg
