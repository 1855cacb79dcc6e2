#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

// Numeric foundation shared by every module: the exact rational scalar, the
// contract-error idiom, tolerance policy, and angles represented so that the
// rotation (cos, sin) lies exactly on the unit circle in both scalar modes.

namespace peg {

using Rat = boost::multiprecision::cpp_rational;

// Failure codes for contract violations.  The CLI maps ContractError to exit
// code 2; anything else that escapes is an internal error (exit 1).
enum class Err {
  NonSimpleCurve,
  DegenerateCurve,
  ThetaOutOfRange,
  PointOnLoop,
  CoincidentPoints,
  IllConditioned,
  DegenerateChord,
  CoparametrizationFailure,
  InvalidConfiguration,
  InvalidParams,
  NonSimpleAtT,
  SharedBreakpointsViolated,
  MatchingAmbiguous,
  PreconditionFailed,
  AreasDiffer,
  LipschitzViolated,
  SimplicityViolated,
  NestingViolated,
  HypothesisFailed,
  SandwichEmpty,
  NoConvergence,
  EmptySpectrum,
  UnmatchedFamily,
  ParseError,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::NonSimpleCurve: return "NonSimpleCurve";
    case Err::DegenerateCurve: return "DegenerateCurve";
    case Err::ThetaOutOfRange: return "ThetaOutOfRange";
    case Err::PointOnLoop: return "PointOnLoop";
    case Err::CoincidentPoints: return "CoincidentPoints";
    case Err::IllConditioned: return "IllConditioned";
    case Err::DegenerateChord: return "DegenerateChord";
    case Err::CoparametrizationFailure: return "CoparametrizationFailure";
    case Err::InvalidConfiguration: return "InvalidConfiguration";
    case Err::InvalidParams: return "InvalidParams";
    case Err::NonSimpleAtT: return "NonSimpleAtT";
    case Err::SharedBreakpointsViolated: return "SharedBreakpointsViolated";
    case Err::MatchingAmbiguous: return "MatchingAmbiguous";
    case Err::PreconditionFailed: return "PreconditionFailed";
    case Err::AreasDiffer: return "AreasDiffer";
    case Err::LipschitzViolated: return "LipschitzViolated";
    case Err::SimplicityViolated: return "SimplicityViolated";
    case Err::NestingViolated: return "NestingViolated";
    case Err::HypothesisFailed: return "HypothesisFailed";
    case Err::SandwichEmpty: return "SandwichEmpty";
    case Err::NoConvergence: return "NoConvergence";
    case Err::EmptySpectrum: return "EmptySpectrum";
    case Err::UnmatchedFamily: return "UnmatchedFamily";
    case Err::ParseError: return "ParseError";
  }
  return "Unknown";
}

class ContractError : public std::runtime_error {
 public:
  ContractError(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) {
  throw ContractError(code, msg);
}

inline void require(bool ok, Err code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

// Tolerances used across geometry and the inscription kernel.  All incidence
// tolerances are interpreted relative to the curve diameter.
struct Tols {
  double incidence = 1e-9;   // residual acceptance for solutions / point-on-curve
  double identity = 1e-12;   // exact identities (midpoint, chord-length preservation)
  double rank_rel = 1e-8;    // singular-value gap for rank decisions, relative to sigma_1
  double dedup = 1e-8;       // parameter-space dedup / family-chaining, relative to perimeter
  double degenerate = 1e-7;  // chord-length degeneracy cutoff, relative to diameter
};

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double from_double(double x) { return x; }
  static double to_double(double x) { return x; }
};

template <>
struct scalar_traits<Rat> {
  static constexpr bool exact = true;
  static Rat from_double(double x) { return Rat(x); }  // exact dyadic value
  static double to_double(const Rat& x) { return x.convert_to<double>(); }
};

template <class S>
inline double to_d(const S& x) {
  return scalar_traits<S>::to_double(x);
}

// A rotation angle with its (cos, sin) pair.  In double mode the right angle
// and the straight angle are special-cased so that c and s are exact; in
// rational mode the angle is rationalized via the half-angle tangent tau:
//   c = (1 - tau^2) / (1 + tau^2),  s = 2 tau / (1 + tau^2),
// which lies exactly on the unit circle, so chord lengths are preserved
// exactly.  The effective angle is then 2*atan(tau), within ~1e-16 of theta.
template <class S>
struct Angle {
  double theta = 0.0;  // nominal angle in (0, pi]
  S c{}, s{};          // cos/sin of the effective angle
};

inline void check_theta_range(double theta) {
  require(theta > 0.0 && theta <= std::numbers::pi + 1e-15, Err::ThetaOutOfRange,
          "theta must lie in (0, pi], got " + std::to_string(theta));
}

inline Angle<double> make_angle_d(double theta) {
  check_theta_range(theta);
  Angle<double> a;
  a.theta = theta;
  if (std::abs(theta - std::numbers::pi / 2) < 1e-15) {
    a.theta = std::numbers::pi / 2;
    a.c = 0.0;
    a.s = 1.0;
  } else if (std::abs(theta - std::numbers::pi) < 1e-15) {
    a.theta = std::numbers::pi;
    a.c = -1.0;
    a.s = 0.0;
  } else {
    a.c = std::cos(theta);
    a.s = std::sin(theta);
  }
  return a;
}

// Rational approximation of x with denominator <= max_den (continued fractions).
inline Rat rat_approx(double x, std::int64_t max_den = 1'000'000'000) {
  bool neg = x < 0;
  double v = neg ? -x : x;
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(frac);
    if (fl > 9e17) break;
    auto ai = static_cast<std::int64_t>(fl);
    if (q0 + ai * q1 > max_den && q1 > 0) break;
    std::int64_t p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double rem = frac - fl;
    if (rem < 1e-18) break;
    frac = 1.0 / rem;
  }
  Rat r(p1, q1 == 0 ? 1 : q1);
  return neg ? Rat(-r) : r;
}

inline Angle<Rat> make_angle_q(double theta) {
  check_theta_range(theta);
  Angle<Rat> a;
  a.theta = theta;
  if (std::abs(theta - std::numbers::pi) < 1e-15) {
    a.theta = std::numbers::pi;
    a.c = -1;
    a.s = 0;
    return a;
  }
  if (std::abs(theta - std::numbers::pi / 2) < 1e-15) a.theta = std::numbers::pi / 2;
  Rat tau = rat_approx(std::tan(a.theta / 2));
  Rat t2 = tau * tau;
  Rat den = 1 + t2;
  a.c = (1 - t2) / den;
  a.s = 2 * tau / den;
  a.theta = 2 * std::atan(to_d(tau));
  return a;
}

template <class S>
Angle<S> make_angle(double theta);
template <>
inline Angle<double> make_angle<double>(double theta) { return make_angle_d(theta); }
template <>
inline Angle<Rat> make_angle<Rat>(double theta) { return make_angle_q(theta); }

// Complement angle pi - theta, derived from the same (c, s) pair by negating
// the cosine.  This keeps the duality pairing exact in both scalar modes.
template <class S>
inline Angle<S> complement_angle(const Angle<S>& a) {
  Angle<S> b;
  b.theta = std::numbers::pi - a.theta;
  b.c = S(-a.c);
  b.s = a.s;
  return b;
}

}  // namespace peg
