#include "brl/shooting.hpp"

#include <cmath>
#include <sstream>

#include "brl/errors.hpp"

namespace brl::shoot {

void validate(const ShootingConfig& cfg) {
  if (!(cfg.r_max >= 50.0)) fail(ErrorKind::InvalidConfig, "r_max must be at least 50");
  if (!(cfg.tol >= 1e-12 && cfg.tol <= 1e-4))
    fail(ErrorKind::InvalidConfig, "integrator tolerance must lie in [1e-12, 1e-4]");
  if (!(cfg.rel_tol >= 100.0 * cfg.tol))
    fail(ErrorKind::InvalidConfig, "bisection rel_tol must be at least 100 x integrator tol");
  if (!(cfg.growth > 1.0)) fail(ErrorKind::InvalidConfig, "growth factor must exceed 1");
  if (!(cfg.fate_radius >= cfg.r_max)) fail(ErrorKind::InvalidConfig, "fate_radius < r_max");
  if (cfg.b_seed && !std::isfinite(*cfg.b_seed)) fail(ErrorKind::InvalidConfig, "b_seed not finite");
}

const char* to_string(Fate f) { return f == Fate::Extinct ? "Extinct" : "Survives"; }

Fate classify(const ode::Trajectory& traj) {
  switch (traj.termination.kind) {
    case ode::TerminationKind::Extinct: return Fate::Extinct;
    case ode::TerminationKind::StepFailure: {
      std::ostringstream os;
      os << "step-size collapse at r = " << traj.termination.r;
      fail(ErrorKind::UnclassifiableTrajectory, os.str());
    }
    default: return Fate::Survives;
  }
}

bool extinction_certified(const ode::RadialState& s) { return s.v < 0.0; }

bool survival_certified(const ode::RadialState& s, const Parameters& params) {
  // With v >= v_min on [R, ∞) one has u(τ) >= U + c (τ-R)², c = v_min/(2N),
  // which bounds the total future drop of v by
  //   R·|v'(R)|/(N-2) + ∫_R^∞ τ u^(-p) dτ / (N-2).
  // If that leaves v above v_min the assumption is self-consistent.
  if (!(s.u > 0.0 && s.du >= 0.0 && s.v > 0.0)) return false;
  const double N = params.N, p = params.p, R = s.r, U = s.u;
  const double v_min = 0.5 * s.v;
  const double c = v_min / (2.0 * N);
  const double i0 = std::pow(U, -p) * std::sqrt(U / c) * std::sqrt(M_PI) *
                    std::tgamma(p - 0.5) / (2.0 * std::tgamma(p));
  const double i1 = std::pow(U, 1.0 - p) / (2.0 * c * (p - 1.0));
  const double drop = (R * i0 + i1) / (N - 2.0);
  const double lower = s.v + R * std::min(s.dv, 0.0) / (N - 2.0) - drop;
  return std::isfinite(lower) && lower > v_min;
}

FateResult resolve_fate(const ode::Trajectory& traj, const ShootingConfig& cfg) {
  const Parameters& P = traj.ivp.params;
  const Fate first = classify(traj);
  if (first == Fate::Extinct) return {Fate::Extinct, traj.termination.r, traj.termination.kind};
  if (traj.termination.kind == ode::TerminationKind::Overflow)
    return {Fate::Survives, traj.termination.r, traj.termination.kind};

  const ode::RadialState& end = traj.back();
  if (extinction_certified(end)) return {Fate::Extinct, end.r, ode::TerminationKind::Stopped};
  if (survival_certified(end, P)) return {Fate::Survives, end.r, ode::TerminationKind::Stopped};

  ode::IntegrateOptions opts;
  opts.keep_steps = false;
  opts.stop_when = [&P](const ode::RadialState& s) {
    return extinction_certified(s) || survival_certified(s, P);
  };
  const ode::Trajectory tail = ode::integrate_from(end, P, cfg.fate_radius, cfg.tol, opts);
  const ode::RadialState& last = tail.back();
  switch (tail.termination.kind) {
    case ode::TerminationKind::Extinct:
      return {Fate::Extinct, tail.termination.r, tail.termination.kind};
    case ode::TerminationKind::Stopped:
      return {extinction_certified(last) ? Fate::Extinct : Fate::Survives, last.r,
              tail.termination.kind};
    case ode::TerminationKind::Overflow:
      return {Fate::Survives, tail.termination.r, tail.termination.kind};
    case ode::TerminationKind::StepFailure:
      classify(tail);  // throws
      break;
    case ode::TerminationKind::ReachedRmax:
      break;
  }
  // Still shadowing the singular solution at fate_radius: side of L r^α.
  const DerivedConstants dc = derive_constants(P);
  const double ratio = last.u * std::pow(last.r, -dc.alpha) / dc.L;
  return {ratio >= 1.0 ? Fate::Survives : Fate::Extinct, last.r, tail.termination.kind};
}

Shot shoot_once(double a, double b, const Parameters& params, const ShootingConfig& cfg) {
  Shot s;
  // Stopping as soon as Δu < 0 also keeps the integrator away from the
  // touchdown singularity, which is severe for large p.
  ode::IntegrateOptions opts;
  opts.stop_when = extinction_certified;
  s.traj = ode::integrate(ode::IVP{a, b, params}, cfg.r_max, cfg.tol, opts);
  try {
    s.fate = resolve_fate(s.traj, cfg);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnclassifiableTrajectory) throw;
    std::ostringstream os;
    os.precision(17);
    os << e.what() << " (a = " << a << ", b = " << b << ")";
    fail(e.kind(), os.str());
  }
  return s;
}

double ShootingResult::relative_width() const {
  return (b_hi - b_lo) / std::max(std::abs(b_hi), 1.0);
}

ShootingResult find_b_tilde(double a, const Parameters& params, const ShootingConfig& cfg) {
  validate(cfg);
  require_admissible(params);
  if (!(a > 0.0 && std::isfinite(a))) fail(ErrorKind::DomainError, "a must be positive");
  const DerivedConstants dc = derive_constants(params);

  int evaluations = 0;
  auto run = [&](double b) {
    ++evaluations;
    return shoot_once(a, b, params, cfg);
  };

  const double seed = cfg.b_seed.value_or(std::pow(a, (dc.alpha - 2.0) / dc.alpha));
  double b_lo = 0.0, b_hi = 0.0;
  Shot hi_shot;

  Shot s = run(seed);
  if (s.fate.fate == Fate::Survives) {
    b_hi = seed;
    hi_shot = std::move(s);
    // Walk down: geometric toward 0, then 0, then geometric into negatives.
    bool found = false;
    double b = seed;
    if (seed > 0.0) {
      for (int i = 0; i < 60 && !found; ++i) {
        b /= cfg.growth;
        Shot t = run(b);
        if (t.fate.fate == Fate::Extinct) {
          b_lo = b;
          found = true;
        } else {
          b_hi = b;
          hi_shot = std::move(t);
        }
      }
      if (!found) {
        Shot t = run(0.0);
        if (t.fate.fate == Fate::Extinct) {
          b_lo = 0.0;
          found = true;
        } else {
          b_hi = 0.0;
          hi_shot = std::move(t);
        }
      }
    }
    b = std::min(seed, -std::abs(seed));
    if (b == 0.0) b = -1.0;
    while (!found && b >= -cfg.b_cap) {
      Shot t = run(b);
      if (t.fate.fate == Fate::Extinct) {
        b_lo = b;
        found = true;
      } else {
        b_hi = b;
        hi_shot = std::move(t);
        b *= cfg.growth;
      }
    }
    if (!found) fail(ErrorKind::BracketFailure, "no extinct trajectory above -b_cap");
  } else {
    b_lo = seed;
    double b = seed > 0.0 ? seed : 1.0;
    bool found = false;
    while (!found && b <= cfg.b_cap) {
      if (b > b_lo) {
        Shot t = run(b);
        if (t.fate.fate == Fate::Survives) {
          b_hi = b;
          hi_shot = std::move(t);
          found = true;
          break;
        }
        b_lo = b;
      }
      b *= cfg.growth;
    }
    if (!found) fail(ErrorKind::BracketFailure, "no surviving trajectory below b_cap");
  }

  while ((b_hi - b_lo) / std::max(std::abs(b_hi), 1.0) > cfg.rel_tol) {
    const double mid = 0.5 * (b_lo + b_hi);
    if (mid <= b_lo || mid >= b_hi) break;  // bracket at machine resolution
    Shot t = run(mid);
    if (t.fate.fate == Fate::Extinct) {
      b_lo = mid;
    } else {
      b_hi = mid;
      hi_shot = std::move(t);
    }
  }

  ShootingResult res;
  res.a = a;
  res.params = params;
  res.config = cfg;
  res.b_lo = b_lo;
  res.b_hi = b_hi;
  res.b_tilde_est = 0.5 * (b_lo + b_hi);
  res.minimal_traj = std::move(hi_shot.traj);
  const ode::RadialState& end = res.minimal_traj.back();
  res.diagnostics.ratio_at_rmax = end.u * std::pow(end.r, -dc.alpha) / dc.L;
  res.diagnostics.v_at_rmax = end.v;
  res.diagnostics.evaluations = evaluations;
  res.diagnostics.fate_radius_hi = hi_shot.fate.r_decided;
  return res;
}

ode::Trajectory nonminimal_solution(double a, double b, const Parameters& params,
                                    const ShootingConfig& cfg) {
  validate(cfg);
  require_admissible(params);
  if (!(a > 0.0 && std::isfinite(a))) fail(ErrorKind::DomainError, "a must be positive");
  Shot s = shoot_once(a, b, params, cfg);
  if (s.fate.fate == Fate::Extinct) {
    std::ostringstream os;
    os.precision(17);
    os << "b = " << b << " is not above the critical value: extinction at r = "
       << s.fate.r_decided;
    fail(ErrorKind::NotAboveCritical, os.str());
  }
  return std::move(s.traj);
}

}  // namespace brl::shoot
