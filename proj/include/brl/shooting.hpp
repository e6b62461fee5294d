#pragma once

// Critical shooting parameter b̃(a): the value of Δu(0) separating solutions
// that touch zero at finite radius from those that grow quadratically. The
// survivor end of the final bracket is the minimal-solution proxy.

#include <optional>

#include "brl/params.hpp"
#include "brl/radial_ode.hpp"

namespace brl::shoot {

struct ShootingConfig {
  double r_max = 500.0;
  double tol = 1e-10;      // integrator
  double rel_tol = 1e-8;   // bracket width relative to max(|b_hi|, 1)
  std::optional<double> b_seed;  // defaults to a^((α-2)/α)
  double growth = 2.0;
  // Trajectories that are still undecided at r_max are continued up to this
  // radius until extinction or a survival certificate settles their fate.
  double fate_radius = 1e12;
  double b_cap = 1e12;
};

// Throws InvalidConfig on r_max < 50, rel_tol < 100·tol, growth <= 1.
void validate(const ShootingConfig& cfg);

enum class Fate { Extinct, Survives };

const char* to_string(Fate f);

// Classification of a single trajectory from its termination alone: Extinct
// iff it terminated Extinct; ReachedRmax, Stopped and Overflow survive.
// Throws UnclassifiableTrajectory on StepFailure.
Fate classify(const ode::Trajectory& traj);

// Sufficient condition, from the state at one radius, for u to stay positive
// for all larger radii (v stays above v/2 and u grows at least quadratically).
bool survival_certified(const ode::RadialState& s, const Parameters& params);

// Δu < 0 at any radius forces extinction at a finite radius.
bool extinction_certified(const ode::RadialState& s);

struct FateResult {
  Fate fate = Fate::Survives;
  double r_decided = 0.0;
  ode::TerminationKind how = ode::TerminationKind::ReachedRmax;
};

// Continues a trajectory that reached r_max until its fate is certain.
FateResult resolve_fate(const ode::Trajectory& traj, const ShootingConfig& cfg);

struct Shot {
  ode::Trajectory traj;  // integrated to r_max
  FateResult fate;
};

Shot shoot_once(double a, double b, const Parameters& params, const ShootingConfig& cfg);

struct ShootingDiagnostics {
  double ratio_at_rmax = 0.0;  // r^(-α) u / L at r_max on the b_hi trajectory
  double v_at_rmax = 0.0;
  int evaluations = 0;
  double fate_radius_hi = 0.0;  // radius at which the b_hi fate was certified
};

struct ShootingResult {
  double a = 0.0;
  Parameters params;
  ShootingConfig config;
  double b_lo = 0.0;
  double b_hi = 0.0;
  double b_tilde_est = 0.0;
  ode::Trajectory minimal_traj;
  ShootingDiagnostics diagnostics;

  double relative_width() const;
};

ShootingResult find_b_tilde(double a, const Parameters& params, const ShootingConfig& cfg = {});

// Entire non-minimal solution for b > b̃(a), integrated to cfg.r_max.
// Throws NotAboveCritical if the trajectory is (or will become) extinct.
ode::Trajectory nonminimal_solution(double a, double b, const Parameters& params,
                                    const ShootingConfig& cfg = {});

}  // namespace brl::shoot
