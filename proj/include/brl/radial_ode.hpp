#pragma once

// Radial form of -Δ²u = u^(-p) as the first-order system in (u, u', v, v')
// with v = Δu:
//   u'' + (N-1)/r u' = v,   v'' + (N-1)/r v' = -u^(-p),
// started from a Taylor expansion at the origin and advanced with an embedded
// Dormand–Prince 5(4) pair.

#include <functional>
#include <iosfwd>
#include <vector>

#include "brl/params.hpp"

namespace brl::ode {

inline constexpr double kDefaultHandoff = 1e-3;
inline constexpr double kExtinctionFloor = 1e-8;  // times a
inline constexpr double kOverflowGuard = 1e300;

struct IVP {
  double a = 1.0;  // u(0)
  double b = 0.0;  // Δu(0)
  Parameters params;
};

struct RadialState {
  double r = 0.0;
  double u = 0.0;
  double du = 0.0;
  double v = 0.0;   // Δu
  double dv = 0.0;  // (Δu)'
};

enum class TerminationKind { ReachedRmax, Extinct, Overflow, StepFailure, Stopped };

const char* to_string(TerminationKind k);

struct Termination {
  TerminationKind kind = TerminationKind::ReachedRmax;
  double r = 0.0;
};

struct Trajectory {
  IVP ivp;
  std::vector<RadialState> samples;  // strictly increasing r
  Termination termination;

  const RadialState& front() const { return samples.front(); }
  const RadialState& back() const { return samples.back(); }

  // Quintic Hermite interpolation between stored samples, using the ODE for
  // first and second derivatives at the nodes.
  RadialState at(double r) const;

  bool positive() const;
};

// Right-hand side of the system at a state; fields of the result are the
// r-derivatives of (u, du, v, dv).
RadialState derivative(const RadialState& s, const Parameters& params);

RadialState taylor_start(const IVP& ivp, double r0 = kDefaultHandoff);

struct IntegrateOptions {
  double r0 = kDefaultHandoff;
  // Extra radii at which the dense output is sampled exactly.
  std::vector<double> output_radii;
  // Store the state at every accepted step.
  bool keep_steps = true;
  // Checked after every accepted step; returning true ends the integration
  // with TerminationKind::Stopped.
  std::function<bool(const RadialState&)> stop_when;
};

// tol in [1e-12, 1e-4]; absolute tolerance tol·max(1, a), relative tol.
Trajectory integrate(const IVP& ivp, double r_max, double tol,
                     const IntegrateOptions& opts = {});

// Continues from an arbitrary state (r > 0). The stored IVP records a = u and
// b = Δu at the starting radius.
Trajectory integrate_from(const RadialState& start, const Parameters& params, double r_max,
                          double tol, const IntegrateOptions& opts = {});

// c(γ) with Δ²(r^γ) = c(γ) r^(γ-4) in R^N.
double biharmonic_of_power(double gamma, int N);

// State of the singular solution L r^α at radius r.
RadialState singular_state(const Parameters& params, double r);

// Header r,u,du,v,dv; 17 significant digits.
void write_csv(std::ostream& os, const Trajectory& traj);

}  // namespace brl::ode
