#include "brl/radial_ode.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "brl/errors.hpp"

namespace brl::ode {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 4>;  // u, u', v, v'

const char* to_string(TerminationKind k) {
  switch (k) {
    case TerminationKind::ReachedRmax: return "ReachedRmax";
    case TerminationKind::Extinct: return "Extinct";
    case TerminationKind::Overflow: return "Overflow";
    case TerminationKind::StepFailure: return "StepFailure";
    case TerminationKind::Stopped: return "Stopped";
  }
  return "?";
}

namespace {

RadialState to_radial(double r, const State& x) { return {r, x[0], x[1], x[2], x[3]}; }

struct System {
  double p;
  double n1;         // N - 1
  double min_base;   // u is clamped here inside u^(-p); only trial stages reach it

  void operator()(const State& x, State& dxdt, double r) const {
    const double f = std::pow(std::max(x[0], min_base), -p);
    dxdt[0] = x[1];
    dxdt[1] = x[2] - n1 / r * x[1];
    dxdt[2] = x[3];
    dxdt[3] = -f - n1 / r * x[3];
  }
};

// (y, y', y'') at both ends of [0, h] -> value and first derivative at s.
std::pair<double, double> hermite5(double h, double s, double y0, double d0, double c0,
                                   double y1, double d1, double c1) {
  const double t = s / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double H2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double H3 = 10 * t3 - 15 * t4 + 6 * t5;
  const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double H5 = 0.5 * (t3 - 2 * t4 + t5);
  const double D0 = -30 * t2 + 60 * t3 - 30 * t4;
  const double D1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double D2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
  const double D3 = -D0;
  const double D4 = -12 * t2 + 28 * t3 - 15 * t4;
  const double D5 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
  const double value =
      H0 * y0 + H1 * h * d0 + H2 * h * h * c0 + H3 * y1 + H4 * h * d1 + H5 * h * h * c1;
  const double slope =
      (D0 * y0 + D1 * h * d0 + D2 * h * h * c0 + D3 * y1 + D4 * h * d1 + D5 * h * h * c1) / h;
  return {value, slope};
}

// Second derivatives of (u, du, v, dv) from the ODE.
RadialState second_derivative(const RadialState& s, const Parameters& params) {
  const RadialState d = derivative(s, params);
  const double n1 = params.N - 1.0;
  const double r = s.r;
  RadialState c;
  c.r = s.r;
  c.u = d.du;
  c.du = s.dv + n1 / (r * r) * s.du - n1 / r * d.du;
  c.v = d.dv;
  c.dv = params.p * std::pow(s.u, -params.p - 1.0) * s.du + n1 / (r * r) * s.dv - n1 / r * d.dv;
  return c;
}

}  // namespace

RadialState derivative(const RadialState& s, const Parameters& params) {
  const double n1 = params.N - 1.0;
  RadialState d;
  d.r = s.r;
  d.u = s.du;
  d.du = s.v - n1 / s.r * s.du;
  d.v = s.dv;
  d.dv = -std::pow(s.u, -params.p) - n1 / s.r * s.dv;
  return d;
}

RadialState Trajectory::at(double r) const {
  if (samples.empty()) fail(ErrorKind::InvalidTrajectory, "empty trajectory");
  if (r < samples.front().r || r > samples.back().r)
    fail(ErrorKind::DomainError, "radius outside the trajectory range");
  auto it = std::lower_bound(samples.begin(), samples.end(), r,
                             [](const RadialState& s, double x) { return s.r < x; });
  if (it->r == r) return *it;
  const RadialState& s1 = *it;
  const RadialState& s0 = *(it - 1);
  const Parameters& P = ivp.params;
  const RadialState d0 = derivative(s0, P), d1 = derivative(s1, P);
  const RadialState c0 = second_derivative(s0, P), c1 = second_derivative(s1, P);
  const double h = s1.r - s0.r;
  const double x = r - s0.r;
  RadialState out;
  out.r = r;
  out.u = hermite5(h, x, s0.u, d0.u, c0.u, s1.u, d1.u, c1.u).first;
  out.du = hermite5(h, x, s0.du, d0.du, c0.du, s1.du, d1.du, c1.du).first;
  out.v = hermite5(h, x, s0.v, d0.v, c0.v, s1.v, d1.v, c1.v).first;
  out.dv = hermite5(h, x, s0.dv, d0.dv, c0.dv, s1.dv, d1.dv, c1.dv).first;
  return out;
}

bool Trajectory::positive() const {
  return std::all_of(samples.begin(), samples.end(), [](const RadialState& s) { return s.u > 0; });
}

RadialState taylor_start(const IVP& ivp, double r0) {
  if (!(r0 > 0.0 && r0 <= kDefaultHandoff))
    fail(ErrorKind::DomainError, "Taylor handoff radius must lie in (0, 1e-3]");
  if (!(ivp.a > 0.0)) fail(ErrorKind::DomainError, "u(0) = a must be positive");
  const double N = ivp.params.N;
  const double f0 = std::pow(ivp.a, -ivp.params.p);
  const double c2 = ivp.b / (2.0 * N);
  const double c4 = -f0 / (8.0 * N * (N + 2.0));
  const double r2 = r0 * r0;
  RadialState s;
  s.r = r0;
  s.u = ivp.a + c2 * r2 + c4 * r2 * r2;
  s.du = 2.0 * c2 * r0 + 4.0 * c4 * r2 * r0;
  s.v = ivp.b - f0 / (2.0 * N) * r2;
  s.dv = -f0 / N * r0;
  return s;
}

namespace {

Trajectory run(const IVP& ivp, const RadialState& start, double r_max, double tol,
               const IntegrateOptions& opts) {
  if (!(tol >= 1e-12 && tol <= 1e-4))
    fail(ErrorKind::DomainError, "integrator tolerance must lie in [1e-12, 1e-4]");
  if (!(r_max > start.r)) fail(ErrorKind::DomainError, "r_max must exceed the start radius");

  const double floor = kExtinctionFloor * ivp.a;
  const System sys{ivp.params.p, ivp.params.N - 1.0, 0.5 * floor};
  auto stepper = odeint::make_dense_output(tol * std::max(1.0, ivp.a), tol,
                                           odeint::runge_kutta_dopri5<State>());

  Trajectory traj;
  traj.ivp = ivp;
  traj.samples.push_back(start);

  std::vector<double> outputs;
  for (double r : opts.output_radii)
    if (r > start.r && r <= r_max) outputs.push_back(r);
  std::sort(outputs.begin(), outputs.end());
  outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());
  std::size_t next_out = 0;

  auto push = [&traj](const RadialState& s) {
    if (s.r > traj.samples.back().r) traj.samples.push_back(s);
  };
  auto finish = [&traj](TerminationKind kind, double r) {
    traj.termination = {kind, r};
    return traj;
  };

  State x{start.u, start.du, start.v, start.dv};
  stepper.initialize(x, start.r, 0.1 * start.r);
  State tmp;

  while (true) {
    double r0 = 0, r1 = 0;
    try {
      std::tie(r0, r1) = stepper.do_step(sys);
    } catch (const std::exception&) {
      return finish(TerminationKind::StepFailure, stepper.current_time());
    }
    const State& x1 = stepper.current_state();
    const bool finite = std::all_of(x1.begin(), x1.end(), [](double z) { return std::isfinite(z); });
    if (!finite) return finish(TerminationKind::StepFailure, r0);

    const double r_end = std::min(r1, r_max);
    State at_end = x1;
    if (r1 > r_max) stepper.calc_state(r_max, at_end);

    // Extinction inside (r0, r_end]: localize u = floor on the dense output.
    if (at_end[0] <= floor) {
      double lo = r0, hi = r_end;
      while (hi - lo > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        stepper.calc_state(mid, tmp);
        (tmp[0] > floor ? lo : hi) = mid;
      }
      for (; next_out < outputs.size() && outputs[next_out] < hi; ++next_out) {
        stepper.calc_state(outputs[next_out], tmp);
        push(to_radial(outputs[next_out], tmp));
      }
      stepper.calc_state(hi, tmp);
      push(to_radial(hi, tmp));
      return finish(TerminationKind::Extinct, hi);
    }

    for (; next_out < outputs.size() && outputs[next_out] <= r_end; ++next_out) {
      stepper.calc_state(outputs[next_out], tmp);
      push(to_radial(outputs[next_out], tmp));
    }
    const RadialState end_state = to_radial(r_end, at_end);
    if (opts.keep_steps || r1 >= r_max) push(end_state);

    if (r1 >= r_max) return finish(TerminationKind::ReachedRmax, r_max);
    if (std::any_of(x1.begin(), x1.end(), [](double z) { return std::abs(z) > kOverflowGuard; })) {
      push(end_state);
      return finish(TerminationKind::Overflow, r1);
    }
    if (opts.stop_when && opts.stop_when(end_state)) {
      push(end_state);
      return finish(TerminationKind::Stopped, r1);
    }
    if (stepper.current_time_step() < 1e-14 * r1) return finish(TerminationKind::StepFailure, r1);
  }
}

}  // namespace

Trajectory integrate(const IVP& ivp, double r_max, double tol, const IntegrateOptions& opts) {
  require_admissible(ivp.params);
  return run(ivp, taylor_start(ivp, opts.r0), r_max, tol, opts);
}

Trajectory integrate_from(const RadialState& start, const Parameters& params, double r_max,
                          double tol, const IntegrateOptions& opts) {
  require_admissible(params);
  if (!(start.r > 0.0 && start.u > 0.0))
    fail(ErrorKind::DomainError, "start state needs r > 0 and u > 0");
  return run(IVP{start.u, start.v, params}, start, r_max, tol, opts);
}

double biharmonic_of_power(double gamma, int N) {
  return gamma * (gamma - 2.0) * (gamma + N - 2.0) * (gamma + N - 4.0);
}

RadialState singular_state(const Parameters& params, double r) {
  const DerivedConstants dc = derive_constants(params);
  const double a = dc.alpha;
  const double N = params.N;
  const double u = dc.L * std::pow(r, a);
  RadialState s;
  s.r = r;
  s.u = u;
  s.du = a * u / r;
  s.v = a * (a + N - 2.0) * u / (r * r);
  s.dv = (a - 2.0) * s.v / r;
  return s;
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  os << "r,u,du,v,dv\n";
  char buf[160];
  for (const auto& s : traj.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.r, s.u, s.du, s.v, s.dv);
    os << buf;
  }
}

}  // namespace brl::ode
