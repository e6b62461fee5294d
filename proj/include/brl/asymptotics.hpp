#pragma once

// Asymptotic diagnostics for radial trajectories: the Kelvin-type profile
// r^(-α)u - L, the Emden–Fowler variable m(t) = e^(-αt)u(e^t) - L and the
// residual of its fourth-order equation, log-log decay fits, and the
// quadratic-growth constants of non-minimal solutions.

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "brl/parallel.hpp"
#include "brl/params.hpp"
#include "brl/radial_ode.hpp"
#include "brl/shooting.hpp"

namespace brl::asym {

struct Sample {
  double x = 0.0;
  double value = 0.0;
};
using Series = std::vector<Sample>;

// (s = 1/r, r^(-α)u - L), increasing s.
Series kelvin_profile(const ode::Trajectory& traj, const DerivedConstants& dc);

// (t = ln r, e^(-αt)u(e^t) - L), increasing t.
Series ef_transform(const ode::Trajectory& traj, double alpha);

// m on n uniformly spaced t in [t_lo, t_hi], interpolated from the trajectory.
Series ef_uniform(const ode::Trajectory& traj, double t_lo, double t_hi, int n = 65);

// (m, m', m'', m''') at the state's radius.
std::array<double, 4> ef_state(const ode::RadialState& s, const Parameters& params,
                                const DerivedConstants& dc);

// g(m) = (m+L)^(-p) - L^(-p) + p L^(-(p+1)) m, evaluated without cancellation.
double ef_nonlinearity(double m, const Parameters& params, const DerivedConstants& dc);

// Relative residual of m'''' + c3 m''' + c2 m'' + c1 m' + c0 m + g(m) = 0 (the
// linear part is the mean characteristic quartic): rms of the residual over
// rms of the largest single term, using 9-point central differences. Input
// that is not uniformly spaced is resampled to 65 points by cubic
// interpolation first.
double ef_residual(const Series& m_samples, const Parameters& params);

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct RateFit {
  double exponent = 0.0;
  double log_amplitude = 0.0;
  double rms_residual = 0.0;
  FitWindow window;
  int n_points = 0;
  bool oscillatory = false;
};

inline constexpr int kMinFitPoints = 8;
inline constexpr int kMinEnvelopeExtrema = 4;

// Least squares for log|value| = log_amplitude + exponent·log x over samples
// with x in the window. With envelope = true only local maxima of |value| are
// used (location refined by a parabola through log|value|).
RateFit fit_decay_exponent(const Series& samples, FitWindow window, bool envelope);

enum class RemainderBranch { Complex, RealBound, RealBeta3, RealBeta3Unlisted };

const char* to_string(RemainderBranch b);

struct RemainderPrediction {
  double exponent = 0.0;  // u - L r^α = O(r^exponent)
  RemainderBranch branch = RemainderBranch::Complex;
};

RemainderPrediction predicted_minimal_remainder(const Parameters& params,
                                                const DerivedConstants& dc);

struct TailOptions {
  double handoff_level = 1e-2;  // max |m^(j)| / L at the handoff
  double t_span = 24.0;         // length of the continued tail in t
  double t_skip = 4.0;          // transient discarded before fitting
  double dt_out = 0.01;
  double tol = 1e-11;
};

struct MinimalTail {
  double t_handoff = 0.0;
  // (r, u - L r^α) on the continued tail, scaled by 1/value_scale so that
  // the largest magnitude is 1.
  Series remainder;
  double log_value_scale = 0.0;
};

// Continues the minimal proxy in Emden–Fowler variables past the point where
// it is closest to L r^α, removing the single growing mode β1 after every unit
// of t. Without that, the residual shooting error grows like r^β1 and swamps
// the decaying remainder long before its rate is measurable.
MinimalTail minimal_tail(const ode::Trajectory& traj, const TailOptions& opts = {});

struct MinimalRates {
  RemainderPrediction predicted;
  RateFit fitted;
  MinimalTail tail;
};

MinimalRates minimal_rates(const shoot::ShootingResult& res, const TailOptions& opts = {});

struct NonminimalDiagnostics {
  double d_from_laplacian = 0.0;
  double d_from_quadratic = 0.0;
  double kappa_predicted = 0.0;
  bool log_correction = false;
  RateFit kappa_fitted;  // fit of |r^(-2)u - d/(2N)| against r; κ ≈ -exponent
  Series rho;            // the fitted series over the whole trajectory
};

double kappa_predicted(const Parameters& params);
bool kappa_log_correction(const Parameters& params);

NonminimalDiagnostics nonminimal_diagnostics(const ode::Trajectory& traj,
                                             const Parameters& params);

struct DPoint {
  double b = 0.0;
  double d = 0.0;
};

std::vector<DPoint> d_monotonicity_scan(double a, const Parameters& params,
                                        const std::vector<double>& b_values,
                                        const shoot::ShootingConfig& cfg = {},
                                        Execution exec = Execution::Parallel);

// Header x,value; 17 significant digits.
void write_csv(std::ostream& os, const Series& series);

}  // namespace brl::asym
