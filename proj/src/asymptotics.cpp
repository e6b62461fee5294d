#include "brl/asymptotics.hpp"

#include <algorithm>
#include <boost/math/interpolators/makima.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "brl/charpoly.hpp"
#include "brl/errors.hpp"

namespace brl::asym {

namespace {

void require_positive(const ode::Trajectory& traj) {
  if (traj.samples.empty()) fail(ErrorKind::InvalidTrajectory, "empty trajectory");
  if (traj.termination.kind == ode::TerminationKind::Extinct ||
      traj.termination.kind == ode::TerminationKind::StepFailure)
    fail(ErrorKind::InvalidTrajectory, "trajectory does not survive");
  if (!traj.positive()) fail(ErrorKind::InvalidTrajectory, "u is not positive along the trajectory");
  if (!(traj.front().r > 0.0)) fail(ErrorKind::InvalidTrajectory, "samples must have r > 0");
}

// 9-point central differences, orders 1..4.
constexpr std::array<double, 9> kD1 = {1.0 / 280, -4.0 / 105, 1.0 / 5,  -4.0 / 5, 0.0,
                                       4.0 / 5,   -1.0 / 5,   4.0 / 105, -1.0 / 280};
constexpr std::array<double, 9> kD2 = {-1.0 / 560, 8.0 / 315, -1.0 / 5,  8.0 / 5,   -205.0 / 72,
                                       8.0 / 5,    -1.0 / 5,  8.0 / 315, -1.0 / 560};
constexpr std::array<double, 9> kD3 = {-7.0 / 240, 3.0 / 10,   -169.0 / 120, 61.0 / 30, 0.0,
                                       -61.0 / 30, 169.0 / 120, -3.0 / 10,   7.0 / 240};
constexpr std::array<double, 9> kD4 = {7.0 / 240,    -2.0 / 5, 169.0 / 60, -122.0 / 15, 91.0 / 8,
                                       -122.0 / 15, 169.0 / 60, -2.0 / 5,  7.0 / 240};

double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return v.empty() ? 0.0 : std::sqrt(s / v.size());
}

}  // namespace

Series kelvin_profile(const ode::Trajectory& traj, const DerivedConstants& dc) {
  require_positive(traj);
  Series out;
  out.reserve(traj.samples.size());
  for (auto it = traj.samples.rbegin(); it != traj.samples.rend(); ++it)
    out.push_back({1.0 / it->r, it->u * std::pow(it->r, -dc.alpha) - dc.L});
  return out;
}

Series ef_transform(const ode::Trajectory& traj, double alpha) {
  require_positive(traj);
  const double L = derive_constants(traj.ivp.params).L;
  Series out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    const double t = std::log(s.r);
    out.push_back({t, std::exp(-alpha * t) * s.u - L});
  }
  return out;
}

Series ef_uniform(const ode::Trajectory& traj, double t_lo, double t_hi, int n) {
  require_positive(traj);
  if (n < 9) fail(ErrorKind::InsufficientSamples, "at least 9 samples are needed");
  if (!(t_lo < t_hi) || std::exp(t_lo) < traj.front().r || std::exp(t_hi) > traj.back().r)
    fail(ErrorKind::DomainError, "t window outside the trajectory range");
  const DerivedConstants dc = derive_constants(traj.ivp.params);
  Series out(n);
  const double h = (t_hi - t_lo) / (n - 1);
  for (int j = 0; j < n; ++j) {
    const double t = j + 1 == n ? t_hi : t_lo + j * h;
    const double r = std::clamp(std::exp(t), traj.front().r, traj.back().r);
    out[j] = {t, std::exp(-dc.alpha * t) * traj.at(r).u - dc.L};
  }
  return out;
}

std::array<double, 4> ef_state(const ode::RadialState& s, const Parameters& params,
                               const DerivedConstants& dc) {
  const double r = s.r, n1 = params.N - 1.0, a = dc.alpha;
  const double d2u = s.v - n1 / r * s.du;
  const double d3u = s.dv - n1 / r * d2u + n1 / (r * r) * s.du;
  // D = r d/dr applied to u, then (D - α)^j expanded binomially.
  const double D0 = s.u;
  const double D1 = r * s.du;
  const double D2 = r * s.du + r * r * d2u;
  const double D3 = r * s.du + 3.0 * r * r * d2u + r * r * r * d3u;
  const double scale = std::pow(r, -a);
  return {scale * D0 - dc.L, scale * (D1 - a * D0), scale * (D2 - 2.0 * a * D1 + a * a * D0),
          scale * (D3 - 3.0 * a * D2 + 3.0 * a * a * D1 - a * a * a * D0)};
}

double ef_nonlinearity(double m, const Parameters& params, const DerivedConstants& dc) {
  const double p = params.p;
  const double x = m / dc.L;
  const double lp = std::pow(dc.L, -p);
  if (std::abs(x) < 1e-2) {
    // (1+x)^(-p) - 1 + p x = Σ_{k>=2} C(-p, k) x^k
    double coef = -p, term = x, sum = 0.0;
    for (int k = 2; k <= 10; ++k) {
      coef *= (-p - (k - 1)) / k;
      term *= x;
      sum += coef * term;
    }
    return lp * sum;
  }
  return lp * (std::expm1(-p * std::log1p(x)) + p * x);
}

double ef_residual(const Series& m_samples, const Parameters& params) {
  if (m_samples.size() < 9) fail(ErrorKind::InsufficientSamples, "at least 9 samples are needed");
  const DerivedConstants dc = derive_constants(params);
  const charpoly::Quartic q = charpoly::mean_quartic(params);

  std::vector<double> t, m;
  for (const auto& s : m_samples) {
    t.push_back(s.x);
    m.push_back(s.value);
  }
  const std::size_t n0 = t.size();
  const double h0 = (t.back() - t.front()) / (n0 - 1);
  bool uniform = h0 > 0.0;
  for (std::size_t j = 1; j < n0 && uniform; ++j)
    uniform = std::abs((t[j] - t[j - 1]) - h0) <= 1e-9 * h0;
  if (!uniform) {
    for (std::size_t j = 1; j < n0; ++j)
      if (!(t[j] > t[j - 1])) fail(ErrorKind::DomainError, "t samples must be increasing");
    const double lo = t.front(), hi = t.back();
    using boost::math::interpolators::makima;
    auto spline = makima<std::vector<double>>(std::move(t), std::move(m));
    t.assign(65, 0.0);
    m.assign(65, 0.0);
    for (int j = 0; j < 65; ++j) {
      t[j] = j == 64 ? hi : lo + j * (hi - lo) / 64.0;
      m[j] = spline(t[j]);
    }
  }
  const std::size_t n = t.size();
  const double h = (t.back() - t.front()) / (n - 1);

  std::array<std::vector<double>, 6> terms;
  std::vector<double> residual;
  for (std::size_t j = 4; j + 4 < n; ++j) {
    double d[5] = {m[j], 0, 0, 0, 0};
    for (int k = 0; k < 9; ++k) {
      const double y = m[j + k - 4];
      d[1] += kD1[k] * y;
      d[2] += kD2[k] * y;
      d[3] += kD3[k] * y;
      d[4] += kD4[k] * y;
    }
    d[1] /= h;
    d[2] /= h * h;
    d[3] /= h * h * h;
    d[4] /= h * h * h * h;
    const double parts[6] = {d[4],        q.c3 * d[3], q.c2 * d[2],
                             q.c1 * d[1], q.c0 * d[0], ef_nonlinearity(m[j], params, dc)};
    double sum = 0.0;
    for (int k = 0; k < 6; ++k) {
      terms[k].push_back(parts[k]);
      sum += parts[k];
    }
    residual.push_back(sum);
  }
  double largest = 0.0;
  for (const auto& tv : terms) largest = std::max(largest, rms(tv));
  if (largest == 0.0) return 0.0;
  return rms(residual) / largest;
}

RateFit fit_decay_exponent(const Series& samples, FitWindow window, bool envelope) {
  if (!(window.lo < window.hi)) fail(ErrorKind::DomainError, "fit window must satisfy lo < hi");
  Series in;
  for (const auto& s : samples)
    if (s.x >= window.lo && s.x <= window.hi && s.x > 0.0 && std::isfinite(s.value)) in.push_back(s);
  std::sort(in.begin(), in.end(), [](const Sample& a, const Sample& b) { return a.x < b.x; });

  const auto nonzero = std::count_if(in.begin(), in.end(), [](const Sample& s) { return s.value != 0.0; });
  if (nonzero < kMinFitPoints)
    fail(ErrorKind::InsufficientSamples, "fewer than 8 nonzero samples in the fit window");
  if (std::all_of(in.begin(), in.end(), [](const Sample& s) { return std::abs(s.value) < 1e-14; }))
    fail(ErrorKind::DegenerateFit, "all values in the fit window are below 1e-14");

  bool sign_change = false;
  for (std::size_t i = 1; i < in.size(); ++i)
    if ((in[i].value > 0) != (in[i - 1].value > 0) && in[i].value != 0 && in[i - 1].value != 0)
      sign_change = true;

  std::vector<double> X, Y;
  if (!envelope) {
    for (const auto& s : in)
      if (s.value != 0.0) {
        X.push_back(std::log(s.x));
        Y.push_back(std::log(std::abs(s.value)));
      }
  } else {
    for (std::size_t i = 1; i + 1 < in.size(); ++i) {
      const double a0 = std::abs(in[i - 1].value), a1 = std::abs(in[i].value),
                   a2 = std::abs(in[i + 1].value);
      if (!(a1 >= a0 && a1 > a2) || a0 == 0.0 || a2 == 0.0) continue;
      // Vertex of the parabola through three (log x, log|v|) points.
      const double x0 = std::log(in[i - 1].x), x1 = std::log(in[i].x), x2 = std::log(in[i + 1].x);
      const double y0 = std::log(a0), y1 = std::log(a1), y2 = std::log(a2);
      const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
      const double c2 = (d12 - d01) / (x2 - x0);
      double xv = x1, yv = y1;
      if (c2 < 0.0) {
        const double c1 = d01 - c2 * (x0 + x1);
        xv = std::clamp(-c1 / (2.0 * c2), x0, x2);
        yv = y0 + d01 * (xv - x0) + c2 * (xv - x0) * (xv - x1);
      }
      X.push_back(xv);
      Y.push_back(yv);
    }
    if (static_cast<int>(X.size()) < kMinEnvelopeExtrema)
      fail(ErrorKind::DegenerateFit,
           "oscillatory fit needs at least 4 envelope maxima in the window, found " +
               std::to_string(X.size()));
  }

  const std::size_t n = X.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += X[i];
    my += Y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorKind::DegenerateFit, "fit abscissae coincide");
  RateFit fit;
  fit.exponent = sxy / sxx;
  fit.log_amplitude = my - fit.exponent * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = Y[i] - fit.log_amplitude - fit.exponent * X[i];
    ss += e * e;
  }
  fit.rms_residual = std::sqrt(ss / n);
  fit.window = {in.front().x, in.back().x};
  fit.n_points = static_cast<int>(n);
  fit.oscillatory = envelope && sign_change;
  return fit;
}

const char* to_string(RemainderBranch b) {
  switch (b) {
    case RemainderBranch::Complex: return "Complex";
    case RemainderBranch::RealBound: return "RealBound";
    case RemainderBranch::RealBeta3: return "RealBeta3";
    case RemainderBranch::RealBeta3Unlisted: return "RealBeta3Unlisted";
  }
  return "?";
}

RemainderPrediction predicted_minimal_remainder(const Parameters& params,
                                                const DerivedConstants& dc) {
  require_admissible(params);
  const int N = params.N;
  const double p = params.p;
  const double complex_rate = 2.0 - N / 2.0;
  const double bound_rate = -1.0 + dc.alpha;
  auto beta3_rate = [&] {
    return charpoly::mean_roots_closed(params).roots[2].real() + dc.alpha;
  };
  if (N == 3) {
    const auto p3 = dc.p3.value_or(critical_p3());
    if (p <= p3[0]) return {beta3_rate(), RemainderBranch::RealBeta3Unlisted};
    if (p < p3[1]) return {complex_rate, RemainderBranch::Complex};
    return {beta3_rate(), RemainderBranch::RealBeta3};
  }
  if (N == 4) return {complex_rate, RemainderBranch::Complex};
  if (N <= 12) {
    if (p < critical_pc(N)) return {bound_rate, RemainderBranch::RealBound};
    return {complex_rate, RemainderBranch::Complex};
  }
  return {bound_rate, RemainderBranch::RealBound};
}

namespace {

using EfState = std::array<double, 4>;

struct TailSystem {
  charpoly::Quartic q;
  Parameters params;
  DerivedConstants dc;
  double log_scale;  // y = e^log_scale · ŷ

  void operator()(const EfState& y, EfState& dy, double /*t*/) const {
    dy[0] = y[1];
    dy[1] = y[2];
    dy[2] = y[3];
    double g = 0.0;
    if (log_scale > -700.0) {
      const double s = std::exp(log_scale);
      g = ef_nonlinearity(s * y[0], params, dc) / s;
    }
    dy[3] = -q.c3 * y[3] - q.c2 * y[2] - q.c1 * y[1] - q.c0 * y[0] - g;
  }
};

double norm(const EfState& y) {
  return std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]);
}

}  // namespace

MinimalTail minimal_tail(const ode::Trajectory& traj, const TailOptions& opts) {
  require_positive(traj);
  const Parameters& P = traj.ivp.params;
  const DerivedConstants dc = derive_constants(P);
  const charpoly::Quartic q = charpoly::mean_quartic(P);
  const double beta1 = charpoly::mean_roots_closed(P).roots[0].real();

  // Handoff: first sample (r >= 1) whose Emden–Fowler state is within
  // handoff_level·L of zero; otherwise the closest one.
  const ode::RadialState* start = nullptr;
  const ode::RadialState* best = nullptr;
  double best_level = INFINITY;
  for (const auto& s : traj.samples) {
    if (s.r < 1.0) continue;
    const EfState y = ef_state(s, P, dc);
    double level = 0.0;
    for (double c : y) level = std::max(level, std::abs(c) / dc.L);
    if (level < best_level) {
      best_level = level;
      best = &s;
    }
    if (level < opts.handoff_level) {
      start = &s;
      break;
    }
  }
  if (!start) start = best;
  if (!start || best_level > 0.5)
    fail(ErrorKind::NumericalFailure, "trajectory never approaches the singular solution");

  // Left eigenvector of the companion matrix for β1, from the deflated cubic
  // P(x)/(x - β1) = x³ + w2 x² + w1 x + w0.
  const double w2 = q.c3 + beta1;
  const double w1 = q.c2 + beta1 * w2;
  const double w0 = q.c1 + beta1 * w1;
  const EfState w = {w0, w1, w2, 1.0};
  const EfState v1 = {1.0, beta1, beta1 * beta1, beta1 * beta1 * beta1};
  const double wv = w[0] * v1[0] + w[1] * v1[1] + w[2] * v1[2] + w[3] * v1[3];
  auto deflate = [&](EfState& y) {
    const double c = (w[0] * y[0] + w[1] * y[1] + w[2] * y[2] + w[3] * y[3]) / wv;
    for (int j = 0; j < 4; ++j) y[j] -= c * v1[j];
  };

  MinimalTail tail;
  tail.t_handoff = std::log(start->r);
  EfState y = ef_state(*start, P, dc);
  deflate(y);
  double log_scale = std::log(norm(y));
  for (double& c : y) c /= std::exp(log_scale);

  struct Raw {
    double t, y0, log_s;
  };
  std::vector<Raw> raw;
  namespace odeint = boost::numeric::odeint;
  const double t_end = tail.t_handoff + opts.t_span;
  const int steps_per_chunk = std::max(1, static_cast<int>(std::lround(1.0 / opts.dt_out)));
  const double dt = 1.0 / steps_per_chunk;
  double t = tail.t_handoff;
  raw.push_back({t, y[0], log_scale});
  while (t < t_end - 1e-12) {
    const double t1 = std::min(t + 1.0, t_end);
    TailSystem sys{q, P, dc, log_scale};
    std::vector<double> times;
    for (int j = 0; j <= steps_per_chunk; ++j) times.push_back(std::min(t + j * dt, t1));
    times.erase(std::unique(times.begin(), times.end()), times.end());
    const double ls = log_scale;
    odeint::integrate_times(
        odeint::make_dense_output(opts.tol, opts.tol, odeint::runge_kutta_dopri5<EfState>()), sys,
        y, times.begin(), times.end(), 0.01,
        [&](const EfState& yy, double tt) {
          if (tt > t) raw.push_back({tt, yy[0], ls});
        });
    deflate(y);
    const double nrm = norm(y);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      fail(ErrorKind::NumericalFailure, "tail continuation lost the decaying component");
    log_scale += std::log(nrm);
    for (double& c : y) c /= nrm;
    t = t1;
  }

  // Remainder u - L r^α = r^α m, normalized by its largest magnitude.
  double top = -INFINITY;
  for (const auto& s : raw)
    if (s.y0 != 0.0) top = std::max(top, std::log(std::abs(s.y0)) + s.log_s + dc.alpha * s.t);
  tail.log_value_scale = top;
  tail.remainder.reserve(raw.size());
  for (const auto& s : raw)
    tail.remainder.push_back(
        {std::exp(s.t), s.y0 * std::exp(s.log_s + dc.alpha * s.t - top)});
  return tail;
}

MinimalRates minimal_rates(const shoot::ShootingResult& res, const TailOptions& opts) {
  MinimalRates out;
  const DerivedConstants dc = derive_constants(res.params);
  out.predicted = predicted_minimal_remainder(res.params, dc);
  out.tail = minimal_tail(res.minimal_traj, opts);
  const FitWindow window{std::exp(out.tail.t_handoff + opts.t_skip),
                         std::exp(out.tail.t_handoff + opts.t_span)};
  out.fitted = fit_decay_exponent(out.tail.remainder, window,
                                  out.predicted.branch == RemainderBranch::Complex);
  out.fitted.log_amplitude += out.tail.log_value_scale;
  return out;
}

double kappa_predicted(const Parameters& params) {
  return std::min({2.0, params.N - 2.0, 2.0 * (params.p - 1.0)});
}

bool kappa_log_correction(const Parameters& params) {
  const double eps = 1e-12;
  return std::abs(params.p - params.N / 2.0) < eps ||
         std::abs(std::min(params.N - 2.0, 2.0 * (params.p - 1.0)) - 2.0) < eps;
}

NonminimalDiagnostics nonminimal_diagnostics(const ode::Trajectory& traj,
                                             const Parameters& params) {
  require_positive(traj);
  require_admissible(params);
  const ode::RadialState& end = traj.back();
  NonminimalDiagnostics d;
  d.d_from_laplacian = end.v;
  d.d_from_quadratic = 2.0 * params.N * end.u / (end.r * end.r);
  if (!(d.d_from_laplacian > 0.0))
    fail(ErrorKind::InvalidTrajectory, "Δu does not stay positive: not a non-minimal solution");
  d.kappa_predicted = kappa_predicted(params);
  d.log_correction = kappa_log_correction(params);
  const double shift = d.d_from_laplacian / (2.0 * params.N);
  d.rho.reserve(traj.samples.size());
  for (const auto& s : traj.samples) d.rho.push_back({s.r, s.u / (s.r * s.r) - shift});
  d.kappa_fitted = fit_decay_exponent(d.rho, {end.r / 10.0, end.r}, false);
  return d;
}

std::vector<DPoint> d_monotonicity_scan(double a, const Parameters& params,
                                        const std::vector<double>& b_values,
                                        const shoot::ShootingConfig& cfg, Execution exec) {
  if (!std::is_sorted(b_values.begin(), b_values.end()))
    fail(ErrorKind::DomainError, "b values must be sorted ascending");
  return map_indices(
      b_values.size(),
      [&](std::size_t i) {
        const ode::Trajectory traj = shoot::nonminimal_solution(a, b_values[i], params, cfg);
        return DPoint{b_values[i], traj.back().v};
      },
      exec);
}

void write_csv(std::ostream& os, const Series& series) {
  os << "x,value\n";
  char buf[64];
  for (const auto& s : series) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.x, s.value);
    os << buf;
  }
}

}  // namespace brl::asym
