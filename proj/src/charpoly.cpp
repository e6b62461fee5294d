#include "brl/charpoly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "brl/errors.hpp"
#include "brl/spectra.hpp"

namespace brl::charpoly {

const char* to_string(Family f) {
  switch (f) {
    case Family::Mode: return "Mode";
    case Family::Mean: return "Mean";
    case Family::NmMode: return "NmMode";
    case Family::NmMean: return "NmMean";
    case Family::NmTilde: return "NmTilde";
  }
  return "?";
}

cplx snap_real(cplx z) {
  if (std::abs(z.imag()) < 1e-10 * (1.0 + std::abs(z.real()))) return {z.real(), 0.0};
  return z;
}

double scaled_residual(const Quartic& q, cplx root) {
  const double r = std::abs(root);
  return std::abs(q(root)) / (1.0 + r * r * r * r);
}

Quartic mode_quartic(const Parameters& params, int k) {
  require_admissible(params);
  const double lk = spectra::eigenvalue(k, params.N);
  const double N = params.N;
  const double a = 4.0 / (params.p + 1.0);
  const double K = power_coefficient(params.N, a);  // L^(-(p+1))
  Quartic q;
  q.c3 = 2.0 * (N - 4.0 + 2.0 * a);
  q.c2 = N * N + 6.0 * a * N + 6.0 * a * a - 10.0 * N - 24.0 * a + 20.0 - 2.0 * lk;
  q.c1 = 2.0 * (N - 4.0 + 2.0 * a) * (N * a - N - 4.0 * a + a * a + 2.0 - lk);
  q.c0 = lk * lk - 2.0 * (N * a + a * a - N - 4.0 * a + 4.0) * lk - (params.p + 1.0) * K;
  return q;
}

Quartic mean_quartic(const Parameters& params) {
  require_admissible(params);
  const double N = params.N;
  const double a = 4.0 / (params.p + 1.0);
  const double K = power_coefficient(params.N, a);
  Quartic q;
  q.c3 = 2.0 * (N + 2.0 * a - 4.0);
  q.c2 = N * N + 6.0 * N * a + 6.0 * a * a - 10.0 * N - 24.0 * a + 20.0;
  q.c1 = 2.0 * (N + 2.0 * a - 4.0) * (N * a + a * a - N - 4.0 * a + 2.0);
  q.c0 = -(params.p + 1.0) * K;
  return q;
}

RootSet mode_roots_closed(const Parameters& params, int k) {
  require_admissible(params);
  spectra::eigenvalue_exact(k, params.N);  // domain check
  const double N = params.N;
  const double a = 4.0 / (params.p + 1.0);
  const double rk = rho(params, k);
  const double X = N - 2.0 + 2.0 * k;
  const double centre = 4.0 - N - 2.0 * a;
  const double s_plus = 4.0 + X * X + 4.0 * std::sqrt(rk);
  double s_minus = 4.0 + X * X - 4.0 * std::sqrt(rk);
  // A negative s_minus within rounding of zero is the double root β3 = β4.
  if (s_minus < 0.0 && -s_minus <= 1e-12 * s_plus) s_minus = 0.0;
  const double root_plus = std::sqrt(s_plus);
  const cplx root_minus = std::sqrt(cplx(s_minus, 0.0));

  RootSet rs;
  rs.family = k == 0 ? Family::Mean : Family::Mode;
  rs.index = k;
  rs.rho = rk;
  rs.roots = {cplx(0.5 * (centre + root_plus), 0.0), cplx(0.5 * (centre - root_plus), 0.0),
              snap_real(0.5 * (centre + root_minus)), snap_real(0.5 * (centre - root_minus))};
  rs.degenerate = std::abs(root_minus) < kDegenerateSeparation;
  return rs;
}

RootSet mean_roots_closed(const Parameters& params) { return mode_roots_closed(params, 0); }

namespace {

cplx polish(const Quartic& q, cplx z) {
  for (int it = 0; it < 8; ++it) {
    const cplx d = q.derivative(z);
    if (std::abs(d) == 0.0) break;
    const cplx step = q(z) / d;
    const cplx next = z - step;
    if (std::abs(q(next)) >= std::abs(q(z))) break;
    z = next;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
  }
  return z;
}

constexpr double kDoubleRootSplit = 1e-6;

}  // namespace

RootSet solve_quartic(const Quartic& q) {
  const double vals[] = {q.c4, q.c3, q.c2, q.c1, q.c0};
  for (double v : vals)
    if (!std::isfinite(v)) fail(ErrorKind::NumericalFailure, "quartic has non-finite coefficients");
  if (q.c4 == 0.0) fail(ErrorKind::DomainError, "leading coefficient is zero");

  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  companion(1, 0) = companion(2, 1) = companion(3, 2) = 1.0;
  companion(0, 3) = -q.c0 / q.c4;
  companion(1, 3) = -q.c1 / q.c4;
  companion(2, 3) = -q.c2 / q.c4;
  companion(3, 3) = -q.c3 / q.c4;
  Eigen::EigenSolver<Eigen::Matrix4d> solver(companion, false);
  if (solver.info() != Eigen::Success)
    fail(ErrorKind::NumericalFailure, "companion eigenvalue iteration did not converge");

  RootSet rs;
  for (int i = 0; i < 4; ++i) rs.roots[i] = snap_real(polish(q, solver.eigenvalues()(i)));

  // Real coefficients: make complex roots exact conjugate pairs.
  std::array<bool, 4> used{};
  for (int i = 0; i < 4; ++i) {
    if (used[i] || rs.roots[i].imag() == 0.0) continue;
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 4; ++j) {
      if (j == i || used[j] || rs.roots[j].imag() == 0.0) continue;
      const double d = std::abs(rs.roots[j] - std::conj(rs.roots[i]));
      if (d < best_d) best_d = d, best = j;
    }
    if (best < 0) {
      rs.roots[i] = {rs.roots[i].real(), 0.0};
      continue;
    }
    const double re = 0.5 * (rs.roots[i].real() + rs.roots[best].real());
    const double im = 0.5 * (std::abs(rs.roots[i].imag()) + std::abs(rs.roots[best].imag()));
    rs.roots[i] = {re, im};
    rs.roots[best] = {re, -im};
    used[i] = used[best] = true;
  }
  std::sort(rs.roots.begin(), rs.roots.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
  });

  // A double root comes out of the eigenvalue solver split by ~sqrt(eps),
  // either along the real axis or as a thin conjugate pair. The midpoint is
  // accurate to ~eps and is a simple root of q', so Newton on q' finishes it.
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (!(std::abs(rs.roots[i] - rs.roots[j]) < kDoubleRootSplit * (1.0 + std::abs(rs.roots[i]))))
        continue;
      cplx x = 0.5 * (rs.roots[i] + rs.roots[j]);
      if (std::abs(x.imag()) < kDoubleRootSplit * (1.0 + std::abs(x))) x = {x.real(), 0.0};
      for (int it = 0; it < 5; ++it) {
        const cplx d2 = (12.0 * q.c4 * x + 6.0 * q.c3) * x + 2.0 * q.c2;
        if (d2 == 0.0) break;
        const cplx step = q.derivative(x) / d2;
        if (!(std::abs(step) < kDoubleRootSplit * (1.0 + std::abs(x)))) break;
        x -= step;
      }
      rs.roots[i] = rs.roots[j] = x;
    }

  double min_sep = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) min_sep = std::min(min_sep, std::abs(rs.roots[i] - rs.roots[j]));
  rs.degenerate = min_sep < kDegenerateSeparation;

  const double tol = rs.degenerate ? 1e-6 : 1e-9;
  for (const auto& r : rs.roots) {
    if (!(scaled_residual(q, r) <= tol)) {
      std::ostringstream os;
      os.precision(17);
      os << "quartic root " << r << " has scaled residual " << scaled_residual(q, r);
      fail(ErrorKind::NumericalFailure, os.str());
    }
  }
  return rs;
}

Quartic nonminimal_quartic(int N, int i, Family family) {
  if (N < 3) fail(ErrorKind::DomainError, "N must be >= 3");
  Quartic q;
  const double n = N;
  switch (family) {
    case Family::NmMean:
      q.c3 = 2.0 * n;
      q.c2 = n * n + 2.0 * n - 4.0;
      q.c1 = 2.0 * n * (n - 2.0);
      q.c0 = 0.0;
      return q;
    case Family::NmMode: {
      if (i < 1) fail(ErrorKind::DomainError, "mode index i must be >= 1");
      const double l = spectra::eigenvalue(i, N);
      q.c3 = 2.0 * n;
      q.c2 = n * n + 2.0 * n - 4.0 - 2.0 * l;
      q.c1 = 2.0 * n * (n - 2.0 - l);
      q.c0 = -l * (2.0 * n - l);
      return q;
    }
    case Family::NmTilde: {
      if (i < 1) fail(ErrorKind::DomainError, "mode index i must be >= 1");
      const double l = spectra::eigenvalue(i, N);
      q.c3 = 2.0 * (n - 2.0);
      q.c2 = n * n - 4.0 * n + 2.0 - 2.0 * l;
      q.c1 = -2.0 * (n - 2.0 + (n - 2.0) * l);
      q.c0 = -(n - 1.0) * (n - 3.0) - 2.0 * l + l * l;
      return q;
    }
    default:
      fail(ErrorKind::DomainError, "not a non-minimal family");
  }
}

RootSet nonminimal_roots_closed(int N, int i, Family family) {
  if (N < 3) fail(ErrorKind::DomainError, "N must be >= 3");
  RootSet rs;
  rs.family = family;
  rs.index = family == Family::NmMean ? 0 : i;
  const double n = N;
  switch (family) {
    case Family::NmMean:
      rs.roots = {cplx(0.0), cplx(2.0 - n), cplx(-2.0), cplx(-n)};
      break;
    case Family::NmMode:
    case Family::NmTilde: {
      if (i < 1) fail(ErrorKind::DomainError, "mode index i must be >= 1");
      const double shift = family == Family::NmTilde ? 1.0 : 0.0;
      rs.roots = {cplx(i + shift), cplx(2.0 - n - i + shift), cplx(i - 2.0 + shift),
                  cplx(-n - i + shift)};
      break;
    }
    default:
      fail(ErrorKind::DomainError, "not a non-minimal family");
  }
  // N = 4 (NmMean) and N = 3 (NmMode, i = 1) carry genuine double roots.
  double min_sep = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) min_sep = std::min(min_sep, std::abs(rs.roots[a] - rs.roots[b]));
  rs.degenerate = min_sep < kDegenerateSeparation;
  return rs;
}

std::vector<cplx> decaying_exponents(const RootSet& rs) {
  std::vector<cplx> out;
  for (const auto& r : rs.roots)
    if (r.real() < 0.0) out.push_back(r);
  std::stable_sort(out.begin(), out.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
  });
  return out;
}

RootMatch match_roots(const RootSet& a, const RootSet& b) {
  std::array<int, 4> perm{0, 1, 2, 3};
  RootMatch best;
  best.max_distance = std::numeric_limits<double>::infinity();
  double best_sum = std::numeric_limits<double>::infinity();
  do {
    double mx = 0.0, sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double d = std::abs(a.roots[i] - b.roots[perm[i]]);
      mx = std::max(mx, d);
      sum += d;
    }
    if (mx < best.max_distance || (mx == best.max_distance && sum < best_sum)) {
      best.max_distance = mx;
      best.perm = perm;
      best_sum = sum;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool ClaimReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ClaimCheck& c) { return c.passed; });
}

double ClaimReport::worst_margin() const {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& c : checks)
    if (!c.skipped) w = std::min(w, c.worst_margin);
  return w;
}

namespace {

constexpr double kStrictMargin = 1e-10;

// Accumulates inequality checks for one claim.
class Checker {
 public:
  Checker(std::string id, std::string description) {
    check_.id = std::move(id);
    check_.description = std::move(description);
    check_.worst_margin = std::numeric_limits<double>::infinity();
  }

  void less(double a, double b) { record(b - a, b - a > kStrictMargin); }
  void less_eq(double a, double b) { record(b - a, b - a >= -kStrictMargin); }
  void equal(double a, double b, double tol = 1e-12) {
    record(-std::abs(a - b), std::abs(a - b) <= tol * std::max(1.0, std::abs(b)));
  }
  void holds(bool ok) { record(ok ? 0.0 : -1.0, ok); }
  void note(const std::string& n) { check_.note = n; }

  ClaimCheck finish() {
    if (check_.points == 0) {
      check_.skipped = true;
      check_.worst_margin = 0.0;
    }
    return check_;
  }

 private:
  void record(double margin, bool ok) {
    ++check_.points;
    check_.worst_margin = std::min(check_.worst_margin, margin);
    check_.passed = check_.passed && ok;
  }
  ClaimCheck check_;
};

std::array<double, 4> real_parts(const RootSet& rs) {
  return {rs.roots[0].real(), rs.roots[1].real(), rs.roots[2].real(), rs.roots[3].real()};
}

}  // namespace

ClaimReport verify_claims(const Parameters& params, int k_max) {
  require_admissible(params);
  if (k_max < 2) fail(ErrorKind::DomainError, "k_max must be >= 2");
  const int N = params.N;
  const double p = params.p;
  const DerivedConstants dc = derive_constants(params);
  const double alpha = dc.alpha;

  ClaimReport report;
  report.params = params;
  report.k_max = k_max;
  {
    std::ostringstream os;
    os.precision(17);
    os << "N=" << N << ", p=" << p << ", k=1.." << k_max;
    report.grid = os.str();
  }

  std::vector<std::array<double, 4>> beta(k_max + 1);
  std::vector<RootSet> sets(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    sets[k] = mode_roots_closed(params, k);
    beta[k] = real_parts(sets[k]);
  }

  {
    Checker c("real_ordering", "roots real for k>=1 and b2 < b4 <= b3 < b1");
    for (int k = 1; k <= k_max; ++k) {
      const double X = N - 2.0 + 2.0 * k;
      const double scale = 4.0 + X * X;
      const double Tk = scale * scale - 16.0 * rho(params, k);
      c.less_eq(0.0, Tk / (scale * scale));
      for (const auto& r : sets[k].roots) c.holds(r.imag() == 0.0);
      const auto& b = beta[k];
      c.less(b[1], b[3]);
      c.less_eq(b[3], b[2]);
      c.less(b[2], b[0]);
    }
    report.checks.push_back(c.finish());
  }
  {
    Checker c("signs_k_ge_1", "b2 < b4 < 0 < b1 for k>=1");
    for (int k = 1; k <= k_max; ++k) {
      const auto& b = beta[k];
      c.less(b[1], b[3]);
      c.less(b[3], 0.0);
      c.less(0.0, b[0]);
    }
    report.checks.push_back(c.finish());
  }
  {
    Checker c("beta3_positive", "b3 > 0 for k>=2");
    for (int k = 2; k <= k_max; ++k) c.less(0.0, beta[k][2]);
    report.checks.push_back(c.finish());
  }
  {
    Checker c("beta4_below_minus1", "b4 < -1 for k>=2");
    for (int k = 2; k <= k_max; ++k) c.less(beta[k][3], -1.0);
    report.checks.push_back(c.finish());
  }
  {
    Checker c("ordering_k_ge_2", "b2 < b4 < -1 < 0 < b3 < b1 for k>=2");
    for (int k = 2; k <= k_max; ++k) {
      const auto& b = beta[k];
      c.less(b[1], b[3]);
      c.less(b[3], -1.0);
      c.less(0.0, b[2]);
      c.less(b[2], b[0]);
    }
    report.checks.push_back(c.finish());
  }
  {
    Checker c("k1_case_table", "k=1 case table");
    const auto& b = beta[1];
    c.less(b[1], b[3]);
    c.less(0.0, b[0]);
    const bool low_dim = N <= 5;
    const double thr = low_dim ? *dc.p_threshold : 0.0;
    if (!low_dim || p <= thr) {
      c.less_eq(b[3], b[2]);
      c.equal(b[2], -1.0);
      c.equal(b[3], 5.0 - N - 2.0 * alpha);
      c.note(low_dim && p == thr
                 ? "boundary p=(N+2)/(6-N): b3 = b4 = -1, counted in the first case"
                 : "case b4 <= b3 = -1");
    } else if (N == 4 && p == 7.0) {
      c.equal(b[3], -1.0);
      c.equal(b[2], 0.0);
      c.note("case N=4, p=7: b4 = -1 < b3 = 0");
    } else if (N == 4 && p > 7.0) {
      c.equal(b[3], -1.0);
      c.less(0.0, b[2]);
      c.less(b[2], 1.0);
      c.less(b[2], b[0]);
      c.note("case N=4, p>7: b4 = -1 < 0 < b3 < 1");
    } else {
      c.equal(b[3], -1.0);
      c.less(-1.0, b[2]);
      c.less(b[2], 0.0);
      c.equal(b[2], 5.0 - N - 2.0 * alpha);
      c.note("case (N+2)/(6-N) < p < p*: b4 = -1 < b3 < 0 (Thm3 regime)");
    }
    report.checks.push_back(c.finish());
  }
  {
    Checker c("rho1_identity", "sqrt(4+N^2-4 sqrt(rho_1)) = |N-6+2a|");
    const double target = std::abs(N - 6.0 + 2.0 * alpha);
    const double s_minus = 4.0 + double(N) * N - 4.0 * std::sqrt(rho(params, 1));
    // The squared form is well conditioned everywhere; the square root is
    // compared directly away from the double root at target = 0.
    c.equal(s_minus / (4.0 + N * N), target * target / (4.0 + N * N), 1e-12);
    if (target > 1e-3) c.equal(std::sqrt(std::max(0.0, s_minus)), target, 1e-12);
    report.checks.push_back(c.finish());
  }
  {
    Checker c("monotone_in_k", "b2, b4 decrease and b3, b1 increase in k (k>=2)");
    for (int k = 2; k < k_max; ++k) {
      c.less(beta[k + 1][1], beta[k][1]);
      c.less(beta[k + 1][3], beta[k][3]);
      c.less(beta[k][2], beta[k + 1][2]);
      c.less(beta[k][0], beta[k + 1][0]);
    }
    report.checks.push_back(c.finish());
  }
  {
    Checker c("increment_limits", "increments of b2, b4 -> -1 and b3 -> +1 (checked at k_max >= 100)");
    if (k_max >= 100) {
      const auto& hi = beta[k_max];
      const auto& lo = beta[k_max - 1];
      c.less(std::abs(hi[1] - lo[1] + 1.0), 0.05);
      c.less(std::abs(hi[3] - lo[3] + 1.0), 0.05);
      c.less(std::abs(hi[2] - lo[2] - 1.0), 0.05);
    }
    report.checks.push_back(c.finish());
  }
  {
    Checker c("beta_hat", "in the little-o regime b^ = |b3^(1)| = N+2a-5 lies in (0,1)");
    if (classify_theorem_regime(params) == TheoremBranch::LittleOCondition) {
      const double bh = N + 2.0 * alpha - 5.0;
      c.less(0.0, bh);
      c.less(bh, 1.0);
      c.equal(std::abs(beta[1][2]), bh);
    }
    report.checks.push_back(c.finish());
  }
  {
    Checker c("mean_beta12_bounds", "b2 < 2-N-a < -1 < 0 < b1 for the mean mode");
    const auto& b = beta[0];
    c.holds(sets[0].roots[0].imag() == 0.0 && sets[0].roots[1].imag() == 0.0);
    c.less(b[1], 2.0 - N - alpha);
    c.less(2.0 - N - alpha, -1.0);
    c.less(0.0, b[0]);
    report.checks.push_back(c.finish());
  }
  {
    Checker c("beta34_branch", "real/complex branch of b3,4 and position relative to -1");
    const BetaRegime regime = classify_beta_branch(params);
    const bool is_real = regime.branch != BetaBranch::ComplexPair;
    bool expect_real = false;
    bool expect_le_minus1 = false;  // otherwise in (-1, 0)
    if (N == 3) {
      const auto p3 = *dc.p3;
      if (p <= p3[0]) expect_real = true, expect_le_minus1 = true;
      else if (p <= 5.0 / 3.0) expect_le_minus1 = true;
      else if (p < p3[1]) expect_le_minus1 = false;
      else expect_real = true;
    } else if (N == 4) {
      expect_le_minus1 = p <= 3.0;
    } else if (N == 5) {
      if (p <= *dc.p_c) expect_real = true, expect_le_minus1 = true;
      else expect_le_minus1 = p <= 7.0;
    } else if (N <= 12) {
      expect_real = p <= *dc.p_c;
      expect_le_minus1 = true;
    } else {
      expect_real = true;
      expect_le_minus1 = true;
    }
    c.holds(is_real == expect_real);
    const double b3 = beta[0][2];
    const double b4 = beta[0][3];
    const double lead = is_real ? b3 : regime.ell;
    if (is_real) c.less_eq(b4, b3);
    else c.equal(b3, regime.ell, 1e-12);
    if (expect_le_minus1) {
      c.less_eq(lead, -1.0);
    } else {
      c.less(-1.0, lead);
      c.less(lead, 0.0);
    }
    c.note(std::string(is_real ? "real" : "complex") +
           (expect_le_minus1 ? ", leading exponent <= -1" : ", leading exponent in (-1,0)"));
    report.checks.push_back(c.finish());
  }
  return report;
}

}  // namespace brl::charpoly
