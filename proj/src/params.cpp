#include "brl/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "brl/errors.hpp"

namespace brl {

const char* to_string(TheoremBranch b) {
  switch (b) {
    case TheoremBranch::Main: return "Thm1_main";
    case TheoremBranch::EpsCondition: return "Thm2_eps_condition";
    case TheoremBranch::LittleOCondition: return "Thm3_little_o_condition";
  }
  return "?";
}

const char* to_string(BetaBranch b) {
  switch (b) {
    case BetaBranch::RealDistinct: return "RealDistinct";
    case BetaBranch::RealAtMostMinus1: return "RealAtMostMinus1";
    case BetaBranch::ComplexPair: return "ComplexPair";
  }
  return "?";
}

bool admissible(const Parameters& params, double margin) {
  if (!std::isfinite(params.p)) return false;
  if (params.N == 3) return params.p > 1.0 + margin && params.p < 3.0 - margin;
  if (params.N >= 4) return params.p > 1.0 + margin;
  return false;
}

void require_admissible(const Parameters& params) {
  if (params.N < 3) fail(ErrorKind::DomainError, "dimension N must be at least 3");
  if (!admissible(params)) {
    std::ostringstream os;
    os.precision(17);
    os << "parameters (N=" << params.N << ", p=" << params.p
       << ") outside the admissible range (N=3: 1<p<3, N>=4: p>1, margin 1e-6)";
    fail(ErrorKind::InadmissibleParameters, os.str());
  }
}

double power_coefficient(int N, double alpha) {
  return alpha * (2.0 - alpha) * (N - 2.0 + alpha) * (N - 4.0 + alpha);
}

DerivedConstants derive_constants(const Parameters& params) {
  require_admissible(params);
  const int N = params.N;
  DerivedConstants dc;
  dc.alpha = 4.0 / (params.p + 1.0);
  dc.L = std::pow(power_coefficient(N, dc.alpha), -1.0 / (params.p + 1.0));
  if (N >= 3 && N <= 5) {
    dc.p_star = (N == 5) ? std::numeric_limits<double>::infinity()
                         : (N + 3.0) / (5.0 - N);
    dc.p_threshold = (N + 2.0) / (6.0 - N);
  }
  if (N >= 5 && N <= 12) dc.p_c = critical_pc(N);
  if (N == 3) dc.p3 = critical_p3();
  return dc;
}

double rho(const Parameters& params, int k) {
  const double alpha = 4.0 / (params.p + 1.0);
  const double s = params.N - 2.0 + 2.0 * k;
  return s * s + params.p * power_coefficient(params.N, alpha);
}

double hbar(int N, double p) {
  const double a = 4.0 + (N - 2.0) * (N - 2.0);
  return a * a - 16.0 * rho(Parameters{N, p}, 0);
}

double critical_pc(int N) {
  if (N < 5 || N > 12)
    fail(ErrorKind::DomainError, "p_c is defined only for 5 <= N <= 12");
  const double n = N;
  const double h = n * (n - 4.0) / 4.0;
  const double s = std::sqrt(4.0 + n * n - 4.0 * std::sqrt(n * n + h * h));
  return (n + 2.0 - s) / (6.0 - n + s);
}

std::array<double, 4> critical_p3() {
  const double s = std::sqrt(13.0 - 3.0 * std::sqrt(17.0));
  const double S = std::sqrt(13.0 + 3.0 * std::sqrt(17.0));
  return {(5.0 - s) / (3.0 + s), (5.0 + s) / (3.0 - s), (5.0 + S) / (3.0 - S),
          (5.0 - S) / (3.0 + S)};
}

TheoremBranch classify_theorem_regime(const Parameters& params) {
  require_admissible(params);
  const int N = params.N;
  const double p = params.p;
  if (N == 4 && p == 7.0) return TheoremBranch::EpsCondition;
  if (N >= 3 && N <= 5) {
    const double lo = (N + 2.0) / (6.0 - N);
    const double hi = (N == 5) ? std::numeric_limits<double>::infinity()
                               : (N + 3.0) / (5.0 - N);
    if (p > lo && p < hi) return TheoremBranch::LittleOCondition;
  }
  return TheoremBranch::Main;
}

BetaRegime classify_beta_branch(const Parameters& params) {
  require_admissible(params);
  const int N = params.N;
  const double alpha = 4.0 / (params.p + 1.0);
  const double r0 = rho(params, 0);
  const double a = 4.0 + (N - 2.0) * (N - 2.0);
  const double h = a * a - 16.0 * r0;
  BetaRegime out;
  // ĥ within rounding of zero is a double root, which is real.
  if (h >= -1e-12 * a * a) {
    const double beta3 =
        0.5 * (4.0 - N - 2.0 * alpha +
               std::sqrt(std::max(0.0, a - 4.0 * std::sqrt(r0))));
    out.branch = beta3 <= -1.0 ? BetaBranch::RealAtMostMinus1
                               : BetaBranch::RealDistinct;
    return out;
  }
  out.branch = BetaBranch::ComplexPair;
  out.ell = 2.0 - alpha - N / 2.0;
  out.q = 0.5 * std::sqrt(4.0 * std::sqrt(r0) - a);
  return out;
}

double bisect_hbar_zero(int N, double lo, double hi, double xtol) {
  double flo = hbar(N, lo);
  const double fhi = hbar(N, hi);
  if ((flo > 0) == (fhi > 0))
    fail(ErrorKind::DomainError, "ĥ does not change sign on the bracket");
  while (hi - lo > xtol * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    const double fm = hbar(N, mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace brl
