#pragma once

// Problem parameters (N, p) for -Δ²u = u^(-p) on R^N, the derived constants
// α = 4/(p+1) and L, and the regime classification of (N, p).

#include <array>
#include <optional>

namespace brl {

inline constexpr double kDefaultAdmissibleMargin = 1e-6;

struct Parameters {
  int N = 5;
  double p = 2.0;
};

// Fields that do not apply to the given N are std::nullopt.
struct DerivedConstants {
  double alpha = 0.0;
  double L = 0.0;
  std::optional<double> p_star;       // (N+3)/(5-N), +inf for N = 5; N in {3,4,5}
  std::optional<double> p_threshold;  // (N+2)/(6-N); N in {3,4,5}
  std::optional<double> p_c;          // real/complex switch of β3,4; 5 <= N <= 12
  std::optional<std::array<double, 4>> p3;  // zeros of ĥ(p,3); N = 3 only
};

enum class TheoremBranch { Main, EpsCondition, LittleOCondition };

enum class BetaBranch { RealDistinct, RealAtMostMinus1, ComplexPair };

struct BetaRegime {
  BetaBranch branch = BetaBranch::RealDistinct;
  // Real part and imaginary magnitude of β3,4 when complex.
  double ell = 0.0;
  double q = 0.0;
};

const char* to_string(TheoremBranch b);
const char* to_string(BetaBranch b);

bool admissible(const Parameters& params,
                double margin = kDefaultAdmissibleMargin);

// Throws InadmissibleParameters unless admissible(params).
void require_admissible(const Parameters& params);

// α(2-α)(N-2+α)(N-4+α), i.e. L^(-(p+1)).
double power_coefficient(int N, double alpha);

DerivedConstants derive_constants(const Parameters& params);

// ρ_k = (N-2+2k)² + p·α(2-α)(N-2+α)(N-4+α).
double rho(const Parameters& params, int k);

// ĥ(p,N) = [4+(N-2)²]² - 16ρ_0. β3,4 are real iff ĥ >= 0.
double hbar(int N, double p);

// Closed forms for the zeros of ĥ.
double critical_pc(int N);
std::array<double, 4> critical_p3();

TheoremBranch classify_theorem_regime(const Parameters& params);
BetaRegime classify_beta_branch(const Parameters& params);

// Bisection on the sign of ĥ(·,N) inside [lo, hi]; the endpoints must have
// opposite signs. Used to cross-check the closed-form thresholds.
double bisect_hbar_zero(int N, double lo, double hi, double xtol = 1e-13);

}  // namespace brl
