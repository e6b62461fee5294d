#pragma once

// Characteristic quartics of the linearized radial problem: the spherical-mode
// family (index k, with the mean mode at k = 0) and the three integer-root
// families that govern non-minimal solutions. Closed-form roots are checked
// against an independent companion-matrix solver.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "brl/params.hpp"

namespace brl::charpoly {

using cplx = std::complex<double>;

struct Quartic {
  double c4 = 1.0;
  double c3 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  cplx operator()(cplx x) const {
    return (((c4 * x + c3) * x + c2) * x + c1) * x + c0;
  }
  cplx derivative(cplx x) const {
    return ((4.0 * c4 * x + 3.0 * c3) * x + 2.0 * c2) * x + c1;
  }
};

enum class Family { Mode, Mean, NmMode, NmMean, NmTilde };

const char* to_string(Family f);

struct RootSet {
  std::array<cplx, 4> roots{};
  Family family = Family::Mean;
  int index = 0;              // k for Mode, i for NmMode/NmTilde
  std::optional<double> rho;  // ρ_k for the Mode/Mean families
  bool degenerate = false;    // a (near-)double root is present
};

// Roots separated by less than this are flagged degenerate.
inline constexpr double kDegenerateSeparation = 1e-4;

Quartic mode_quartic(const Parameters& params, int k);
Quartic mean_quartic(const Parameters& params);

// β_j^(k), j = 1..4 in that order.
RootSet mode_roots_closed(const Parameters& params, int k);
RootSet mean_roots_closed(const Parameters& params);

// Numeric oracle: companion-matrix eigenvalues polished by Newton steps.
// Throws NumericalFailure if a root misses |q(r)| <= 1e-9·(1+|r|⁴).
RootSet solve_quartic(const Quartic& q);

Quartic nonminimal_quartic(int N, int i, Family family);
RootSet nonminimal_roots_closed(int N, int i, Family family);

// Roots with negative real part, by descending real part.
std::vector<cplx> decaying_exponents(const RootSet& rs);

// Snap tiny imaginary parts (|im| < 1e-10·(1+|re|)) onto the real axis.
cplx snap_real(cplx z);

double scaled_residual(const Quartic& q, cplx root);

struct RootMatch {
  std::array<int, 4> perm{};  // a.roots[i] pairs with b.roots[perm[i]]
  double max_distance = 0.0;
};

// Optimal bijective pairing (brute force over all 24 permutations).
RootMatch match_roots(const RootSet& a, const RootSet& b);

struct ClaimCheck {
  std::string id;
  std::string description;
  bool passed = true;
  bool skipped = false;
  double worst_margin = 0.0;
  int points = 0;
  std::string note;
};

struct ClaimReport {
  Parameters params;
  int k_max = 0;
  std::string grid;
  std::vector<ClaimCheck> checks;

  bool passed() const;
  double worst_margin() const;
};

// Checks the realness, sign and ordering statements for β_j^(k), 1 <= k <= k_max,
// the k = 1 case table, monotonicity in k, and the branch table for β3,4.
ClaimReport verify_claims(const Parameters& params, int k_max);

}  // namespace brl::charpoly
