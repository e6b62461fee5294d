#pragma once

// Spectrum of the Laplace–Beltrami operator on S^(N-1): λ_k = k(N+k-2) with
// multiplicity m_k. Δ² on the sphere shares eigenfunctions, with eigenvalue λ_k².

#include <cstdint>

namespace brl::spectra {

struct SphereMode {
  int k = 0;
  double lambda = 0.0;
  std::uint64_t multiplicity = 1;
};

// Exact λ_k as an integer; DomainError for k < 0 or N < 3.
std::int64_t eigenvalue_exact(int k, int N);
double eigenvalue(int k, int N);

// (N-2+2k)(N-3+k)! / (k!(N-2)!), exact. Overflow when it does not fit 64 bits.
std::uint64_t multiplicity(int k, int N);

double bilap_eigenvalue(int k, int N);

SphereMode mode(int k, int N);

}  // namespace brl::spectra
