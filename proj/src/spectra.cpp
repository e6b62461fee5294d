#include "brl/spectra.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "brl/errors.hpp"

namespace brl::spectra {
namespace {

void check_domain(int k, int N) {
  if (k < 0 || N < 3)
    fail(ErrorKind::DomainError, "sphere spectrum needs k >= 0 and N >= 3 (got k=" +
                                     std::to_string(k) + ", N=" + std::to_string(N) + ")");
}

using u128 = unsigned __int128;
constexpr u128 kMax64 = std::numeric_limits<std::uint64_t>::max();

}  // namespace

std::int64_t eigenvalue_exact(int k, int N) {
  check_domain(k, N);
  return static_cast<std::int64_t>(k) * (static_cast<std::int64_t>(N) + k - 2);
}

double eigenvalue(int k, int N) { return static_cast<double>(eigenvalue_exact(k, N)); }

std::uint64_t multiplicity(int k, int N) {
  check_domain(k, N);
  if (k == 0) return 1;
  // C(N-3+k, k) built one factor at a time; every partial product is itself a
  // binomial coefficient, so each division is exact.
  // C(n, j) == C(n, k) with j = min(k, N-3) keeps the partial products monotone.
  const std::uint64_t n = static_cast<std::uint64_t>(N) - 3 + static_cast<std::uint64_t>(k);
  const std::uint64_t j = std::min<std::uint64_t>(k, N - 3);
  u128 c = 1;
  for (std::uint64_t i = 0; i < j; ++i) {
    c = c * (n - i) / (i + 1);
    if (c > kMax64)
      fail(ErrorKind::Overflow, "multiplicity exceeds 64-bit range at k=" + std::to_string(k));
  }
  const u128 m = c * static_cast<u128>(N - 2 + 2 * k) / static_cast<u128>(N - 2);
  if (m > kMax64)
    fail(ErrorKind::Overflow, "multiplicity exceeds 64-bit range at k=" + std::to_string(k));
  return static_cast<std::uint64_t>(m);
}

double bilap_eigenvalue(int k, int N) {
  const double lambda = eigenvalue(k, N);
  return lambda * lambda;
}

SphereMode mode(int k, int N) { return {k, eigenvalue(k, N), multiplicity(k, N)}; }

}  // namespace brl::spectra
