#include <doctest.h>

#include <cmath>

#include "brl/charpoly.hpp"
#include "brl/errors.hpp"

using namespace brl;
using namespace brl::charpoly;

namespace {

bool has_root(const RootSet& rs, cplx z, double tol) {
  for (const auto& r : rs.roots)
    if (std::abs(r - z) < tol) return true;
  return false;
}

Quartic from_roots(cplx a, cplx b, cplx c, cplx d) {
  // Only used with real or conjugate-closed root sets.
  const cplx s1 = a + b + c + d;
  const cplx s2 = a * b + a * c + a * d + b * c + b * d + c * d;
  const cplx s3 = a * b * c + a * b * d + a * c * d + b * c * d;
  const cplx s4 = a * b * c * d;
  return {1.0, -s1.real(), s2.real(), -s3.real(), s4.real()};
}

}  // namespace

TEST_CASE("mode quartic coefficients") {
  const Quartic q = mode_quartic({5, 3.0}, 0);
  CHECK(q.c4 == 1.0);
  CHECK(q.c3 == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(q.c0 == doctest::Approx(-32.0).epsilon(1e-13));
  for (int N : {3, 5, 9}) {
    const Parameters P{N, 2.5};
    const Quartic a = mode_quartic(P, 0), b = mean_quartic(P);
    CHECK(a.c3 == doctest::Approx(b.c3).epsilon(1e-14));
    CHECK(a.c2 == doctest::Approx(b.c2).epsilon(1e-14));
    CHECK(a.c1 == doctest::Approx(b.c1).epsilon(1e-14));
    CHECK(a.c0 == doctest::Approx(b.c0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(mode_quartic({5, 3.0}, -1), Error);
  CHECK_THROWS_AS(mode_quartic({3, 3.5}, 1), Error);
}

TEST_CASE("mean quartic equals the shifted power polynomial minus pK") {
  // P(β) = (α+β)(α+β-2)(α+β+N-2)(α+β+N-4) - p·K, an independent expansion.
  for (int N : {3, 4, 7, 13})
    for (double p : {1.3, 2.0, 2.7}) {
      const Parameters P{N, p};
      const double al = 4.0 / (p + 1.0);
      const double K = power_coefficient(N, al);
      const Quartic q = mean_quartic(P);
      for (double beta : {-3.0, -0.5, 0.0, 1.25, 4.0}) {
        const double g = al + beta;
        const double expect = g * (g - 2) * (g + N - 2) * (g + N - 4) - p * K;
        CHECK(q(beta).real() == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
      }
    }
}

TEST_CASE("closed-form mode roots") {
  const RootSet r621 = mode_roots_closed({6, 2.0}, 1);
  CHECK(r621.roots[3].real() == doctest::Approx(-11.0 / 3.0).epsilon(1e-14));
  CHECK(r621.roots[2].real() == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(r621.roots[0].real() == doctest::Approx(1.9354161582885658).epsilon(1e-14));
  CHECK(r621.roots[1].real() == doctest::Approx(-6.6020828249552325).epsilon(1e-14));

  const RootSet r471 = mode_roots_closed({4, 7.0}, 1);
  CHECK(r471.roots[3].real() == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(r471.roots[2]) < 1e-14);

  // ρ_1 = 49 for (5,3) and √(4+N²-4√ρ_1) = |N-6+2α| = 1.
  CHECK(*mode_roots_closed({5, 3.0}, 1).rho == doctest::Approx(49.0).epsilon(1e-14));
  CHECK(std::sqrt(4.0 + 25.0 - 4.0 * std::sqrt(rho({5, 3.0}, 1))) == doctest::Approx(1.0));
}

TEST_CASE("mean roots against high precision") {
  const RootSet r = mean_roots_closed({5, 3.0});
  CHECK(r.roots[0].real() == doctest::Approx(1.4990936375075101).epsilon(1e-14));
  CHECK(r.roots[1].real() == doctest::Approx(-4.4990936375075101).epsilon(1e-14));
  CHECK(r.roots[2].real() == doctest::Approx(-1.5).epsilon(1e-14));
  CHECK(std::abs(r.roots[2].imag()) == doctest::Approx(1.5794184520063164).epsilon(1e-13));
  CHECK(r.roots[2] == std::conj(r.roots[3]));
  CHECK(r.roots[1].real() < -4.0);  // β2 < 2-N-α = -4

  const RootSet r13 = mean_roots_closed({13, 2.0});
  CHECK(r13.roots[0].real() == doctest::Approx(1.2301766331286337).epsilon(1e-13));
  CHECK(r13.roots[1].real() == doctest::Approx(-12.896843299795300).epsilon(1e-13));
  CHECK(r13.roots[2].real() == doctest::Approx(-2.2827239555373948).epsilon(1e-13));
  CHECK(r13.roots[3].real() == doctest::Approx(-9.3839427111292718).epsilon(1e-13));

  const RootSet r10 = mean_roots_closed({10, 5.0});
  CHECK(r10.roots[0].real() == doctest::Approx(2.2418538610390548).epsilon(1e-13));
  CHECK(r10.roots[1].real() == doctest::Approx(-9.5751871943723881).epsilon(1e-13));
  CHECK(r10.roots[2].real() == doctest::Approx(-3.6666666666666667).epsilon(1e-13));
  CHECK(std::abs(r10.roots[2].imag()) == doctest::Approx(0.95426140355769250).epsilon(1e-12));

  const RootSet r3 = mean_roots_closed({3, 2.8});
  CHECK(r3.roots[2].real() == doctest::Approx(-0.22233023593593685).epsilon(1e-12));
  CHECK(r3.roots[3].real() == doctest::Approx(-0.88293292195879999).epsilon(1e-12));

  for (int N = 3; N <= 15; ++N)
    for (double p : {1.1, 1.7, 2.5, 2.9}) {
      const RootSet rs = mean_roots_closed({N, p});
      CHECK(rs.roots[0].real() > 0.0);
      CHECK(rs.roots[0].imag() == 0.0);
    }
}

TEST_CASE("numeric quartic oracle") {
  const RootSet a = solve_quartic(from_roots(1, 2, 3, 4));
  for (double z : {1.0, 2.0, 3.0, 4.0}) CHECK(has_root(a, z, 1e-12));
  for (const auto& z : a.roots) CHECK(z.imag() == 0.0);

  const RootSet b = solve_quartic({1, 0, 0, 0, 1});
  const double h = std::sqrt(0.5);
  for (cplx z : {cplx(h, h), cplx(h, -h), cplx(-h, h), cplx(-h, -h)}) CHECK(has_root(b, z, 1e-13));

  const Parameters P{6, 2.0};
  const RootMatch m = match_roots(mode_roots_closed(P, 1), solve_quartic(mode_quartic(P, 1)));
  CHECK(m.max_distance < 1e-10);

  // Double root: flagged and still accepted.
  const RootSet d = solve_quartic(from_roots(-1, -1, 2, 5));
  CHECK(d.degenerate);
  CHECK(has_root(d, -1.0, 1e-6));
}

TEST_CASE("Vieta, conjugate symmetry, residuals and positive rho") {
  for (int N = 3; N <= 15; ++N)
    for (double p : {1.05, 1.5, 2.2, 2.95, 6.0, 25.0}) {
      const Parameters P{N, p};
      if (!admissible(P)) continue;
      for (int k = 0; k <= 12; ++k) {
        const Quartic q = mode_quartic(P, k);
        const RootSet rs = mode_roots_closed(P, k);
        cplx sum = 0, prod = 1;
        for (const auto& z : rs.roots) {
          sum += z;
          prod *= z;
          CHECK(scaled_residual(q, z) <= (rs.degenerate ? 1e-6 : 1e-9));
        }
        CHECK(std::abs(sum.real() + q.c3) <= 1e-10 * std::max(1.0, std::abs(q.c3)));
        CHECK(std::abs(prod.real() - q.c0) <= 1e-10 * std::max(1.0, std::abs(q.c0)));
        for (const auto& z : rs.roots) {
          if (z.imag() == 0.0) continue;
          bool paired = false;
          for (const auto& w : rs.roots) paired = paired || w == std::conj(z);
          CHECK(paired);
        }
        if (k >= 1) {
          CHECK(*rs.rho > 0.0);
          // T_k: the inner discriminant of the closed form is non-negative.
          const double s_minus = 4.0 + std::pow(N - 2.0 + 2 * k, 2) - 4.0 * std::sqrt(*rs.rho);
          CHECK(s_minus >= -1e-12 * (4.0 + std::pow(N - 2.0 + 2 * k, 2)));
        }
      }
    }
}

TEST_CASE("integer root families") {
  auto expect = [](const RootSet& rs, std::array<double, 4> want) {
    for (int j = 0; j < 4; ++j) CHECK(rs.roots[j] == cplx(want[j], 0.0));
  };
  expect(nonminimal_roots_closed(5, 0, Family::NmMean), {0, -3, -2, -5});
  expect(nonminimal_roots_closed(4, 2, Family::NmMode), {2, -4, 0, -6});
  expect(nonminimal_roots_closed(4, 2, Family::NmTilde), {3, -3, 1, -5});
  expect(nonminimal_roots_closed(7, 1, Family::NmMode), {1, -6, -1, -8});
  expect(nonminimal_roots_closed(3, 0, Family::NmMean), {0, -1, -2, -3});
  expect(nonminimal_roots_closed(5, 3, Family::NmTilde), {4, -5, 2, -7});

  for (auto fam : {Family::NmMode, Family::NmTilde, Family::NmMean})
    for (int N = 3; N <= 12; ++N)
      for (int i = 1; i <= 8; ++i) {
        const RootSet closed = nonminimal_roots_closed(N, i, fam);
        const RootSet oracle = solve_quartic(nonminimal_quartic(N, i, fam));
        CHECK(match_roots(closed, oracle).max_distance < (closed.degenerate ? 1e-6 : 1e-10));
      }
  CHECK_THROWS_AS(nonminimal_quartic(2, 1, Family::NmMode), Error);
  CHECK_THROWS_AS(nonminimal_quartic(5, 0, Family::NmMode), Error);
}

TEST_CASE("decaying exponents") {
  const auto d = decaying_exponents(mean_roots_closed({5, 3.0}));
  REQUIRE(d.size() == 3);
  CHECK(d[0].real() == doctest::Approx(-1.5));
  CHECK(d[0].imag() > 0.0);
  CHECK(d[1] == std::conj(d[0]));
  CHECK(d[2].real() == doctest::Approx(-4.4990936375075101));

  RootSet pos;
  pos.roots = {1.0, 2.0, 3.0, 4.0};
  CHECK(decaying_exponents(pos).empty());

  const auto nm = decaying_exponents(nonminimal_roots_closed(5, 0, Family::NmMean));
  REQUIRE(nm.size() == 3);
  CHECK(nm[0] == cplx(-2.0));
  CHECK(nm[1] == cplx(-3.0));
  CHECK(nm[2] == cplx(-5.0));
}

TEST_CASE("root cleanup") {
  CHECK(snap_real(cplx(2.0, 1e-11)).imag() == 0.0);
  CHECK(snap_real(cplx(2.0, 1e-8)).imag() != 0.0);
  CHECK(snap_real(cplx(1e6, 1e-5)).imag() == 0.0);
}

TEST_CASE("root matching is optimal") {
  RootSet a, b;
  a.roots = {1.0, 1.00001, 5.0, -2.0};
  b.roots = {-2.0, 5.0, 1.00001, 1.0};
  const RootMatch m = match_roots(a, b);
  CHECK(m.max_distance == 0.0);
  CHECK(m.perm == std::array<int, 4>{3, 2, 1, 0});
}

TEST_CASE("claim verification") {
  const ClaimReport r7 = verify_claims({7, 2.0}, 10);
  CHECK(r7.passed());
  // Equality statements (k = 1 table, identities) sit at margin ~0.
  CHECK(r7.worst_margin() > -1e-12);

  const ClaimReport r3 = verify_claims({3, 2.0}, 10);
  CHECK(r3.passed());
  bool saw = false;
  for (const auto& c : r3.checks) {
    if (c.id == "k1_case_table") {
      saw = true;
      CHECK(c.note.find("Thm3") != std::string::npos);
    }
    if (c.id == "beta_hat") CHECK_FALSE(c.skipped);
  }
  CHECK(saw);

  // Boundary p = (N+2)/(6-N): β3 = β4 = -1, accepted as the first case.
  const ClaimReport rb = verify_claims({4, 3.0}, 5);
  CHECK(rb.passed());

  CHECK(verify_claims({4, 7.0}, 5).passed());
  CHECK(verify_claims({4, 9.0}, 5).passed());
  CHECK(verify_claims({13, 2.0}, 120).passed());
  CHECK(verify_claims({5, 1.02}, 5).passed());  // p < p_c, real branch
  CHECK_THROWS_AS(verify_claims({7, 2.0}, 1), Error);
}

TEST_CASE("claim suite over a grid") {
  for (int N = 3; N <= 15; ++N) {
    const double hi = N == 3 ? 3.0 : 30.0;
    for (int j = 1; j < 12; ++j) {
      const Parameters P{N, 1.0 + (hi - 1.0) * j / 12.0};
      const ClaimReport rep = verify_claims(P, 12);
      INFO("N=" << N << " p=" << P.p);
      for (const auto& c : rep.checks) {
        INFO(c.id);
        CHECK(c.passed);
      }
    }
  }
}
