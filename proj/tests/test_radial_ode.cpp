#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "brl/errors.hpp"
#include "brl/radial_ode.hpp"

using namespace brl;
using namespace brl::ode;

TEST_CASE("Taylor start") {
  const Parameters P{5, 2.0};
  // b = 2N gives u ≈ 1 + r², v(0) = 2N.
  const RadialState s = taylor_start({1.0, 10.0, P}, 1e-4);
  CHECK((s.u - 1.0) / (1e-4 * 1e-4) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(s.v == doctest::Approx(10.0).epsilon(1e-8));
  CHECK(std::abs(s.dv) < 1e-4);

  const RadialState z = taylor_start({1.0, 0.0, P}, 1e-3);
  CHECK((z.u - 1.0) == doctest::Approx(-1e-12 / 280.0).epsilon(1e-10));
  CHECK(z.v == doctest::Approx(-1e-6 / 10.0));

  CHECK_THROWS_AS(taylor_start({1.0, 0.0, P}, 2e-3), Error);
  CHECK_THROWS_AS(taylor_start({1.0, 0.0, P}, 0.0), Error);
}

TEST_CASE("power-law biharmonic coefficient") {
  CHECK(biharmonic_of_power(0.0, 7) == 0.0);
  CHECK(biharmonic_of_power(2.0, 4) == 0.0);
  CHECK(biharmonic_of_power(1.0, 5) == -8.0);
  for (int N = 3; N <= 15; ++N)
    for (double p : {1.2, 2.0, 2.9}) {
      const auto dc = derive_constants({N, p});
      CHECK(std::abs(biharmonic_of_power(dc.alpha, N) * dc.L + std::pow(dc.L, -p)) <=
            1e-12 * std::pow(dc.L, -p));
    }
}

TEST_CASE("singular solution is shadowed") {
  const Parameters P{5, 3.0};
  const Trajectory tr = integrate_from(singular_state(P, 1.0), P, 10.0, 1e-10);
  CHECK(tr.termination.kind == TerminationKind::ReachedRmax);
  double drift = 0.0;
  for (const auto& s : tr.samples)
    drift = std::max(drift, std::abs(s.u / singular_state(P, s.r).u - 1.0));
  CHECK(drift < 1e-4);
}

TEST_CASE("survivor and extinct regimes") {
  const Parameters P{5, 2.0};
  const Trajectory big = integrate({1.0, 50.0, P}, 200.0, 1e-10);
  CHECK(big.termination.kind == TerminationKind::ReachedRmax);
  CHECK(big.back().v > 0.0);
  // Quadratic growth: u/r² settles.
  const double q1 = big.at(100.0).u / 1e4, q2 = big.back().u / 4e4;
  CHECK(q1 == doctest::Approx(q2).epsilon(0.01));

  const Trajectory neg = integrate({1.0, -5.0, P}, 200.0, 1e-10);
  CHECK(neg.termination.kind == TerminationKind::Extinct);
  CHECK(neg.termination.r < 200.0);
  CHECK(neg.back().u <= kExtinctionFloor * 1.0 * (1 + 1e-8));
  CHECK(neg.back().u > 0.0);
}

TEST_CASE("samples are strictly increasing and Δu decreases") {
  const Parameters P{6, 3.0};
  for (double b : {0.5, 1.11, 3.0}) {
    const Trajectory tr = integrate({1.0, b, P}, 300.0, 1e-10);
    CHECK(tr.front().r == doctest::Approx(kDefaultHandoff));
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
      CHECK(tr.samples[i].r > tr.samples[i - 1].r);
      if (tr.samples[i].u > 0.0) CHECK(tr.samples[i].v < tr.samples[i - 1].v);
    }
  }
}

TEST_CASE("flux form holds along the trajectory") {
  // r^(N-1) dv at r2 minus at r1 equals -∫ r^(N-1) u^(-p).
  const Parameters P{5, 2.0};
  const double tol = 1e-10;
  const Trajectory tr = integrate({1.0, 1.0, P}, 8.0, tol);
  const double n1 = P.N - 1.0;
  for (auto [r1, r2] : {std::pair{0.5, 1.7}, {2.0, 3.1}, {4.4, 6.0}, {6.5, 7.9}}) {
    const double lhs = std::pow(r2, n1) * tr.at(r2).dv - std::pow(r1, n1) * tr.at(r1).dv;
    const double rhs = -boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double r) { return std::pow(r, n1) * std::pow(tr.at(r).u, -P.p); }, r1, r2, 10, 1e-13);
    CHECK(std::abs(lhs - rhs) <= 10.0 * tol * std::abs(rhs) + 1e-12);
  }
}

TEST_CASE("Taylor handoff radius does not matter") {
  const Parameters P{5, 2.0};
  IntegrateOptions a, b;
  a.r0 = 1e-3;
  b.r0 = 1e-4;
  const Trajectory ta = integrate({1.0, 1.0, P}, 5.0, 1e-12, a);
  const Trajectory tb = integrate({1.0, 1.0, P}, 5.0, 1e-12, b);
  const RadialState ea = ta.back(), eb = tb.back();
  CHECK(std::abs(ea.u - eb.u) <= 1e-8 * std::abs(eb.u));
  CHECK(std::abs(ea.v - eb.v) <= 1e-8 * std::abs(eb.v));
}

TEST_CASE("scaling symmetry") {
  // λ^(-α) u(λ r) solves the equation: (a, b) -> (λ^(-α) a, λ^(2-α) b).
  const Parameters P{5, 2.0};
  const double al = derive_constants(P).alpha, lam = 2.0;
  const Trajectory t1 = integrate({1.0, 1.0, P}, 8.0, 1e-11);
  const Trajectory t2 = integrate({std::pow(lam, -al), std::pow(lam, 2 - al), P}, 4.0, 1e-11);
  for (double r : {1.0, 3.0, 6.0, 8.0}) {
    const double u1 = t1.at(r).u, u2 = t2.at(r / lam).u;
    CHECK(std::abs(std::pow(lam, -al) * u1 - u2) <= 1e-6 * std::abs(u2));
  }
}

TEST_CASE("tolerance refinement reduces the error") {
  const Parameters P{5, 2.0};
  IntegrateOptions o;
  o.output_radii = {8.0};
  auto u8 = [&](double tol) { return integrate({1.0, 1.0, P}, 10.0, tol, o).at(8.0).u; };
  const double ref = u8(1e-12);
  CHECK(std::abs(u8(1e-8) - ref) < std::abs(u8(1e-6) - ref));
  CHECK(std::abs(u8(1e-8) - ref) < 1e-7);
}

TEST_CASE("dense sampling and interpolation") {
  const Parameters P{5, 2.0};
  IntegrateOptions o;
  o.output_radii = {0.5, 2.5, 2.5, 7.0, 99.0};
  const Trajectory dense = integrate({1.0, 1.0, P}, 8.0, 1e-12, o);
  IntegrateOptions sparse_opts;
  sparse_opts.output_radii = {2.5};
  sparse_opts.keep_steps = false;
  const Trajectory sparse = integrate({1.0, 1.0, P}, 8.0, 1e-12, sparse_opts);
  CHECK(sparse.samples.size() == 3);  // start, 2.5, end
  // Interpolation between steps agrees with the integrator's own dense output.
  CHECK(dense.at(2.5).u == sparse.samples[1].u);
  const Trajectory steps = integrate({1.0, 1.0, P}, 8.0, 1e-12);
  CHECK(steps.at(2.5).u == doctest::Approx(sparse.samples[1].u).epsilon(1e-10));
  CHECK(steps.at(2.5).dv == doctest::Approx(sparse.samples[1].dv).epsilon(1e-8));
  CHECK(steps.at(steps.samples[5].r).u == steps.samples[5].u);
  CHECK_THROWS_AS(steps.at(100.0), Error);
}

TEST_CASE("stop predicate") {
  const Parameters P{5, 2.0};
  IntegrateOptions o;
  o.stop_when = [](const RadialState& s) { return s.v < 0.0; };
  const Trajectory tr = integrate({1.0, 1.0, P}, 100.0, 1e-10, o);
  CHECK(tr.termination.kind == TerminationKind::Stopped);
  CHECK(tr.back().v < 0.0);
}

TEST_CASE("argument validation") {
  const Parameters P{5, 2.0};
  CHECK_THROWS_AS(integrate({1.0, 1.0, P}, 10.0, 1e-3), Error);
  CHECK_THROWS_AS(integrate({1.0, 1.0, P}, 10.0, 1e-13), Error);
  CHECK_THROWS_AS(integrate({1.0, 1.0, P}, 1e-4, 1e-10), Error);
  CHECK_THROWS_AS(integrate({1.0, 1.0, {3, 3.5}}, 10.0, 1e-10), Error);
  CHECK_THROWS_AS(integrate({-1.0, 1.0, P}, 10.0, 1e-10), Error);
}

TEST_CASE("CSV output") {
  const Parameters P{5, 2.0};
  const Trajectory tr = integrate({1.0, 2.0, P}, 60.0, 1e-8);
  std::ostringstream os;
  write_csv(os, tr);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "r,u,du,v,dv");
  std::getline(is, line);
  double r = 0;
  CHECK(std::sscanf(line.c_str(), "%lf", &r) == 1);
  CHECK(r == tr.front().r);  // 17 digits round-trip
  std::size_t rows = 0;
  is.clear();
  is.seekg(0);
  while (std::getline(is, line)) ++rows;
  CHECK(rows == tr.samples.size() + 1);
}
