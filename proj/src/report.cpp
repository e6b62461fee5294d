#include "brl/report.hpp"

#include <cmath>

namespace brl::report {

json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x + 0.0;  // no "-0.0"
}

json to_json(const Parameters& p) { return {{"N", p.N}, {"p", number(p.p)}}; }

json to_json(const DerivedConstants& dc) {
  json j = {{"alpha", number(dc.alpha)}, {"L", number(dc.L)}};
  j["p_star"] = dc.p_star ? number(*dc.p_star) : json(nullptr);
  j["p_threshold"] = dc.p_threshold ? number(*dc.p_threshold) : json(nullptr);
  j["p_c"] = dc.p_c ? number(*dc.p_c) : json(nullptr);
  j["p3"] = dc.p3 ? json(*dc.p3) : json(nullptr);
  return j;
}

json to_json(const BetaRegime& r) {
  json j = {{"branch", to_string(r.branch)}};
  if (r.branch == BetaBranch::ComplexPair) {
    j["ell"] = number(r.ell);
    j["q"] = number(r.q);
  } else {
    j["ell"] = nullptr;
    j["q"] = nullptr;
  }
  return j;
}

json to_json(const charpoly::Quartic& q) {
  return {{"c4", number(q.c4)}, {"c3", number(q.c3)}, {"c2", number(q.c2)}, {"c1", number(q.c1)},
          {"c0", number(q.c0)}};
}

json to_json(std::complex<double> z) { return {{"re", number(z.real())}, {"im", number(z.imag())}}; }

json to_json(const charpoly::RootSet& rs) {
  json roots = json::array();
  for (const auto& z : rs.roots) roots.push_back(to_json(z));
  return {{"family", charpoly::to_string(rs.family)},
          {"index", rs.index},
          {"rho", rs.rho ? number(*rs.rho) : json(nullptr)},
          {"degenerate", rs.degenerate},
          {"roots", roots}};
}

json to_json(const charpoly::ClaimReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"id", c.id},
                      {"description", c.description},
                      {"passed", c.passed},
                      {"skipped", c.skipped},
                      {"worst_margin", number(c.worst_margin)},
                      {"points", c.points},
                      {"note", c.note}});
  return {{"params", to_json(rep.params)}, {"k_max", rep.k_max},        {"grid", rep.grid},
          {"passed", rep.passed()},        {"worst_margin", number(rep.worst_margin())},
          {"checks", checks}};
}

json to_json(const shoot::ShootingResult& res) {
  return {{"a", number(res.a)},
          {"N", res.params.N},
          {"p", number(res.params.p)},
          {"b_lo", number(res.b_lo)},
          {"b_hi", number(res.b_hi)},
          {"b_tilde_est", number(res.b_tilde_est)},
          {"r_max", number(res.config.r_max)},
          {"tol", number(res.config.tol)},
          {"diagnostics",
           {{"ratio_at_rmax", number(res.diagnostics.ratio_at_rmax)},
            {"v_at_rmax", number(res.diagnostics.v_at_rmax)}}}};
}

json to_json(const asym::RateFit& fit) {
  return {{"exponent", number(fit.exponent)},
          {"log_amplitude", number(fit.log_amplitude)},
          {"rms_residual", number(fit.rms_residual)},
          {"window", {number(fit.window.lo), number(fit.window.hi)}},
          {"n_points", fit.n_points},
          {"oscillatory", fit.oscillatory}};
}

json to_json(const asym::NonminimalDiagnostics& d) {
  return {{"d_from_laplacian", number(d.d_from_laplacian)},
          {"d_from_quadratic", number(d.d_from_quadratic)},
          {"kappa_predicted", number(d.kappa_predicted)},
          {"log_correction", d.log_correction},
          {"kappa_fitted", to_json(d.kappa_fitted)}};
}

json to_json(const Error& e) { return {{"kind", to_string(e.kind())}, {"message", e.what()}}; }

}  // namespace brl::report
