#pragma once

// JSON views of the library types. Doubles are written by nlohmann::json's
// shortest round-trip formatter, so every value reads back bit-identical.

#include <json.hpp>

#include "brl/asymptotics.hpp"
#include "brl/charpoly.hpp"
#include "brl/errors.hpp"
#include "brl/params.hpp"
#include "brl/shooting.hpp"

namespace brl::report {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0.0";

// Finite doubles as numbers; ±inf as the strings "inf" / "-inf"; NaN as null.
json number(double x);

json to_json(const Parameters& p);
json to_json(const DerivedConstants& dc);
json to_json(const BetaRegime& r);
json to_json(const charpoly::Quartic& q);
json to_json(std::complex<double> z);
json to_json(const charpoly::RootSet& rs);
json to_json(const charpoly::ClaimReport& rep);
json to_json(const shoot::ShootingResult& res);
json to_json(const asym::RateFit& fit);
json to_json(const asym::NonminimalDiagnostics& d);
json to_json(const Error& e);

}  // namespace brl::report
