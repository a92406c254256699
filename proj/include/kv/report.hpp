#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace kv {

using cplx = std::complex<double>;

// Outcome of checking one identity numerically.
struct VerificationReport {
    std::string identity;
    nlohmann::json params = nlohmann::json::object();
    cplx lhs{0.0, 0.0};
    cplx rhs{0.0, 0.0};
    cplx rhs_main{0.0, 0.0};
    // Riesz mean of order two over the same terms, a diagnostic for slowly
    // oscillating series; never used by decide()
    cplx rhs_riesz{0.0, 0.0};
    bool has_riesz = false;
    std::vector<std::pair<long, cplx>> partial;  // rhs at each truncation level
    std::vector<double> trace;                   // |lhs - rhs| per level
    long terms = 0;
    std::string route;
    double est_error = 0.0;
    double tolerance = 0.0;
    bool relative = false;   // tolerance applies to |lhs - rhs| / |lhs|
    bool trend_ok = true;    // recorded, only enforced where a check asks for it
    bool pass = false;

    double discrepancy() const;
    // Sets pass from tolerance, relative and the last trace entry.
    void decide();
    nlohmann::json to_json() const;
};

nlohmann::json complex_json(cplx v);

}  // namespace kv
