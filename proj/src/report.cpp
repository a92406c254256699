#include "kv/report.hpp"

#include <cmath>

namespace kv {

nlohmann::json complex_json(cplx v) { return nlohmann::json::array({v.real(), v.imag()}); }

double VerificationReport::discrepancy() const {
    const double d = std::abs(lhs - rhs);
    return relative ? d / std::max(std::abs(lhs), 1e-300) : d;
}

void VerificationReport::decide() { pass = std::isfinite(discrepancy()) && discrepancy() <= tolerance; }

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["identity"] = identity;
    j["params"] = params;
    j["lhs"] = complex_json(lhs);
    j["rhs"] = complex_json(rhs);
    j["rhs_main"] = complex_json(rhs_main);
    if (has_riesz) j["rhs_riesz"] = complex_json(rhs_riesz);
    nlohmann::json tr = nlohmann::json::array();
    for (std::size_t i = 0; i < partial.size(); ++i) {
        nlohmann::json e;
        e["n"] = partial[i].first;
        e["rhs"] = complex_json(partial[i].second);
        if (i < trace.size()) e["discrepancy"] = trace[i];
        tr.push_back(e);
    }
    j["trace"] = tr;
    j["terms"] = terms;
    j["route"] = route;
    j["est_error"] = est_error;
    j["discrepancy"] = discrepancy();
    j["tolerances"] = {{"value", tolerance}, {"relative", relative}};
    j["trend_nonincreasing"] = trend_ok;
    j["pass"] = pass;
    return j;
}

}  // namespace kv
