#pragma once

// JSON forms of curve specs, period caches and suite reports. Complex
// numbers are [re, im]; 2x2 matrices are row-major lists of four complex
// numbers. Doubles are written in shortest round-trip form (at most 17
// significant digits), so a cache reloads bit-exactly.

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "g2sigma/curve.hpp"
#include "g2sigma/identities.hpp"
#include "g2sigma/periods.hpp"

namespace g2sigma::io {

using json = nlohmann::json;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j)
{
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2) return cplx(j[0].get<double>(), j[1].get<double>());
    throw std::runtime_error("expected a number or an [re, im] pair");
}

inline json to_json(const Mat2& m)
{
    json out = json::array();
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) out.push_back(to_json(m(r, c)));
    return out;
}

inline Mat2 matrix_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 4) throw std::runtime_error("expected four complex entries");
    Mat2 m;
    for (int k = 0; k < 4; ++k) m(k / 2, k % 2) = complex_from_json(j[k]);
    return m;
}

inline json to_json(const IMat2& m) { return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})}); }

inline IMat2 int_matrix_from_json(const json& j)
{
    IMat2 m;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m(r, c) = j.at(r).at(c).get<int>();
    return m;
}

inline json read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

inline void write_file(const std::string& path, const json& j)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

inline Curve::Coefficients lambda_from_json(const json& j)
{
    const json& l = j.at("lambda");
    if (!l.is_array() || l.size() != 6) throw std::runtime_error("lambda must have 6 entries");
    Curve::Coefficients lambda;
    for (int i = 0; i < 6; ++i) lambda[i] = complex_from_json(l[i]);
    return lambda;
}

inline json lambda_to_json(const Curve::Coefficients& lambda)
{
    json l = json::array();
    for (auto v : lambda) l.push_back(to_json(v));
    return l;
}

/// {"lambda": [[re, im] x 6]} -> Curve (may throw NotMonicQuintic / SingularCurve).
inline Curve curve_from_json(const json& j) { return Curve::create(lambda_from_json(j)); }

inline Curve load_curve(const std::string& path) { return curve_from_json(read_file(path)); }

inline json curve_to_json(const Curve& curve) { return json{{"lambda", lambda_to_json(curve.lambda())}}; }

inline json periods_to_json(const PeriodData& pd, cplx c = cplx(0.0))
{
    json j;
    j["lambda"] = lambda_to_json(pd.curve.lambda());
    j["quad_order"] = pd.quad_order;
    j["alpha_basis"] = to_json(pd.alpha_basis);
    j["beta_basis"] = to_json(pd.beta_basis);
    j["omega1"] = to_json(pd.omega1);
    j["omega2"] = to_json(pd.omega2);
    j["eta1"] = to_json(pd.eta1);
    j["eta2"] = to_json(pd.eta2);
    j["modulus"] = to_json(pd.modulus);
    if (c != cplx(0.0)) j["c"] = to_json(c);
    return j;
}

/// Rebuilds PeriodData; if `expected` is given, its lambda must match the
/// cached one exactly.
inline PeriodData periods_from_json(const json& j, const Curve* expected = nullptr)
{
    const auto lambda = lambda_from_json(j);
    if (expected && expected->lambda() != lambda) throw std::runtime_error("period cache belongs to a different curve");
    PeriodData pd{Curve::create(lambda)};
    pd.quad_order = j.at("quad_order").get<int>();
    pd.alpha_basis = int_matrix_from_json(j.at("alpha_basis"));
    pd.beta_basis = int_matrix_from_json(j.at("beta_basis"));
    pd.omega1 = matrix_from_json(j.at("omega1"));
    pd.omega2 = matrix_from_json(j.at("omega2"));
    pd.eta1 = matrix_from_json(j.at("eta1"));
    pd.eta2 = matrix_from_json(j.at("eta2"));
    pd.modulus = matrix_from_json(j.at("modulus"));
    return pd;
}

inline void save_periods(const std::string& path, const PeriodData& pd, cplx c = cplx(0.0))
{
    write_file(path, periods_to_json(pd, c));
}

inline PeriodData load_periods(const std::string& path, const Curve* expected = nullptr)
{
    return periods_from_json(read_file(path), expected);
}

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json report_to_json(const IdentityReport& r)
{
    json j;
    j["name"] = r.name;
    j["params"] = r.params;
    j["lhs"] = to_json(r.lhs);
    j["rhs"] = to_json(r.rhs);
    j["residual"] = finite_or_null(r.residual);
    j["sign_ratio"] = to_json(r.sign_ratio);
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

inline json config_to_json(const SuiteConfig& c)
{
    return json{{"fs_n", c.fs_n}, {"kiepert_n", c.kiepert_n}, {"seed", c.seed}, {"tol", c.tol}, {"samples", c.samples}};
}

inline json suite_to_json(const SuiteConfig& config, const std::vector<IdentityReport>& reports, const json& extra = {})
{
    json cfg = config_to_json(config);
    if (extra.is_object()) cfg.update(extra);
    json list = json::array();
    for (const auto& r : reports) list.push_back(report_to_json(r));
    return json{{"config", cfg}, {"reports", list}};
}

} // namespace g2sigma::io
