#pragma once

// psi_n, the Frobenius-Stickelberger and Kiepert determinants, the limit
// checks around sigma(u - v)/(u1 - v1), and the verification suite.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "g2sigma/abel.hpp"
#include "g2sigma/common.hpp"
#include "g2sigma/kleinian.hpp"
#include "g2sigma/ring.hpp"
#include "g2sigma/sigma.hpp"

namespace g2sigma {

using MatX = Eigen::MatrixXcd;

/// sigma(n u) / sigma_2(u)^{n^2} for u on the Abel image.
inline cplx psi(int n, const Vec2& u, const SigmaContext& ctx)
{
    if (n < 1) throw error(errc::invalid_argument, "psi needs n >= 1");
    require_abel_image(u, ctx);
    const cplx s2 = sigma_partial(u, ctx, 0, 1);
    return sigma(double(n) * u, ctx) / ipow(s2, n * n);
}

/// -sigma(u0 + ... + un) prod_{i<j} sigma(ui - uj) / prod sigma_2(ui)^{n+1}.
inline cplx fs_lhs(const std::vector<Vec2>& points, const SigmaContext& ctx)
{
    const int count = int(points.size());
    if (count < 2) throw error(errc::invalid_argument, "need at least two points");
    const int n = count - 1;
    Vec2 total = Vec2::Zero();
    for (const auto& u : points) {
        require_abel_image(u, ctx);
        total += u;
    }
    cplx value = -sigma(total, ctx);
    for (int i = 0; i < count; ++i)
        for (int j = i + 1; j < count; ++j) value *= sigma(points[i] - points[j], ctx);
    for (const auto& u : points) value /= ipow(sigma_partial(u, ctx, 0, 1), n + 1);
    return value;
}

/// Rows [m(x_i, y_i)] over the first n+1 monomials by pole order.
inline MatX fs_matrix(const std::vector<CurvePoint>& points)
{
    const int count = int(points.size());
    const auto monomials = monomial_sequence(count, true);
    MatX m(count, count);
    for (int i = 0; i < count; ++i)
        for (int k = 0; k < count; ++k) m(i, k) = ring_eval(monomials[k], points[i]);
    return m;
}

inline cplx fs_det(const std::vector<Vec2>& points, const SigmaContext& ctx)
{
    if (points.size() < 2) throw error(errc::invalid_argument, "need at least two points");
    std::vector<CurvePoint> coords;
    for (const auto& u : points) {
        const auto c = curve_coords(u, ctx);
        coords.push_back(CurvePoint::affine(c.x, c.y));
    }
    return fs_matrix(coords).determinant();
}

/// [D_j^r(m)](P) for r = 1..n-1 (rows) and m over the first n-1 monomials
/// after the constant (columns).
inline MatX kiepert_matrix(const CurvePoint& P, int n, int j, const Curve& curve)
{
    if (n < 2) throw error(errc::invalid_argument, "Kiepert determinant needs n >= 2");
    if (j != 1 && j != 2) throw error(errc::invalid_argument, "j must be 1 or 2");
    if (j == 2 && P.x() == cplx(0.0)) throw error(errc::pole_at_point, "d/du2 entries have poles at x = 0");
    const int size = n - 1;
    const auto monomials = monomial_sequence(size, false);
    MatX m(size, size);
    for (int k = 0; k < size; ++k) {
        RingElement d = monomials[k];
        for (int r = 0; r < size; ++r) {
            d = ring_derive(d, curve, j);
            m(r, k) = ring_eval(d, P);
        }
    }
    return m;
}

/// x^{(j-1) n (n-1)/2} det kiepert_matrix at a curve point.
inline cplx kiepert_value(const CurvePoint& P, int n, int j, const Curve& curve)
{
    const cplx det = kiepert_matrix(P, n, j, curve).determinant();
    return ipow(P.x(), (j - 1) * n * (n - 1) / 2) * det;
}

inline cplx kiepert_det(const Vec2& u, int n, int j, const SigmaContext& ctx)
{
    const auto c = curve_coords(u, ctx);
    return kiepert_value(CurvePoint::affine(c.x, c.y), n, j, ctx.periods.curve);
}

/// 1! 2! ... (n-1)!
inline double superfactorial(int n)
{
    double out = 1.0, fact = 1.0;
    for (int k = 1; k < n; ++k) {
        fact *= k;
        out *= fact;
    }
    return out;
}

/// The point over x + t reached by continuing y from P, and the Abel
/// increment along the way.
inline AbelIncrement nearby_point(const CurvePoint& P, cplx t, const Curve& curve)
{
    return abel_increment(P, P.x() + t, curve);
}

/// |sigma(u - v)/(u1 - v1) - 1| with v = abel(P), u = abel(P_t), for each t.
inline std::vector<double> check_difference_limit(const CurvePoint& P, const SigmaContext& ctx,
                                               const std::vector<double>& ts)
{
    std::vector<double> out;
    for (double t : ts) {
        const Vec2 h = nearby_point(P, t, ctx.periods.curve).du;  // u - v
        out.push_back(std::abs(sigma(h, ctx) / h(0) - 1.0));
    }
    return out;
}

/// |sigma(h)/h1 - 1| for h = abel of the point with x = 1/t^2 near infinity.
inline double naive_limit_residual(double t, const SigmaContext& ctx)
{
    const Curve& curve = ctx.periods.curve;
    const cplx x = 1.0 / (t * t);
    const auto& l = curve.lambda();
    cplx s2 = l[0];
    for (int i = 1; i <= 5; ++i) s2 = s2 * (t * t) + l[i];
    const CurvePoint P = CurvePoint::affine(x, -std::sqrt(s2) / std::pow(t, 5));
    const Vec2 h = abel_point(P, curve).u;
    return std::abs(sigma(h, ctx) / h(0) - 1.0);
}

/// |((x(u) - x(v))/(u1 - v1)) / (2 y(v)) - 1| with x from sigma quotients.
inline double difference_quotient_residual(const CurvePoint& P, double t, const SigmaContext& ctx)
{
    const Vec2 v = abel_point(P, ctx).u;
    const Vec2 u = v + nearby_point(P, t, ctx.periods.curve).du;
    const auto cu = curve_coords(u, ctx);
    const auto cv = curve_coords(v, ctx);
    const cplx dq = (cu.x - cv.x) / (u(0) - v(0));
    return std::abs(dq / (2.0 * cv.y) - 1.0);
}

/// Coefficient of u1^i u2^k in sigma by the Cauchy integral on the torus
/// |u1| = |u2| = r with N x N trapezoid nodes.
inline cplx taylor_coefficient(const SigmaContext& ctx, int i, int k, double r = 0.2, int N = 16)
{
    cplx acc(0.0);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            const double ta = 2.0 * pi * a / N;
            const double tb = 2.0 * pi * b / N;
            const Vec2 u(std::polar(r, ta), std::polar(r, tb));
            acc += sigma(u, ctx) * std::polar(1.0, -(i * ta + k * tb));
        }
    return acc / (double(N) * N * std::pow(r, i + k));
}

/// The point on the curve with x = 1/t^2 on the branch y ~ -t^{-5}.
inline CurvePoint point_near_infinity(const Curve& curve, double t)
{
    const auto& l = curve.lambda();
    cplx s2 = l[0];
    for (int i = 1; i <= 5; ++i) s2 = s2 * (t * t) + l[i];
    return CurvePoint::affine(1.0 / (t * t), -std::sqrt(s2) / std::pow(t, 5));
}

// ---------------------------------------------------------------------------
// Verification suite

struct IdentityReport {
    std::string name;
    std::map<std::string, double> params;
    cplx lhs{0.0};
    cplx rhs{0.0};
    double residual = 0.0;
    cplx sign_ratio{0.0};
    double tolerance = 0.0;
    bool pass = false;
    std::string error;
};

struct SuiteConfig {
    std::vector<int> fs_n{2, 3, 4};
    std::vector<int> kiepert_n{2, 3, 4, 5};
    unsigned long long seed = 1;
    double tol = 1e-5;
    int samples = 5;
};

/// Random affine points with |x| in [r_lo, r_hi], at distance > margin from
/// every branch point and from x = 0, on a random sheet.
inline std::vector<CurvePoint> random_curve_points(const Curve& curve, std::mt19937_64& rng, int count,
                                                   double r_lo = 2.5, double r_hi = 6.0, double margin = 0.3)
{
    std::uniform_real_distribution<double> radius(r_lo, r_hi);
    std::uniform_real_distribution<double> angle(-pi, pi);
    std::bernoulli_distribution sheet(0.5);
    std::vector<CurvePoint> out;
    while (int(out.size()) < count) {
        const cplx x = std::polar(radius(rng), angle(rng));
        bool ok = std::abs(x) > margin;
        for (auto e : curve.branch_points()) ok = ok && std::abs(x - e) > margin;
        if (!ok) continue;
        out.push_back(point_over(curve, x, sheet(rng) ? 1 : -1));
    }
    return out;
}

/// A random point of the fundamental cell, omega' a + omega'' b with a, b in [-1/2, 1/2)^2.
inline Vec2 random_cell_point(const PeriodData& pd, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> d(-0.5, 0.5);
    const RVec2 a(d(rng), d(rng));
    const RVec2 b(d(rng), d(rng));
    return pd.omega1 * a.cast<cplx>() + pd.omega2 * b.cast<cplx>();
}

namespace detail {

inline double relative(cplx lhs, cplx rhs) { return std::abs(lhs - rhs) / std::max(1e-300, std::abs(rhs)); }

/// Tracks the worst sample of an aggregated check.
struct Worst {
    cplx lhs{0.0}, rhs{0.0};
    double residual = -1.0;
    void take(cplx l, cplx r, double res)
    {
        if (res > residual || std::isnan(res)) {
            lhs = l;
            rhs = r;
            residual = std::isnan(res) ? std::numeric_limits<double>::infinity() : res;
        }
    }
};

template <class Body>
IdentityReport run_check(const std::string& name, std::map<std::string, double> params, double tolerance, Body&& body)
{
    IdentityReport rep;
    rep.name = name;
    rep.params = std::move(params);
    rep.tolerance = tolerance;
    try {
        body(rep);
        rep.pass = rep.residual < tolerance;
    } catch (const std::exception& e) {
        rep.error = e.what();
        rep.residual = std::numeric_limits<double>::infinity();
        rep.pass = false;
    }
    return rep;
}

inline void fill(IdentityReport& rep, const Worst& w)
{
    rep.lhs = w.lhs;
    rep.rhs = w.rhs;
    rep.residual = w.residual;
    if (std::abs(w.rhs) > 0.0) rep.sign_ratio = w.lhs / w.rhs;
}

} // namespace detail

inline std::vector<IdentityReport> run_suite(const SigmaContext& ctx, const SuiteConfig& config)
{
    using detail::run_check;
    using detail::Worst;
    const PeriodData& pd = ctx.periods;
    const Curve& curve = pd.curve;
    const auto& lambda = curve.lambda();
    const double tol = config.tol;
    const int samples = std::max(1, config.samples);
    std::mt19937_64 rng(config.seed);
    std::vector<IdentityReport> reports;

    // Taylor coefficients of sigma at the origin up to degree 3.
    for (int i = 0; i <= 3; ++i)
        for (int k = 0; i + k <= 3; ++k) {
            cplx expected = 0.0;
            if (i == 1 && k == 0) expected = 1.0;
            if (i == 3 && k == 0) expected = lambda[2] / 6.0;
            if (i == 0 && k == 3) expected = -lambda[5] / 3.0;
            reports.push_back(run_check("sigma_taylor_coefficient", {{"i", i}, {"k", k}}, tol, [&](IdentityReport& r) {
                r.lhs = taylor_coefficient(ctx, i, k);
                r.rhs = expected;
                r.residual = std::abs(r.lhs - r.rhs);
            }));
        }

    // Translation character on the four generators, constant over samples.
    {
        std::vector<Vec2> us;
        for (int s = 0; s < 2 * samples; ++s) us.push_back(random_cell_point(pd, rng));
        for (int g = 0; g < 4; ++g) {
            reports.push_back(run_check("translation_character", {{"generator", g}}, tol, [&](IdentityReport& r) {
                const Vec2 l = g < 2 ? Vec2(pd.omega1.col(g)) : Vec2(pd.omega2.col(g - 2));
                const cplx chi0 = translation_character(l, us[0], ctx);
                const cplx sign = chi0.real() >= 0.0 ? 1.0 : -1.0;
                Worst w;
                for (const auto& u : us) {
                    const cplx chi = translation_character(l, u, ctx);
                    w.take(chi, sign, std::abs(chi - sign));
                }
                detail::fill(r, w);
                r.sign_ratio = sign;
            }));
        }
    }

    // Addition formula on random pairs of the fundamental cell.
    {
        std::vector<std::pair<Vec2, Vec2>> pairs;
        for (int s = 0; s < 4 * samples; ++s) pairs.emplace_back(random_cell_point(pd, rng), random_cell_point(pd, rng));
        reports.push_back(run_check("addition_formula", {{"samples", double(pairs.size())}}, tol, [&](IdentityReport& r) {
            Worst w;
            for (const auto& [u, v] : pairs) {
                const auto a = addition_formula(u, v, ctx);
                w.take(a.lhs, a.rhs, a.residual);
            }
            detail::fill(r, w);
        }));
    }

    // Points of the Abel image used by the one-point checks.
    const auto pts = random_curve_points(curve, rng, samples);

    reports.push_back(run_check("coordinate_ratio", {{"samples", samples}}, tol, [&](IdentityReport& r) {
        Worst w;
        for (const auto& P : pts) {
            const Vec2 u = abel_point(P, ctx).u;
            require_abel_image(u, ctx);
            const Jet3 j = sigma_jet(u, ctx);
            const cplx ratio = j.partial(1, 0) / j.partial(0, 1);
            w.take(ratio, -P.x(), detail::relative(ratio, -P.x()));
        }
        detail::fill(r, w);
    }));

    // Behaviour near the origin along the Abel image.
    {
        const double t = 1e-3;
        const double asym_tol = 1e-2;
        const CurvePoint P = point_near_infinity(curve, t);
        auto u_at = [&]() { return abel_point(P, ctx).u; };
        reports.push_back(run_check("abel_expansion_u1_over_u2_cubed", {{"t", t}}, asym_tol, [&](IdentityReport& r) {
            const Vec2 u = u_at();
            r.lhs = u(0) / ipow(u(1), 3);
            r.rhs = 1.0 / 3.0;
            r.residual = detail::relative(r.lhs, r.rhs);
        }));
        reports.push_back(run_check("sigma2_expansion", {{"t", t}}, asym_tol, [&](IdentityReport& r) {
            const Vec2 u = u_at();
            r.lhs = sigma_partial(u, ctx, 0, 1) / (u(1) * u(1));
            r.rhs = -1.0;
            r.residual = detail::relative(r.lhs, r.rhs);
        }));
        reports.push_back(run_check("sigma2_slope", {{"t0", 1e-2}, {"t1", 1e-3}}, 0.02, [&](IdentityReport& r) {
            const Vec2 u0 = abel_point(point_near_infinity(curve, 1e-2), ctx).u;
            const Vec2 u1 = u_at();
            const double slope = std::log(std::abs(sigma_partial(u0, ctx, 0, 1) / sigma_partial(u1, ctx, 0, 1)))
                                 / std::log(std::abs(u0(1) / u1(1)));
            r.lhs = slope;
            r.rhs = 2.0;
            r.residual = std::abs(slope - 2.0);
        }));
        reports.push_back(run_check("x_expansion", {{"t", t}}, asym_tol, [&](IdentityReport& r) {
            const Vec2 u = u_at();
            r.lhs = curve_coords(u, ctx).x * u(1) * u(1);
            r.rhs = 1.0;
            r.residual = detail::relative(r.lhs, r.rhs);
        }));
        reports.push_back(run_check("y_expansion", {{"t", t}}, asym_tol, [&](IdentityReport& r) {
            const Vec2 u = u_at();
            r.lhs = curve_coords(u, ctx).y * ipow(u(1), 5);
            r.rhs = -1.0;
            r.residual = detail::relative(r.lhs, r.rhs);
        }));
    }

    // wp22 = x1 + x2 and wp12 = -x1 x2 on sums of two points.
    {
        std::vector<std::pair<CurvePoint, CurvePoint>> pairs;
        pairs.emplace_back(point_over(curve, 3.0), point_over(curve, 4.0));
        const auto extra = random_curve_points(curve, rng, 2 * samples);
        for (int s = 0; s < samples; ++s) pairs.emplace_back(extra[2 * s], extra[2 * s + 1]);
        for (int which = 0; which < 2; ++which) {
            const std::string name = which == 0 ? "wp22_sum_of_x" : "wp12_product_of_x";
            reports.push_back(run_check(name, {{"samples", double(pairs.size())}}, tol, [&](IdentityReport& r) {
                Worst w;
                for (const auto& [P1, P2] : pairs) {
                    const Vec2 u = abel_pair(P1, P2, ctx);
                    const cplx expected = which == 0 ? P1.x() + P2.x() : -P1.x() * P2.x();
                    const cplx value = wp(u, which == 0 ? WpIndex{2, 2} : WpIndex{1, 2}, ctx);
                    w.take(value, expected, detail::relative(value, expected));
                }
                detail::fill(r, w);
            }));
        }
    }

    reports.push_back(run_check("psi2_equals_2y", {{"samples", samples}}, tol, [&](IdentityReport& r) {
        Worst w;
        for (const auto& P : pts) {
            const cplx value = psi(2, abel_point(P, ctx).u, ctx);
            w.take(value, 2.0 * P.y(), detail::relative(value, 2.0 * P.y()));
        }
        detail::fill(r, w);
    }));

    if (!config.fs_n.empty()) {
        std::vector<int> ns{1};
        for (int n : config.fs_n)
            if (n != 1) ns.push_back(n);
        for (int n : ns) {
            reports.push_back(run_check("frobenius_stickelberger", {{"n", n}}, tol, [&](IdentityReport& r) {
                Worst w;
                cplx first{0.0};
                for (int s = 0; s < samples; ++s) {
                    const auto tuple = random_curve_points(curve, rng, n + 1);
                    std::vector<Vec2> us;
                    for (const auto& P : tuple) us.push_back(abel_point(P, ctx).u);
                    const cplx lhs = fs_lhs(us, ctx);
                    const cplx rhs = fs_det(us, ctx);
                    if (s == 0) first = lhs / rhs;
                    w.take(lhs, rhs, detail::relative(lhs, rhs));
                }
                detail::fill(r, w);
                r.sign_ratio = first;
            }));
        }
    }

    if (!config.kiepert_n.empty()) {
        reports.push_back(run_check("psi3_equals_minus_8y3", {{"samples", samples}}, tol, [&](IdentityReport& r) {
            Worst w;
            for (const auto& P : pts) {
                const cplx value = psi(3, abel_point(P, ctx).u, ctx);
                const cplx expected = -8.0 * ipow(P.y(), 3);
                w.take(value, expected, detail::relative(value, expected));
            }
            detail::fill(r, w);
        }));

        const CurvePoint P = pts.front();
        const std::vector<double> ts{1e-2, 1e-3, 1e-4};
        reports.push_back(run_check("limit_ratio", {{"t_min", ts.back()}}, 1e-3, [&](IdentityReport& r) {
            const auto res = check_difference_limit(P, ctx, ts);
            bool decreasing = true;
            for (size_t i = 1; i < res.size(); ++i) decreasing = decreasing && res[i] < res[i - 1];
            r.lhs = 1.0 + res.back();
            r.rhs = 1.0;
            r.residual = decreasing ? res.back() : std::numeric_limits<double>::infinity();
            if (!decreasing) r.error = "residuals do not decrease";
        }));
        reports.push_back(run_check("limit_ratio_naive_control", {{"t", 1e-3}}, 0.5, [&](IdentityReport& r) {
            // Passes when the naive ratio stays away from 1.
            const double d = naive_limit_residual(1e-3, ctx);
            r.lhs = 1.0 + d;
            r.rhs = 1.0;
            r.residual = d > 0.5 ? 0.0 : 1.0;
        }));
        reports.push_back(run_check("difference_quotient", {{"t", 1e-4}}, 1e-3, [&](IdentityReport& r) {
            r.residual = difference_quotient_residual(P, 1e-4, ctx);
            r.lhs = 1.0 + r.residual;
            r.rhs = 1.0;
        }));

        for (int n : config.kiepert_n)
            for (int j = 1; j <= 2; ++j) {
                reports.push_back(run_check("kiepert", {{"n", n}, {"j", j}}, tol, [&](IdentityReport& r) {
                    if (n < 2) throw error(errc::invalid_argument, "Kiepert determinant needs n >= 2");
                    double worst = 0.0;
                    cplx ratio0{0.0};
                    for (size_t s = 0; s < pts.size(); ++s) {
                        const Vec2 u = abel_point(pts[s], ctx).u;
                        const cplx lhs = -superfactorial(n) * psi(n, u, ctx);
                        const cplx rhs = kiepert_det(u, n, j, ctx);
                        const cplx ratio = lhs / rhs;
                        if (s == 0) {
                            ratio0 = ratio;
                            r.lhs = lhs;
                            r.rhs = rhs;
                        }
                        worst = std::max({worst, std::abs(std::abs(ratio) - 1.0), std::abs(ratio - ratio0)});
                    }
                    r.residual = worst;
                    r.sign_ratio = ratio0;
                }));
            }
    }

    std::sort(reports.begin(), reports.end(), [](const IdentityReport& a, const IdentityReport& b) {
        if (a.name != b.name) return a.name < b.name;
        return a.params < b.params;
    });
    return reports;
}

inline bool all_pass(const std::vector<IdentityReport>& reports)
{
    return std::all_of(reports.begin(), reports.end(), [](const IdentityReport& r) { return r.pass; });
}

} // namespace g2sigma
