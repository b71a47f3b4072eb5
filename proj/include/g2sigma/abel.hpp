#pragma once

// Abel-Jacobi map from infinity, P -> (int w1, int w2), and the inverse
// direction on the theta divisor, u -> (x(u), y(u)).
//
// Paths are built from pieces in one of three charts:
//   t-chart  x = 1/t^2, y = -t^{-5} s(t), s^2 = t^10 f(1/t^2), s(0) = 1:  (w1, w2) = (t^2, 1) dt / s
//   x-chart  (w1, w2) = (1, x) dx / 2y
//   w-chart  x = e + w^2 near a branch point e, y = w g, g^2 = f(x)/(x - e):  (w1, w2) = (1, x) dw / g
// The square root in each chart is continued along the piece from its
// starting value.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "g2sigma/common.hpp"
#include "g2sigma/curve.hpp"
#include "g2sigma/quadrature.hpp"
#include "g2sigma/sigma.hpp"

namespace g2sigma {

enum class Chart { t, x, w };

inline const char* chart_name(Chart c)
{
    switch (c) {
    case Chart::t: return "t";
    case Chart::x: return "x";
    case Chart::w: return "w";
    }
    return "?";
}

/// One piece of an integration path. The chart variable runs along a line
/// from `from` to `to`, or along an arc of `radius` about `center` from
/// angle `angle_from` to `angle_to`.
struct PathSegment {
    Chart chart = Chart::x;
    bool arc = false;
    cplx from{0.0}, to{0.0};
    cplx center{0.0};
    double radius = 0.0, angle_from = 0.0, angle_to = 0.0;
    cplx branch_point{0.0};  // w-chart only
    cplx root_start{0.0};    // s, y or g at the start
    cplx root_end{0.0};      // filled in by integration

    cplx point(double tau) const
    {
        if (!arc) return from + (to - from) * tau;
        return center + radius * std::exp(cplx(0.0, angle_from + (angle_to - angle_from) * tau));
    }

    cplx velocity(double tau) const
    {
        if (!arc) return to - from;
        const double d = angle_to - angle_from;
        return cplx(0.0, d) * radius * std::exp(cplx(0.0, angle_from + d * tau));
    }
};

struct AbelResult {
    Vec2 u = Vec2::Zero();
    std::vector<PathSegment> path;
    int sheet_sign = 1;
};

namespace detail {

inline constexpr double detour_radius = 1e-2;

/// Radicand of the chart square root at chart value v.
inline cplx chart_radicand(const Curve& curve, const PathSegment& seg, cplx v)
{
    switch (seg.chart) {
    case Chart::t: {
        const auto& l = curve.lambda();
        const cplx t2 = v * v;
        cplx acc = l[0];
        for (int i = 1; i <= 5; ++i) acc = acc * t2 + l[i];
        return acc;
    }
    case Chart::x: return curve.f(v);
    case Chart::w: {
        cplx acc(1.0);
        const cplx x = seg.branch_point + v * v;
        for (auto e : curve.branch_points())
            if (std::abs(e - seg.branch_point) > 0.0) acc *= x - e;
        return acc;
    }
    }
    return 0.0;
}

/// (w1, w2) density with respect to the chart variable, divided by nothing:
/// the caller multiplies by dv / root.
inline Vec2 chart_numerator(const PathSegment& seg, cplx v)
{
    switch (seg.chart) {
    case Chart::t: return Vec2(v * v, 1.0);
    case Chart::x: return Vec2(0.5, 0.5 * v);
    case Chart::w: return Vec2(1.0, seg.branch_point + v * v);
    }
    return Vec2::Zero();
}

/// Integrates (w1, w2) along the segment, continuing the chart root.
/// Anchors are placed so that consecutive radicands differ by less than a
/// factor 1.5, which keeps the principal root of their ratio on the
/// continued branch.
inline Vec2 integrate_segment(const Curve& curve, PathSegment& seg)
{
    std::vector<double> taus{0.0};
    std::vector<cplx> roots{seg.root_start};
    std::vector<cplx> rads{chart_radicand(curve, seg, seg.point(0.0))};
    auto close = [](cplx a, cplx b) { return std::abs(b / a - 1.0) < 0.5; };

    Vec2 total = Vec2::Zero();
    double lo = 0.0;
    double step = 1.0 / 8.0;
    while (lo < 1.0) {
        double hi = std::min(1.0, lo + step);
        const cplx q_lo = rads.back();
        for (;;) {
            const cplx q_hi = chart_radicand(curve, seg, seg.point(hi));
            const cplx q_mid = chart_radicand(curve, seg, seg.point(0.5 * (lo + hi)));
            if ((close(q_lo, q_hi) && close(q_lo, q_mid)) || hi - lo < 1e-12) break;
            hi = lo + 0.5 * (hi - lo);
        }
        if (hi - lo < 1e-12) throw error(errc::path_through_branch_point, "integration path hits a branch point");
        const cplx root_lo = roots.back();
        auto integrand = [&](double tau) -> Vec2 {
            const cplx v = seg.point(tau);
            const cplx root = root_lo * std::sqrt(chart_radicand(curve, seg, v) / q_lo);
            return chart_numerator(seg, v) * (seg.velocity(tau) / root);
        };
        total += integrate_adaptive(integrand, lo, hi, 64, 1e-12);
        const cplx q_hi = chart_radicand(curve, seg, seg.point(hi));
        roots.push_back(root_lo * std::sqrt(q_hi / q_lo));
        rads.push_back(q_hi);
        taus.push_back(hi);
        step = std::min(2.0 * (hi - lo), 1.0 / 8.0);
        lo = hi;
    }
    seg.root_end = roots.back();
    return total;
}

/// Physical y at the end of a segment.
inline cplx segment_end_y(const PathSegment& seg)
{
    const cplx v = seg.point(1.0);
    switch (seg.chart) {
    case Chart::t: return -seg.root_end / ipow(v, 5);
    case Chart::x: return seg.root_end;
    case Chart::w: return v * seg.root_end;
    }
    return 0.0;
}

inline double min_branch_gap(const Curve& curve)
{
    const auto& e = curve.branch_points();
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) gap = std::min(gap, std::abs(e[i] - e[j]));
    return gap;
}

/// Straight x-line from a to b with arcs of radius rho around branch points
/// closer than rho to it. Branch points in `skip` are not detoured.
inline std::vector<PathSegment> x_line_with_detours(const Curve& curve, cplx a, cplx b, double rho, int skip)
{
    struct Detour {
        double s_in, s_out;
        cplx e;
        double sweep_sign;  // orientation of the arc about e
    };
    const cplx dir = b - a;
    const double len = std::abs(dir);
    std::vector<Detour> detours;
    const auto& bp = curve.branch_points();
    for (int k = 0; k < 5; ++k) {
        if (k == skip) continue;
        const cplx rel = (bp[k] - a) / dir;  // e in coordinates along the segment
        const double s = rel.real();
        const double d = rel.imag() * len;  // signed distance, positive if e is to the left
        if (std::abs(d) >= rho) continue;
        const double half = std::sqrt(rho * rho - d * d) / len;
        if (s + half <= 0.0 || s - half >= 1.0) continue;
        if (s - half <= 0.0 || s + half >= 1.0)
            throw error(errc::path_through_branch_point, "path endpoint lies inside a detour disk");
        // Take the minor arc, which stays on the line's side of e; a line
        // straight through e passes it on the right.
        detours.push_back({s - half, s + half, bp[k], d >= 0.0 ? 1.0 : -1.0});
    }
    std::sort(detours.begin(), detours.end(), [](const Detour& p, const Detour& q) { return p.s_in < q.s_in; });
    for (size_t i = 1; i < detours.size(); ++i)
        if (detours[i].s_in <= detours[i - 1].s_out)
            throw error(errc::path_through_branch_point, "overlapping branch-point detours");

    std::vector<PathSegment> out;
    double s = 0.0;
    for (const auto& dt : detours) {
        PathSegment line;
        line.chart = Chart::x;
        line.from = a + dir * s;
        line.to = a + dir * dt.s_in;
        out.push_back(line);
        const cplx p_in = line.to;
        const cplx p_out = a + dir * dt.s_out;
        PathSegment arc;
        arc.chart = Chart::x;
        arc.arc = true;
        arc.center = dt.e;
        arc.radius = rho;
        arc.angle_from = std::arg(p_in - dt.e);
        double to = std::arg(p_out - dt.e);
        double sweep = to - arc.angle_from;
        if (dt.sweep_sign > 0) {
            while (sweep <= 0.0) sweep += 2.0 * pi;
            while (sweep > 2.0 * pi) sweep -= 2.0 * pi;
        } else {
            while (sweep >= 0.0) sweep -= 2.0 * pi;
            while (sweep < -2.0 * pi) sweep += 2.0 * pi;
        }
        arc.angle_to = arc.angle_from + sweep;
        arc.from = p_in;
        arc.to = p_out;
        out.push_back(arc);
        s = dt.s_out;
    }
    PathSegment last;
    last.chart = Chart::x;
    last.from = a + dir * s;
    last.to = b;
    out.push_back(last);
    return out;
}

} // namespace detail

/// Integral of (w1, w2) from infinity to P along the canonical path.
/// If the path arrives on the other sheet, u is negated and sheet_sign = -1.
inline AbelResult abel_point(const CurvePoint& P, const Curve& curve)
{
    AbelResult res;
    if (P.is_infinity()) return res;
    if (!on_curve(curve, P)) throw error(errc::not_on_curve, "point is not on the curve");

    const double gap = detail::min_branch_gap(curve);
    const double rho = std::min(detail::detour_radius, 0.25 * gap);
    const double R = 2.0 * curve.max_branch_modulus() + 1.0;
    const cplx xp = P.x();

    std::vector<PathSegment> path;
    PathSegment tpiece;
    tpiece.chart = Chart::t;
    tpiece.from = 0.0;
    tpiece.root_start = 1.0;

    if (std::abs(xp) >= R) {
        tpiece.to = 1.0 / std::sqrt(xp);
        path.push_back(tpiece);
    } else {
        tpiece.to = 1.0 / std::sqrt(R);
        path.push_back(tpiece);

        // Nearest branch point to the target, if within rho.
        int near = -1;
        const auto& bp = curve.branch_points();
        for (int k = 0; k < 5; ++k)
            if (std::abs(xp - bp[k]) < rho && (near < 0 || std::abs(xp - bp[k]) < std::abs(xp - bp[near]))) near = k;

        if (near < 0) {
            for (auto& s : detail::x_line_with_detours(curve, R, xp, rho, -1)) path.push_back(s);
        } else {
            const cplx e = bp[near];
            // Stop where the line from R towards e meets the circle |x - e| = rho.
            const cplx dir = (e - cplx(R)) / std::abs(e - cplx(R));
            const cplx entry = e - rho * dir;
            for (auto& s : detail::x_line_with_detours(curve, R, entry, rho, near)) path.push_back(s);
            PathSegment wpiece;
            wpiece.chart = Chart::w;
            wpiece.branch_point = e;
            wpiece.from = std::sqrt(entry - e);
            wpiece.to = std::sqrt(xp - e);
            path.push_back(wpiece);
        }
    }

    // Integrate, handing the continued root from one piece to the next.
    Vec2 u = Vec2::Zero();
    cplx y_prev = 0.0;
    for (size_t i = 0; i < path.size(); ++i) {
        PathSegment& seg = path[i];
        if (i > 0) {
            if (seg.chart == Chart::x) seg.root_start = y_prev;
            if (seg.chart == Chart::w) seg.root_start = y_prev / seg.from;
        }
        if (seg.chart == Chart::w) {
            // Both signs of the terminal w are admissible; pick the one that
            // lands on P's sheet. Integrate a probe with the principal end.
            PathSegment probe = seg;
            Vec2 du = detail::integrate_segment(curve, probe);
            if (std::abs(detail::segment_end_y(probe) - P.y()) > std::abs(detail::segment_end_y(probe) + P.y())) {
                probe = seg;
                probe.to = -seg.to;
                du = detail::integrate_segment(curve, probe);
            }
            seg = probe;
            u += du;
        } else {
            u += detail::integrate_segment(curve, seg);
        }
        y_prev = detail::segment_end_y(seg);
    }

    res.path = std::move(path);
    if (std::abs(y_prev - P.y()) > std::abs(y_prev + P.y())) {
        res.u = -u;
        res.sheet_sign = -1;
    } else {
        res.u = u;
    }
    return res;
}

inline AbelResult abel_point(const CurvePoint& P, const SigmaContext& ctx) { return abel_point(P, ctx.periods.curve); }

inline Vec2 abel_pair(const CurvePoint& P1, const CurvePoint& P2, const Curve& curve)
{
    return abel_point(P1, curve).u + abel_point(P2, curve).u;
}

inline Vec2 abel_pair(const CurvePoint& P1, const CurvePoint& P2, const SigmaContext& ctx)
{
    return abel_pair(P1, P2, ctx.periods.curve);
}

struct AbelIncrement {
    Vec2 du;
    CurvePoint endpoint;
};

/// Integral of (w1, w2) along the straight x-segment from P to the point over
/// x_new reached by continuing y. P must not be a branch point and the
/// segment must stay away from branch points.
inline AbelIncrement abel_increment(const CurvePoint& P, cplx x_new, const Curve& curve)
{
    if (P.is_infinity()) throw error(errc::infinity_not_supported, "increment from infinity");
    PathSegment seg;
    seg.chart = Chart::x;
    seg.from = P.x();
    seg.to = x_new;
    seg.root_start = P.y();
    if (P.y() == cplx(0.0)) throw error(errc::path_through_branch_point, "increment from a branch point");
    const Vec2 du = detail::integrate_segment(curve, seg);
    return {du, CurvePoint::affine(x_new, seg.root_end)};
}

/// |sigma(u)| below 1e-8 scale after reduction.
inline bool on_theta_divisor(const Vec2& u, const SigmaContext& ctx, double rel = 1e-8)
{
    const Vec2 u_red = lattice_reduce(u, ctx.periods).u_red;
    return std::abs(sigma(u_red, ctx)) < rel * ctx.scale;
}

/// Throws unless u is a non-lattice point of the theta divisor.
inline void require_abel_image(const Vec2& u, const SigmaContext& ctx)
{
    const Vec2 u_red = lattice_reduce(u, ctx.periods).u_red;
    if (u_red.cwiseAbs().maxCoeff() < 1e-12) throw error(errc::origin_singular, "u is a lattice point");
    if (!(std::abs(sigma(u_red, ctx)) < 1e-8 * ctx.scale))
        throw error(errc::not_on_theta_divisor, "sigma(u) does not vanish");
}

struct CurveCoords {
    cplx x;
    cplx y;
};

/// x(u) = -sigma_1/sigma_2 and y(u) = sigma(2u) / (2 sigma_2^4) on the theta divisor.
inline CurveCoords curve_coords(const Vec2& u, const SigmaContext& ctx)
{
    require_abel_image(u, ctx);
    const Jet3 j = sigma_jet(u, ctx);
    const cplx s1 = j.partial(1, 0);
    const cplx s2 = j.partial(0, 1);
    const cplx x = -s1 / s2;
    const cplx y = sigma(2.0 * u, ctx) / (2.0 * ipow(s2, 4));
    return {x, y};
}

} // namespace g2sigma
