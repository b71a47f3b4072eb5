#pragma once

// The sigma function
//
//   sigma(u) = c exp(-1/2 u^T H u) theta[d](W u),   H = eta' omega'^{-1},  W = omega'^{-1},
//
// and its partial derivatives up to order 3.
//
// Convention: u is a column vector throughout. The row-vector form
// u eta' omega'^{-1} u^T is the same scalar as u^T H u because H is
// symmetric, and omega'^{-1} u^T becomes W u.
//
// Evaluation first reduces u modulo the period lattice and then applies the
// exact translation law. Writing l = omega' m + omega'' n and z = W u,
//
//   sigma(u + l) = sigma(u) exp( -u^T H l - 1/2 l^T H l
//                               + 2 pi i ( d''.m - n.d' - 1/2 n^T Z n - n^T z ) ).

#include <algorithm>
#include <cmath>
#include <vector>

#include "g2sigma/common.hpp"
#include "g2sigma/jet.hpp"
#include "g2sigma/periods.hpp"
#include "g2sigma/theta.hpp"

namespace g2sigma {

struct SigmaContext {
    PeriodData periods;
    ThetaCharacteristic characteristic;
    cplx c{1.0};
    double trunc_radius = 0.0;
    double eps = 1e-12;
    Mat2 inv_omega1;   // W
    Mat2 quad_form;    // H, symmetrized
    ThetaGeometry geometry;
    double scale = 1.0;  // median |sigma| over the fundamental cell
};

namespace detail {

inline double radical_inverse(unsigned index, unsigned base)
{
    double result = 0.0;
    double f = 1.0 / base;
    while (index > 0) {
        result += f * (index % base);
        index /= base;
        f /= base;
    }
    return result;
}

/// Quadratic-prefactor jet exp(-1/2 (u+h)^T H (u+h)) around u.
inline Jet3 prefactor_jet(const Vec2& u, const Mat2& H)
{
    const Vec2 Hu = H * u;
    Jet3 q = Jet3::linear(-0.5 * (u.transpose() * Hu)(0), -Hu(0), -Hu(1));
    q(2, 0) = -0.5 * H(0, 0);
    q(1, 1) = -H(0, 1);
    q(0, 2) = -0.5 * H(1, 1);
    return exp(q);
}

/// Exponent jet of the translation factor sigma(u+h+l)/sigma(u+h), l = omega' m + omega'' n.
inline Jet3 translation_exponent(const Vec2& u, const IVec2& m, const IVec2& n, const SigmaContext& ctx)
{
    const PeriodData& pd = ctx.periods;
    const Vec2 l = lattice_vector(pd, m, n);
    const Mat2& H = ctx.quad_form;
    const Vec2 mc = m.cast<cplx>();
    const Vec2 nc = n.cast<cplx>();
    const Vec2 d1 = ctx.characteristic.delta1.cast<cplx>();
    const Vec2 d2 = ctx.characteristic.delta2.cast<cplx>();
    const Vec2 z = ctx.inv_omega1 * u;
    const cplx lin_phase = (d2.transpose() * mc)(0) - (nc.transpose() * d1)(0)
                           - 0.5 * (nc.transpose() * pd.modulus * nc)(0) - (nc.transpose() * z)(0);
    const cplx value = -(u.transpose() * H * l)(0) - 0.5 * (l.transpose() * H * l)(0) + two_pi_i * lin_phase;
    const Vec2 grad = -H * l - two_pi_i * (ctx.inv_omega1.transpose() * nc);
    return Jet3::linear(value, grad(0), grad(1));
}

inline Jet3 unnormalized_jet(const Vec2& u, const SigmaContext& ctx, double radius)
{
    const Vec2 z = ctx.inv_omega1 * u;
    const Jet3 th = theta_jet(z, ctx.periods.modulus, ctx.geometry, ctx.characteristic, ctx.inv_omega1, radius);
    return prefactor_jet(u, ctx.quad_form) * th;
}

/// Truncation radius valid for every z whose shift Y^{-1} Im z lies in the
/// box |w_i| <= half_width, including derivatives up to order 3.
inline double cell_radius(const ThetaGeometry& geo, const Mat2& W, double half_width, double eps)
{
    double energy = 0.0;
    for (double s1 : {-1.0, 1.0})
        for (double s2 : {-1.0, 1.0}) {
            const RVec2 w(s1 * half_width, s2 * half_width);
            energy = std::max(energy, w.dot(geo.im * w));
        }
    const double growth = 4.0 * pi * max_abs(W);
    return theta_radius(geo, energy, std::sqrt(2.0) * half_width, growth, 3, eps);
}

/// Radius for an arbitrary, unreduced z.
inline double point_radius(const ThetaGeometry& geo, const Mat2& W, const Vec2& z, double eps)
{
    const RVec2 w = theta_shift(geo, z);
    const double growth = 4.0 * pi * max_abs(W);
    return theta_radius(geo, w.dot(geo.im * w), w.norm(), growth, 3, eps);
}

} // namespace detail

/// Taylor jet of sigma at u: coefficients of h1^i h2^k in sigma(u + h).
inline Jet3 sigma_jet(const Vec2& u, const SigmaContext& ctx)
{
    const LatticeReduction red = lattice_reduce(u, ctx.periods);
    Jet3 j = detail::unnormalized_jet(red.u_red, ctx, ctx.trunc_radius) * ctx.c;
    if (!red.m.isZero() || !red.n.isZero()) j = j * exp(detail::translation_exponent(red.u_red, red.m, red.n, ctx));
    return j;
}

/// Evaluation without lattice reduction; the theta sum is sized for the
/// given point. Only sensible for moderate u.
inline Jet3 sigma_jet_unreduced(const Vec2& u, const SigmaContext& ctx)
{
    const double radius = detail::point_radius(ctx.geometry, ctx.inv_omega1, ctx.inv_omega1 * u, ctx.eps);
    return detail::unnormalized_jet(u, ctx, radius) * ctx.c;
}

inline cplx sigma(const Vec2& u, const SigmaContext& ctx) { return sigma_jet(u, ctx).value(); }

inline cplx sigma_unreduced(const Vec2& u, const SigmaContext& ctx) { return sigma_jet_unreduced(u, ctx).value(); }

/// d^{d1+d2} sigma / du1^d1 du2^d2 for d1 + d2 <= 3.
inline cplx sigma_partial(const Vec2& u, const SigmaContext& ctx, int d1, int d2)
{
    if (d1 < 0 || d2 < 0) throw error(errc::invalid_argument, "negative derivative order");
    if (d1 + d2 > Jet3::max_order) throw error(errc::unsupported_order, "derivatives above order 3");
    return sigma_jet(u, ctx).partial(d1, d2);
}

/// Median |sigma| over Halton points of the fundamental cell.
inline double sigma_scale(const SigmaContext& ctx, int samples = 64)
{
    std::vector<double> mags;
    mags.reserve(samples);
    const PeriodData& pd = ctx.periods;
    for (int k = 1; k <= samples; ++k) {
        const RVec2 a(detail::radical_inverse(k, 2) - 0.5, detail::radical_inverse(k, 3) - 0.5);
        const RVec2 b(detail::radical_inverse(k, 5) - 0.5, detail::radical_inverse(k, 7) - 0.5);
        const Vec2 u = pd.omega1 * a.cast<cplx>() + pd.omega2 * b.cast<cplx>();
        mags.push_back(std::abs(sigma(u, ctx)));
    }
    std::nth_element(mags.begin(), mags.begin() + samples / 2, mags.end());
    return mags[samples / 2];
}

/// Fixes c so that d sigma/du1 (0) = 1.
inline SigmaContext calibrate_c(const PeriodData& pd, const ThetaCharacteristic& ch = {}, double eps = 1e-12)
{
    if (!(eps > 0.0)) throw error(errc::invalid_argument, "eps must be positive");
    SigmaContext ctx{pd, ch};
    ctx.eps = eps;
    ctx.geometry = ThetaGeometry::from_modulus(pd.modulus);
    ctx.inv_omega1 = pd.omega1.inverse();
    const Mat2 H = pd.eta1 * ctx.inv_omega1;
    ctx.quad_form = 0.5 * (H + H.transpose());
    ctx.trunc_radius = detail::cell_radius(ctx.geometry, ctx.inv_omega1, 0.5 + 1e-6, eps);
    ctx.c = 1.0;
    const cplx d1 = detail::unnormalized_jet(Vec2::Zero(), ctx, ctx.trunc_radius).partial(1, 0);
    if (!(std::abs(d1) >= 1e-12)) throw error(errc::degenerate_theta, "d sigma/du1 vanishes at the origin");
    ctx.c = 1.0 / d1;
    ctx.scale = sigma_scale(ctx);
    return ctx;
}

/// eta(v) = eta' a + eta'' b for v = omega' a + omega'' b with a, b real.
inline Vec2 eta_of(const Vec2& v, const PeriodData& pd)
{
    const auto [a, b] = real_coordinates(pd, v);
    return pd.eta1 * a.cast<cplx>() + pd.eta2 * b.cast<cplx>();
}

/// L(u, v) = -u^T eta(v); C-linear in u, R-linear in v.
inline cplx L_form(const Vec2& u, const Vec2& v, const PeriodData& pd) { return -(u.transpose() * eta_of(v, pd))(0); }

/// chi(l) = sigma(u + l) / (sigma(u) exp L(u + l/2, l)), evaluated at u.
inline cplx translation_character(const Vec2& l, const Vec2& u, const SigmaContext& ctx)
{
    const Vec2 mid = u + 0.5 * l;
    return sigma(u + l, ctx) / (sigma(u, ctx) * std::exp(L_form(mid, l, ctx.periods)));
}

} // namespace g2sigma
