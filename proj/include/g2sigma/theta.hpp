#pragma once

// Genus-2 Riemann theta series with half-integer characteristic,
//
//   theta[d](z) = sum_{n in Z^2} exp 2 pi i { 1/2 (n+d'')^T Z (n+d'') + (n+d'')^T (z + d') },
//
// truncated to an ellipsoid around the dominant term with a rigorous tail
// bound.

#include <algorithm>
#include <cmath>

#include "g2sigma/common.hpp"
#include "g2sigma/jet.hpp"

namespace g2sigma {

struct ThetaCharacteristic {
    RVec2 delta1{0.0, 0.5};  // d'
    RVec2 delta2{0.5, 0.5};  // d''

    /// 4 d''.d' mod 2; 1 for an odd characteristic.
    int parity() const
    {
        const long v = std::lround(4.0 * delta2.dot(delta1));
        return int(((v % 2) + 2) % 2);
    }
};

/// Real data of Im Z used for truncation.
struct ThetaGeometry {
    RMat2 im;          // Y = Im Z
    RMat2 im_inverse;  // Y^{-1}
    double lambda_min;
    double lambda_max;

    static ThetaGeometry from_modulus(const Mat2& modulus)
    {
        ThetaGeometry g;
        g.im = 0.5 * (modulus.imag() + modulus.imag().transpose());
        Eigen::SelfAdjointEigenSolver<RMat2> es(g.im);
        g.lambda_min = es.eigenvalues()(0);
        g.lambda_max = es.eigenvalues()(1);
        if (!(g.lambda_min > 0.0)) throw error(errc::not_positive_definite, "Im Z is not positive definite");
        g.im_inverse = g.im.inverse();
        return g;
    }
};

/// Upper bound for sum over |n + d'' + w|_Y > radius of
///   exp(-pi |n+d''+w|_Y^2 + pi w^T Y w) * (1 + growth * |n + d''|)^order,
/// where growth bounds the derivative factor |2 pi W^T (n + d'')| / |n + d''|.
/// Lattice points are counted by packing disks of radius sqrt(lambda_min)/2.
inline double theta_tail_bound(double radius, const ThetaGeometry& geo, double shift_energy, double shift_norm,
                               double growth, int order)
{
    const double rho = std::sqrt(geo.lambda_min);
    const double disk = 0.25 * rho * rho;
    double total = 0.0;
    for (double r = radius; r < radius + 200.0; r += 1.0) {
        const double outer = r + 1.0 + 0.5 * rho;
        const double inner = std::max(0.0, r - 0.5 * rho);
        const double count = (outer * outer - inner * inner) / disk;
        const double norm_bound = (r + 1.0) / rho + shift_norm;
        const double poly = std::pow(1.0 + growth * norm_bound, order);
        const double term = count * poly * std::exp(-pi * r * r + pi * shift_energy);
        total += term;
        if (term <= 1e-300 || (r > radius + 2.0 && term < 1e-20 * total)) break;
    }
    return total;
}

/// Smallest radius (on a 1/8 grid) whose tail bound is below eps.
inline double theta_radius(const ThetaGeometry& geo, double shift_energy, double shift_norm, double growth,
                           int order, double eps)
{
    double r = 0.5;
    while (theta_tail_bound(r, geo, shift_energy, shift_norm, growth, order) >= eps) r += 0.125;
    return r;
}

namespace detail {

/// Calls visit(v) for every v = n + d'' with |v + w|_Y <= radius.
template <class Visit>
void for_each_theta_index(const ThetaGeometry& geo, const RVec2& w, const RVec2& d2, double radius, Visit&& visit)
{
    const RMat2& Y = geo.im;
    const RVec2 centre = -w - d2;  // in n coordinates
    const double r2 = radius * radius;
    const double span1 = radius * std::sqrt(geo.im_inverse(0, 0));
    const long lo1 = long(std::ceil(centre(0) - span1));
    const long hi1 = long(std::floor(centre(0) + span1));
    for (long n1 = lo1; n1 <= hi1; ++n1) {
        const double d1 = double(n1) - centre(0);
        // Y11 d1^2 + 2 Y12 d1 t + Y22 t^2 <= r2, t = n2 - centre(1)
        const double a = Y(1, 1);
        const double b = Y(0, 1) * d1;
        const double c = Y(0, 0) * d1 * d1 - r2;
        const double disc = b * b - a * c;
        if (disc < 0.0) continue;
        const double sq = std::sqrt(disc);
        const long lo2 = long(std::ceil(centre(1) + (-b - sq) / a));
        const long hi2 = long(std::floor(centre(1) + (-b + sq) / a));
        for (long n2 = lo2; n2 <= hi2; ++n2) visit(RVec2(double(n1) + d2(0), double(n2) + d2(1)));
    }
}

inline RVec2 theta_shift(const ThetaGeometry& geo, const Vec2& z) { return geo.im_inverse * z.imag(); }

} // namespace detail

/// theta[ch](z; Z) with absolute truncation error below eps.
inline cplx theta_char(const Vec2& z, const Mat2& modulus, const ThetaCharacteristic& ch, double eps)
{
    const ThetaGeometry geo = ThetaGeometry::from_modulus(modulus);
    const RVec2 w = detail::theta_shift(geo, z);
    const double energy = w.dot(geo.im * w);
    const double radius = theta_radius(geo, energy, w.norm(), 0.0, 0, eps);
    const Vec2 zs = z + ch.delta1.cast<cplx>();
    cplx sum(0.0);
    detail::for_each_theta_index(geo, w, ch.delta2, radius, [&](const RVec2& v) {
        const Vec2 vc = v.cast<cplx>();
        sum += std::exp(two_pi_i * (0.5 * vc.dot(modulus * vc) + vc.dot(zs)));
    });
    return sum;
}

/// Derivative jet of u -> theta[ch](z + W h) at h = 0 (up to third order),
/// summed over the ellipsoid of the given radius.
inline Jet3 theta_jet(const Vec2& z, const Mat2& modulus, const ThetaGeometry& geo, const ThetaCharacteristic& ch,
                      const Mat2& dz_du, double radius, int order = 3)
{
    const RVec2 w = detail::theta_shift(geo, z);
    const Vec2 zs = z + ch.delta1.cast<cplx>();
    const Mat2 wt = dz_du.transpose();
    Jet3 out;
    detail::for_each_theta_index(geo, w, ch.delta2, radius, [&](const RVec2& v) {
        const Vec2 vc = v.cast<cplx>();
        // Eigen's dot() conjugates its left operand, so use transpose products.
        const cplx phase = 0.5 * (vc.transpose() * modulus * vc)(0) + (vc.transpose() * zs)(0);
        const cplx term = std::exp(two_pi_i * phase);
        out(0, 0) += term;
        if (order == 0) return;
        const Vec2 a = two_pi_i * (wt * vc);
        const cplx a1 = a(0), a2 = a(1);
        out(1, 0) += term * a1;
        out(0, 1) += term * a2;
        if (order == 1) return;
        out(2, 0) += term * a1 * a1 * 0.5;
        out(1, 1) += term * a1 * a2;
        out(0, 2) += term * a2 * a2 * 0.5;
        if (order == 2) return;
        out(3, 0) += term * a1 * a1 * a1 * (1.0 / 6.0);
        out(2, 1) += term * a1 * a1 * a2 * 0.5;
        out(1, 2) += term * a1 * a2 * a2 * 0.5;
        out(0, 3) += term * a2 * a2 * a2 * (1.0 / 6.0);
    });
    return out;
}

} // namespace g2sigma
