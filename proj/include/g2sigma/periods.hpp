#pragma once

// Period matrices of the first- and second-kind differentials
//
//   w1 = dx/2y,  w2 = x dx/2y,  e1 = (l3 x + 2 l4 x^2 + 3 l5 x^3) dx/2y,  e2 = x^2 dx/2y
//
// over a symplectic basis built from loops around the real segments between
// consecutive branch points. Matrix layout: omega1(k, i) = integral of w_k
// over alpha_i, omega2(k, i) over beta_i, and likewise eta1/eta2 for e_k.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "g2sigma/common.hpp"
#include "g2sigma/curve.hpp"
#include "g2sigma/quadrature.hpp"
#include "g2sigma/theta.hpp"

namespace g2sigma {

using IMat2 = Eigen::Matrix2i;

/// Integrals of (w1, w2, e1, e2) over one closed cycle.
using CycleIntegrals = Eigen::Matrix<cplx, 4, 1>;

struct PeriodData {
    Curve curve;
    Mat2 omega1;   // omega'
    Mat2 omega2;   // omega''
    Mat2 eta1;     // eta'
    Mat2 eta2;     // eta''
    Mat2 modulus;  // Z = omega'^{-1} omega''
    int quad_order = 0;
    // alpha_i = sum_j alpha_basis(i, j) * loop[e_{2j+1}, e_{2j+2}]   (j = 0, 1)
    // beta_i  = sum_j beta_basis(i, j)  * loop[e_{2j+2}, e_{2j+3}]
    IMat2 alpha_basis = IMat2::Identity();
    IMat2 beta_basis = IMat2::Identity();

    Mat2 omega1_inverse() const { return omega1.inverse(); }

    /// max |Z - Z^T|
    double symmetry_defect() const { return max_abs(modulus - modulus.transpose()); }
};

namespace detail {

inline cplx eta1_poly(const Curve& curve, cplx x)
{
    const auto& l = curve.lambda();
    return l[3] * x + 2.0 * l[4] * x * x + 3.0 * l[5] * x * x * x;
}

/// The four differentials as multiples of dx/2y.
inline CycleIntegrals differential_numerators(const Curve& curve, cplx x)
{
    CycleIntegrals v;
    v << 1.0, x, eta1_poly(curve, x), x * x;
    return v;
}

} // namespace detail

/// Integral of (w1, w2, e1, e2) along the loop around [e_k, e_{k+1}]
/// (0-based k), i.e. twice the segment integral. With x = c + r cos(theta),
/// y = r sin(theta) sqrt(-g(x)) where g is f with the two endpoint factors
/// removed, and dx/2y = -d theta / (2 sqrt(-g(x))).
inline CycleIntegrals segment_loop_integral(const Curve& curve, int k, int order)
{
    const auto& e = curve.branch_points();
    const double a = e[k].real();
    const double b = e[k + 1].real();
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    auto integrand = [&](double theta) -> CycleIntegrals {
        const double x = c + r * std::cos(theta);
        cplx g(1.0);
        for (int m = 0; m < 5; ++m)
            if (m != k && m != k + 1) g *= cplx(x) - e[m];
        const cplx s = std::sqrt(-g);
        return detail::differential_numerators(curve, x) * (-0.5 / s);
    };
    return 2.0 * integrate_fixed(integrand, 0.0, pi, order);
}

/// The same loop integral taken over the confocal ellipse
/// x = c + r cos(phi + i xi), phi in [0, 2 pi], with the trapezoid rule.
/// Independent of xi as long as the ellipse encloses no other branch point.
inline CycleIntegrals ellipse_loop_integral(const Curve& curve, int k, double xi, int nodes)
{
    const auto& e = curve.branch_points();
    const cplx a = e[k];
    const cplx b = e[k + 1];
    const cplx c = 0.5 * (a + b);
    const cplx r = 0.5 * (b - a);
    auto minus_g = [&](cplx x) {
        cplx g(1.0);
        for (int m = 0; m < 5; ++m)
            if (m != k && m != k + 1) g *= x - e[m];
        return -g;
    };
    CycleIntegrals total = CycleIntegrals::Zero();
    cplx s_prev = std::sqrt(minus_g(c + r * std::cos(cplx(0.0, xi))));
    for (int j = 0; j < nodes; ++j) {
        const cplx w(2.0 * pi * j / nodes, xi);
        const cplx x = c + r * std::cos(w);
        cplx s = std::sqrt(minus_g(x));
        if (std::abs(s - s_prev) > std::abs(s + s_prev)) s = -s;
        s_prev = s;
        total += detail::differential_numerators(curve, x) * (-0.5 / s);
    }
    return total * (2.0 * pi / nodes);
}

/// Raw loop integrals around [e_k, e_{k+1}], k = 0..3.
inline std::array<CycleIntegrals, 4> all_segment_loops(const Curve& curve, int order)
{
    std::array<CycleIntegrals, 4> loops;
    for (int k = 0; k < 4; ++k) loops[k] = segment_loop_integral(curve, k, order);
    return loops;
}

/// Assembles PeriodData from loop integrals and a choice of basis.
inline PeriodData assemble_periods(const Curve& curve, const std::array<CycleIntegrals, 4>& loops, const IMat2& A,
                                   const IMat2& B, int order)
{
    PeriodData pd{curve, Mat2::Zero(), Mat2::Zero(), Mat2::Zero(), Mat2::Zero(), Mat2::Zero(), order, A, B};
    for (int i = 0; i < 2; ++i) {
        const CycleIntegrals al = double(A(i, 0)) * loops[0] + double(A(i, 1)) * loops[2];
        const CycleIntegrals be = double(B(i, 0)) * loops[1] + double(B(i, 1)) * loops[3];
        for (int k = 0; k < 2; ++k) {
            pd.omega1(k, i) = al(k);
            pd.omega2(k, i) = be(k);
            pd.eta1(k, i) = al(2 + k);
            pd.eta2(k, i) = be(2 + k);
        }
    }
    pd.modulus = pd.omega1.inverse() * pd.omega2;
    return pd;
}

namespace detail {

inline std::vector<IMat2> unimodular_candidates()
{
    std::vector<IMat2> out;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            for (int c = -1; c <= 1; ++c)
                for (int d = -1; d <= 1; ++d) {
                    if (std::abs(a * d - b * c) != 1) continue;
                    IMat2 m;
                    m << a, b, c, d;
                    out.push_back(m);
                }
    std::stable_sort(out.begin(), out.end(), [](const IMat2& x, const IMat2& y) {
        return (x.array() != 0).count() < (y.array() != 0).count();
    });
    return out;
}

inline double condition_number(const Mat2& m)
{
    Eigen::JacobiSVD<Mat2> svd(m);
    const auto& s = svd.singularValues();
    return s(1) > 0.0 ? s(0) / s(1) : std::numeric_limits<double>::infinity();
}

/// True when theta[ch](omega'^{-1} u) vanishes at u = 0 to first order only
/// in the u1 direction, i.e. the characteristic is the one attached to the
/// base point at infinity.
inline bool characteristic_matches(const PeriodData& pd, const ThetaCharacteristic& ch)
{
    const ThetaGeometry geo = ThetaGeometry::from_modulus(pd.modulus);
    const double growth = 4.0 * pi * max_abs(pd.omega1_inverse());
    const double radius = theta_radius(geo, 0.0, 0.0, growth, 1, 1e-15);
    const Jet3 j = theta_jet(Vec2::Zero(), pd.modulus, geo, ch, pd.omega1_inverse(), radius, 1);
    return std::abs(j(0, 1)) < 1e-8 * std::abs(j(1, 0));
}

inline bool admissible(const PeriodData& pd, const ThetaCharacteristic& ch)
{
    if (!(detail::condition_number(pd.omega1) < 1e8)) return false;
    if (!(pd.symmetry_defect() <= 1e-9)) return false;
    Eigen::SelfAdjointEigenSolver<RMat2> es(0.5 * (pd.modulus.imag() + pd.modulus.imag().transpose()));
    if (!(es.eigenvalues()(0) > 0.0)) return false;
    return characteristic_matches(pd, ch);
}

} // namespace detail

/// Periods for a curve with five distinct real branch points.
/// The basis is the first unimodular recombination (fewest nonzero entries
/// first) that makes Z symmetric with Im Z > 0 and attaches the fixed odd
/// characteristic to infinity.
inline PeriodData compute_periods(const Curve& curve, int quad_order = 192, bool check_convergence = true)
{
    if (quad_order < 2) throw error(errc::invalid_argument, "quad_order must be at least 2");
    if (!curve.has_real_branch_points())
        throw error(errc::unsupported_branch_configuration, "branch points must all be real");

    const auto loops = all_segment_loops(curve, quad_order);
    if (check_convergence) {
        const auto finer = all_segment_loops(curve, 2 * quad_order);
        for (int k = 0; k < 4; ++k)
            if ((loops[k] - finer[k]).cwiseAbs().maxCoeff() > 1e-10)
                throw error(errc::quadrature_non_convergent, "doubling quad_order changed a period by more than 1e-10");
    }

    const ThetaCharacteristic ch;
    const auto candidates = detail::unimodular_candidates();
    for (const auto& A : candidates)
        for (const auto& B : candidates) {
            PeriodData pd = assemble_periods(curve, loops, A, B, quad_order);
            if (detail::admissible(pd, ch)) return pd;
        }
    throw error(errc::quadrature_non_convergent, "no admissible homology basis found");
}

/// omega' eta''^T - omega'' eta'^T; equals 2 pi i times the identity for a
/// symplectic basis.
inline Mat2 legendre_matrix(const PeriodData& pd)
{
    return pd.omega1 * pd.eta2.transpose() - pd.omega2 * pd.eta1.transpose();
}

struct LatticeReduction {
    Vec2 u_red;
    IVec2 m;
    IVec2 n;
};

/// omega' m + omega'' n
inline Vec2 lattice_vector(const PeriodData& pd, const IVec2& m, const IVec2& n)
{
    return pd.omega1 * m.cast<cplx>() + pd.omega2 * n.cast<cplx>();
}

/// Real coordinates (a, b) with v = omega' a + omega'' b.
inline std::pair<RVec2, RVec2> real_coordinates(const PeriodData& pd, const Vec2& v)
{
    const Vec2 z = pd.omega1.inverse() * v;
    const RMat2 Y = pd.modulus.imag();
    const RVec2 b = Y.inverse() * z.imag();
    const RVec2 a = z.real() - pd.modulus.real() * b;
    return {a, b};
}

/// Writes u = u_red + omega' m + omega'' n with the real coordinates of
/// u_red in [-1/2, 1/2).
inline LatticeReduction lattice_reduce(const Vec2& u, const PeriodData& pd)
{
    const auto [a, b] = real_coordinates(pd, u);
    IVec2 m, n;
    for (int i = 0; i < 2; ++i) {
        n(i) = int(std::floor(b(i) + 0.5));
        m(i) = int(std::floor(a(i) + 0.5));
    }
    return {u - lattice_vector(pd, m, n), m, n};
}

} // namespace g2sigma
