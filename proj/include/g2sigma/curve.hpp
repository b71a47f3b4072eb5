#pragma once

// The quintic model y^2 = f(x), f monic of degree 5, and points on it.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "g2sigma/common.hpp"

namespace g2sigma {

class Curve {
public:
    using Coefficients = std::array<cplx, 6>;
    using BranchPoints = std::array<cplx, 5>;

    /// lambda[i] is the coefficient of x^i. Requires lambda[5] == 1 exactly
    /// and five pairwise distinct roots.
    static Curve create(const Coefficients& lambda)
    {
        if (lambda[5] != cplx(1.0, 0.0))
            throw error(errc::not_monic_quintic, "leading coefficient lambda5 must be exactly 1");
        Curve c;
        c.lambda_ = lambda;
        c.branch_ = find_roots(lambda);
        double min_gap = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j) min_gap = std::min(min_gap, std::abs(c.branch_[i] - c.branch_[j]));
        if (!(min_gap > 1e-9)) throw error(errc::singular_curve, "f has a repeated root");
        return c;
    }

    const Coefficients& lambda() const noexcept { return lambda_; }
    const BranchPoints& branch_points() const noexcept { return branch_; }

    cplx f(cplx x) const noexcept
    {
        cplx acc = lambda_[5];
        for (int i = 4; i >= 0; --i) acc = acc * x + lambda_[i];
        return acc;
    }

    cplx df(cplx x) const noexcept
    {
        cplx acc = 5.0 * lambda_[5];
        for (int i = 4; i >= 1; --i) acc = acc * x + double(i) * lambda_[i];
        return acc;
    }

    /// f(x) / (x - e) for a branch point e, evaluated as a product so that it
    /// stays accurate at x = e.
    cplx f_without_root(cplx x, int root_index) const noexcept
    {
        cplx acc(1.0);
        for (int k = 0; k < 5; ++k)
            if (k != root_index) acc *= x - branch_[k];
        return acc;
    }

    bool has_real_branch_points(double tol = 1e-10) const noexcept
    {
        return std::all_of(branch_.begin(), branch_.end(), [tol](cplx e) {
            return std::abs(e.imag()) <= tol * std::max(1.0, std::abs(e));
        });
    }

    double max_branch_modulus() const noexcept
    {
        double m = 0.0;
        for (auto e : branch_) m = std::max(m, std::abs(e));
        return m;
    }

private:
    Curve() = default;

    static BranchPoints find_roots(const Coefficients& lambda)
    {
        Eigen::Matrix<cplx, 5, 5> companion = Eigen::Matrix<cplx, 5, 5>::Zero();
        for (int i = 1; i < 5; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < 5; ++i) companion(i, 4) = -lambda[i];
        Eigen::ComplexEigenSolver<Eigen::Matrix<cplx, 5, 5>> solver(companion, false);
        BranchPoints roots;
        for (int i = 0; i < 5; ++i) roots[i] = solver.eigenvalues()(i);

        auto poly = [&](cplx x) {
            cplx acc = lambda[5];
            for (int i = 4; i >= 0; --i) acc = acc * x + lambda[i];
            return acc;
        };
        auto dpoly = [&](cplx x) {
            cplx acc = 5.0 * lambda[5];
            for (int i = 4; i >= 1; --i) acc = acc * x + double(i) * lambda[i];
            return acc;
        };
        for (auto& r : roots) {
            for (int step = 0; step < 3; ++step) {
                const cplx d = dpoly(r);
                if (d == cplx(0.0)) break;
                r -= poly(r) / d;
            }
            if (std::abs(r.imag()) <= 1e-12 * std::max(1.0, std::abs(r))) r = cplx(r.real(), 0.0);
        }
        std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
            const double tol = 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
            if (std::abs(a.real() - b.real()) > tol) return a.real() < b.real();
            return a.imag() < b.imag();
        });
        return roots;
    }

    Coefficients lambda_{};
    BranchPoints branch_{};
};

inline Curve curve_new(const Curve::Coefficients& lambda) { return Curve::create(lambda); }
inline cplx eval_f(const Curve& curve, cplx x) { return curve.f(x); }
inline cplx eval_Df(const Curve& curve, cplx x) { return curve.df(x); }

/// Either the point at infinity or an affine point (x, y).
class CurvePoint {
public:
    static CurvePoint infinity() noexcept { return CurvePoint(true, 0.0, 0.0); }
    static CurvePoint affine(cplx x, cplx y) noexcept { return CurvePoint(false, x, y); }

    bool is_infinity() const noexcept { return infinite_; }
    cplx x() const noexcept { return x_; }
    cplx y() const noexcept { return y_; }

    /// Image under the hyperelliptic involution (x, y) -> (x, -y).
    CurvePoint involution() const noexcept { return infinite_ ? *this : affine(x_, -y_); }

private:
    CurvePoint(bool inf, cplx x, cplx y) : infinite_(inf), x_(x), y_(y) {}

    bool infinite_;
    cplx x_;
    cplx y_;
};

inline bool on_curve(const Curve& curve, const CurvePoint& p)
{
    if (p.is_infinity()) return true;
    const cplx fx = curve.f(p.x());
    const double scale = std::max({1.0, std::abs(fx), std::norm(p.y())});
    return std::abs(p.y() * p.y() - fx) <= 1e-10 * scale;
}

inline CurvePoint make_point(const Curve& curve, cplx x, cplx y)
{
    auto p = CurvePoint::affine(x, y);
    if (!on_curve(curve, p)) throw error(errc::not_on_curve, "y^2 != f(x)");
    return p;
}

/// The affine point over x with y = sheet * principal sqrt(f(x)), sheet = +-1.
inline CurvePoint point_over(const Curve& curve, cplx x, int sheet = 1)
{
    return CurvePoint::affine(x, double(sheet >= 0 ? 1 : -1) * std::sqrt(curve.f(x)));
}

} // namespace g2sigma
