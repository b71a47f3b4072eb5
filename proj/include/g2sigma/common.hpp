#pragma once

// Shared scalar/vector types and the error type used across g2sigma.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace g2sigma {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;
using RVec2 = Eigen::Vector2d;
using RMat2 = Eigen::Matrix2d;
using IVec2 = Eigen::Vector2i;

/// A point u = (u1, u2) of C^2, the universal cover of the Jacobian.
/// Stored as a column vector; see sigma.hpp for the transpose convention.
using JacobianPoint = Vec2;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr cplx two_pi_i{0.0, 2.0 * pi};

enum class errc {
    not_monic_quintic,
    singular_curve,
    not_on_curve,
    pole_at_point,
    infinity_not_supported,
    laurent_overflow,
    unsupported_branch_configuration,
    quadrature_non_convergent,
    not_positive_definite,
    degenerate_theta,
    unsupported_order,
    path_through_branch_point,
    not_on_theta_divisor,
    origin_singular,
    on_theta_divisor,
    invalid_argument,
};

constexpr const char* errc_name(errc code) noexcept
{
    switch (code) {
    case errc::not_monic_quintic: return "NotMonicQuintic";
    case errc::singular_curve: return "SingularCurve";
    case errc::not_on_curve: return "NotOnCurve";
    case errc::pole_at_point: return "PoleAtPoint";
    case errc::infinity_not_supported: return "InfinityNotSupported";
    case errc::laurent_overflow: return "LaurentOverflow";
    case errc::unsupported_branch_configuration: return "UnsupportedBranchConfiguration";
    case errc::quadrature_non_convergent: return "QuadratureNonConvergent";
    case errc::not_positive_definite: return "NotPositiveDefinite";
    case errc::degenerate_theta: return "DegenerateTheta";
    case errc::unsupported_order: return "UnsupportedOrder";
    case errc::path_through_branch_point: return "PathThroughBranchPoint";
    case errc::not_on_theta_divisor: return "NotOnThetaDivisor";
    case errc::origin_singular: return "OriginSingular";
    case errc::on_theta_divisor: return "OnThetaDivisor";
    case errc::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code)
    {
    }

    errc code() const noexcept { return code_; }
    const char* name() const noexcept { return errc_name(code_); }

private:
    errc code_;
};

/// Integer power by repeated squaring; exact for small integer-valued inputs.
inline cplx ipow(cplx x, int k)
{
    if (k < 0) return cplx(1.0) / ipow(x, -k);
    cplx result(1.0);
    cplx base = x;
    while (k > 0) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

inline double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace g2sigma
