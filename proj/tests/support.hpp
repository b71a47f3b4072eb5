#pragma once

// Shared fixtures and independent oracles for the test executables.

#include <cmath>
#include <random>
#include <vector>

#include "g2sigma/g2sigma.hpp"

namespace testing {

using namespace g2sigma;

inline const Curve& test_curve()
{
    static const Curve curve = Curve::create({0.0, 4.0, 0.0, -5.0, 0.0, 1.0});
    return curve;
}

inline const SigmaContext& test_context()
{
    static const SigmaContext ctx = calibrate_c(compute_periods(test_curve()));
    return ctx;
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

/// Direct theta sum over the box |k_i| <= K, no truncation logic.
inline cplx theta_box(const Vec2& z, const Mat2& Z, const ThetaCharacteristic& ch, int K = 14)
{
    cplx acc(0.0);
    for (int a = -K; a <= K; ++a)
        for (int b = -K; b <= K; ++b) {
            const Vec2 v(a + ch.delta2(0), b + ch.delta2(1));
            const cplx phase = 0.5 * (v.transpose() * Z * v)(0) + (v.transpose() * (z + ch.delta1.cast<cplx>()))(0);
            acc += std::exp(two_pi_i * phase);
        }
    return acc;
}

/// Central difference of g along direction e with step h, one Richardson step.
template <class G>
cplx richardson_derivative(G&& g, const Vec2& u, const Vec2& e, double h)
{
    auto central = [&](double s) { return (g(Vec2(u + s * e)) - g(Vec2(u - s * e))) / (2.0 * s); };
    return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

inline Vec2 unit(int i) { return i == 0 ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0); }

} // namespace testing
