#pragma once

// Gauss-Legendre rules and a bisection-adaptive driver.

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "g2sigma/common.hpp"

namespace g2sigma {

struct GaussLegendreRule {
    std::vector<double> nodes;   // on [-1, 1], ascending
    std::vector<double> weights;
};

namespace detail {

inline GaussLegendreRule build_gauss_legendre(int n)
{
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Recompute the derivative at the converged node for the weight.
        double p0 = 1.0;
        double p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = (n == 1) ? 1.0 : n * (z * p1 - p0) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

} // namespace detail

/// Cached n-point rule; safe to call from several threads.
inline const GaussLegendreRule& gauss_legendre(int n)
{
    if (n < 1) throw error(errc::invalid_argument, "Gauss-Legendre order must be positive");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(detail::build_gauss_legendre(n));
    return *slot;
}

/// Fixed-order rule on [a, b]. F maps double -> an Eigen vector type.
template <class F>
auto integrate_fixed(F&& integrand, double a, double b, int order)
{
    const auto& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto total = (integrand(mid + half * rule.nodes[0]) * rule.weights[0]).eval();
    for (int i = 1; i < order; ++i) total += integrand(mid + half * rule.nodes[i]) * rule.weights[i];
    return (total * half).eval();
}

/// Bisects [a, b] until the order-`order` estimate on a subinterval agrees
/// with the sum over its halves to `tol` (relative to max(1, |value|)); the
/// tolerance is halved on each split.
template <class F>
auto integrate_adaptive(F&& integrand, double a, double b, int order = 64, double tol = 1e-10,
                        int max_depth = 40)
{
    auto whole = integrate_fixed(integrand, a, b, order);
    struct Recurse {
        F& f;
        int order;
        decltype(whole) run(double lo, double hi, const decltype(whole)& est, int depth, double tol)
        {
            const double mid = 0.5 * (lo + hi);
            auto left = integrate_fixed(f, lo, mid, order);
            auto right = integrate_fixed(f, mid, hi, order);
            decltype(whole) both = left + right;
            const double scale = std::max(1.0, both.cwiseAbs().maxCoeff());
            if ((both - est).cwiseAbs().maxCoeff() <= tol * scale || depth <= 0) return both;
            return (run(lo, mid, left, depth - 1, 0.5 * tol) + run(mid, hi, right, depth - 1, 0.5 * tol)).eval();
        }
    };
    Recurse rec{integrand, order};
    return rec.run(a, b, whole, max_depth, tol);
}

} // namespace g2sigma
