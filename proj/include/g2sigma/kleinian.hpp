#pragma once

// Kleinian functions wp_{jk} = -d^2 log sigma / du_j du_k and their
// third derivatives wp_{jkl}, from the log of the sigma jet.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "g2sigma/common.hpp"
#include "g2sigma/jet.hpp"
#include "g2sigma/periods.hpp"
#include "g2sigma/sigma.hpp"

namespace g2sigma {

/// Sorted multiset over {1, 2} of size 2 or 3.
class WpIndex {
public:
    WpIndex(std::initializer_list<int> idx) : WpIndex(std::vector<int>(idx)) {}

    explicit WpIndex(std::vector<int> idx) : idx_(std::move(idx))
    {
        if (idx_.size() != 2 && idx_.size() != 3) throw error(errc::invalid_argument, "wp index must have 2 or 3 entries");
        for (int i : idx_)
            if (i != 1 && i != 2) throw error(errc::invalid_argument, "wp index entries must be 1 or 2");
        std::sort(idx_.begin(), idx_.end());
    }

    const std::vector<int>& indices() const noexcept { return idx_; }
    int size() const noexcept { return int(idx_.size()); }
    int count(int j) const { return int(std::count(idx_.begin(), idx_.end(), j)); }

private:
    std::vector<int> idx_;
};

namespace detail {

inline Jet3 log_sigma_jet(const Vec2& u, const SigmaContext& ctx)
{
    const Jet3 s = sigma_jet(u, ctx);
    const cplx s_red = sigma(lattice_reduce(u, ctx.periods).u_red, ctx);
    if (!(std::abs(s_red) > 1e-8 * ctx.scale)) throw error(errc::on_theta_divisor, "sigma(u) vanishes");
    return log(s);
}

inline cplx wp_from_log(const Jet3& lg, const WpIndex& idx) { return -lg.partial(idx.count(1), idx.count(2)); }

} // namespace detail

/// wp_{jk}(u) for an index of size 2.
inline cplx wp(const Vec2& u, const WpIndex& idx, const SigmaContext& ctx)
{
    if (idx.size() != 2) throw error(errc::invalid_argument, "wp expects a two-entry index");
    return detail::wp_from_log(detail::log_sigma_jet(u, ctx), idx);
}

/// wp_{jkl}(u) for an index of size 3.
inline cplx wp3(const Vec2& u, const WpIndex& idx, const SigmaContext& ctx)
{
    if (idx.size() != 3) throw error(errc::invalid_argument, "wp3 expects a three-entry index");
    return detail::wp_from_log(detail::log_sigma_jet(u, ctx), idx);
}

struct AdditionCheck {
    cplx lhs;
    cplx rhs;
    double residual;
};

/// -sigma(u+v) sigma(u-v) / (sigma(u)^2 sigma(v)^2) against
/// wp11(u) - wp11(v) + wp12(u) wp22(v) - wp12(v) wp22(u).
inline AdditionCheck addition_formula(const Vec2& u, const Vec2& v, const SigmaContext& ctx)
{
    const Jet3 lu = detail::log_sigma_jet(u, ctx);
    const Jet3 lv = detail::log_sigma_jet(v, ctx);
    const cplx su = sigma(u, ctx);
    const cplx sv = sigma(v, ctx);
    const cplx lhs = -sigma(u + v, ctx) * sigma(u - v, ctx) / (su * su * sv * sv);
    auto w = [](const Jet3& lg, int a, int b) { return -lg.partial(a, b); };
    const cplx rhs = w(lu, 2, 0) - w(lv, 2, 0) + w(lu, 1, 1) * w(lv, 0, 2) - w(lv, 1, 1) * w(lu, 0, 2);
    return {lhs, rhs, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs))};
}

inline double check_addition_formula(const Vec2& u, const Vec2& v, const SigmaContext& ctx)
{
    return addition_formula(u, v, ctx).residual;
}

} // namespace g2sigma
