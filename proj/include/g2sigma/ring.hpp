#pragma once

// Sparse elements sum c_{a,b} x^a y^b (a in Z, b in {0,1}) of the coordinate
// ring of the curve, localized at x, together with the derivations d/du1 and
// d/du2 induced by du1 = dx/2y and du2 = x dx/2y:
//
//   D1 x = 2y,    D1 y = f'(x),
//   D2 x = 2y/x,  D2 y = f'(x)/x,     so D1 = x D2.
//
// y^2 is replaced by f(x) eagerly, so b never exceeds 1.

#include <map>
#include <utility>
#include <vector>

#include "g2sigma/common.hpp"
#include "g2sigma/curve.hpp"

namespace g2sigma {

inline constexpr int max_laurent_exponent = 64;

class RingElement {
public:
    using Key = std::pair<int, int>;  // (power of x, power of y)
    using Terms = std::map<Key, cplx>;

    RingElement() = default;

    static RingElement constant(cplx c) { return monomial(0, 0, c); }

    static RingElement monomial(int a, int b, cplx c = 1.0)
    {
        if (b != 0 && b != 1) throw error(errc::invalid_argument, "y exponent must be 0 or 1");
        RingElement e;
        e.add_term(a, b, c);
        return e;
    }

    static RingElement x() { return monomial(1, 0); }
    static RingElement y() { return monomial(0, 1); }

    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    cplx coefficient(int a, int b) const
    {
        auto it = terms_.find({a, b});
        return it == terms_.end() ? cplx(0.0) : it->second;
    }

    /// Adds c x^a y^b, dropping the entry if it cancels to exactly zero.
    void add_term(int a, int b, cplx c)
    {
        if (a > max_laurent_exponent || a < -max_laurent_exponent)
            throw error(errc::laurent_overflow, "Laurent exponent out of range");
        if (c == cplx(0.0)) return;
        auto [it, inserted] = terms_.try_emplace({a, b}, c);
        if (!inserted) {
            it->second += c;
            if (it->second == cplx(0.0)) terms_.erase(it);
        }
    }

    /// Multiplication by x^k; never needs the curve relation.
    RingElement shifted_x(int k) const
    {
        RingElement out;
        for (const auto& [key, c] : terms_) out.add_term(key.first + k, key.second, c);
        return out;
    }

    RingElement& operator+=(const RingElement& o)
    {
        for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, c);
        return *this;
    }

    RingElement& operator-=(const RingElement& o)
    {
        for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, -c);
        return *this;
    }

    RingElement& operator*=(cplx s)
    {
        if (s == cplx(0.0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [key, c] : terms_) c *= s;
        return *this;
    }

    friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
    friend RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }
    friend RingElement operator*(RingElement a, cplx s) { return a *= s; }
    friend RingElement operator*(cplx s, RingElement a) { return a *= s; }
    friend bool operator==(const RingElement& a, const RingElement& b) { return a.terms_ == b.terms_; }

private:
    Terms terms_;
};

/// Product in the coordinate ring, reducing y^2 -> f(x).
inline RingElement multiply(const RingElement& p, const RingElement& q, const Curve& curve)
{
    const auto& lambda = curve.lambda();
    RingElement out;
    for (const auto& [kp, cp] : p.terms()) {
        for (const auto& [kq, cq] : q.terms()) {
            const int a = kp.first + kq.first;
            const int b = kp.second + kq.second;
            const cplx c = cp * cq;
            if (b < 2) {
                out.add_term(a, b, c);
            } else {
                for (int i = 0; i <= 5; ++i) out.add_term(a + i, 0, c * lambda[i]);
            }
        }
    }
    return out;
}

/// D_j(elem), j in {1, 2}.
inline RingElement ring_derive(const RingElement& elem, const Curve& curve, int j)
{
    if (j != 1 && j != 2) throw error(errc::invalid_argument, "derivation index must be 1 or 2");
    const int s = j - 1;  // D_j x = 2y x^{-s}, D_j y = f'(x) x^{-s}
    const auto& lambda = curve.lambda();
    RingElement out;
    for (const auto& [key, c] : elem.terms()) {
        const auto [a, b] = key;
        if (a != 0) {
            // a c x^{a-1} y^b * 2y x^{-s}
            const cplx k = c * double(a) * 2.0;
            if (b == 0) {
                out.add_term(a - 1 - s, 1, k);
            } else {
                for (int i = 0; i <= 5; ++i) out.add_term(a - 1 - s + i, 0, k * lambda[i]);
            }
        }
        if (b == 1) {
            // c x^a * f'(x) x^{-s}
            for (int i = 1; i <= 5; ++i) out.add_term(a - s + i - 1, 0, c * (double(i) * lambda[i]));
        }
    }
    return out;
}

inline RingElement ring_derive_n(RingElement elem, const Curve& curve, int j, int times)
{
    for (int r = 0; r < times; ++r) elem = ring_derive(elem, curve, j);
    return elem;
}

inline cplx ring_eval(const RingElement& elem, const CurvePoint& p)
{
    if (p.is_infinity()) throw error(errc::infinity_not_supported, "cannot evaluate at infinity");
    const cplx x = p.x();
    const cplx y = p.y();
    cplx acc(0.0);
    for (const auto& [key, c] : elem.terms()) {
        if (key.first < 0 && x == cplx(0.0)) throw error(errc::pole_at_point, "negative power of x at x = 0");
        acc += c * ipow(x, key.first) * (key.second == 1 ? y : cplx(1.0));
    }
    return acc;
}

/// Pole order of x^a y^b at infinity.
constexpr int pole_order(int a, int b) noexcept { return 2 * a + 5 * b; }

/// The first `count` monomials x^a y^b ordered by strictly increasing pole
/// order at infinity, starting at order 0 (the constant 1) or at order 2.
/// Orders 1 and 3 are gaps; every other order has exactly one monomial.
inline std::vector<RingElement> monomial_sequence(int count, bool include_one)
{
    if (count < 1) throw error(errc::invalid_argument, "count must be positive");
    std::vector<RingElement> out;
    out.reserve(count);
    for (int order = include_one ? 0 : 2; int(out.size()) < count; ++order) {
        if (order % 2 == 0) {
            out.push_back(RingElement::monomial(order / 2, 0));
        } else if (order >= 5) {
            out.push_back(RingElement::monomial((order - 5) / 2, 1));
        }
    }
    return out;
}

} // namespace g2sigma
