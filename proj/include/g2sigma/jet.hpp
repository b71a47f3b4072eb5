#pragma once

// Truncated bivariate Taylor polynomials: sum_{i+j<=3} c_ij h1^i h2^j.

#include <array>

#include "g2sigma/common.hpp"

namespace g2sigma {

class Jet3 {
public:
    static constexpr int max_order = 3;

    Jet3() { clear(); }

    static Jet3 constant(cplx c)
    {
        Jet3 j;
        j(0, 0) = c;
        return j;
    }

    /// c0 + g1 h1 + g2 h2
    static Jet3 linear(cplx c0, cplx g1, cplx g2)
    {
        Jet3 j;
        j(0, 0) = c0;
        j(1, 0) = g1;
        j(0, 1) = g2;
        return j;
    }

    cplx& operator()(int i, int k) { return c_[i][k]; }
    cplx operator()(int i, int k) const { return c_[i][k]; }

    cplx value() const { return c_[0][0]; }

    /// d^{i+k} / dh1^i dh2^k at h = 0.
    cplx partial(int i, int k) const
    {
        static constexpr double fact[] = {1.0, 1.0, 2.0, 6.0};
        return c_[i][k] * fact[i] * fact[k];
    }

    Jet3& operator+=(const Jet3& o)
    {
        for (int i = 0; i <= max_order; ++i)
            for (int k = 0; i + k <= max_order; ++k) c_[i][k] += o.c_[i][k];
        return *this;
    }

    Jet3& operator-=(const Jet3& o)
    {
        for (int i = 0; i <= max_order; ++i)
            for (int k = 0; i + k <= max_order; ++k) c_[i][k] -= o.c_[i][k];
        return *this;
    }

    Jet3& operator*=(cplx s)
    {
        for (int i = 0; i <= max_order; ++i)
            for (int k = 0; i + k <= max_order; ++k) c_[i][k] *= s;
        return *this;
    }

    friend Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
    friend Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }
    friend Jet3 operator*(Jet3 a, cplx s) { return a *= s; }
    friend Jet3 operator*(cplx s, Jet3 a) { return a *= s; }

    friend Jet3 operator*(const Jet3& a, const Jet3& b)
    {
        Jet3 out;
        for (int i1 = 0; i1 <= max_order; ++i1)
            for (int k1 = 0; i1 + k1 <= max_order; ++k1) {
                const cplx ca = a.c_[i1][k1];
                if (ca == cplx(0.0)) continue;
                for (int i2 = 0; i1 + k1 + i2 <= max_order; ++i2)
                    for (int k2 = 0; i1 + k1 + i2 + k2 <= max_order; ++k2)
                        out.c_[i1 + i2][k1 + k2] += ca * b.c_[i2][k2];
            }
        return out;
    }

    /// exp of the jet.
    friend Jet3 exp(const Jet3& a)
    {
        Jet3 p = a;
        p(0, 0) = 0.0;
        const Jet3 p2 = p * p;
        const Jet3 p3 = p2 * p;
        Jet3 out = constant(1.0) + p + p2 * 0.5 + p3 * (1.0 / 6.0);
        return out * std::exp(a.value());
    }

    /// log of the jet; the constant term must be nonzero.
    friend Jet3 log(const Jet3& a)
    {
        const cplx a0 = a.value();
        Jet3 p = a * (cplx(1.0) / a0);
        p(0, 0) = 0.0;
        const Jet3 p2 = p * p;
        const Jet3 p3 = p2 * p;
        Jet3 out = p - p2 * 0.5 + p3 * (1.0 / 3.0);
        out(0, 0) = std::log(a0);
        return out;
    }

private:
    void clear()
    {
        for (auto& row : c_) row.fill(cplx(0.0));
    }

    std::array<std::array<cplx, max_order + 1>, max_order + 1> c_;
};

} // namespace g2sigma
