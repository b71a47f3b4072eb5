#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace g2sigma;

namespace {

template <class F>
void expect_error(errc code, F&& f)
{
    try {
        f();
        FAIL("expected " << errc_name(code));
    } catch (const error& e) {
        CHECK(e.code() == code);
    }
}

} // namespace

TEST_CASE("abel of infinity is zero")
{
    const auto r = abel_point(CurvePoint::infinity(), testing::test_curve());
    CHECK(r.u.isZero());
    CHECK(r.path.empty());
    CHECK(r.sheet_sign == 1);
}

TEST_CASE("local parameter near infinity")
{
    // x = t^-2, y ~ -t^-5 gives u2 = t + O(t^5), u1 = t^3/3 + O(t^7)
    const Curve& c = testing::test_curve();
    double prev = 1.0;
    for (double t : {1e-1, 1e-2, 1e-3}) {
        const CurvePoint P = point_near_infinity(c, t);
        const Vec2 u = abel_point(P, c).u;
        const double d = std::abs(u(0) / ipow(u(1), 3) - 1.0 / 3.0) * 3.0;
        CHECK(d < prev);
        prev = d;
        CHECK(std::abs(u(1) / t - 1.0) < t * t * t * t + 1e-12);
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("Abel images lie on the theta divisor")
{
    const auto& ctx = testing::test_context();
    const Curve& c = ctx.periods.curve;
    const CurvePoint P = make_point(c, 3.0, std::sqrt(120.0));
    const auto r = abel_point(P, ctx);
    CHECK(std::abs(sigma(r.u, ctx)) < 1e-8 * ctx.scale);
    CHECK(!r.path.empty());
    CHECK(r.path.front().chart == Chart::t);

    std::mt19937_64 rng(31);
    for (const auto& Q : random_curve_points(c, rng, 10, 0.2, 4.0, 0.05)) {
        const Vec2 u = abel_point(Q, ctx).u;
        CHECK(on_theta_divisor(u, ctx));
        const auto xy = curve_coords(u, ctx);
        CHECK(testing::rel_err(xy.x, Q.x()) < 1e-6);
        CHECK(testing::rel_err(xy.y, Q.y()) < 1e-6);
    }
}

TEST_CASE("involution negates the image")
{
    const auto& ctx = testing::test_context();
    const Curve& c = ctx.periods.curve;
    for (cplx x : {cplx(3.0), cplx(0.5, 0.7), cplx(-1.5, -0.2)}) {
        const CurvePoint P = point_over(c, x);
        const Vec2 a = abel_point(P, c).u;
        const Vec2 b = abel_point(P.involution(), c).u;
        CHECK(lattice_reduce(a + b, ctx.periods).u_red.norm() < 1e-9);
    }
}

TEST_CASE("path independence modulo the lattice")
{
    const auto& ctx = testing::test_context();
    const Curve& c = ctx.periods.curve;
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> d(-0.6, 0.6);
    for (const auto& P : random_curve_points(c, rng, 10, 1.0, 4.0, 0.3)) {
        const cplx x_new = P.x() + cplx(d(rng), d(rng));
        bool clear = true;
        for (auto e : c.branch_points()) {
            // the segment from P to x_new must stay away from branch points
            const cplx a = P.x(), b = x_new;
            const double s = std::clamp(((e - a) * std::conj(b - a)).real() / std::norm(b - a), 0.0, 1.0);
            clear = clear && std::abs(a + s * (b - a) - e) > 0.1;
        }
        if (!clear) continue;
        const auto inc = abel_increment(P, x_new, c);
        const Vec2 lhs = abel_point(P, c).u + inc.du;
        const Vec2 rhs = abel_point(inc.endpoint, c).u;
        CHECK(lattice_reduce(lhs - rhs, ctx.periods).u_red.norm() < 1e-6);
    }
}

TEST_CASE("targets close to branch points")
{
    const auto& ctx = testing::test_context();
    const Curve& c = ctx.periods.curve;
    for (double e : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        for (cplx off : {cplx(1e-3, 0.0), cplx(0.0, -4e-3), cplx(-2e-3, 2e-3)}) {
            const CurvePoint P = point_over(c, e + off, -1);
            const auto r = abel_point(P, c);
            CHECK(r.path.back().chart == Chart::w);
            CHECK(std::abs(sigma(r.u, ctx)) < 1e-8 * ctx.scale);
            const Vec2 b = abel_point(P.involution(), c).u;
            CHECK(lattice_reduce(r.u + b, ctx.periods).u_red.norm() < 1e-8);
        }
        // a branch point itself is a half period
        const Vec2 half = abel_point(CurvePoint::affine(e, 0.0), c).u;
        CHECK(lattice_reduce(2.0 * half, ctx.periods).u_red.norm() < 1e-8);
    }
}

TEST_CASE("abel_pair")
{
    const auto& ctx = testing::test_context();
    const Curve& c = ctx.periods.curve;
    const CurvePoint P = point_over(c, 3.0), Q = point_over(c, 4.0);
    CHECK((abel_pair(P, CurvePoint::infinity(), c) - abel_point(P, c).u).norm() == 0.0);
    CHECK((abel_pair(P, Q, c) - abel_pair(Q, P, c)).norm() < 1e-15);
    CHECK(lattice_reduce(abel_pair(P, P.involution(), c), ctx.periods).u_red.norm() < 1e-9);
}

TEST_CASE("expansion of x and y near the origin")
{
    const auto& ctx = testing::test_context();
    const Curve& c = ctx.periods.curve;
    for (double t : {1e-2, 1e-3}) {
        const Vec2 u = abel_point(point_near_infinity(c, t), ctx).u;
        const auto xy = curve_coords(u, ctx);
        CHECK(std::abs(xy.x * u(1) * u(1) - 1.0) < 10.0 * t);
        CHECK(std::abs(xy.y * ipow(u(1), 5) + 1.0) < 10.0 * t);
    }
}

TEST_CASE("abel errors")
{
    const auto& ctx = testing::test_context();
    const Curve& c = ctx.periods.curve;
    expect_error(errc::not_on_curve, [&] { abel_point(CurvePoint::affine(3.0, 1.0), c); });
    expect_error(errc::origin_singular, [&] { curve_coords(Vec2::Zero(), ctx); });
    expect_error(errc::origin_singular, [&] { curve_coords(ctx.periods.omega1.col(0), ctx); });
    expect_error(errc::not_on_theta_divisor, [&] { curve_coords(Vec2(cplx(0.3), cplx(0.2)), ctx); });
    expect_error(errc::path_through_branch_point, [&] { abel_increment(point_over(c, 0.5), 1.5, c); });
    expect_error(errc::path_through_branch_point, [&] { abel_increment(CurvePoint::affine(1.0, 0.0), 1.5, c); });
    expect_error(errc::infinity_not_supported, [&] { abel_increment(CurvePoint::infinity(), 1.5, c); });
}
