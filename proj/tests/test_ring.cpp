#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace g2sigma;

namespace {

RingElement from_terms(std::initializer_list<std::tuple<int, int, double>> terms)
{
    RingElement e;
    for (auto [a, b, c] : terms) e.add_term(a, b, c);
    return e;
}

/// Random element with small integer coefficients so that all arithmetic
/// below is exact in double precision.
RingElement random_element(std::mt19937_64& rng, int degree)
{
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_int_distribution<int> expo(-2, degree);
    std::uniform_int_distribution<int> yb(0, 1);
    std::uniform_int_distribution<int> count(1, 5);
    RingElement e;
    for (int k = count(rng); k > 0; --k) e.add_term(expo(rng), yb(rng), double(coef(rng)));
    return e;
}

} // namespace

TEST_CASE("derivations of x and x^2")
{
    const Curve& c = testing::test_curve();
    const RingElement x = RingElement::x();
    const RingElement x2 = RingElement::monomial(2, 0);

    CHECK(ring_derive(x, c, 2) == RingElement::monomial(-1, 1, 2.0));  // 2y/x
    CHECK(ring_derive(x2, c, 2) == RingElement::monomial(0, 1, 4.0));  // 4y
    CHECK(ring_derive(x, c, 1) == RingElement::monomial(0, 1, 2.0));   // 2y

    // 4 Df / x = 20 x^3 - 60 x + 16 / x
    CHECK(ring_derive_n(x2, c, 2, 2) == from_terms({{3, 0, 20.0}, {1, 0, -60.0}, {-1, 0, 16.0}}));
    // 2 (x Df - 2 y^2) / x^3 = 2 (3x^5 - 5x^3 - 4x) / x^3 = 6x^2 - 10 - 8/x^2
    CHECK(ring_derive_n(x, c, 2, 2) == from_terms({{2, 0, 6.0}, {0, 0, -10.0}, {-2, 0, -8.0}}));
    // D2 y = Df / x
    CHECK(ring_derive(RingElement::y(), c, 2) == from_terms({{3, 0, 5.0}, {1, 0, -15.0}, {-1, 0, 4.0}}));
}

TEST_CASE("D1 = x D2 exactly")
{
    const Curve& c = testing::test_curve();
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const RingElement e = random_element(rng, 6);
        CHECK(ring_derive(e, c, 1) == ring_derive(e, c, 2).shifted_x(1));
    }
    // also for a curve with complex coefficients
    const Curve g = Curve::create({cplx(0.5, 1.0), cplx(-2.0, 0.25), 3.0, cplx(0.0, -1.0), 1.5, 1.0});
    for (int trial = 0; trial < 50; ++trial) {
        const RingElement e = random_element(rng, 6);
        CHECK(ring_derive(e, g, 1) == ring_derive(e, g, 2).shifted_x(1));
    }
}

TEST_CASE("Leibniz rule")
{
    const Curve& c = testing::test_curve();
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const RingElement p = random_element(rng, 4);
        const RingElement q = random_element(rng, 4);
        for (int j = 1; j <= 2; ++j) {
            const RingElement lhs = ring_derive(multiply(p, q, c), c, j);
            const RingElement rhs = multiply(ring_derive(p, c, j), q, c) + multiply(p, ring_derive(q, c, j), c);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("canonical form")
{
    const Curve& c = testing::test_curve();
    RingElement e = RingElement::x();
    e.add_term(1, 0, -1.0);
    CHECK(e.is_zero());
    const RingElement y2 = multiply(RingElement::y(), RingElement::y(), c);
    for (const auto& [key, coef] : y2.terms()) {
        CHECK(key.second == 0);
        CHECK(coef != cplx(0.0));
    }
    CHECK(y2 == from_terms({{5, 0, 1.0}, {3, 0, -5.0}, {1, 0, 4.0}}));
    CHECK_THROWS_AS(RingElement::monomial(0, 2), error);
    try {
        RingElement::monomial(65, 0);
        FAIL("expected LaurentOverflow");
    } catch (const error& err) {
        CHECK(err.code() == errc::laurent_overflow);
    }
}

TEST_CASE("ring_eval")
{
    const Curve& c = testing::test_curve();
    const CurvePoint P = CurvePoint::affine(3.0, std::sqrt(120.0));
    const RingElement y2 = multiply(RingElement::y(), RingElement::y(), c);
    CHECK(std::abs(ring_eval(y2, P) - 120.0) < 1e-12);
    CHECK(std::abs(ring_eval(RingElement::x() + RingElement::y(), P) - (3.0 + std::sqrt(120.0))) < 1e-13);
    try {
        ring_eval(RingElement::monomial(-1, 0), CurvePoint::affine(0.0, 0.0));
        FAIL("expected PoleAtPoint");
    } catch (const error& err) {
        CHECK(err.code() == errc::pole_at_point);
    }
    try {
        ring_eval(RingElement::x(), CurvePoint::infinity());
        FAIL("expected InfinityNotSupported");
    } catch (const error& err) {
        CHECK(err.code() == errc::infinity_not_supported);
    }
}

TEST_CASE("monomial_sequence")
{
    const auto m4 = monomial_sequence(4, true);
    CHECK(m4[0] == RingElement::constant(1.0));
    CHECK(m4[1] == RingElement::x());
    CHECK(m4[2] == RingElement::monomial(2, 0));
    CHECK(m4[3] == RingElement::y());

    const auto m6 = monomial_sequence(6, true);
    CHECK(m6[4] == RingElement::monomial(3, 0));
    CHECK(m6[5] == RingElement::monomial(1, 1));

    const auto m2 = monomial_sequence(2, false);
    CHECK(m2.size() == 2);
    CHECK(m2[0] == RingElement::x());
    CHECK(m2[1] == RingElement::monomial(2, 0));

    const auto m = monomial_sequence(20, true);
    int previous = -1;
    for (const auto& e : m) {
        const auto key = e.terms().begin()->first;
        const int order = pole_order(key.first, key.second);
        CHECK(order > previous);
        CHECK(order != 1);
        CHECK(order != 3);
        previous = order;
    }
    CHECK_THROWS_AS(monomial_sequence(0, true), error);
}

TEST_CASE("D2 x agrees with transport along the curve")
{
    // dx/du2 along the Abel image equals 2y/x; compare with a central
    // difference of x against the integrated u2.
    const Curve& c = testing::test_curve();
    const double h = 1e-4;
    for (cplx x0 : {cplx(3.0), cplx(-0.5, 1.2), cplx(4.0, -2.0)}) {
        const CurvePoint P = point_over(c, x0);
        const auto fwd = abel_increment(P, x0 + h, c);
        const auto bwd = abel_increment(P, x0 - h, c);
        const cplx dx_du2 = (2.0 * h) / (fwd.du(1) - bwd.du(1));
        const cplx expected = ring_eval(ring_derive(RingElement::x(), c, 2), P);
        CHECK(testing::rel_err(dx_du2, expected) < 1e-6);
    }
}
