#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace g2sigma;

namespace {

std::vector<Vec2> images(const std::vector<CurvePoint>& pts, const SigmaContext& ctx)
{
    std::vector<Vec2> out;
    for (const auto& P : pts) out.push_back(abel_point(P, ctx).u);
    return out;
}

const IdentityReport* find(const std::vector<IdentityReport>& reps, const std::string& name,
                           std::map<std::string, double> params = {})
{
    for (const auto& r : reps)
        if (r.name == name && (params.empty() || r.params == params)) return &r;
    return nullptr;
}

} // namespace

TEST_CASE("psi_2 and psi_3")
{
    const auto& ctx = testing::test_context();
    std::mt19937_64 rng(51);
    for (const auto& P : random_curve_points(ctx.periods.curve, rng, 5)) {
        const Vec2 u = abel_point(P, ctx).u;
        CHECK(testing::rel_err(psi(2, u, ctx), 2.0 * P.y()) < 1e-6);
        CHECK(testing::rel_err(psi(3, u, ctx), -8.0 * ipow(P.y(), 3)) < 1e-6);
        // psi_1 = sigma(u)/sigma_2(u) vanishes on the Abel image
        CHECK(std::abs(psi(1, u, ctx)) < 1e-8 * ctx.scale / std::abs(sigma_partial(u, ctx, 0, 1)));
        // psi_n is lattice periodic
        const Vec2 shifted = u + lattice_vector(ctx.periods, IVec2(1, 0), IVec2(-1, 1));
        for (int n = 2; n <= 4; ++n) CHECK(testing::rel_err(psi(n, shifted, ctx), psi(n, u, ctx)) < 1e-7);
    }
    CHECK_THROWS_AS(psi(0, Vec2::Zero(), ctx), error);
    CHECK_THROWS_AS(psi(2, Vec2(cplx(0.3), cplx(0.1)), ctx), error);
}

TEST_CASE("Frobenius-Stickelberger sign table")
{
    // fs_det / fs_lhs = (-1)^{n(n-1)/2}; n = 1 is the two-point case.
    const auto& ctx = testing::test_context();
    std::mt19937_64 rng(52);
    for (int n = 1; n <= 4; ++n) {
        const cplx sign = (n * (n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
        for (int s = 0; s < 3; ++s) {
            const auto us = images(random_curve_points(ctx.periods.curve, rng, n + 1), ctx);
            const cplx ratio = fs_det(us, ctx) / fs_lhs(us, ctx);
            CHECK(std::abs(ratio - sign) < 1e-6);
        }
    }
}

TEST_CASE("Frobenius-Stickelberger structure")
{
    const auto& ctx = testing::test_context();
    const Curve& c = ctx.periods.curve;
    std::mt19937_64 rng(53);
    auto pts = random_curve_points(c, rng, 4);
    auto us = images(pts, ctx);
    // repeated point: both sides vanish
    std::vector<CurvePoint> rep{pts[0], pts[1], pts[0]};
    CHECK(std::abs(fs_matrix(rep).determinant()) < 1e-9 * std::abs(fs_matrix({pts[0], pts[1], pts[2]}).determinant()));
    // permutations: both sides pick up the sign of the permutation
    const cplx l0 = fs_lhs(us, ctx), d0 = fs_det(us, ctx);
    std::swap(us[1], us[3]);
    CHECK(testing::rel_err(fs_lhs(us, ctx), -l0) < 1e-8);
    CHECK(testing::rel_err(fs_det(us, ctx), -d0) < 1e-8);
    // columns 1, x, x^2, y for four points
    const MatX m = fs_matrix(pts);
    CHECK(m.rows() == 4);
    CHECK(m(2, 0) == cplx(1.0));
    CHECK(m(2, 2) == pts[2].x() * pts[2].x());
    CHECK(m(2, 3) == pts[2].y());
    CHECK_THROWS_AS(fs_lhs({us[0]}, ctx), error);
}

TEST_CASE("Kiepert matrices")
{
    const auto& ctx = testing::test_context();
    const Curve& c = ctx.periods.curve;
    const CurvePoint P = make_point(c, 3.0, std::sqrt(120.0));
    for (int n = 2; n <= 6; ++n)
        for (int j = 1; j <= 2; ++j) {
            const MatX m = kiepert_matrix(P, n, j, c);
            CHECK(m.rows() == n - 1);
            CHECK(m.cols() == n - 1);
        }
    // n = 3, j = 2: [[2y/x, 4y], [6x^2 - 10 - 8/x^2, 20x^3 - 60x + 16/x]]
    const cplx x = 3.0, y = std::sqrt(120.0);
    const MatX m3 = kiepert_matrix(P, 3, 2, c);
    CHECK(std::abs(m3(0, 0) - 2.0 * y / x) < 1e-12);
    CHECK(std::abs(m3(0, 1) - 4.0 * y) < 1e-12);
    CHECK(std::abs(m3(1, 0) - (6.0 * x * x - 10.0 - 8.0 / (x * x))) < 1e-12);
    CHECK(std::abs(m3(1, 1) - (20.0 * x * x * x - 60.0 * x + 16.0 / x)) < 1e-11);
    // x^3 det = 16 y^3, so -2 psi_3 = 16 y^3
    CHECK(testing::rel_err(kiepert_value(P, 3, 2, c), 16.0 * ipow(y, 3)) < 1e-12);
    CHECK(testing::rel_err(kiepert_value(P, 3, 1, c), 16.0 * ipow(y, 3)) < 1e-12);
    CHECK(testing::rel_err(kiepert_value(P, 2, 1, c), 2.0 * y) < 1e-14);

    std::mt19937_64 rng(54);
    for (const auto& Q : random_curve_points(c, rng, 5))
        for (int n = 2; n <= 6; ++n) CHECK(testing::rel_err(kiepert_value(Q, n, 2, c), kiepert_value(Q, n, 1, c)) < 1e-9);

    try {
        kiepert_matrix(CurvePoint::affine(0.0, 0.0), 3, 2, c);
        FAIL("expected PoleAtPoint");
    } catch (const error& e) {
        CHECK(e.code() == errc::pole_at_point);
    }
    CHECK_THROWS_AS(kiepert_matrix(P, 1, 1, c), error);
    CHECK_THROWS_AS(kiepert_matrix(P, 3, 3, c), error);
    CHECK(superfactorial(1) == 1.0);
    CHECK(superfactorial(4) == 12.0);
    CHECK(superfactorial(5) == 288.0);
}

TEST_CASE("Kiepert magnitude and sign table")
{
    const auto& ctx = testing::test_context();
    std::mt19937_64 rng(55);
    const auto pts = random_curve_points(ctx.periods.curve, rng, 5);
    for (int n = 2; n <= 5; ++n) {
        const cplx sign = n % 2 == 0 ? -1.0 : 1.0;
        for (int j = 1; j <= 2; ++j)
            for (const auto& P : pts) {
                const Vec2 u = abel_point(P, ctx).u;
                const cplx ratio = -superfactorial(n) * psi(n, u, ctx) / kiepert_det(u, n, j, ctx);
                CHECK(std::abs(ratio - sign) < 1e-6);
            }
    }
}

TEST_CASE("confluent Frobenius-Stickelberger limit")
{
    // 1!2! det[m_k(P_i)] / prod (u1_j - u1_i) over three nearby points tends to
    // the Kiepert value at P.
    const auto& ctx = testing::test_context();
    const Curve& c = ctx.periods.curve;
    std::mt19937_64 rng(56);
    const double t = 3e-4;
    for (const auto& P : random_curve_points(c, rng, 3)) {
        std::vector<CurvePoint> pts{P};
        std::vector<cplx> s{0.0};
        for (double k : {1.0, 2.0}) {
            const auto inc = nearby_point(P, k * t, c);
            pts.push_back(inc.endpoint);
            s.push_back(inc.du(0));
        }
        cplx vander = 1.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) vander *= s[j] - s[i];
        const cplx confluent = superfactorial(3) * fs_matrix(pts).determinant() / vander;
        const Vec2 u = abel_point(P, ctx).u;
        for (int j = 1; j <= 2; ++j) CHECK(testing::rel_err(confluent, kiepert_det(u, 3, j, ctx)) < 1e-3);
    }
}

TEST_CASE("limit of sigma(u - v)/(u1 - v1)")
{
    const auto& ctx = testing::test_context();
    const Curve& c = ctx.periods.curve;
    for (const CurvePoint& P : {point_over(c, 3.0), point_over(c, cplx(-1.5, 1.0), -1)}) {
        const auto r = check_difference_limit(P, ctx, {1e-2, 1e-3, 1e-4});
        CHECK(r[0] > r[1]);
        CHECK(r[1] > r[2]);
        CHECK(r[2] < 1e-3);
        CHECK(difference_quotient_residual(P, 1e-4, ctx) < 1e-3);
    }
    // near the base point the same quotient does not tend to 1
    CHECK(naive_limit_residual(1e-3, ctx) > 0.5);
}

TEST_CASE("verification suite")
{
    const auto& ctx = testing::test_context();
    SuiteConfig cfg;
    const auto reps = run_suite(ctx, cfg);
    CHECK(std::is_sorted(reps.begin(), reps.end(), [](const IdentityReport& a, const IdentityReport& b) {
        return a.name != b.name ? a.name < b.name : a.params < b.params;
    }));
    for (const auto& r : reps) {
        const bool fs_sign = r.name == "frobenius_stickelberger" && (r.params.at("n") == 2.0 || r.params.at("n") == 3.0);
        INFO(r.name << " residual " << r.residual << " " << r.error);
        CHECK(r.pass != fs_sign);
        if (fs_sign) CHECK(std::abs(r.sign_ratio + 1.0) < 1e-6);
    }
    CHECK_FALSE(all_pass(reps));
    REQUIRE(find(reps, "kiepert", {{"n", 2}, {"j", 1}}));
    CHECK(std::abs(find(reps, "kiepert", {{"n", 2}, {"j", 1}})->sign_ratio + 1.0) < 1e-6);
    CHECK(std::abs(find(reps, "kiepert", {{"n", 3}, {"j", 2}})->sign_ratio - 1.0) < 1e-6);

    // deterministic for a fixed seed
    const auto again = run_suite(ctx, cfg);
    REQUIRE(again.size() == reps.size());
    for (size_t i = 0; i < reps.size(); ++i) {
        CHECK(again[i].name == reps[i].name);
        CHECK(again[i].residual == reps[i].residual);
    }

    // another seed gives the same verdicts
    cfg.seed = 7;
    const auto other = run_suite(ctx, cfg);
    REQUIRE(other.size() == reps.size());
    for (size_t i = 0; i < reps.size(); ++i) CHECK(other[i].pass == reps[i].pass);

    // empty lists drop the determinant checks
    cfg.fs_n = {4};
    cfg.kiepert_n = {};
    const auto reduced = run_suite(ctx, cfg);
    CHECK(all_pass(reduced));
    CHECK(find(reduced, "kiepert") == nullptr);
    CHECK(find(reduced, "frobenius_stickelberger", {{"n", 1}}) != nullptr);
    cfg.fs_n = {};
    CHECK(find(run_suite(ctx, cfg), "frobenius_stickelberger") == nullptr);
}

TEST_CASE("suite rejects inaccurate periods")
{
    // Known basis, crude quadrature: the identity checks must notice.
    const Curve& c = testing::test_curve();
    const PeriodData& good = testing::test_context().periods;
    const PeriodData bad = assemble_periods(c, all_segment_loops(c, 6), good.alpha_basis, good.beta_basis, 6);
    SuiteConfig cfg;
    cfg.fs_n = {};
    cfg.kiepert_n = {};
    std::vector<IdentityReport> reps;
    try {
        reps = run_suite(calibrate_c(bad), cfg);
    } catch (const error&) {
        SUCCEED("calibration rejected the periods");
        return;
    }
    CHECK_FALSE(all_pass(reps));
}
