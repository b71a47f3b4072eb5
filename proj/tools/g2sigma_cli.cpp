// g2sigma command line: periods, eval, verify.
//
// Exit codes: 0 ok, 1 usage / file errors, 2 unsupported curve,
// 3 non-convergent quadrature, 4 domain error in eval, 5 failed checks.

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "g2sigma/g2sigma.hpp"

namespace {

using namespace g2sigma;

struct RunConfig {
    std::string curve_file;
    double eps = 1e-12;
    double tol = 1e-5;
    int quad_order = 192;
    std::vector<int> fs_n{2, 3, 4};
    std::vector<int> kiepert_n{2, 3, 4, 5};
    unsigned long long seed = 1;
    std::string cache_path;
    std::string report_path;
};

struct ExitError {
    int code;
    std::string message;
};

std::string validate(const RunConfig& c)
{
    if (!(c.eps > 0.0)) return "--eps must be positive";
    if (!(c.eps < c.tol)) return "--eps must be smaller than --tol";
    if (c.quad_order < 2) return "--quad-order must be at least 2";
    for (int n : c.fs_n) {
        if (n < 1) return "--fs-n entries must be >= 1";
        if (n > 6) return "--fs-n entries must be <= 6";
    }
    for (int n : c.kiepert_n) {
        if (n < 1) return "--kiepert-n entries must be >= 1";
        if (n > 8) return "--kiepert-n entries must be <= 8";
    }
    return {};
}

int exit_code_for(errc code)
{
    switch (code) {
    case errc::not_monic_quintic:
    case errc::singular_curve:
    case errc::unsupported_branch_configuration: return 2;
    case errc::quadrature_non_convergent: return 3;
    default: return 4;
    }
}

std::string format_complex(cplx z)
{
    std::ostringstream out;
    out << std::setprecision(17) << '[' << z.real() << ", " << z.imag() << ']';
    return out.str();
}

Curve load_curve_or_exit(const RunConfig& c)
{
    if (c.curve_file.empty()) throw ExitError{1, "--curve is required"};
    if (!std::filesystem::exists(c.curve_file)) throw ExitError{1, "curve file not found: " + c.curve_file};
    try {
        return io::load_curve(c.curve_file);
    } catch (const error& e) {
        throw ExitError{exit_code_for(e.code()), std::string(e.name()) + ": " + e.what()};
    } catch (const std::exception& e) {
        throw ExitError{1, e.what()};
    }
}

PeriodData periods_for(const RunConfig& c, const Curve& curve, bool* from_cache = nullptr)
{
    if (from_cache) *from_cache = false;
    if (!c.cache_path.empty() && std::filesystem::exists(c.cache_path)) {
        try {
            PeriodData pd = io::load_periods(c.cache_path, &curve);
            if (from_cache) *from_cache = true;
            return pd;
        } catch (const std::exception& e) {
            throw ExitError{1, std::string("unusable period cache: ") + e.what()};
        }
    }
    try {
        return compute_periods(curve, c.quad_order);
    } catch (const error& e) {
        throw ExitError{exit_code_for(e.code()), std::string(e.name()) + ": " + e.what()};
    }
}

SigmaContext context_for(const RunConfig& c, bool write_cache)
{
    const Curve curve = load_curve_or_exit(c);
    bool cached = false;
    const PeriodData pd = periods_for(c, curve, &cached);
    const SigmaContext ctx = [&] {
        try {
            return calibrate_c(pd, ThetaCharacteristic{}, c.eps);
        } catch (const error& e) {
            throw ExitError{4, std::string(e.name()) + ": " + e.what()};
        }
    }();
    if (write_cache && !cached && !c.cache_path.empty()) io::save_periods(c.cache_path, pd, ctx.c);
    return ctx;
}

int cmd_periods(const RunConfig& c)
{
    const Curve curve = load_curve_or_exit(c);
    RunConfig fresh = c;
    fresh.cache_path.clear();
    const PeriodData pd = periods_for(fresh, curve);
    const std::string path = c.cache_path.empty() ? c.curve_file + ".periods.json" : c.cache_path;
    cplx cval(0.0);
    try {
        cval = calibrate_c(pd, ThetaCharacteristic{}, c.eps).c;
    } catch (const error&) {
    }
    io::save_periods(path, pd, cval);

    Eigen::SelfAdjointEigenSolver<RMat2> es(pd.modulus.imag());
    const Mat2 leg = legendre_matrix(pd) - two_pi_i * Mat2::Identity();
    std::cout << std::setprecision(17);
    std::cout << "branch points:";
    for (auto e : curve.branch_points()) std::cout << ' ' << e.real();
    std::cout << "\nZ =\n";
    for (int r = 0; r < 2; ++r)
        std::cout << "  " << format_complex(pd.modulus(r, 0)) << "  " << format_complex(pd.modulus(r, 1)) << '\n';
    std::cout << std::setprecision(3);
    std::cout << "symmetry defect  " << pd.symmetry_defect() << '\n';
    std::cout << "Im Z eigenvalues " << es.eigenvalues()(0) << ' ' << es.eigenvalues()(1) << '\n';
    std::cout << "Legendre defect  " << max_abs(leg) << '\n';
    std::cout << "alpha basis      " << pd.alpha_basis.row(0) << " | " << pd.alpha_basis.row(1) << '\n';
    std::cout << "beta basis       " << pd.beta_basis.row(0) << " | " << pd.beta_basis.row(1) << '\n';
    std::cout << "cache            " << path << '\n';
    return 0;
}

struct EvalArgs {
    std::string what;
    std::vector<double> u;       // re1 im1 re2 im2
    std::vector<double> point;   // xre xim
    std::vector<double> pair;    // x1re x1im x2re x2im
    int sheet = 1;
    int sheet2 = 1;
    int n = 2;
    std::string index = "22";
};

int cmd_eval(const RunConfig& c, const EvalArgs& a)
{
    const SigmaContext ctx = context_for(c, true);
    const Curve& curve = ctx.periods.curve;
    cplx value;
    try {
        Vec2 u = Vec2::Zero();
        if (a.u.size() == 4) {
            u = Vec2(cplx(a.u[0], a.u[1]), cplx(a.u[2], a.u[3]));
        } else if (a.point.size() == 2) {
            u = abel_point(point_over(curve, cplx(a.point[0], a.point[1]), a.sheet), ctx).u;
        } else if (a.pair.size() == 4) {
            u = abel_pair(point_over(curve, cplx(a.pair[0], a.pair[1]), a.sheet),
                          point_over(curve, cplx(a.pair[2], a.pair[3]), a.sheet2), ctx);
        } else {
            throw ExitError{1, "give one of --u, --point, --pair"};
        }
        if (a.what == "sigma") {
            value = sigma(u, ctx);
        } else if (a.what == "psi") {
            value = psi(a.n, u, ctx);
        } else {
            std::vector<int> idx;
            for (char ch : a.index) idx.push_back(ch - '0');
            const WpIndex w(idx);
            value = w.size() == 2 ? wp(u, w, ctx) : wp3(u, w, ctx);
        }
    } catch (const error& e) {
        std::cerr << e.name() << '\n';
        return 4;
    }
    std::cout << format_complex(value) << '\n';
    return 0;
}

int cmd_verify(const RunConfig& c)
{
    const SigmaContext ctx = context_for(c, true);
    SuiteConfig sc;
    sc.fs_n = c.fs_n;
    sc.kiepert_n = c.kiepert_n;
    sc.seed = c.seed;
    sc.tol = c.tol;
    const auto reports = run_suite(ctx, sc);

    std::cout << std::left << std::setw(34) << "check" << std::setw(22) << "params" << std::setw(12) << "residual"
              << std::setw(10) << "tol" << "result\n";
    for (const auto& r : reports) {
        std::ostringstream params;
        for (const auto& [k, v] : r.params) params << k << '=' << v << ' ';
        std::ostringstream res;
        res << std::setprecision(3) << r.residual;
        std::ostringstream tol;
        tol << std::setprecision(2) << r.tolerance;
        std::cout << std::setw(34) << r.name << std::setw(22) << params.str() << std::setw(12) << res.str()
                  << std::setw(10) << tol.str() << (r.pass ? "pass" : "FAIL");
        if (std::abs(r.sign_ratio) > 0.0 && (r.name == "kiepert" || r.name == "frobenius_stickelberger"))
            std::cout << "  ratio " << std::setprecision(6) << r.sign_ratio.real();
        if (!r.error.empty()) std::cout << "  (" << r.error << ')';
        std::cout << '\n';
    }
    if (!c.report_path.empty()) {
        io::json extra{{"curve", io::curve_to_json(ctx.periods.curve)},
                       {"eps", c.eps},
                       {"quad_order", ctx.periods.quad_order}};
        io::write_file(c.report_path, io::suite_to_json(sc, reports, extra));
    }
    const bool ok = all_pass(reports);
    std::cout << (ok ? "all checks passed" : "some checks failed") << '\n';
    return ok ? 0 : 5;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Genus-2 sigma function toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;
    EvalArgs eval_args;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--curve", cfg.curve_file, "curve JSON {\"lambda\": [[re,im] x 6]}");
        sub->add_option("--eps", cfg.eps, "theta tail bound (default min(1e-12, tol/10))");
        sub->add_option("--tol", cfg.tol, "identity tolerance");
        sub->add_option("--quad-order", cfg.quad_order, "Gauss-Legendre nodes per segment");
        sub->add_option("--fs-n", cfg.fs_n, "Frobenius-Stickelberger sizes")->delimiter(',')->expected(0, -1);
        sub->add_option("--kiepert-n", cfg.kiepert_n, "Kiepert sizes")->delimiter(',')->expected(0, -1);
        sub->add_option("--seed", cfg.seed, "sampling seed");
        sub->add_option("--cache", cfg.cache_path, "period cache JSON");
        sub->add_option("--report", cfg.report_path, "report JSON");
    };

    auto* periods = app.add_subcommand("periods", "compute and cache the period matrices");
    add_common(periods);
    auto* eval = app.add_subcommand("eval", "evaluate sigma, psi or wp");
    add_common(eval);
    eval->add_option("what", eval_args.what, "sigma | psi | wp")->required()->check(CLI::IsMember({"sigma", "psi", "wp"}));
    eval->add_option("--u", eval_args.u, "u1.re u1.im u2.re u2.im")->expected(4);
    eval->add_option("--point", eval_args.point, "x.re x.im of a curve point (u = its Abel image)")->expected(2);
    eval->add_option("--pair", eval_args.pair, "x1.re x1.im x2.re x2.im (u = Abel image of the pair)")->expected(4);
    eval->add_option("--sheet", eval_args.sheet, "sign of y for --point / first --pair point");
    eval->add_option("--sheet2", eval_args.sheet2, "sign of y for the second --pair point");
    eval->add_option("--n", eval_args.n, "psi index");
    eval->add_option("--index", eval_args.index, "wp index digits, e.g. 22 or 122");
    auto* verify = app.add_subcommand("verify", "run the identity suite");
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    const CLI::App* active = app.get_subcommands().front();
    if (active->count("--eps") == 0) cfg.eps = std::min(1e-12, 0.1 * cfg.tol);

    try {
        if (const std::string bad = validate(cfg); !bad.empty()) throw ExitError{1, bad};
        if (*periods) return cmd_periods(cfg);
        if (*eval) return cmd_eval(cfg, eval_args);
        if (*verify) return cmd_verify(cfg);
    } catch (const ExitError& e) {
        std::cerr << e.message << '\n';
        return e.code;
    } catch (const error& e) {
        std::cerr << e.name() << ": " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    return 1;
}
