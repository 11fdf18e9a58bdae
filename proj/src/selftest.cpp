#include "semicl/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "semicl/boundary_layer.hpp"
#include "semicl/eigensolve.hpp"
#include "semicl/expr.hpp"
#include "semicl/model_airy.hpp"
#include "semicl/oscillatory.hpp"
#include "semicl/pointwise.hpp"
#include "semicl/special_fn.hpp"
#include "semicl/verify.hpp"

namespace semicl {
namespace {

constexpr double kPi = std::numbers::pi;

// Collects the first failure of a suite.
struct Checker {
    std::string failure;
    int checks = 0;
    void near(const std::string& what, double got, double want, double tol) {
        ++checks;
        if (failure.empty() && !(std::abs(got - want) <= tol)) {
            std::ostringstream o;
            o.precision(12);
            o << what << ": got " << got << ", want " << want << " (tol " << tol << ")";
            failure = o.str();
        }
    }
    void ok(const std::string& what, bool cond) {
        ++checks;
        if (failure.empty() && !cond) failure = what;
    }
};

void suite_special(Checker& c) {
    c.near("Ai(0)", airy_ai(0), 0.3550280538878172, 1e-10);
    c.near("Ai'(0)", airy_ai_prime(0), -0.2588194037928068, 1e-10);
    c.near("Ai(2)", airy_ai(2), 0.03492413042327437, 1e-10);
    c.near("Ai(-10)", airy_ai(-10), 0.04024123848644319, 1e-10);
    c.near("J1(3)", bessel_j1(3), 0.3390589585259365, 1e-10);
    c.near("ball volume d=3", unit_ball_volume(3), 4 * kPi / 3, 1e-14);
    double wr = 0;
    for (double z = -10; z <= 5; z += 0.25) {
        const double fd = (airy_ai(z + 1e-4) - airy_ai(z - 1e-4)) / 2e-4;
        wr = std::max(wr, std::abs(fd - airy_ai_prime(z)));
    }
    c.near("Ai' vs finite difference", wr, 0, 1e-7);
    double ode = 0;
    for (double z = -8; z <= 4; z += 0.25) {
        const double fd = (airy_ai_prime(z + 1e-4) - airy_ai_prime(z - 1e-4)) / 2e-4;
        ode = std::max(ode, std::abs(fd - z * airy_ai(z)));
    }
    c.near("Airy equation residual", ode, 0, 1e-6);
    double jr = 0;
    for (double a = 0; a <= 20; a += 2.5) {
        const int n = 10000;
        double s = 0;
        for (int i = 0; i <= n; ++i) {
            const double th = kPi * i / n;
            s += (i == 0 || i == n ? 0.5 : 1.0) * std::cos(th - a * std::sin(th));
        }
        jr = std::max(jr, std::abs(s / n - bessel_j1(a)));
    }
    c.near("J1 integral representation", jr, 0, 1e-9);
}

void suite_parser(Checker& c) {
    const Expr e = parse_expr("x^2 - 2*x1*x2 + sin(x2)/2");
    c.near("eval", e.eval({1.5, 0.5}), 2.25 - 1.5 + std::sin(0.5) / 2, 1e-15);
    c.near("round trip", parse_expr(e.to_string()).eval({0.3, -0.7}), e.eval({0.3, -0.7}), 0);
    c.near("right-associative power", parse_expr("2^3^2").eval({0, 0}), 512, 0);
    c.near("unary minus binds looser than power", parse_expr("-2^2").eval({0, 0}), -4, 0);
    bool threw = false;
    try {
        parse_expr("x + * 2");
    } catch (const ParseError& pe) {
        threw = pe.offset() == 4;
    }
    c.ok("parse error offset", threw);
    threw = false;
    try {
        parse_expr("sqrt(x)").eval({-1, 0});
    } catch (const EvalDomainError&) {
        threw = true;
    }
    c.ok("sqrt of a negative raises", threw);
}

void suite_oscillatory(Checker& c) {
    OscillatoryIntegrand s;
    s.p = 0.5;
    s.t = 1;
    s.cubic = 0;
    s.c = -1;
    // int |b|^{-1/2} e^{2ibt} e^{-i(pi/4)sign b} db = sqrt(2 pi) at t = 1
    c.near("half-power Fresnel integral", integrate_beta(s, 1e-10).value.real(), std::sqrt(2 * kPi), 1e-9);
    bool threw = false;
    try {
        s.p = 1;
        integrate_beta(s, 1e-10);
    } catch (const ContractError&) {
        threw = true;
    }
    c.ok("non-integrable amplitude rejected", threw);
    CriticalPoint cp;
    cp.phase2 = 1;
    const cplx lead = sum_terms(stationary_phase_expand({cp}, 100, 0));
    c.near("stationary phase modulus", std::abs(lead), std::sqrt(2 * kPi / 100), 1e-14);
}

void suite_model_airy(Checker& c) {
    c.ok("G derivative identity", airy_identity_deviation() < 1e-6);
    for (double t : {-3.0, 0.0, 2.0, 25.0, 100.0}) {
        const double exact = airy_G(t) - std::sqrt(std::max(t, 0.0)) / kPi;
        c.near("Q1(" + std::to_string(t) + ")", q_numeric(1, t).value, exact, 1e-9);
    }
    c.near("kernel at the turning point", airy_kernel_exact(1, 0, 0), std::pow(airy_ai_prime(0), 2), 1e-14);
    c.near("kernel shift invariance", airy_kernel_exact(0.1, 0.3, -0.1), airy_kernel_exact(0.1, 0.5, -0.3), 1e-12);
    c.near("2-D kernel vs Q2 at t = 5", airy_G2(5).value - 5 / (4 * kPi), q_numeric(2, 5).value, 5e-3);
}

void suite_pointwise(Checker& c) {
    const Box dom{{-2, -2}, {2, 2}};
    const PotentialModel flat = PotentialModel::linear(1, 0, -1, dom);
    c.near("Weyl d=1", weyl_term(flat, {0, 0}, 0, 0.1), 10 / kPi, 1e-12);
    const PotentialModel flat2 = PotentialModel::linear(2, 0, -1, dom);
    c.near("Weyl d=2", weyl_term(flat2, {0, 0}, 0, 0.1), 100 / (4 * kPi), 1e-10);
    const PotentialModel lin = PotentialModel::linear(1, -1, 0, dom);
    c.near("travel time of the linear model", travel_time(lin, {0.7, 0}), 0.7, 1e-10);
    c.near("travel time, forbidden side", travel_time(lin, {-0.4, 0}), -0.4, 1e-10);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-8, 1);
    bool partition = true;
    for (int i = 0; i < 2000; ++i) {
        const double v = std::pow(10, u(rng)), g = std::pow(10, u(rng)), h = std::pow(10, u(rng) / 3 - 1);
        const auto p = regime_predicates(v, g, h);
        partition = partition && (p[0] || p[1] || p[2]);
    }
    c.ok("regime predicates cover all samples", partition);
    const PredictedKernel k = predict_pointwise(lin, {0.05, 0}, 0, 0.01);
    c.near("linear model prediction vs exact kernel", k.total, airy_kernel_exact(0.01, 0.05, 0), 1e-7);
}

void suite_boundary(Checker& c) {
    c.near("Dirichlet d=1 at the wall", upsilon_flat(dirichlet(1), 0), -1 / kPi, 1e-14);
    c.near("Neumann d=2 at the wall", upsilon_flat(neumann(2), 0), 1 / (4 * kPi), 1e-12);
    c.near("half-line Dirichlet vanishes at the wall", halfspace_kernel_exact(dirichlet(1), 0.02, 0, 1), 0, 1e-9);
    c.near("Robin beta = 0 equals Neumann", upsilon_robin(robin(1, 0), 2.3).value, upsilon_flat(neumann(1), 2.3),
           1e-9);
    c.near("Robin large beta approaches Dirichlet", upsilon_robin(robin(1, -1e6), 2.3).value,
           upsilon_flat(dirichlet(1), 2.3), 1e-4);
}

void suite_eigensolve(Checker& c) {
    auto zero = [](double) { return 0.0; };
    const Discretization d = discretize(zero, 0, kPi, {}, {}, 1025, 1, 30);
    const SpectralData s = solve_spectrum(d, 10, {});
    c.ok("three eigenvalues below 10", s.count() == 3);
    if (s.count() >= 1) c.near("lowest Dirichlet eigenvalue", s.eigenvalues[0], 1, 1e-4);
    c.ok("residual", s.max_residual <= 1e-10);
    const EndCondition neu{EndKind::Neumann, 0};
    const Discretization dn = discretize(zero, 0, kPi, neu, neu, 257, 1, 30);
    const SpectralData sn = solve_spectrum(dn, 2, {});
    if (sn.count() >= 1) c.near("Neumann constant mode", sn.eigenvalues[0], 0, 1e-10);
    const ConvergenceReport r = convergence_check(zero, 0, kPi, {}, {}, 1, 5, 1, {65, 129, 257, 513},
                                                  ConvergenceQuantity::TopEigenvalue);
    c.ok("second-order convergence", r.fitted_order > 1.8 && r.fitted_order < 2.2 && r.monotone);
}

void suite_verify(Checker& c) {
    std::vector<std::pair<double, double>> pts;
    for (double h : {0.1, 0.05, 0.02, 0.01}) pts.emplace_back(h, 3 * std::pow(h, 0.667));
    c.near("synthetic power law slope", fit_loglog_slope(pts).slope, 0.667, 1e-12);
    ScalingReport r;
    // err ~ h^slope: a shallower slope grows more slowly than the bound
    r.fit.slope = -0.1;
    c.ok("one-sided rule accepts slower growth", compare_to_bound(r, -1.0 / 3, 0.15).pass());
    r.fit.slope = -0.7;
    c.ok("one-sided rule rejects faster growth", !compare_to_bound(r, -1.0 / 3, 0.15).pass());
    r.fit.slope = -0.3;
    c.ok("within tolerance", compare_to_bound(r, -1.0 / 3, 0.15, SlopeRule::TwoSided).pass());
}

}  // namespace

std::vector<SuiteResult> run_selftest() {
    const std::vector<std::pair<std::string, std::function<void(Checker&)>>> suites{
        {"special_fn", suite_special},         {"potential_parser", suite_parser},
        {"oscillatory", suite_oscillatory},    {"model_airy", suite_model_airy},
        {"pointwise", suite_pointwise},        {"boundary_layer", suite_boundary},
        {"oracle_eigensolve", suite_eigensolve}, {"verify", suite_verify},
    };
    std::vector<SuiteResult> out;
    for (const auto& [name, fn] : suites) {
        SuiteResult r;
        r.name = name;
        const auto t0 = std::chrono::steady_clock::now();
        Checker c;
        try {
            fn(c);
        } catch (const std::exception& e) {
            if (c.failure.empty()) c.failure = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.pass = c.failure.empty();
        r.detail = r.pass ? std::to_string(c.checks) + " checks" : c.failure;
        out.push_back(r);
    }
    return out;
}

}  // namespace semicl
