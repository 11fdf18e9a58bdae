// Acceptance checks: one PASS/FAIL line per criterion. Tolerances are fixed
// here; the process exits non-zero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "semicl/boundary_layer.hpp"
#include "semicl/eigensolve.hpp"
#include "semicl/model_airy.hpp"
#include "semicl/pointwise.hpp"
#include "semicl/studies.hpp"
#include "semicl/verify.hpp"

using namespace semicl;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// A cos(w t^{3/2}) + B sin(w t^{3/2}) least squares for y; returns the residual sum of squares.
struct TrigFit {
    double a = 0, b = 0, rss = 0;
};
TrigFit trig_fit(const std::vector<double>& ts, const std::vector<double>& ys, double w) {
    double saa = 0, sab = 0, sbb = 0, sya = 0, syb = 0, syy = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double ph = w * ts[i] * std::sqrt(ts[i]);
        const double c = std::cos(ph), s = std::sin(ph);
        saa += c * c;
        sab += c * s;
        sbb += s * s;
        sya += ys[i] * c;
        syb += ys[i] * s;
        syy += ys[i] * ys[i];
    }
    const double det = saa * sbb - sab * sab;
    TrigFit f;
    f.a = (sya * sbb - syb * sab) / det;
    f.b = (syb * saa - sya * sab) / det;
    f.rss = syy - f.a * sya - f.b * syb;
    return f;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi, c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------

Outcome oracle_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    const double kappa = kappa_report(1).matched;
    double sup_scaled = 0, sup_abs = 0;
    std::vector<std::pair<double, double>> above_floor;
    for (double s = 4; s <= 400; s += 1) {
        const double r = airy_G(s) - kappa_matched(1) * std::sqrt(s) - q_numeric(1, s, 1e-11).value;
        sup_abs = std::max(sup_abs, std::abs(r));
        sup_scaled = std::max(sup_scaled, std::abs(r) * s * std::sqrt(s));
        // rounding floor of G at this s
        if (std::abs(r) > 1e-12 * (1 + airy_G(s))) above_floor.emplace_back(s, std::abs(r));
    }
    std::string exponent;
    bool exponent_ok;
    if (above_floor.size() >= 3) {
        const double slope = fit_loglog_slope(above_floor).slope;
        exponent = fmt("%.3f", slope);
        exponent_ok = slope <= -1.3;
    } else {
        // nothing to fit: the residual never leaves the rounding floor
        exponent = "n/a (residual at rounding floor)";
        exponent_ok = sup_abs <= 1e-9;
    }
    const double secs = seconds_since(t0);
    const bool pass = std::abs(kappa - 1 / kPi) <= 1e-4 && sup_scaled <= 5 && exponent_ok && secs <= 60;
    return {pass, fmt("kappa_matched=%.8f (1/pi=%.8f), sup|res|=%.2e, sup|res|s^1.5=%.2e, exponent %s, %.1fs",
                      kappa, 1 / kPi, sup_abs, sup_scaled, exponent.c_str(), secs)};
}

Outcome correction_asymptotics() {
    // d = 1: free frequency fit
    std::vector<double> ts, y1, q2;
    const int n = 4001;
    for (int i = 0; i < n; ++i) {
        const double t = 100 + 300.0 * i / (n - 1);
        ts.push_back(t);
        y1.push_back(q_numeric(1, t, 1e-11).value * t);
    }
    double best_w = 0, best = 1e300;
    for (double w = 1.30; w <= 1.37 + 1e-12; w += 1e-4) {
        const double r = trig_fit(ts, y1, w).rss;
        if (r < best) best = r, best_w = w;
    }
    const double w = golden_min([&](double v) { return trig_fit(ts, y1, v).rss; }, best_w - 1e-4, best_w + 1e-4, 1e-10);
    const TrigFit f = trig_fit(ts, y1, w);
    const double amp = std::hypot(f.a, f.b), phase = std::atan2(-f.b, f.a);
    double worst = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double ph = w * ts[i] * std::sqrt(ts[i]);
        worst = std::max(worst, std::abs(y1[i] - amp * std::cos(ph + phase)) / amp);
    }
    const bool ok1 = std::abs(w - 4.0 / 3) <= 1e-3 && worst <= 0.03;

    // d = 2: envelope exponent with the frequency fixed
    std::vector<double> t2;
    for (int i = 0; i < 601; ++i) {
        const double t = 100 + 300.0 * i / 600;
        t2.push_back(t);
        q2.push_back(q_numeric(2, t, 1e-11).value);
    }
    auto rss_gamma = [&](double g) {
        std::vector<double> y(t2.size());
        for (std::size_t i = 0; i < t2.size(); ++i) y[i] = q2[i] * std::pow(t2[i], g);
        // normalize so that different exponents compare on equal footing
        const TrigFit tf = trig_fit(t2, y, 4.0 / 3);
        return tf.rss / (tf.a * tf.a + tf.b * tf.b);
    };
    const double gamma = golden_min(rss_gamma, 0.5, 2.0, 1e-6);
    const bool ok2 = std::abs(gamma - 1.25) <= 0.05;
    return {ok1 && ok2,
            fmt("d=1: omega=%.6f, A=%.6f phi=%.5f, max rel residual %.2e "
                "[closed-form (2pi)^-1=%.6f with sine (phi=-pi/2); Airy expansion (4pi)^-1=%.6f, phi=pi]; "
                "d=2: gamma=%.4f",
                w, amp, phase, worst, 1 / (2 * kPi), 1 / (4 * kPi), gamma)};
}

Outcome turning_point_scaling() {
    const auto t0 = std::chrono::steady_clock::now();
    const ScalingReport weyl = run_study(load_study_config(SEMICL_CONFIG_DIR "/airy_d1_weyl.cfg"));
    const ScalingReport corr = run_study(load_study_config(SEMICL_CONFIG_DIR "/airy_d1.cfg"));
    const double secs = seconds_since(t0);
    return {weyl.pass() && corr.pass() && secs <= 300,
            fmt("weyl-only slope %.4f (target -2/3 +- 0.1, %s); weyl+correction slope %.4f (>= %.4f, %s); %.1fs",
                weyl.fit.slope, weyl.pass() ? "ok" : "FAIL", corr.fit.slope, -1.0 / 3 - 0.15,
                corr.pass() ? "ok" : "FAIL", secs)};
}

Outcome generic_potential() {
    // V = x - 0.5 on the allowed side, flattened to -1 below x = -0.5 so the
    // box only needs a bounded kinetic range
    StudyConfig c;
    c.potential = "(x - 1.5 + sqrt((x + 0.5)^2 + 0.0004)) / 2";
    c.domain_lo = -12;
    c.domain_hi = 2;
    c.oracle = OracleKind::Eigensolver;
    c.window_scale = 4;
    c.tau_window = 1;
    std::string detail;
    double ratio_last = 0;
    for (double h : {0.02, 0.01, 0.005}) {
        const WindowMeasurement a = measure_window(c, h, PredictorVariant::WeylCorrection);
        const WindowMeasurement b = measure_window(c, h, PredictorVariant::WeylOnly);
        ratio_last = b.sup_error / a.sup_error;
        detail += fmt("h=%g: weyl %.3f corrected %.3f ratio %.2f; ", h, b.sup_error, a.sup_error, ratio_last);
    }
    return {ratio_last >= 3, detail + "required ratio >= 3 at h=0.005"};
}

Outcome regime_table() {
    std::mt19937 rng(5266);
    std::uniform_real_distribution<double> u(-6, 1);
    int bad = 0;
    for (int i = 0; i < 10000; ++i) {
        const double v = std::pow(10, u(rng)), g = std::pow(10, u(rng)), h = std::pow(10, u(rng) / 2 - 0.5);
        const auto pr = regime_predicates(v, g, h);
        const Regime r = classify_regime_values(1, v, g, h).regime;
        const int first = pr[0] ? 0 : pr[1] ? 1 : pr[2] ? 2 : -1;
        if (first < 0 || static_cast<int>(r) != first) ++bad;
    }

    double cmax[3] = {0, 0, 0};
    int count[3] = {0, 0, 0};
    for (double h : {0.02, 0.01, 0.005}) {
        StudyConfig c;
        c.potential = "-x";
        c.domain_lo = -1.5;
        c.domain_hi = 2;
        c.oracle = OracleKind::Eigensolver;
        std::vector<double> xs;
        for (int i = 0; i <= 220; ++i) xs.push_back(-1 + i * 0.01);
        // shallow slope sqrt(h)/2 puts a neighbourhood of the turning point in branch 3
        const double slope = std::sqrt(h) / 2;
        StudyConfig c3 = c;
        c3.potential = "-" + fmt("%.17g", slope) + "*x";
        c3.domain_lo = -2;
        std::vector<double> xs3;
        for (int i = 0; i <= 40; ++i) xs3.push_back(-h / slope + i * (2 * h / slope) / 40);
        for (const auto& [cfg, pts] : {std::pair{c, xs}, std::pair{c3, xs3}}) {
            const WindowMeasurement w = measure_points(cfg, h, PredictorVariant::WeylCorrection, pts);
            const PotentialModel m = study_model(cfg);
            for (const auto& s : w.samples) {
                const RegimeResult r = classify_regime(m, {s.x, 0}, h, s.tau);
                const int b = static_cast<int>(r.regime);
                cmax[b] = std::max(cmax[b], std::abs(s.oracle - s.prediction) / r.bound);
                ++count[b];
            }
        }
    }
    const double c_fit = std::max({cmax[0], cmax[1], cmax[2]});
    const bool covered = count[0] > 0 && count[1] > 0 && count[2] > 0;
    return {bad == 0 && covered && c_fit <= 3,
            fmt("partition violations %d/10000; C per branch %.3f (%d pts), %.3f (%d), %.3f (%d); fitted C=%.3f", bad,
                cmax[0], count[0], cmax[1], count[1], cmax[2], count[2], c_fit)};
}

Outcome forbidden_decay() {
    double worst = 0;
    for (double h : {1.0, 0.5, 0.2, 0.1, 0.05}) {
        const double x = -6 * std::cbrt(h * h);
        const auto m = PotentialModel::linear(1, -1, 0, Box{{x - 1, 0}, {x, 0}});
        const double e = airy_kernel_exact(h, x, 0);
        for (int l = 0; l <= 8; ++l) worst = std::max(worst, e / forbidden_tail_bound(m, {x, 0}, 0, h, l, 1));
    }
    return {worst < 1, fmt("max oracle/bound over h in {1,...,0.05}, l <= 8: %.3e", worst)};
}

Outcome boundary_d1() {
    const double h = 0.02;
    // tau = 1 sits midway between levels N and N+1 for L = (N + 1/2) pi h
    const int levels = 636;
    const double L = (levels + 0.5) * kPi * h;
    const std::size_t n = static_cast<std::size_t>(std::llround(L / (h / 10))) + 1;
    const EndCondition dir{EndKind::Dirichlet, 0};
    const Discretization d = discretize([](double) { return 0.0; }, 0, L, dir, dir, n, h, 1 + 10 * h);
    std::vector<std::size_t> probes;
    for (int k = 1; k <= 100; ++k) probes.push_back(d.vertex_of(0.5 * k * h));
    const SpectralData s = solve_spectrum(d, 1 + 10 * h, probes);
    double worst = 0;
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const double x = d.x_of_vertex(probes[k]);
        const double predicted = 1 / (kPi * h) + upsilon_flat(dirichlet(1), x / h) / h;
        worst = std::max(worst, std::abs(kernel_from_spectrum(s, k, 1).value - predicted) / predicted);
    }
    const double wall = halfspace_kernel_exact(dirichlet(1), h, 0, 1);
    return {worst <= 0.01 && wall == 0 && s.max_residual <= 1e-10,
            fmt("max relative deviation over r in [0.5, 50]: %.2e (%zu levels below 1, %zu grid points); "
                "closed form at the wall: %g",
                worst, static_cast<std::size_t>(std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(),
                                                               [](double v) { return v <= 1; })),
                n, wall)};
}

Outcome boundary_d2() {
    std::vector<std::pair<double, double>> crests;
    for (int k = 0;; ++k) {
        const double r = (k * kPi + 3 * kPi / 4) / 2;
        if (r > 200) break;
        if (r >= 10) crests.emplace_back(r, std::abs(upsilon_flat(neumann(2), r)));
    }
    const double exponent = -fit_loglog_slope(crests).slope;
    const double at0 = std::max(std::abs(upsilon_flat(neumann(2), 0) - 1 / (4 * kPi)),
                                std::abs(upsilon_flat(dirichlet(2), 0) + 1 / (4 * kPi)));
    double to_neumann = 0, to_dirichlet = 0;
    for (double r : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
        to_neumann = std::max(to_neumann, std::abs(upsilon_robin(robin(2, 0), r).value - upsilon_flat(neumann(2), r)));
        for (double b : {1e6, -1e6})
            to_dirichlet =
                std::max(to_dirichlet, std::abs(upsilon_robin(robin(2, b), r).value - upsilon_flat(dirichlet(2), r)));
    }
    return {std::abs(exponent - 1.5) <= 0.05 && at0 <= 1e-10 && to_neumann <= 1e-10 && to_dirichlet <= 1e-4,
            fmt("envelope exponent %.4f; |Y(0) - s/(4pi)| = %.1e; Robin->Neumann %.1e, Robin->Dirichlet %.1e", exponent,
                at0, to_neumann, to_dirichlet)};
}

Outcome weyl_threshold() {
    std::vector<double> cs;
    std::string detail;
    for (double h : {0.04, 0.02, 0.01}) {
        const double x0 = weyl_validity_threshold(2, h);
        double sup = 0;
        for (double x = x0; x <= 2; x += h / 100) {
            const double weyl = std::pow(2 * kPi * h, -2) * kPi;
            sup = std::max(sup, std::abs(halfspace_kernel_exact(dirichlet(2), h, x, 1) - weyl));
        }
        cs.push_back(sup * h);
        detail += fmt("h=%g C=%.4f; ", h, sup * h);
    }
    const double lo = *std::min_element(cs.begin(), cs.end()), hi = *std::max_element(cs.begin(), cs.end());
    return {(hi - lo) / lo <= 0.25, detail + fmt("variation %.1f%%", 100 * (hi - lo) / lo)};
}

// --- infrastructure --------------------------------------------------------

int run(const std::string& dir, const std::string& args) {
    const std::string cmd = "cd '" + dir + "' && '" SEMICL_BIN "' " + args + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome infrastructure() {
    const auto t0 = std::chrono::steady_clock::now();
    const int self = run(".", "selftest");
    const double self_secs = seconds_since(t0);

    const std::vector<std::pair<std::string, std::string>> jobs = {
        {"qtable --dim 1 --tmin -2 --tmax 60 --steps 200 --out out.csv", "out.csv"},
        {"qtable --dim 2 --tmin 0 --tmax 40 --steps 60 --out out.csv", "out.csv"},
        {"kernel --model airy --h 0.01 --xmin -0.3 --xmax 0.6 --points 50 --out out.csv", "out.csv"},
        {"kernel --model expr --potential 'x^2 - 1' --domain-min -2 --domain-max 2 --h 0.02 --points 30 --out out.csv",
         "out.csv"},
        {"kernel --model boundary --dim 2 --bc robin --beta 0.7 --h 0.05 --xmin 0 --xmax 0.5 --points 12 --out out.csv",
         "out.csv"},
        {"boundary-profile --dim 2 --bc dirichlet --rmin 0 --rmax 60 --steps 100 --out out.csv", "out.csv"},
        {"study --config '" SEMICL_CONFIG_DIR "/airy_d1_weyl.cfg' --out out.csv", "out.csv"},
    };
    int mismatched = 0, failed = 0;
    for (const auto& [args, file] : jobs) {
        std::string outputs[2];
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path dir = fs::current_path() / ("repro_" + std::to_string(rep));
            fs::create_directories(dir);
            if (run(dir.string(), args) != 0) ++failed;
            outputs[rep] = slurp(dir / file);
        }
        if (outputs[0].empty() || outputs[0] != outputs[1]) ++mismatched;
    }
    return {self == 0 && self_secs <= 120 && mismatched == 0 && failed == 0,
            fmt("selftest exit %d in %.1fs; %zu CSV commands run twice: %d differ, %d failed", self, self_secs,
                jobs.size(), mismatched, failed)};
}

}  // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"oracle identity for the linear model", oracle_identity},
        {"correction profile asymptotics", correction_asymptotics},
        {"turning-point scaling exponents", turning_point_scaling},
        {"generic potential improvement", generic_potential},
        {"regime table and bound constants", regime_table},
        {"forbidden-region decay", forbidden_decay},
        {"boundary layer d=1 vs half-line eigensolver", boundary_d1},
        {"boundary layer d=2 decay and Robin limits", boundary_d2},
        {"Weyl validity beyond the threshold", weyl_threshold},
        {"infrastructure: selftest and reproducible CSV", infrastructure},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("[%s] %2zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), seconds_since(t0));
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
