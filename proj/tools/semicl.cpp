// semicl: batch front end for correction profiles, kernel predictions,
// boundary profiles, scaling studies and the self-test.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "semicl/boundary_layer.hpp"
#include "semicl/config.hpp"
#include "semicl/csv.hpp"
#include "semicl/model_airy.hpp"
#include "semicl/oscillatory.hpp"
#include "semicl/pointwise.hpp"
#include "semicl/selftest.hpp"
#include "semicl/special_fn.hpp"
#include "semicl/studies.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kDegraded = 2, kStudyFail = 3, kSelftestFail = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

semicl::BoundaryKind parse_bc(const std::string& s) {
    if (s == "dirichlet") return semicl::BoundaryKind::Dirichlet;
    if (s == "neumann") return semicl::BoundaryKind::Neumann;
    if (s == "robin") return semicl::BoundaryKind::Robin;
    throw UsageError("--bc must be dirichlet, neumann or robin");
}

void check_writable(const std::string& path) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(path).parent_path();
    if (!dir.empty() && !fs::is_directory(dir)) throw UsageError("output directory does not exist: " + dir.string());
}

struct QtableArgs {
    int dim = 1;
    double tmin = 0, tmax = 100;
    int steps = 400;
    double tol = 1e-10;
    std::string out;
};

int cmd_qtable(const QtableArgs& a) {
    if (a.dim != 1 && a.dim != 2) throw UsageError("--dim must be 1 or 2");
    if (!(a.tmax > a.tmin)) throw UsageError("--tmax must exceed --tmin");
    if (a.tmin < -5 || a.tmax > 1e4) throw UsageError("t range must lie within [-5, 1e4]");
    if (a.steps < 2) throw UsageError("--steps must be at least 2");
    if (!(a.tol >= 1e-12 && a.tol <= 1e-4)) throw UsageError("--tol must lie in [1e-12, 1e-4]");
    check_writable(a.out);
    const semicl::CorrectionProfile p = semicl::build_correction_profile(a.dim, a.tmin, a.tmax, a.steps, a.tol);
    semicl::write_file_atomic(a.out, semicl::correction_profile_csv(p));
    if (p.degraded) {
        std::cerr << "qtable: quadrature did not reach the requested tolerance at some t\n";
        return kDegraded;
    }
    return kOk;
}

struct KernelArgs {
    std::string model = "airy";
    int dim = 1;
    double h = 0;
    double tau = 0;
    double xmin = -1, xmax = 1;
    int points = 101;
    std::string potential;
    double dmin = -5, dmax = 5;
    std::string bc = "dirichlet";
    double beta = 0;
    std::string out;
};

int cmd_kernel(const KernelArgs& a) {
    using namespace semicl;
    if (!(a.h > 0 && a.h <= 1)) throw UsageError("--h must lie in (0, 1]");
    if (a.dim != 1 && a.dim != 2) throw UsageError("--dim must be 1 or 2");
    if (a.points < 1 || !(a.xmax >= a.xmin)) throw UsageError("need --points >= 1 and --xmax >= --xmin");
    check_writable(a.out);
    auto x_at = [&](int i) { return a.points == 1 ? a.xmin : a.xmin + (a.xmax - a.xmin) * i / (a.points - 1); };

    if (a.model == "boundary") {
        BoundaryModel bm{a.dim, parse_bc(a.bc), a.beta, a.tau > 0 ? a.tau : 1.0, 1.0};
        if (bm.kind != BoundaryKind::Robin && a.beta != 0) throw UsageError("--beta requires --bc robin");
        bm.validate();
        CsvWriter w({"x", "h", "weyl", "boundary_term", "total", "upsilon", "oracle", "abs_error", "bound", "regime"});
        bool degraded = false;
        for (int i = 0; i < a.points; ++i) {
            const double x = x_at(i);
            if (x < 0) throw UsageError("boundary model needs x >= 0");
            const PredictedKernel k = predict_near_boundary(bm, a.h, x, bm.tau);
            const double r = std::sqrt(bm.tau) * x / a.h;
            double ups, oracle = NAN;
            if (bm.kind == BoundaryKind::Robin) {
                const RobinValue rv = upsilon_robin(bm, r);
                degraded = degraded || rv.degraded;
                ups = rv.value;
            } else {
                ups = upsilon_flat(bm, r);
                oracle = halfspace_kernel_exact(bm, a.h, x, bm.tau);
            }
            w.row_text({format_double(x), format_double(a.h), format_double(k.weyl), format_double(k.correction),
                        format_double(k.total), format_double(ups), format_double(oracle),
                        format_double(std::abs(k.total - oracle)), format_double(k.bound), k.regime});
        }
        write_file_atomic(a.out, w.str());
        return degraded ? kDegraded : kOk;
    }

    const Box dom{{std::min(a.dmin, a.xmin), std::min(a.dmin, a.xmin)}, {std::max(a.dmax, a.xmax), std::max(a.dmax, a.xmax)}};
    PotentialModel m = [&] {
        if (a.model == "airy") return PotentialModel::linear(a.dim, -1, 0, dom);
        if (a.model == "expr") {
            if (a.potential.empty()) throw UsageError("--model expr requires --potential");
            return PotentialModel::from_expression(a.dim, a.potential, dom);
        }
        throw UsageError("--model must be airy, expr or boundary");
    }();
    std::vector<PredictionRow> rows;
    bool degraded = false;
    for (int i = 0; i < a.points; ++i) {
        const double x = x_at(i);
        PredictionRow row;
        row.k = predict_pointwise(m, Point{x, 0}, a.tau, a.h);
        if (a.model == "airy") {
            if (a.dim == 1) {
                row.oracle = airy_kernel_exact(a.h, x, a.tau);
            } else {
                const KernelValue kv = kernel2d_exact(a.h, x, a.tau);
                degraded = degraded || kv.degraded;
                row.oracle = kv.value;
            }
        }
        rows.push_back(row);
    }
    write_file_atomic(a.out, prediction_csv(rows));
    return degraded ? kDegraded : kOk;
}

struct ProfileArgs {
    int dim = 1;
    std::string bc = "dirichlet";
    double beta = 0;
    double rmin = 0, rmax = 50;
    int steps = 501;
    std::string out;
};

int cmd_boundary_profile(const ProfileArgs& a) {
    using namespace semicl;
    if (a.dim < 1 || a.dim > 3) throw UsageError("--dim must be 1, 2 or 3");
    if (!(a.rmax > a.rmin) || a.rmin < 0) throw UsageError("need 0 <= --rmin < --rmax");
    if (a.steps < 2) throw UsageError("--steps must be at least 2");
    BoundaryModel bm{a.dim, parse_bc(a.bc), a.beta, 1.0, 1.0};
    if (bm.kind != BoundaryKind::Robin && a.beta != 0) throw UsageError("--beta requires --bc robin");
    bm.validate();
    check_writable(a.out);
    write_file_atomic(a.out, boundary_profile_csv(boundary_profile(bm, a.rmin, a.rmax, a.steps)));
    return kOk;
}

int cmd_study(const std::string& config_path, const std::string& out_override) {
    using namespace semicl;
    StudyConfig c;
    try {
        c = load_study_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return kUsage;
    }
    if (!out_override.empty()) c.csv_path = out_override;
    if (c.csv_path.empty()) c.csv_path = c.id + ".csv";
    check_writable(c.csv_path);
    if (!c.summary_path.empty()) check_writable(c.summary_path);
    const ScalingReport r = run_study(c);
    write_file_atomic(c.csv_path, scaling_report_csv(r));
    const std::string text = scaling_report_text(r);
    if (!c.summary_path.empty()) write_file_atomic(c.summary_path, text);
    std::cout << text;
    return r.pass() ? kOk : kStudyFail;
}

int cmd_selftest() {
    bool ok = true;
    double total = 0;
    for (const auto& r : semicl::run_selftest()) {
        std::printf("%-18s %s  %s\n", r.name.c_str(), r.pass ? "pass" : "FAIL", r.detail.c_str());
        ok = ok && r.pass;
        total += r.seconds;
    }
    std::printf("selftest %s (%.1f s)\n", ok ? "passed" : "FAILED", total);
    return ok ? kOk : kSelftestFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semicl: spectral projector kernels near turning points and boundaries"};
    // "-h" is taken by the semiclassical parameter --h
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.allow_windows_style_options(false);

    QtableArgs qa;
    auto* q = app.add_subcommand("qtable", "Tabulate the turning-point correction profile");
    q->add_option("--dim", qa.dim, "dimension (1 or 2)")->capture_default_str();
    q->add_option("--tmin", qa.tmin, "first t")->capture_default_str();
    q->add_option("--tmax", qa.tmax, "last t")->capture_default_str();
    q->add_option("--steps", qa.steps, "number of rows")->capture_default_str();
    q->add_option("--tol", qa.tol, "quadrature tolerance")->capture_default_str();
    q->add_option("--out", qa.out, "output CSV")->required();

    KernelArgs ka;
    auto* k = app.add_subcommand("kernel", "Predict e(x,x,tau) on an x grid");
    k->add_option("--model", ka.model, "airy | expr | boundary")->capture_default_str();
    k->add_option("--dim", ka.dim, "dimension")->capture_default_str();
    k->add_option("--h", ka.h, "semiclassical parameter")->required();
    k->add_option("--tau", ka.tau, "spectral level (boundary model: energy, default 1)")->capture_default_str();
    k->add_option("--xmin", ka.xmin, "first x1")->capture_default_str();
    k->add_option("--xmax", ka.xmax, "last x1")->capture_default_str();
    k->add_option("--points", ka.points, "grid size")->capture_default_str();
    k->add_option("--potential", ka.potential, "V as an expression in x, x1, x2 (model expr)");
    k->add_option("--domain-min", ka.dmin, "domain lower edge along x1")->capture_default_str();
    k->add_option("--domain-max", ka.dmax, "domain upper edge along x1")->capture_default_str();
    k->add_option("--bc", ka.bc, "dirichlet | neumann | robin (model boundary)")->capture_default_str();
    k->add_option("--beta", ka.beta, "Robin parameter")->capture_default_str();
    k->add_option("--out", ka.out, "output CSV")->required();

    ProfileArgs pa;
    auto* b = app.add_subcommand("boundary-profile", "Tabulate the boundary-layer profile");
    b->add_option("--dim", pa.dim, "dimension")->capture_default_str();
    b->add_option("--bc", pa.bc, "dirichlet | neumann | robin")->capture_default_str();
    b->add_option("--beta", pa.beta, "Robin parameter")->capture_default_str();
    b->add_option("--rmin", pa.rmin, "first r")->capture_default_str();
    b->add_option("--rmax", pa.rmax, "last r")->capture_default_str();
    b->add_option("--steps", pa.steps, "number of rows")->capture_default_str();
    b->add_option("--out", pa.out, "output CSV")->required();

    std::string config, study_out;
    auto* s = app.add_subcommand("study", "Run an h-sweep scaling study from a config file");
    s->add_option("--config", config, "study config")->required();
    s->add_option("--out", study_out, "report CSV (overrides [output] csv)");

    bool corrupt = false;
    auto* st = app.add_subcommand("selftest", "Run the reduced invariant suites");
    // fault injection for testing the harness itself
    st->add_flag("--corrupt-special-table", corrupt)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*q) return cmd_qtable(qa);
        if (*k) return cmd_kernel(ka);
        if (*b) return cmd_boundary_profile(pa);
        if (*s) return cmd_study(config, study_out);
        semicl::testing::set_special_table_corruption(corrupt);
        return cmd_selftest();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const semicl::ParseError& e) {
        std::cerr << "potential: " << e.what() << " at offset " << e.offset() << "\n";
        return kUsage;
    } catch (const std::logic_error& e) {
        // contract violations by the inputs: bad ranges, no turning point, ...
        std::cerr << "invalid input: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDegraded;
    }
}
