#include "semicl/studies.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cstdint>
#include <cmath>
#include <stdexcept>

#include "semicl/eigensolve.hpp"
#include "semicl/model_airy.hpp"

namespace semicl {

PotentialModel study_model(const StudyConfig& c) {
    return PotentialModel::from_expression(1, c.potential, Box{{c.domain_lo, 0}, {c.domain_hi, 0}});
}

std::vector<double> window_points(const PotentialModel& m, double tau, double h, double scale, int points) {
    const double lo = m.domain().lo[0], hi = m.domain().hi[0];
    const double mid = 0.5 * (lo + hi);
    auto f = [&](double x) { return m.potential(Point{x, 0}) - tau; };
    // sign change of V - tau nearest the domain centre
    const int n = 4000;
    double tp = NAN;
    double prev = f(lo);
    for (int i = 1; i <= n; ++i) {
        const double a = lo + (hi - lo) * (i - 1) / n, b = lo + (hi - lo) * i / n;
        const double cur = f(b);
        if ((prev < 0) != (cur < 0)) {
            auto tol = boost::math::tools::eps_tolerance<double>(50);
            std::uintmax_t it = 200;
            const auto r = boost::math::tools::toms748_solve(f, a, b, prev, cur, tol, it);
            const double root = 0.5 * (r.first + r.second);
            if (std::isnan(tp) || std::abs(root - mid) < std::abs(tp - mid)) tp = root;
        }
        prev = cur;
    }
    if (std::isnan(tp)) throw std::runtime_error("window_points: no turning point in the domain");
    const double g = std::max(std::abs(m.gradient(Point{tp, 0})[0]), 1e-12);
    const double h23 = std::cbrt(h * h);
    const double half = 1.5 * scale * h23 / std::cbrt(g);
    std::vector<double> out;
    for (int i = 0; i < points; ++i) {
        const double x = tp - half + 2 * half * i / (points - 1);
        if (x <= lo || x >= hi) continue;
        if (std::abs(travel_time(m, Point{x, 0}, tau)) <= scale * h23) out.push_back(x);
    }
    if (out.empty()) throw std::runtime_error("window_points: empty window");
    return out;
}

namespace {

double prediction(const PotentialModel& m, double x, double tau, double h, PredictorVariant v) {
    if (v == PredictorVariant::WeylOnly) return weyl_term(m, Point{x, 0}, tau, h);
    return predict_pointwise(m, Point{x, 0}, tau, h).total;
}

std::size_t coarse_points_for(const StudyConfig& c, const OracleSetup& s, double lambda_max) {
    const std::size_t rule = required_points(s.V, s.a, s.b, s.h, lambda_max);
    if (c.points_per_h <= 0) return rule;
    const auto n = static_cast<std::size_t>(std::ceil((s.b - s.a) * c.points_per_h / s.h)) + 1;
    return std::max(n, rule);
}

}  // namespace

WindowMeasurement measure_window(const StudyConfig& c, double h) { return measure_window(c, h, c.predictor); }

WindowMeasurement measure_window(const StudyConfig& c, double h, PredictorVariant variant) {
    const PotentialModel m = study_model(c);
    return measure_points(c, h, variant, window_points(m, c.tau, h, c.window_scale, c.points));
}

WindowMeasurement measure_points(const StudyConfig& c, double h, PredictorVariant variant,
                                 const std::vector<double>& xs) {
    const PotentialModel m = study_model(c);
    WindowMeasurement out;
    out.h = h;

    if (c.oracle == OracleKind::AiryExact) {
        // the exact kernel belongs to V = -x1
        for (double x : {c.domain_lo, 0.0, c.domain_hi})
            if (std::abs(m.potential(Point{x, 0}) + x) > 1e-12)
                throw std::invalid_argument("measure_window: the airy oracle requires potential -x");
        for (double x : xs) {
            const double o = airy_kernel_exact(h, x, c.tau);
            const double p = prediction(m, x, c.tau, h, variant);
            out.samples.push_back({x, c.tau, o, p});
            out.sup_error = std::max(out.sup_error, std::abs(o - p));
        }
        return out;
    }

    OracleSetup s;
    s.V = [&m](double x) { return m.potential(Point{x, 0}); };
    s.a = c.domain_lo;
    s.b = c.domain_hi;
    s.left = c.left;
    s.right = c.right;
    s.h = h;
    const double lambda_max = c.tau + 10 * h;
    s.coarse_points = coarse_points_for(c, s, lambda_max);
    out.coarse_points = s.coarse_points;
    std::vector<double> snapped;
    SpectralData sp;
    if (c.richardson) {
        sp = extrapolated_spectrum(s, lambda_max, xs, &snapped);
    } else {
        const Discretization d = discretize(s.V, s.a, s.b, s.left, s.right, s.coarse_points, h, lambda_max);
        std::vector<std::size_t> pv;
        for (double x : xs) {
            pv.push_back(d.vertex_of(x));
            snapped.push_back(d.x_of_vertex(pv.back()));
        }
        sp = solve_spectrum(d, lambda_max, pv);
    }
    if (sp.max_residual > 1e-10) throw std::runtime_error("measure_window: eigensolve residual above 1e-10");
    out.eigenpairs = sp.count();
    const auto above = std::upper_bound(sp.eigenvalues.begin(), sp.eigenvalues.end(), c.tau);
    if (above == sp.eigenvalues.begin() || above == sp.eigenvalues.end())
        throw std::runtime_error("measure_window: tau is not bracketed by computed eigenvalues");
    out.level_spacing = *above - *(above - 1);
    std::vector<double> taus{c.tau};
    if (c.tau_window > 0) {
        if (c.tau_window * out.level_spacing > 10 * h)
            throw std::runtime_error("measure_window: tau window exceeds the eigenvalue margin");
        taus.clear();
        for (int j = 0; j <= 16; ++j) taus.push_back(c.tau + c.tau_window * out.level_spacing * (j / 16.0 - 0.5));
    }
    for (std::size_t k = 0; k < snapped.size(); ++k) {
        for (double t : taus) {
            const double o = kernel_from_spectrum(sp, k, t).value;
            const double p = prediction(m, snapped[k], t, h, variant);
            out.samples.push_back({snapped[k], t, o, p});
            out.sup_error = std::max(out.sup_error, std::abs(o - p));
        }
    }
    return out;
}

ScalingReport run_study(const StudyConfig& c) {
    ScalingStudy s;
    s.id = c.id;
    s.anchor = c.anchor;
    s.hs = c.hs;
    s.expected = c.expected_slope;
    s.tol = c.slope_tol;
    s.rule = c.rule;
    s.error_at = [&c](double h) { return measure_window(c, h).sup_error; };
    return run_scaling_study(s);
}

}  // namespace semicl
