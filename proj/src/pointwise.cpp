#include "semicl/pointwise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "semicl/csv.hpp"
#include "semicl/model_airy.hpp"
#include "semicl/quad.hpp"
#include "semicl/special_fn.hpp"

namespace semicl {
namespace {
constexpr double kPi = std::numbers::pi;
}

PotentialModel::PotentialModel(int dim, ScalarFn V, Box domain, std::string description)
    : dim_(dim), V_(std::move(V)), domain_(domain), description_(std::move(description)) {
    if (dim != 1 && dim != 2) throw std::domain_error("PotentialModel: dimension must be 1 or 2");
    if (!V_) throw std::invalid_argument("PotentialModel: potential required");
}

PotentialModel PotentialModel::from_expression(int dim, const std::string& potential, Box domain,
                                               const std::array<std::string, 3>& metric) {
    Expr v = parse_expr(potential);
    if (dim == 1 && v.max_variable() > 1) throw std::invalid_argument("potential uses x2 in a one-dimensional model");
    PotentialModel m(dim, [v](const Point& p) { return v.eval(p); }, domain, potential);
    m.with_gradient([v](const Point& p) { return gradient_fd(v, p); });
    std::array<ScalarFn, 3> g;
    for (int i = 0; i < 3; ++i) {
        Expr e = parse_expr(metric[i]);
        g[i] = [e](const Point& p) { return e.eval(p); };
    }
    m.with_metric(g);
    return m;
}

PotentialModel PotentialModel::linear(int dim, double slope, double offset, Box domain) {
    PotentialModel m(dim, [slope, offset](const Point& p) { return slope * p[0] + offset; }, domain,
                     "linear " + format_double(slope) + "*x1 + " + format_double(offset));
    m.with_gradient([slope](const Point&) { return Point{slope, 0}; });
    return m;
}

PotentialModel& PotentialModel::with_gradient(GradFn g) {
    grad_ = std::move(g);
    return *this;
}

PotentialModel& PotentialModel::with_metric(std::array<ScalarFn, 3> ginv) {
    ginv_ = std::move(ginv);
    return *this;
}

Point PotentialModel::gradient(const Point& x) const {
    if (grad_) return grad_(x);
    Point g{0, 0};
    for (int i = 0; i < dim_; ++i) {
        const double step = 1e-6 * (1 + std::abs(x[i]));
        Point a = x, b = x;
        a[i] += step;
        b[i] -= step;
        g[i] = (V_(a) - V_(b)) / (2 * step);
    }
    return g;
}

MetricInverse PotentialModel::metric_inverse(const Point& x) const {
    MetricInverse g{1, 0, 1};
    for (int i = 0; i < 3; ++i)
        if (ginv_[i]) g[i] = ginv_[i](x);
    if (dim_ == 1) g[1] = 0, g[2] = 1;
    return g;
}

double PotentialModel::sqrt_g(const Point& x) const {
    const MetricInverse g = metric_inverse(x);
    const double det = dim_ == 1 ? g[0] : g[0] * g[2] - g[1] * g[1];
    return 1 / std::sqrt(det);
}

PotentialModel::Ellipticity PotentialModel::check_metric() const {
    Ellipticity e{1e300, -1e300};
    const int n = 21;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < (dim_ == 2 ? n : 1); ++j) {
            Point p{domain_.lo[0] + (domain_.hi[0] - domain_.lo[0]) * i / (n - 1),
                    dim_ == 2 ? domain_.lo[1] + (domain_.hi[1] - domain_.lo[1]) * j / (n - 1) : 0.0};
            const MetricInverse g = metric_inverse(p);
            double lo, hi;
            if (dim_ == 1) {
                lo = hi = g[0];
            } else {
                const double m = 0.5 * (g[0] + g[2]);
                const double r = std::hypot(0.5 * (g[0] - g[2]), g[1]);
                lo = m - r;
                hi = m + r;
            }
            e.min_eigenvalue = std::min(e.min_eigenvalue, lo);
            e.max_eigenvalue = std::max(e.max_eigenvalue, hi);
        }
    }
    if (!(e.min_eigenvalue >= 1e-8)) throw std::domain_error("metric is not positive definite on the domain");
    return e;
}

double weyl_term(const PotentialModel& m, const Point& x, double tau, double h) {
    const int d = m.dim();
    const double avail = std::max(tau - m.potential(x), 0.0);
    return std::pow(2 * kPi, -d) * unit_ball_volume(d) * std::pow(avail, d / 2.0) * m.sqrt_g(x) * std::pow(h, -d);
}

double grad_norm_g(const PotentialModel& m, const Point& x) {
    const Point g = m.gradient(x);
    const MetricInverse gi = m.metric_inverse(x);
    const double q = gi[0] * g[0] * g[0] + 2 * gi[1] * g[0] * g[1] + gi[2] * g[1] * g[1];
    return std::sqrt(std::max(q, 0.0));
}

ScalePoint scale_functions(const PotentialModel& m, const Point& x, double h) {
    ScalePoint s;
    s.gamma_bar = 0.5 * std::cbrt(h * h);
    s.rho_bar = std::cbrt(h);
    s.gamma = kScaleEpsilon * std::abs(m.potential(x)) + s.gamma_bar;
    s.rho = std::sqrt(s.gamma);
    return s;
}

double travel_time(const PotentialModel& m, const Point& x, double tau) {
    const double lo = m.domain().lo[0], hi = m.domain().hi[0];
    auto f = [&](double s) { return m.potential(Point{s, x[1]}) - tau; };
    if (m.dim() == 2) {
        const Point g = m.gradient(x);
        if (std::abs(g[1]) > 1e-8 * (1 + std::abs(g[0])))
            throw std::domain_error("travel_time: d = 2 requires a potential depending on x1 only");
    }
    // nearest sign change of V - tau along x1
    const int n = 4000;
    double best = NAN, bestdist = 1e300;
    double prev = f(lo);
    for (int i = 1; i <= n; ++i) {
        const double a = lo + (hi - lo) * (i - 1) / n, b = lo + (hi - lo) * i / n;
        const double cur = f(b);
        if (prev == 0 || (prev < 0) != (cur < 0)) {
            double root;
            if (prev == 0) {
                root = a;
            } else {
                auto tolf = boost::math::tools::eps_tolerance<double>(50);
                std::uintmax_t it = 200;
                auto r = boost::math::tools::toms748_solve(f, a, b, prev, cur, tolf, it);
                root = 0.5 * (r.first + r.second);
            }
            const double dist = std::abs(root - x[0]);
            if (dist < bestdist) {
                bestdist = dist;
                best = root;
            }
        }
        prev = cur;
    }
    if (std::isnan(best)) throw std::domain_error("travel_time: no turning point in the domain");
    const Point tp{best, x[1]};
    if (std::abs(m.gradient(tp)[0]) < 1e-6) throw std::domain_error("travel_time: degenerate turning point");
    const double dx = x[0] - best;
    if (dx == 0) return 0;
    // x = tp + dx u^2 removes the square-root endpoint behaviour
    auto integrand = [&](double u) {
        const Point p{best + dx * u * u, x[1]};
        const double avail = std::abs(tau - m.potential(p)) / m.metric_inverse(p)[0];
        return std::sqrt(avail) * 2 * u;
    };
    const double integral = std::abs(dx) * integrate(integrand, 0, 1, 1e-12).value;
    const double w = std::cbrt(1.5 * integral * 1.5 * integral);
    return tau - m.potential(x) >= 0 ? w : -w;
}

std::string regime_label(Regime r) {
    switch (r) {
        case Regime::Branch1: return "branch1";
        case Regime::Branch2: return "branch2";
        case Regime::Branch3: return "branch3";
        case Regime::Dim2: return "d2";
    }
    return "?";
}

std::array<bool, 3> regime_predicates(double v, double g, double h) {
    const double hg = std::cbrt(h * h * g * g);
    // |V| = 0 with grad 0 would give an infinite branch-1 bound
    return {(hg <= v && v <= g * g && v > 0) || v >= std::max(g * g, h), v <= hg && g >= std::sqrt(h),
            v <= h && g <= std::sqrt(h)};
}

RegimeResult classify_regime_values(int d, double v, double g, double h) {
    RegimeResult r;
    if (d == 2) {
        r.regime = Regime::Dim2;
        r.bound = 1 / h;
        r.skip_correction = h * g * g * g <= std::pow(v, 5);
        return r;
    }
    const auto pr = regime_predicates(v, g, h);
    if (pr[0]) {
        r.regime = Regime::Branch1;
        r.bound = 1 / std::sqrt(v);
    } else if (pr[1]) {
        r.regime = Regime::Branch2;
        r.bound = 1 / std::cbrt(h * g);
    } else if (pr[2]) {
        r.regime = Regime::Branch3;
        r.bound = 1 / std::sqrt(h);
    } else {
        throw std::logic_error("classify_regime: no branch matched");
    }
    return r;
}

RegimeResult classify_regime(const PotentialModel& m, const Point& x, double h, double tau) {
    return classify_regime_values(m.dim(), std::abs(m.potential(x) - tau), grad_norm_g(m, x), h);
}

PredictedKernel predict_pointwise(const PotentialModel& m, const Point& x, double tau, double h,
                                  const PredictOptions& opt) {
    const int d = m.dim();
    PredictedKernel k;
    k.x1 = x[0];
    k.x2 = d == 2 ? x[1] : 0.0;
    k.h = h;
    k.tau = tau;
    k.weyl = weyl_term(m, x, tau, h);
    const double W = travel_time(m, x, tau);
    k.travel_time = W;
    const double h23 = std::cbrt(h * h);
    const double t = W / h23;
    double q = 0;
    if (opt.q_source != QSource::Zero && t >= -5) {
        if (t > 1e4 || (opt.q_source == QSource::CalibratedAsymptotic && t >= 4))
            q = q_asymptotic(d, t).calibrated;
        else
            q = q_numeric(d, t, opt.tol).value;
    }
    k.correction = std::pow(h, -2.0 * d / 3) * std::pow(grad_norm_g(m, x), d / 3.0) * q * m.sqrt_g(x);
    k.total = k.weyl + k.correction;
    const double gamma_eff = std::max(std::abs(W), h23);
    k.bound = opt.bound_constant * std::pow(h, 1.0 - d) * std::pow(gamma_eff, (d - 2) / 2.0);
    k.regime = regime_label(classify_regime(m, x, h, tau).regime);
    return k;
}

CorrectionMagnitude correction_magnitude(int d, double gamma, double h) {
    CorrectionMagnitude c;
    c.magnitude = std::pow(h, (1.0 - d) / 2) * std::pow(gamma, -(d + 3.0) / 4);
    const double remainder = std::pow(h, 1.0 - d) * std::pow(gamma, (d - 2.0) / 2);
    c.below_remainder = c.magnitude <= remainder * (1 + 1e-12);
    return c;
}

double forbidden_tail_bound(const PotentialModel& m, const Point& x, double tau, double h, int l, double c_prime) {
    double vmin = m.potential(x);
    const Box& b = m.domain();
    const int n = m.dim() == 1 ? 2001 : 201;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < (m.dim() == 2 ? n : 1); ++j) {
            Point p{b.lo[0] + (b.hi[0] - b.lo[0]) * i / (n - 1),
                    m.dim() == 2 ? b.lo[1] + (b.hi[1] - b.lo[1]) * j / (n - 1) : 0.0};
            vmin = std::min(vmin, m.potential(p));
        }
    }
    if (tau > vmin) throw std::domain_error("forbidden_tail_bound: tau exceeds the infimum of V");
    return c_prime * std::pow(h, -m.dim()) * std::pow(1 + std::abs(vmin - tau) / h, -l);
}

std::string prediction_csv(const std::vector<PredictionRow>& rows) {
    CsvWriter w({"x", "h", "weyl", "correction", "total", "oracle", "abs_error", "bound", "regime"});
    for (const auto& r : rows) {
        const double oracle = r.oracle ? *r.oracle : NAN;
        const double err = r.oracle ? std::abs(*r.oracle - r.k.total) : NAN;
        w.row_text({format_double(r.k.x1), format_double(r.k.h), format_double(r.k.weyl),
                    format_double(r.k.correction), format_double(r.k.total), format_double(oracle),
                    format_double(err), format_double(r.k.bound), r.k.regime});
    }
    return w.str();
}

}  // namespace semicl
