#include "semicl/model_airy.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "semicl/csv.hpp"
#include "semicl/oscillatory.hpp"
#include "semicl/quad.hpp"
#include "semicl/special_fn.hpp"

namespace semicl {
namespace {
constexpr double kPi = std::numbers::pi;
}

double airy_G(double s) {
    const double a = airy_ai(-s), ap = airy_ai_prime(-s);
    return ap * ap + s * a * a;
}

double airy_identity_deviation() {
    double worst = 0;
    const double step = 1e-4;
    for (double s = -8; s <= 30; s += 0.05) {
        const double d = (airy_G(s + step) - airy_G(s - step)) / (2 * step);
        const double a = airy_ai(-s);
        worst = std::max(worst, std::abs(d - a * a));
    }
    return worst;
}

namespace {
void require_validated() {
    static const bool ok = airy_identity_deviation() < 1e-6;
    if (!ok) throw std::logic_error("airy_kernel_exact: closed form failed the derivative identity check");
}
}  // namespace

double airy_kernel_exact(double h, double x1, double tau) {
    if (!(h > 0 && h <= 1)) throw std::domain_error("airy_kernel_exact: h must lie in (0, 1]");
    require_validated();
    const double h23 = std::cbrt(h * h);
    return airy_G((x1 + tau) / h23) / h23;
}

KernelValue airy_G2(double s, double tol) {
    // (1/pi) int_0^inf G(s - z^2) dz; G is negligible once s - z^2 < -10
    auto f = [s](double z) { return airy_G(s - z * z); };
    const double zmax = std::sqrt(std::max(s, 0.0) + 10.0);
    KernelValue r;
    if (s > 0) {
        const double zs = std::sqrt(s);
        const QuadResult a = integrate(f, 0, zs, tol);
        const QuadResult b = integrate(f, zs, zmax, tol);
        r.value = (a.value + b.value) / kPi;
        r.error = (a.error + b.error) / kPi;
    } else {
        const QuadResult a = integrate(f, 0, zmax, tol);
        r.value = a.value / kPi;
        r.error = a.error / kPi;
    }
    r.degraded = r.error > std::max(tol, 1e-12) * std::max(1.0, std::abs(r.value)) * 10;
    return r;
}

KernelValue kernel2d_exact(double h, double x1, double tau, double tol) {
    if (!(h > 0 && h <= 1)) throw std::domain_error("kernel2d_exact: h must lie in (0, 1]");
    require_validated();
    const double h23 = std::cbrt(h * h);
    KernelValue g = airy_G2((x1 + tau) / h23, std::min(tol, 1e-8));
    const double scale = 1 / (h23 * h23);
    return {g.value * scale, g.error * scale, g.error > tol};
}

namespace {
OscillatoryIntegrand q_spec(int d, double t) {
    OscillatoryIntegrand s;
    s.t = t;
    s.cubic = -2.0 / 3.0;
    s.subtract_one = true;
    if (d == 1) {
        s.p = 1.5;
        s.c = -3;
    } else {
        s.p = 2;
        s.c = 0;
    }
    return s;
}

double q_prefactor(int d) { return d == 1 ? 0.5 * std::pow(2 * kPi, -1.5) : -0.25 * std::pow(2 * kPi, -2.0); }

void check_dim(int d) {
    if (d != 1 && d != 2) throw std::domain_error("dimension must be 1 or 2");
}
}  // namespace

QValue q_numeric(int d, double t, double tol) {
    check_dim(d);
    if (!(t >= -5 && t <= 1e4)) throw std::domain_error("q_numeric: t must lie in [-5, 1e4]");
    const double itol = std::clamp(tol, 1e-12, 1e-4);
    const OscResult r = integrate_beta(q_spec(d, t), itol);
    const double pf = std::abs(q_prefactor(d));
    return {q_prefactor(d) * r.value.real(), pf * r.error, r.degraded};
}

std::complex<double> q_literal(int d, double t, double tol) {
    check_dim(d);
    OscillatoryIntegrand s = q_spec(d, t);
    if (d == 1) {
        s.c = 1;
        return -0.25 * std::pow(2 * kPi, -1.5) * integrate_beta(s, tol).value;
    }
    // sign b = -i e^{i (pi/2) sign b}
    s.c = 2;
    return -0.5 * std::pow(2 * kPi, -2.0) * std::complex<double>(0, -1) * integrate_beta(s, tol).value;
}

namespace {

double gamma_of(int d) { return d == 1 ? 1.0 : 1.25; }

QCalibration fit_calibration(int d) {
    const double g = gamma_of(d);
    // linear least squares for Q t^g = a cos(w) + b sin(w), w = (4/3) t^{3/2}
    double saa = 0, sab = 0, sbb = 0, sya = 0, syb = 0;
    std::vector<double> ts, ys;
    const int n = 1501;
    for (int i = 0; i < n; ++i) {
        const double t = 25 + 375.0 * i / (n - 1);
        const double y = q_numeric(d, t, 1e-11).value * std::pow(t, g);
        const double w = 4.0 / 3.0 * t * std::sqrt(t);
        const double ca = std::cos(w), sb = std::sin(w);
        saa += ca * ca;
        sab += ca * sb;
        sbb += sb * sb;
        sya += y * ca;
        syb += y * sb;
        ts.push_back(t);
        ys.push_back(y);
    }
    const double det = saa * sbb - sab * sab;
    const double a = (sya * sbb - syb * sab) / det;
    const double b = (syb * saa - sya * sab) / det;
    QCalibration c;
    c.d = d;
    c.gamma = g;
    c.amplitude = std::hypot(a, b);
    c.phase = std::atan2(-b, a);  // a cos w + b sin w = A cos(w + phi)
    double worst = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double w = 4.0 / 3.0 * ts[i] * std::sqrt(ts[i]);
        worst = std::max(worst, std::abs(ys[i] - c.amplitude * std::cos(w + c.phase)) / c.amplitude);
    }
    c.max_rel_residual = worst;
    return c;
}
}  // namespace

const QCalibration& q_calibration(int d) {
    check_dim(d);
    static std::once_flag f1, f2;
    static QCalibration c1, c2;
    if (d == 1) {
        std::call_once(f1, [] { c1 = fit_calibration(1); });
        return c1;
    }
    std::call_once(f2, [] { c2 = fit_calibration(2); });
    return c2;
}

QAsymptotic q_asymptotic(int d, double t) {
    check_dim(d);
    if (!(t >= 4)) throw std::domain_error("q_asymptotic: valid only for t >= 4");
    const double g = gamma_of(d);
    const double w = 4.0 / 3.0 * t * std::sqrt(t);
    const QCalibration& c = q_calibration(d);
    return {std::pow(t, -g) * std::sin(w) / (2 * kPi), c.amplitude * std::pow(t, -g) * std::cos(w + c.phase)};
}

namespace {
KappaReport compute_kappa(int d) {
    KappaReport k;
    k.d = d;
    // literal constant: 2 (2 pi)^{-3/2} int_0^inf b^{-1/2} cos(2b - pi/4) db,
    // i.e. (2 pi)^{-3/2} times the full-line integral with c = -1, t = 1
    OscillatoryIntegrand s;
    s.p = 0.5;
    s.t = 1;
    s.cubic = 0;
    s.c = -1;
    k.literal = std::pow(2 * kPi, -1.5) * integrate_beta(s, 1e-11).value.real();
    if (d == 1) {
        k.f1_coefficient = k.literal;  // F1(t) = coefficient * t^{-1/2}
        // least-squares coefficient of s^{1/2} in G(s) - Q(s) on [4, 400]
        double num = 0, den = 0;
        for (int i = 0; i <= 396; ++i) {
            const double t = 4 + i;
            const double r = airy_G(t) - q_numeric(1, t, 1e-11).value;
            num += r * std::sqrt(t);
            den += t;
        }
        k.matched = num / den;
        return k;
    }
    // d = 2: F1 = (1/2)(2 pi)^{-2} int |b|^{-1} (-i sign b) e^{2ibt} db in the
    // principal-value sense, plus a constant pinned by the exact oracle at t0.
    OscillatoryIntegrand f1;
    f1.p = 1;
    f1.t = 25;
    f1.cubic = 0;
    f1.c = -2;
    f1.sense = Sense::Distributional;
    const double pv = 0.5 * std::pow(2 * kPi, -2.0) * integrate_beta(f1, 1e-11).value.real();
    f1.t = 1;
    k.f1_coefficient = 0.5 * std::pow(2 * kPi, -2.0) * integrate_beta(f1, 1e-11).value.real();
    const double t0 = 25;
    k.matched = (airy_G2(t0).value - q_numeric(2, t0, 1e-11).value) / t0;
    k.distributional_constant = k.matched - pv;
    // F1 = kappa + kappa1 t^{-3}  =>  G2 - Q2 - kappa t = -kappa1 t^{-2} / 2 + const
    double sxx = 0, sx = 0, sy = 0, sxy = 0;
    int n = 0;
    for (double t = 6; t <= 40; t += 1) {
        const double r = airy_G2(t).value - q_numeric(2, t, 1e-11).value - k.matched * t;
        const double x = -0.5 / (t * t);
        sxx += x * x;
        sx += x;
        sy += r;
        sxy += x * r;
        ++n;
    }
    k.kappa1_fit = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return k;
}
}  // namespace

const KappaReport& kappa_report(int d) {
    check_dim(d);
    static std::once_flag f1, f2;
    static KappaReport k1, k2;
    if (d == 1) {
        std::call_once(f1, [] { k1 = compute_kappa(1); });
        return k1;
    }
    std::call_once(f2, [] { k2 = compute_kappa(2); });
    return k2;
}

double kappa_matched(int d) {
    check_dim(d);
    return d == 1 ? 1 / kPi : 1 / (4 * kPi);
}

CorrectionProfile build_correction_profile(int d, double t0, double t1, int steps, double tol) {
    check_dim(d);
    if (!(t1 > t0) || steps < 2) throw std::invalid_argument("correction profile: need t1 > t0 and steps >= 2");
    CorrectionProfile p;
    p.d = d;
    p.kappa_matched = kappa_matched(d);
    for (int i = 0; i < steps; ++i) {
        const double t = t0 + (t1 - t0) * i / (steps - 1);
        const QValue q = q_numeric(d, t, tol);
        p.degraded = p.degraded || q.degraded;
        double pa = NAN, ca = NAN;
        if (t >= 4) {
            const QAsymptotic a = q_asymptotic(d, t);
            pa = a.printed;
            ca = a.calibrated;
        }
        const double exact = d == 1 ? airy_G(t) : airy_G2(t).value;
        const double weyl = d == 1 ? p.kappa_matched * std::sqrt(std::max(t, 0.0)) : p.kappa_matched * std::max(t, 0.0);
        p.t.push_back(t);
        p.q_numeric.push_back(q.value);
        p.q_printed_asym.push_back(pa);
        p.q_calibrated_asym.push_back(ca);
        p.oracle_residual.push_back(exact - weyl - q.value);
    }
    return p;
}

std::string correction_profile_csv(const CorrectionProfile& p) {
    CsvWriter w({"t", "q_numeric", "q_paper_asym", "q_calibrated_asym", "oracle_residual"});
    for (std::size_t i = 0; i < p.t.size(); ++i)
        w.row({p.t[i], p.q_numeric[i], p.q_printed_asym[i], p.q_calibrated_asym[i], p.oracle_residual[i]});
    return w.str();
}

}  // namespace semicl
