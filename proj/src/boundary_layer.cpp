#include "semicl/boundary_layer.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "semicl/csv.hpp"
#include "semicl/quad.hpp"
#include "semicl/special_fn.hpp"

namespace semicl {
namespace {
constexpr double kPi = std::numbers::pi;
const std::complex<double> I{0, 1};
}  // namespace

double BoundaryModel::reflection_sign() const {
    switch (kind) {
        case BoundaryKind::Dirichlet: return -1;
        case BoundaryKind::Neumann: return 1;
        case BoundaryKind::Robin: break;
    }
    throw std::domain_error("reflection sign is defined for Dirichlet/Neumann only");
}

void BoundaryModel::validate() const {
    if (dim < 1) throw std::domain_error("BoundaryModel: dimension must be >= 1");
    if (!(tau > 0)) throw std::domain_error("BoundaryModel: tau must be positive");
    if (kind == BoundaryKind::Robin && !std::isfinite(beta)) throw std::domain_error("BoundaryModel: Robin beta must be finite");
    if (!(rho_cut > 0 && rho_cut <= 1)) throw std::domain_error("BoundaryModel: rho_cut must lie in (0, 1]");
}

BoundaryModel dirichlet(int d) { return {d, BoundaryKind::Dirichlet, 0, 1, 1}; }
BoundaryModel neumann(int d) { return {d, BoundaryKind::Neumann, 0, 1, 1}; }
BoundaryModel robin(int d, double beta) { return {d, BoundaryKind::Robin, beta, 1, 1}; }

namespace {

// (2 pi)^{-d} int_{|z|<=1} e^{2 i r z_1} dz through the polar form
//   norm * int_0^1 z^{d-1} int_0^pi cos(2 z r cos phi) sin^{d-2} phi dphi dz
double upsilon_quadrature(int d, double r) {
    const double S = std::sqrt(kPi) * std::tgamma((d - 1) / 2.0) / std::tgamma(d / 2.0);
    const double norm = unit_ball_volume(d) * std::pow(2 * kPi, -d) * d / S;
    auto outer = [&](double z) {
        auto inner = [&](double phi) { return std::cos(2 * z * r * std::cos(phi)) * std::pow(std::sin(phi), d - 2); };
        return std::pow(z, d - 1) * integrate(inner, 0, kPi, 1e-12).value;
    };
    return norm * integrate(outer, 0, 1, 1e-11).value;
}

double upsilon_unit(int d, double r) {
    // profile for the reflection sign +1
    if (d == 1) return r == 0 ? 1 / kPi : std::sin(2 * r) / (2 * kPi * r);
    if (d == 2) return r == 0 ? 1 / (4 * kPi) : bessel_j1(2 * r) / (4 * kPi * r);
    return upsilon_quadrature(d, r);
}

double upsilon_leading(int d, double r) {
    return std::pow(2 * kPi, -d) * std::pow(2 * kPi, d / 2.0) * std::pow(2 * r, -(d + 1) / 2.0) *
           std::sqrt(2 / kPi) * std::cos(2 * r - (d + 1) * kPi / 4);
}

UpsilonCalibration fit_upsilon(int d) {
    double saa = 0, sab = 0, sbb = 0, sya = 0, syb = 0;
    const int n = d <= 2 ? 800 : 120;
    for (int i = 0; i < n; ++i) {
        const double r = 20 + 180.0 * i / (n - 1);
        const double y = upsilon_unit(d, r) * std::pow(r, (d + 1) / 2.0);
        const double ca = std::cos(2 * r), sb = std::sin(2 * r);
        saa += ca * ca;
        sab += ca * sb;
        sbb += sb * sb;
        sya += y * ca;
        syb += y * sb;
    }
    const double det = saa * sbb - sab * sab;
    const double a = (sya * sbb - syb * sab) / det, b = (syb * saa - sya * sab) / det;
    return {d, std::hypot(a, b), std::atan2(-b, a)};
}

}  // namespace

double upsilon_flat(const BoundaryModel& bm, double r) {
    bm.validate();
    if (r < 0) throw std::domain_error("upsilon_flat: r must be nonnegative");
    return bm.reflection_sign() * upsilon_unit(bm.dim, r);
}

const UpsilonCalibration& upsilon_calibration(int d) {
    if (d < 2) throw std::domain_error("upsilon_calibration: d >= 2 required");
    static std::mutex mu;
    static std::map<int, UpsilonCalibration> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, fit_upsilon(d)).first;
    return it->second;
}

UpsilonAsymptotic upsilon_asymptotic(const BoundaryModel& bm, double r) {
    bm.validate();
    if (bm.dim < 2) throw std::domain_error("upsilon_asymptotic: not applicable for d = 1 (profile is elementary)");
    if (r < 5) throw std::domain_error("upsilon_asymptotic: requires r >= 5");
    const double s = bm.reflection_sign();
    const UpsilonCalibration& c = upsilon_calibration(bm.dim);
    return {s * upsilon_leading(bm.dim, r), s * c.amplitude * std::pow(r, -(bm.dim + 1) / 2.0) * std::cos(2 * r + c.phase)};
}

namespace {

// int_{-a}^{a} (z + i b)/(z - i b) e^{2 i r z} dz
CQuadResult robin_segment(double a, double beta, double r, double rel) {
    CQuadResult out;
    out.value = r == 0 ? std::complex<double>(2 * a) : std::complex<double>(std::sin(2 * r * a) / r);
    if (beta == 0 || a == 0) return out;
    auto f = [&](double z) { return 2.0 * I * beta * std::exp(2.0 * I * r * z) / (z - I * beta); };
    const double w = std::min(a, 20 * std::abs(beta));
    std::vector<double> pts{-a};
    if (w < a) pts.push_back(-w);
    pts.push_back(0);
    if (w < a) pts.push_back(w);
    pts.push_back(a);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const CQuadResult q = integrate_complex(f, pts[i], pts[i + 1], rel);
        out.value += q.value;
        out.error += q.error;
    }
    return out;
}

}  // namespace

RobinValue upsilon_robin(const BoundaryModel& bm, double r, double tol) {
    bm.validate();
    if (bm.kind != BoundaryKind::Robin) throw std::domain_error("upsilon_robin: Robin model required");
    if (bm.dim != 1 && bm.dim != 2) throw std::domain_error("upsilon_robin: d must be 1 or 2");
    const double rel = std::max(1e-14, tol * 1e-2);
    const double st = std::sqrt(bm.tau);
    RobinValue v;
    std::complex<double> total;
    if (bm.dim == 1) {
        const CQuadResult q = robin_segment(st, bm.beta, r, rel);
        total = q.value / (2 * kPi);
        v.error = q.error / (2 * kPi);
    } else {
        // tangential frequency xi' = sqrt(tau) sin(theta), |xi'| <= rho_cut sqrt(tau)
        const double tmax = std::asin(bm.rho_cut);
        double err = 0;
        auto outer = [&](double th) {
            const double a = st * std::cos(th);
            const CQuadResult q = robin_segment(a, bm.beta, r, rel);
            err = std::max(err, q.error);
            return q.value * (st * std::cos(th));
        };
        const CQuadResult o = integrate_complex(outer, -tmax, tmax, rel);
        total = o.value / (4 * kPi * kPi);
        v.error = (o.error + err * 2 * tmax) / (4 * kPi * kPi);
    }
    v.value = total.real();
    v.imag = total.imag();
    v.degraded = v.error > tol || std::abs(v.imag) > std::max(tol, 1e-9);
    return v;
}

double halfspace_kernel_exact(const BoundaryModel& bm, double h, double x1, double tau) {
    bm.validate();
    if (!(tau > 0)) throw std::domain_error("halfspace_kernel_exact: tau must be positive");
    if (bm.kind == BoundaryKind::Robin)
        throw std::domain_error("halfspace_kernel_exact: Robin has no closed form; use the eigensolver oracle");
    const int d = bm.dim;
    // direct + reflected image; the unit profile at 0 is the Weyl constant, so
    // the Dirichlet value at the wall cancels exactly
    const double scale = std::pow(h, -d) * std::pow(tau, d / 2.0);
    return scale * (upsilon_unit(d, 0) + upsilon_flat(bm, std::sqrt(tau) * x1 / h));
}

double weyl_validity_threshold(int d, double h) {
    if (d < 1) throw std::domain_error("weyl_validity_threshold: d >= 1 required");
    return std::pow(h, (d - 1.0) / (d + 1.0));
}

PredictedKernel predict_near_boundary(const BoundaryModel& bm, double h, double x1, double tau) {
    bm.validate();
    const int d = bm.dim;
    PredictedKernel k;
    k.x1 = x1;
    k.h = h;
    k.tau = tau;
    k.weyl = std::pow(2 * kPi * h, -d) * unit_ball_volume(d) * std::pow(tau, d / 2.0);
    const double r = std::sqrt(tau) * x1 / h;
    double ups;
    if (bm.kind == BoundaryKind::Robin) {
        BoundaryModel b = bm;
        b.tau = 1;
        b.beta = bm.beta / std::sqrt(tau);
        ups = upsilon_robin(b, r).value;
    } else {
        ups = upsilon_flat(bm, r);
    }
    k.correction = std::pow(h, -d) * std::pow(tau, d / 2.0) * ups;
    k.total = k.weyl + k.correction;
    k.bound = std::pow(h, -d) * std::pow(x1 / h + 1, -(d + 1) / 2.0) + std::pow(h, 1.0 - d);
    k.regime = x1 >= weyl_validity_threshold(d, h) ? "weyl-valid" : "boundary-layer";
    return k;
}

EllipticityReport ellipticity_check(const BoundarySymbol& b0, const BoundarySymbol& b1,
                                    const std::vector<double>& xi_grid, double tau, double tol) {
    EllipticityReport rep;
    rep.min_symbol = 1e300;
    rep.min_with_gradient = 1e300;
    auto f = [&](double xi) {
        const double q = xi * xi - tau;
        const std::complex<double> lambda = I * std::sqrt(std::max(q, 0.0));
        return b0(xi) * lambda + b1(xi);
    };
    for (double xi : xi_grid) {
        if (xi * xi <= tau) continue;
        ++rep.points_checked;
        const double v = std::abs(f(xi));
        const double step = 1e-6 * (1 + std::abs(xi));
        const double g = std::abs((f(xi + step) - f(xi - step)) / (2 * step));
        if (v < rep.min_symbol) {
            rep.min_symbol = v;
            rep.argmin = xi;
        }
        rep.min_with_gradient = std::min(rep.min_with_gradient, v + g);
    }
    rep.pass = rep.points_checked > 0 && rep.min_symbol > tol;
    rep.pass_relaxed = rep.points_checked > 0 && rep.min_with_gradient > tol;
    return rep;
}

std::vector<ProfileRow> boundary_profile(const BoundaryModel& bm, double r0, double r1, int steps) {
    if (!(r1 > r0) || r0 < 0 || steps < 2) throw std::invalid_argument("boundary_profile: need 0 <= r0 < r1, steps >= 2");
    std::vector<ProfileRow> out;
    for (int i = 0; i < steps; ++i) {
        const double r = r0 + (r1 - r0) * i / (steps - 1);
        ProfileRow row{r, 0, NAN, 0};
        if (bm.kind == BoundaryKind::Robin) {
            row.upsilon = upsilon_robin(bm, r).value;
        } else {
            row.upsilon = upsilon_flat(bm, r);
            if (bm.dim >= 2 && r >= 5) row.upsilon_asym = upsilon_asymptotic(bm, r).calibrated;
        }
        row.envelope = std::pow(r + 1, -(bm.dim + 1) / 2.0);
        out.push_back(row);
    }
    return out;
}

std::string boundary_profile_csv(const std::vector<ProfileRow>& rows) {
    CsvWriter w({"r", "upsilon", "upsilon_asym", "envelope_bound"});
    for (const auto& r : rows) w.row({r.r, r.upsilon, r.upsilon_asym, r.envelope});
    return w.str();
}

}  // namespace semicl
