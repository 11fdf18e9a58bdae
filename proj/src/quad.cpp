#include "semicl/quad.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace semicl {
namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

template <class V>
struct Panel {
    double a, b;
    V value;
    double err, l1;
};

template <class F>
auto panel(const F& f, double a, double b) {
    double err = 0, l1 = 0;
    const auto v = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
    return Panel<decltype(v)>{a, b, v, err, l1};
}

// Bisection on the Kronrod/Gauss difference. A panel is accepted when its
// error meets the relative target against its own L1 norm, or the absolute
// floor prorated by length, or when splitting no longer helps once the error
// is down at the rounding level of an oscillatory integrand.
template <class F, class P, class R>
void adapt(const F& f, const P& p, double rel, double abs_per_len, unsigned depth, R& out) {
    auto accept = [&](const auto& q) {
        out.value += q.value;
        out.error += q.err;
    };
    if (depth == 0 || p.err <= rel * p.l1 || p.err <= abs_per_len * (p.b - p.a) || !std::isfinite(p.err)) {
        accept(p);
        return;
    }
    const double m = 0.5 * (p.a + p.b);
    const auto l = panel(f, p.a, m), r = panel(f, m, p.b);
    if (l.err + r.err > 0.5 * p.err && p.err <= 1e-9 * p.l1) {
        accept(l);
        accept(r);
        return;
    }
    adapt(f, l, rel, abs_per_len, depth - 1, out);
    adapt(f, r, rel, abs_per_len, depth - 1, out);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, unsigned max_depth,
                     double abs_tol) {
    QuadResult r;
    if (a == b) return r;
    const double s = b > a ? 1 : -1;
    const double lo = std::min(a, b), hi = std::max(a, b);
    adapt(f, panel(f, lo, hi), rel_tol, abs_tol / (hi - lo), max_depth, r);
    r.value *= s;
    return r;
}

CQuadResult integrate_complex(const std::function<cplx(double)>& f, double a, double b, double rel_tol,
                              unsigned max_depth, double abs_tol) {
    CQuadResult r;
    if (a == b) return r;
    const double s = b > a ? 1 : -1;
    const double lo = std::min(a, b), hi = std::max(a, b);
    adapt(f, panel(f, lo, hi), rel_tol, abs_tol / (hi - lo), max_depth, r);
    r.value *= s;
    return r;
}

CQuadResult integrate_segment(const std::function<cplx(cplx)>& f, cplx z0, cplx z1, double rel_tol,
                              unsigned max_depth, double abs_tol) {
    const cplx dz = z1 - z0;
    auto g = [&](double u) { return f(z0 + u * dz) * dz; };
    return integrate_complex(g, 0.0, 1.0, rel_tol, max_depth, abs_tol);
}

}  // namespace semicl
