#pragma once
// Adaptive Gauss-Kronrod wrappers shared by the numerical modules.

#include <complex>
#include <functional>

namespace semicl {

using cplx = std::complex<double>;

struct QuadResult {
    double value = 0;
    double error = 0;
};

struct CQuadResult {
    cplx value{};
    double error = 0;
};

/// Adaptive G7-K15 style integration (Boost 31-point rule) of a real function
/// on [a, b]. A panel is accepted when its error is below `rel_tol` times its
/// L1 norm or below `abs_tol` prorated by panel length.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                     unsigned max_depth = 24, double abs_tol = 0);

/// Complex integrand along the straight segment z0 -> z1 in the complex plane.
CQuadResult integrate_segment(const std::function<cplx(cplx)>& f, cplx z0, cplx z1, double rel_tol = 1e-12,
                              unsigned max_depth = 24, double abs_tol = 0);

/// Complex integrand over a real interval.
CQuadResult integrate_complex(const std::function<cplx(double)>& f, double a, double b, double rel_tol = 1e-12,
                              unsigned max_depth = 24, double abs_tol = 0);

}  // namespace semicl
