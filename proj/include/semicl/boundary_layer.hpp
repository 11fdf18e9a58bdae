#pragma once
// Boundary-layer profiles for the flat half-space Laplacian with Dirichlet,
// Neumann or Robin conditions.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "semicl/pointwise.hpp"

namespace semicl {

enum class BoundaryKind { Dirichlet, Neumann, Robin };

struct BoundaryModel {
    int dim = 1;
    BoundaryKind kind = BoundaryKind::Dirichlet;
    double beta = 0;     ///< Robin parameter; reflection factor (z + i beta)/(z - i beta)
    double tau = 1;
    double rho_cut = 1;  ///< radial cutoff of the tangential frequency disc (d = 2 Robin)

    /// -1 for Dirichlet, +1 for Neumann. Throws for Robin.
    double reflection_sign() const;
    void validate() const;
};

BoundaryModel dirichlet(int d);
BoundaryModel neumann(int d);
BoundaryModel robin(int d, double beta);

/// Flat-boundary profile Upsilon(r) at tau = 1 (Dirichlet/Neumann).
double upsilon_flat(const BoundaryModel& bm, double r);

struct UpsilonAsymptotic {
    double leading = 0;     ///< stationary-phase leading term
    double calibrated = 0;  ///< A r^{-(d+1)/2} cos(2 r + phi) fitted to upsilon_flat
};

struct UpsilonCalibration {
    int dim = 2;
    double amplitude = 0;
    double phase = 0;
};
const UpsilonCalibration& upsilon_calibration(int d);

/// Leading large-r term (d >= 2, r >= 5); d = 1 throws std::domain_error.
UpsilonAsymptotic upsilon_asymptotic(const BoundaryModel& bm, double r);

struct RobinValue {
    double value = 0;
    double imag = 0;
    double error = 0;
    bool degraded = false;
};

/// Robin profile (d = 1 or 2) by quadrature over the frequency segment/disc.
RobinValue upsilon_robin(const BoundaryModel& bm, double r, double tol = 1e-10);

/// Method-of-images diagonal e^0 + e^1 for Dirichlet/Neumann.
double halfspace_kernel_exact(const BoundaryModel& bm, double h, double x1, double tau);

double weyl_validity_threshold(int d, double h);

/// Weyl term plus boundary-layer term; bound is the envelope
/// h^{-d}(x1/h + 1)^{-(d+1)/2} + h^{1-d} with unit constants.
PredictedKernel predict_near_boundary(const BoundaryModel& bm, double h, double x1, double tau);

struct EllipticityReport {
    double min_symbol = 0;         ///< min |b0 lambda + b1| over the grid
    double min_with_gradient = 0;  ///< min of |f| + |d f / d xi'|
    double argmin = 0;
    bool pass = false;
    bool pass_relaxed = false;
    std::size_t points_checked = 0;
};

using BoundarySymbol = std::function<std::complex<double>(double)>;

/// Evaluates |b0 lambda + b1| with lambda = i (|xi'|^2 - tau)^{1/2} on grid
/// points outside the characteristic ball.
EllipticityReport ellipticity_check(const BoundarySymbol& b0, const BoundarySymbol& b1,
                                    const std::vector<double>& xi_grid, double tau = 1, double tol = 1e-8);

struct ProfileRow {
    double r, upsilon, upsilon_asym, envelope;
};
std::vector<ProfileRow> boundary_profile(const BoundaryModel& bm, double r0, double r1, int steps);
std::string boundary_profile_csv(const std::vector<ProfileRow>& rows);

}  // namespace semicl
