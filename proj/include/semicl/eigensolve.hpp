#pragma once
// Brute-force ground truth for 1-D operators h^2 D^2 + V on an interval:
// three-point discretization, eigenpairs below an energy cap, and the
// spectral-projector diagonal.

#include <functional>
#include <string>
#include <vector>

namespace semicl {

enum class EndKind { Dirichlet, Neumann, Robin };

/// Boundary condition at one end. Robin: h d_n u = beta u with the outward
/// normal n (beta = 0 is Neumann; beta > 0 admits a surface state).
struct EndCondition {
    EndKind kind = EndKind::Dirichlet;
    double beta = 0;
};

struct Discretization {
    double a = 0, b = 1;
    std::size_t n_points = 0;  ///< vertices including both ends
    double delta = 0;
    double h = 0;
    EndCondition left, right;
    std::size_t first = 0;  ///< vertex index of the first unknown
    std::vector<double> diag, off;  ///< symmetric tridiagonal (off.size() = diag.size() - 1)
    std::vector<double> weight;     ///< trapezoid weight per unknown (1/2 at Neumann/Robin ends)

    std::size_t unknowns() const { return diag.size(); }
    double x_of_vertex(std::size_t j) const { return a + delta * static_cast<double>(j); }
    /// Vertex index nearest to x.
    std::size_t vertex_of(double x) const;
};

/// Minimal points per de Broglie wavelength at the top energy.
inline constexpr double kPointsPerWavelength = 16;

/// Assembles the operator on [a, b] with n_points vertices. `energy_max` is
/// the largest energy of interest (used by the resolution rule). Throws
/// std::invalid_argument if n_points < 64 or the rule is violated.
Discretization discretize(const std::function<double(double)>& V, double a, double b, EndCondition left,
                          EndCondition right, std::size_t n_points, double h, double energy_max);

/// Smallest admissible n_points for the resolution rule.
std::size_t required_points(const std::function<double(double)>& V, double a, double b, double h, double energy_max,
                            double points_per_wavelength = kPointsPerWavelength);

struct SpectralData {
    std::vector<double> eigenvalues;
    std::vector<std::size_t> probe_vertices;
    /// density[n * probes + k] = psi_n(x_k)^2 with continuum normalization
    std::vector<double> density;
    double max_residual = 0;

    std::size_t count() const { return eigenvalues.size(); }
    double psi2(std::size_t n, std::size_t k) const { return density[n * probe_vertices.size() + k]; }
};

/// All eigenpairs with eigenvalue <= lambda_max, sampled at the probe vertices.
SpectralData solve_spectrum(const Discretization& disc, double lambda_max, const std::vector<std::size_t>& probes);

struct KernelSample {
    double value = 0;
    bool near_eigenvalue = false;  ///< tau within 1e-8 of an eigenvalue
};

/// sum_{lambda_n <= tau} psi_n(x_k)^2 for probe k.
KernelSample kernel_from_spectrum(const SpectralData& s, std::size_t k, double tau);

/// Convenience: solve and evaluate at the vertex nearest x.
KernelSample spectral_kernel_bruteforce(const Discretization& disc, double x, double tau);

/// Richardson combination (4 fine - coarse)/3 of eigenvalues and probe
/// densities, matched by index. The fine grid must halve the step of the
/// coarse one and probe the same physical points.
SpectralData richardson(const SpectralData& coarse, const SpectralData& fine);

/// Coarse/fine pair on [a, b] with probes at the given coordinates (snapped to
/// the coarse grid), combined by `richardson`.
struct OracleSetup {
    std::function<double(double)> V;
    double a = 0, b = 1;
    EndCondition left, right;
    double h = 0.01;
    std::size_t coarse_points = 0;
};
SpectralData extrapolated_spectrum(const OracleSetup& s, double lambda_max, const std::vector<double>& probe_x,
                                   std::vector<double>* snapped_x = nullptr);

enum class ConvergenceQuantity { KernelDiagonal, TopEigenvalue };

struct ConvergenceReport {
    std::vector<std::size_t> ns;
    std::vector<double> values;
    std::vector<double> errors;  ///< |value - extrapolated limit|
    std::vector<double> orders;  ///< observed orders between successive triples
    double fitted_order = 0;
    bool monotone = true;
};

/// Observed order of convergence in the grid step for N values whose steps
/// halve successively (n_{k+1} - 1 = 2 (n_k - 1)).
ConvergenceReport convergence_check(const std::function<double(double)>& V, double a, double b, EndCondition left,
                                    EndCondition right, double h, double tau, double x,
                                    const std::vector<std::size_t>& ns,
                                    ConvergenceQuantity q = ConvergenceQuantity::KernelDiagonal);

}  // namespace semicl
