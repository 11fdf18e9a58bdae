#pragma once
// Singular oscillatory integrals over the real line,
//   I = int |b|^{-p} e^{i c (pi/4) sign b} e^{2 i b t} C(b) db,
// with C(b) = e^{i k b^3} or C(b) = e^{i k b^3} - 1.

#include <complex>
#include <stdexcept>
#include <vector>

#include "semicl/quad.hpp"

namespace semicl {

class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Sense { AbsolutelyConvergent, Distributional };

struct OscillatoryIntegrand {
    double p = 0.5;             ///< amplitude |b|^{-p}; one of 1/2, 1, 3/2, 2
    double t = 0;               ///< coefficient of 2b in the phase
    double cubic = -2.0 / 3.0;  ///< coefficient k of b^3 in the phase; 0 disables the cubic factor
    double c = 0;               ///< sign-dependent phase offset e^{i c (pi/4) sign b}
    bool subtract_one = false;  ///< use (e^{i k b^3} - 1) in place of e^{i k b^3}
    Sense sense = Sense::AbsolutelyConvergent;
};

struct OscResult {
    cplx value{};
    double error = 0;
    bool degraded = false;
};

/// Integral over the whole real line. Distributional integrands use the
/// Hadamard finite part at b = 0. Throws ContractError for divergent setups and
/// std::invalid_argument for tol outside [1e-12, 1e-4].
OscResult integrate_beta(const OscillatoryIntegrand& spec, double tol);

/// Same integral restricted to b > 0.
OscResult integrate_beta_halfline(const OscillatoryIntegrand& spec, double tol);

struct CriticalPoint {
    double location = 0;
    double phase = 0;        ///< phi(x0)
    double phase2 = 0;       ///< phi''(x0), must be nonzero
    double amplitude = 1;    ///< a(x0)
    double amplitude1 = 0;   ///< a'(x0), used at order >= 1
    double amplitude2 = 0;   ///< a''(x0)
    double phase3 = 0;       ///< phi'''(x0)
    double phase4 = 0;       ///< phi''''(x0)
};

struct ExpansionTerm {
    std::size_t point = 0;
    int order = 0;
    double lambda_power = 0;  ///< the term scales as lambda^{lambda_power}
    cplx value{};
};

class DegeneracyError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Stationary-phase terms for int a(x) e^{i lambda phi(x)} dx. Orders 0 and 1
/// are supported.
std::vector<ExpansionTerm> stationary_phase_expand(const std::vector<CriticalPoint>& points, double lambda,
                                                   int order);

cplx sum_terms(const std::vector<ExpansionTerm>& terms);

}  // namespace semicl
