#pragma once
// Pointwise predictions for e(x, x, tau) of h^2 Delta_g + V: Weyl term,
// turning-point correction, scaling functions and regime-dependent bounds.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "semicl/expr.hpp"

namespace semicl {

struct Box {
    Point lo{0, 0};
    Point hi{1, 1};
};

/// Inverse metric entries g^{11}, g^{12}, g^{22}.
using MetricInverse = std::array<double, 3>;

class PotentialModel {
public:
    using ScalarFn = std::function<double(const Point&)>;
    using GradFn = std::function<Point(const Point&)>;

    PotentialModel(int dim, ScalarFn V, Box domain, std::string description = {});

    /// V and optional metric entries given as expressions in x, x1, x2.
    static PotentialModel from_expression(int dim, const std::string& potential, Box domain,
                                          const std::array<std::string, 3>& metric = {"1", "0", "1"});
    /// V(x) = slope * x1 + offset.
    static PotentialModel linear(int dim, double slope, double offset, Box domain);

    PotentialModel& with_gradient(GradFn g);
    PotentialModel& with_metric(std::array<ScalarFn, 3> ginv);

    int dim() const { return dim_; }
    const Box& domain() const { return domain_; }
    const std::string& description() const { return description_; }

    double potential(const Point& x) const { return V_(x); }
    Point gradient(const Point& x) const;
    MetricInverse metric_inverse(const Point& x) const;
    /// sqrt(det g_{jk}) = det(g^{jk})^{-1/2}
    double sqrt_g(const Point& x) const;

    struct Ellipticity {
        double min_eigenvalue = 0;
        double max_eigenvalue = 0;
    };
    /// Samples the metric on a grid over the domain; throws std::domain_error
    /// if it is not positive definite (eigenvalues >= 1e-8).
    Ellipticity check_metric() const;

private:
    int dim_;
    ScalarFn V_;
    GradFn grad_;
    std::array<ScalarFn, 3> ginv_;
    Box domain_;
    std::string description_;
};

/// Fixed small constant in gamma = eps |V| + h^{2/3}/2.
inline constexpr double kScaleEpsilon = 0.5;

struct ScalePoint {
    double gamma = 0;
    double rho = 0;
    double gamma_bar = 0;
    double rho_bar = 0;
};

double weyl_term(const PotentialModel& m, const Point& x, double tau, double h);
double grad_norm_g(const PotentialModel& m, const Point& x);
ScalePoint scale_functions(const PotentialModel& m, const Point& x, double h);

/// Signed travel-time coordinate along x1 to the nearest turning point of
/// V = tau; positive on the classically allowed side.
double travel_time(const PotentialModel& m, const Point& x, double tau = 0);

enum class Regime { Branch1, Branch2, Branch3, Dim2 };
std::string regime_label(Regime r);

struct RegimeResult {
    Regime regime = Regime::Branch1;
    double bound = 0;  ///< bound with unit constant
    bool skip_correction = false;  ///< d = 2 only
};

/// Case split for given |V|, |grad V| and h (first match in listed order).
RegimeResult classify_regime_values(int d, double abs_v, double grad_v, double h);
/// Raw branch predicates for d = 1, without first-match resolution.
std::array<bool, 3> regime_predicates(double abs_v, double grad_v, double h);
RegimeResult classify_regime(const PotentialModel& m, const Point& x, double h, double tau = 0);

enum class QSource { Numeric, CalibratedAsymptotic, Zero };

struct PredictOptions {
    QSource q_source = QSource::Numeric;
    double bound_constant = 1;
    double tol = 1e-10;
};

struct PredictedKernel {
    double x1 = 0, x2 = 0, h = 0, tau = 0;
    double weyl = 0;
    double correction = 0;
    double total = 0;
    double bound = 0;
    double travel_time = 0;
    std::string regime;
};

PredictedKernel predict_pointwise(const PotentialModel& m, const Point& x, double tau, double h,
                                  const PredictOptions& opt = {});

struct CorrectionMagnitude {
    double magnitude = 0;
    bool below_remainder = false;
};
CorrectionMagnitude correction_magnitude(int d, double gamma, double h);

/// C' h^{-d} (1 + |V_* - tau| / h)^{-l} with V_* the infimum of V on the
/// model domain. Throws std::domain_error if tau > V_*.
double forbidden_tail_bound(const PotentialModel& m, const Point& x, double tau, double h, int l,
                            double c_prime = 1);

struct PredictionRow {
    PredictedKernel k;
    std::optional<double> oracle;
};
std::string prediction_csv(const std::vector<PredictionRow>& rows);

}  // namespace semicl
