#pragma once
// Turning-point window measurements shared by the `study` command and the
// acceptance checks: oracle vs prediction over an h-dependent x-set.

#include <string>
#include <vector>

#include "semicl/config.hpp"
#include "semicl/pointwise.hpp"
#include "semicl/verify.hpp"

namespace semicl {

struct WindowSample {
    double x = 0;
    double tau = 0;
    double oracle = 0;
    double prediction = 0;
};

struct WindowMeasurement {
    double h = 0;
    std::vector<WindowSample> samples;
    double sup_error = 0;
    double level_spacing = 0;      ///< eigensolver oracle only
    std::size_t eigenpairs = 0;    ///< eigensolver oracle only
    std::size_t coarse_points = 0; ///< eigensolver oracle only
};

PotentialModel study_model(const StudyConfig& c);

/// Points with |W(x)| <= scale h^{2/3} around the turning point nearest the
/// domain centre, `points` candidates spread over a slightly wider interval.
std::vector<double> window_points(const PotentialModel& m, double tau, double h, double scale, int points);

/// Oracle and prediction at the window points for one h. With an
/// eigensolver oracle the points are snapped to the coarse grid; with
/// tau_window > 0 the sup also runs over 17 energies spread across that many
/// level spacings around tau.
WindowMeasurement measure_window(const StudyConfig& c, double h, PredictorVariant variant);
WindowMeasurement measure_window(const StudyConfig& c, double h);
/// Same comparison at caller-chosen points.
WindowMeasurement measure_points(const StudyConfig& c, double h, PredictorVariant variant,
                                 const std::vector<double>& xs);

/// h sweep of measure_window(...).sup_error with the configured verdict.
ScalingReport run_study(const StudyConfig& c);

}  // namespace semicl
