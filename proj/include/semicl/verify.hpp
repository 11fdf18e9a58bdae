#pragma once
// Log-log slope fits and the h-sweep harness that turns per-h error
// measurements into exponent verdicts.

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace semicl {

struct SlopeFit {
    double slope = 0;
    double stderr_slope = 0;
    double intercept = 0;  ///< log of the fitted constant
};

/// Ordinary least squares of log(err) against log(h). Throws
/// std::domain_error for non-positive entries or fewer than three points.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

enum class SlopeRule { OneSided, TwoSided };

struct Verdict {
    double slope = 0;
    double expected = 0;
    double tol = 0;
    bool one_sided = false;  ///< slope >= expected - tol
    bool two_sided = false;  ///< |slope - expected| <= tol
    SlopeRule rule = SlopeRule::OneSided;
    bool pass() const { return rule == SlopeRule::OneSided ? one_sided : two_sided; }
};

struct ScalingReport {
    std::string id;
    std::string anchor;
    std::vector<double> hs;
    std::vector<double> errors;
    SlopeFit fit;
    double expected = 0;
    double tol = 0.15;
    double constant = 0;  ///< max err / h^expected over the sweep
    Verdict verdict;
    bool complete = true;
    std::string failure;  ///< set when an evaluation aborted the sweep

    bool pass() const { return complete && verdict.pass(); }
};

Verdict compare_to_bound(const ScalingReport& r, double expected, double tol, SlopeRule rule = SlopeRule::OneSided);

/// One sweep: `error_at(h)` is evaluated for each h in order. An exception
/// stops the sweep and yields a partial report with `complete = false`.
struct ScalingStudy {
    std::string id;
    std::string anchor;
    std::vector<double> hs;
    double expected = 0;
    double tol = 0.15;
    SlopeRule rule = SlopeRule::OneSided;
    std::function<double(double)> error_at;
};

ScalingReport run_scaling_study(const ScalingStudy& s);

/// CSV with columns h, error, normalized (error / h^expected).
std::string scaling_report_csv(const ScalingReport& r);
/// Human-readable summary (no timestamps).
std::string scaling_report_text(const ScalingReport& r);

}  // namespace semicl
