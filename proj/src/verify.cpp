#include "semicl/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "semicl/csv.hpp"

namespace semicl {

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::domain_error("fit_loglog_slope: at least three points required");
    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (const auto& [h, e] : points) {
        if (!(h > 0) || !(e > 0) || !std::isfinite(h) || !std::isfinite(e))
            throw std::domain_error("fit_loglog_slope: h and err must be positive and finite");
        sx += std::log(h);
        sy += std::log(e);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& [h, e] : points) {
        const double dx = std::log(h) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(e) - my);
    }
    if (sxx == 0) throw std::domain_error("fit_loglog_slope: h values must not all coincide");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0;
    for (const auto& [h, e] : points) {
        const double r = std::log(e) - f.intercept - f.slope * std::log(h);
        rss += r * r;
    }
    f.stderr_slope = std::sqrt(rss / (n - 2) / sxx);
    return f;
}

Verdict compare_to_bound(const ScalingReport& r, double expected, double tol, SlopeRule rule) {
    Verdict v;
    v.slope = r.fit.slope;
    v.expected = expected;
    v.tol = tol;
    v.rule = rule;
    const bool finite = std::isfinite(r.fit.slope);
    v.one_sided = finite && r.fit.slope >= expected - tol;
    v.two_sided = finite && std::abs(r.fit.slope - expected) <= tol;
    return v;
}

ScalingReport run_scaling_study(const ScalingStudy& s) {
    ScalingReport r;
    r.id = s.id;
    r.anchor = s.anchor;
    r.expected = s.expected;
    r.tol = s.tol;
    for (double h : s.hs) {
        try {
            const double e = s.error_at(h);
            r.hs.push_back(h);
            r.errors.push_back(e);
        } catch (const std::exception& ex) {
            r.complete = false;
            r.failure = "h = " + format_double(h) + ": " + ex.what();
            break;
        }
    }
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < r.hs.size(); ++i) {
        pts.emplace_back(r.hs[i], r.errors[i]);
        r.constant = std::max(r.constant, r.errors[i] / std::pow(r.hs[i], s.expected));
    }
    try {
        r.fit = fit_loglog_slope(pts);
    } catch (const std::domain_error& ex) {
        r.fit.slope = NAN;
        if (r.complete) {
            r.complete = false;
            r.failure = ex.what();
        }
    }
    r.verdict = compare_to_bound(r, s.expected, s.tol, s.rule);
    return r;
}

std::string scaling_report_csv(const ScalingReport& r) {
    CsvWriter w({"h", "error", "normalized"});
    for (std::size_t i = 0; i < r.hs.size(); ++i)
        w.row({r.hs[i], r.errors[i], r.errors[i] / std::pow(r.hs[i], r.expected)});
    return w.str();
}

std::string scaling_report_text(const ScalingReport& r) {
    std::ostringstream o;
    char buf[256];
    o << "study " << r.id << " (" << r.anchor << ")\n";
    for (std::size_t i = 0; i < r.hs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "  h = %-10.6g error = %.6e\n", r.hs[i], r.errors[i]);
        o << buf;
    }
    std::snprintf(buf, sizeof buf, "  slope %.4f +- %.4f, expected %.4f, tol %.3f, constant %.4g\n", r.fit.slope,
                  r.fit.stderr_slope, r.expected, r.tol, r.constant);
    o << buf;
    o << "  one-sided " << (r.verdict.one_sided ? "pass" : "fail") << ", two-sided "
      << (r.verdict.two_sided ? "pass" : "fail") << ", rule "
      << (r.verdict.rule == SlopeRule::OneSided ? "one-sided" : "two-sided") << "\n";
    if (!r.complete) o << "  incomplete: " << r.failure << "\n";
    o << "  verdict " << (r.pass() ? "PASS" : "FAIL") << "\n";
    return o.str();
}

}  // namespace semicl
