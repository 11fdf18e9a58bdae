#pragma once
// Study configuration: an INI-style text file with sections [model],
// [sweep], [oracle], [predictor], [study], [output]. Unknown sections or keys
// are rejected with the offending line number.

#include <stdexcept>
#include <string>
#include <vector>

#include "semicl/eigensolve.hpp"
#include "semicl/verify.hpp"

namespace semicl {

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& msg)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

enum class OracleKind { AiryExact, Eigensolver };
enum class PredictorVariant { WeylOnly, WeylCorrection };

struct StudyConfig {
    // [model]
    int dimension = 1;
    std::string potential = "-x";
    double domain_lo = -1.5, domain_hi = 2;
    double tau = 0;
    // [sweep]
    std::vector<double> hs;
    double window_scale = 1;  ///< x-set is |W| <= window_scale * h^{2/3}
    int points = 41;
    double tau_window = 0;  ///< sup also over tau within this many level spacings
    // [oracle]
    OracleKind oracle = OracleKind::AiryExact;
    EndCondition left{}, right{};
    bool richardson = true;
    double points_per_h = 0;  ///< coarse grid density; 0 uses the resolution rule
    // [predictor]
    PredictorVariant predictor = PredictorVariant::WeylCorrection;
    // [study]
    std::string id = "study";
    std::string anchor = "";
    double expected_slope = 0;
    double slope_tol = 0.15;
    SlopeRule rule = SlopeRule::OneSided;
    // [output]
    std::string csv_path;
    std::string summary_path;
};

/// Parses config text. Throws ConfigError carrying the line number.
StudyConfig parse_study_config(const std::string& text);
StudyConfig load_study_config(const std::string& path);

}  // namespace semicl
