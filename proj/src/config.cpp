#include "semicl/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "semicl/expr.hpp"

namespace semicl {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line, const std::string& key) {
    double out = 0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    const auto [p, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || p != last || !std::isfinite(out))
        throw ConfigError(line, "key '" + key + "': expected a number, got '" + v + "'");
    return out;
}

int to_int(const std::string& v, int line, const std::string& key) {
    int out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError(line, "key '" + key + "': expected an integer, got '" + v + "'");
    return out;
}

std::vector<double> to_list(const std::string& v, int line, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), line, key));
    if (out.empty()) throw ConfigError(line, "key '" + key + "': empty list");
    return out;
}

bool to_bool(const std::string& v, int line, const std::string& key) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError(line, "key '" + key + "': expected true or false, got '" + v + "'");
}

EndKind to_end(const std::string& v, int line, const std::string& key) {
    if (v == "dirichlet") return EndKind::Dirichlet;
    if (v == "neumann") return EndKind::Neumann;
    if (v == "robin") return EndKind::Robin;
    throw ConfigError(line, "key '" + key + "': expected dirichlet, neumann or robin, got '" + v + "'");
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"model", {"dimension", "potential", "domain", "tau"}},
        {"sweep", {"h", "window_scale", "points", "tau_window"}},
        {"oracle", {"kind", "left", "right", "left_beta", "right_beta", "richardson", "points_per_h"}},
        {"predictor", {"variant"}},
        {"study", {"id", "anchor", "expected_slope", "slope_tol", "rule"}},
        {"output", {"csv", "summary"}},
    };
    return s;
}

}  // namespace

StudyConfig parse_study_config(const std::string& text) {
    StudyConfig c;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    std::set<std::string> seen;
    int potential_line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find_first_of("#;");
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(line, "malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            if (!schema().count(section)) throw ConfigError(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
        if (section.empty()) throw ConfigError(line, "key outside of any section");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (!schema().at(section).count(key)) throw ConfigError(line, "unknown key '" + key + "' in [" + section + "]");
        const std::string full = section + "." + key;
        if (!seen.insert(full).second) throw ConfigError(line, "duplicate key '" + key + "'");
        if (val.empty()) throw ConfigError(line, "key '" + key + "' has no value");

        if (full == "model.dimension") {
            c.dimension = to_int(val, line, key);
            if (c.dimension != 1) throw ConfigError(line, "studies support dimension 1 only");
        } else if (full == "model.potential") {
            c.potential = val;
            potential_line = line;
        } else if (full == "model.domain") {
            const auto d = to_list(val, line, key);
            if (d.size() != 2 || !(d[1] > d[0])) throw ConfigError(line, "domain must be 'lo, hi' with lo < hi");
            c.domain_lo = d[0];
            c.domain_hi = d[1];
        } else if (full == "model.tau") {
            c.tau = to_double(val, line, key);
        } else if (full == "sweep.h") {
            c.hs = to_list(val, line, key);
            for (double h : c.hs)
                if (!(h > 0 && h <= 1)) throw ConfigError(line, "h values must lie in (0, 1]");
        } else if (full == "sweep.window_scale") {
            c.window_scale = to_double(val, line, key);
            if (!(c.window_scale > 0)) throw ConfigError(line, "window_scale must be positive");
        } else if (full == "sweep.points") {
            c.points = to_int(val, line, key);
            if (c.points < 2) throw ConfigError(line, "points must be at least 2");
        } else if (full == "sweep.tau_window") {
            c.tau_window = to_double(val, line, key);
            if (c.tau_window < 0) throw ConfigError(line, "tau_window must be nonnegative");
        } else if (full == "oracle.kind") {
            if (val == "airy")
                c.oracle = OracleKind::AiryExact;
            else if (val == "eigensolver")
                c.oracle = OracleKind::Eigensolver;
            else
                throw ConfigError(line, "oracle kind must be airy or eigensolver");
        } else if (full == "oracle.left") {
            c.left.kind = to_end(val, line, key);
        } else if (full == "oracle.right") {
            c.right.kind = to_end(val, line, key);
        } else if (full == "oracle.left_beta") {
            c.left.beta = to_double(val, line, key);
        } else if (full == "oracle.right_beta") {
            c.right.beta = to_double(val, line, key);
        } else if (full == "oracle.richardson") {
            c.richardson = to_bool(val, line, key);
        } else if (full == "oracle.points_per_h") {
            c.points_per_h = to_double(val, line, key);
            if (c.points_per_h < 0) throw ConfigError(line, "points_per_h must be nonnegative");
        } else if (full == "predictor.variant") {
            if (val == "weyl-only")
                c.predictor = PredictorVariant::WeylOnly;
            else if (val == "weyl+correction")
                c.predictor = PredictorVariant::WeylCorrection;
            else
                throw ConfigError(line, "predictor variant must be weyl-only or weyl+correction");
        } else if (full == "study.id") {
            c.id = val;
        } else if (full == "study.anchor") {
            c.anchor = val;
        } else if (full == "study.expected_slope") {
            c.expected_slope = to_double(val, line, key);
        } else if (full == "study.slope_tol") {
            c.slope_tol = to_double(val, line, key);
            if (!(c.slope_tol > 0)) throw ConfigError(line, "slope_tol must be positive");
        } else if (full == "study.rule") {
            if (val == "one-sided")
                c.rule = SlopeRule::OneSided;
            else if (val == "two-sided")
                c.rule = SlopeRule::TwoSided;
            else
                throw ConfigError(line, "rule must be one-sided or two-sided");
        } else if (full == "output.csv") {
            c.csv_path = val;
        } else if (full == "output.summary") {
            c.summary_path = val;
        }
    }
    if (c.hs.size() < 4) throw ConfigError(0, "[sweep] h needs at least four values");
    double lo = c.hs[0], hi = c.hs[0];
    for (double h : c.hs) {
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    if (hi < 10 * lo * (1 - 1e-12)) throw ConfigError(0, "[sweep] h values must span at least one decade");
    try {
        (void)parse_expr(c.potential);
    } catch (const ParseError& e) {
        throw ConfigError(potential_line, std::string("potential: ") + e.what());
    }
    if (c.left.kind != EndKind::Robin && c.left.beta != 0) throw ConfigError(0, "left_beta requires left = robin");
    if (c.right.kind != EndKind::Robin && c.right.beta != 0) throw ConfigError(0, "right_beta requires right = robin");
    return c;
}

StudyConfig load_study_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError(0, "cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_study_config(ss.str());
}

}  // namespace semicl
