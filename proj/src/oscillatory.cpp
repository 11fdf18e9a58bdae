#include "semicl/oscillatory.hpp"

#include <cmath>
#include <numbers>

namespace semicl {
namespace {

constexpr double kPi = std::numbers::pi;
const cplx I{0, 1};

struct Acc {
    cplx value{};
    double error = 0;
    void add(const CQuadResult& r, double sign = 1) {
        value += sign * r.value;
        error += r.error;
    }
};

// e^{ix} - 1 for real x without cancellation.
cplx expm1_i(double x) { return 2.0 * I * std::sin(x / 2) * std::exp(I * (x / 2)); }

// e^{ix} - 1 - ix
cplx expm1_i_lin(double x) {
    if (std::abs(x) < 0.1) {
        cplx term = -x * x / 2.0, sum = term;  // (ix)^2/2
        for (int k = 3; k < 30; ++k) {
            term *= I * x / double(k);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return expm1_i(x) - I * x;
}

struct Half {
    double p, theta, t, k;
    bool subtract, distributional;
    double rel;
    double abs;  // absolute floor per quadrature call
};

cplx amp(const Half& h, cplx b) { return std::pow(b, -h.p) * std::exp(I * h.theta); }
cplx phase(const Half& h, cplx b) { return 2.0 * b * h.t + h.k * b * b * b; }

// Unit cell [0, 1].
void cell(const Half& h, Acc& acc) {
    if (h.subtract) {
        // b = u^2; the factor vanishes like b^3 at 0
        auto f = [&](double u) -> cplx {
            if (u == 0) return 0;
            const double b = u * u;
            return std::pow(b, -h.p) * std::exp(I * (h.theta + 2 * b * h.t)) * expm1_i(h.k * b * b * b) * (2 * u);
        };
        acc.add(integrate_complex(f, 0, 1, h.rel, 24, h.abs));
        return;
    }
    if (h.p < 1) {
        // b = u^{1/(1-p)} removes the endpoint singularity
        const double q = 1 / (1 - h.p);
        auto f = [&](double u) -> cplx {
            const double b = std::pow(u, q);
            return q * std::exp(I * (h.theta + 2 * b * h.t + h.k * b * b * b));
        };
        acc.add(integrate_complex(f, 0, 1, h.rel, 24, h.abs));
        return;
    }
    // Hadamard finite part: subtract Taylor terms b^j with j <= p - 1.
    const int m = static_cast<int>(std::ceil(h.p)) - 1;
    auto f = [&](double u) -> cplx {
        if (u == 0) return 0;
        const double b = u * u;
        const double ph = 2 * b * h.t + h.k * b * b * b;
        cplx rem = m >= 1 ? expm1_i_lin(ph) + I * h.k * b * b * b : expm1_i(ph);
        return std::pow(b, -h.p) * std::exp(I * h.theta) * rem * (2 * u);
    };
    acc.add(integrate_complex(f, 0, 1, h.rel, 24, h.abs));
    // finite parts of int_0^1 b^{j-p} c_j, c_0 = 1, c_1 = 2it
    for (int j = 0; j <= m; ++j) {
        const cplx cj = j == 0 ? cplx(1) : 2.0 * I * h.t;
        const double e = j - h.p + 1;
        if (e != 0) acc.value += std::exp(I * h.theta) * cj / e;
    }
}

// int_1^inf b^{-p} e^{i theta} e^{2ibt} db, rotated onto a decaying direction.
void linear_tail(const Half& h, Acc& acc, double sign) {
    if (h.t == 0) {
        if (h.p <= 1) throw ContractError("integrate_beta: divergent linear tail at t = 0");
        acc.value += sign * std::exp(I * h.theta) / (h.p - 1);
        return;
    }
    const double dir = h.t > 0 ? 1.0 : -1.0;
    const double at = std::abs(h.t);
    auto g = [&](double y) -> cplx {
        const cplx b = cplx(1, dir * y);
        return amp(h, b) * std::exp(I * 2.0 * b * h.t) * cplx(0, dir);
    };
    const double y1 = std::min(1.0, 40 / at);
    acc.add(integrate_complex(g, 0, y1, h.rel, 24, h.abs), sign);
    const double ymax = 40 / at;
    if (ymax > y1) {
        auto gl = [&](double v) -> cplx {
            const double y = std::exp(v);
            return g(y) * y;
        };
        acc.add(integrate_complex(gl, std::log(y1), std::log(ymax), h.rel, 24, h.abs), sign);
    }
}

// length along a ray z0 + r w after which Im(phase) exceeds a decay threshold
double ray_length(const Half& h, cplx z0, cplx w) {
    double r = 0.5;
    for (int i = 0; i < 60; ++i) {
        const cplx z = z0 + r * w;
        if (phase(h, z).imag() - h.p * std::log(std::abs(z)) > 45) return r;
        r *= 1.5;
    }
    return r;
}

// int_1^inf b^{-p} e^{i theta} e^{i(2bt + k b^3)} db for k < 0.
void cubic_tail(const Half& h, Acc& acc) {
    auto f = [&](cplx b) { return amp(h, b) * std::exp(I * phase(h, b)); };
    const double ak = std::abs(h.k);
    const double s0 = h.t > 0 ? std::sqrt(2 * h.t / (3 * ak)) : 0.0;
    if (s0 > 1.25) {
        const double y1 = std::min(0.7, (s0 - 1) / 2);
        const cplx a(1, 0), b(1, y1), c(s0 - y1, y1), d(s0, 0);
        acc.add(integrate_segment(f, a, b, h.rel, 24, h.abs));
        acc.add(integrate_segment(f, b, c, h.rel, 24, h.abs));
        acc.add(integrate_segment(f, c, d, h.rel, 24, h.abs));
        const cplx w = std::exp(-I * (kPi / 4));
        acc.add(integrate_segment(f, d, d + ray_length(h, d, w) * w, h.rel, 24, h.abs));
    } else {
        const cplx w = std::exp(-I * (kPi / 6));
        const cplx a(1, 0);
        acc.add(integrate_segment(f, a, a + ray_length(h, a, w) * w, h.rel, 24, h.abs));
    }
}

Acc halfline(Half h) {
    if (h.k > 0) {
        // mirror onto k < 0 by conjugation
        Half m = h;
        m.theta = -h.theta;
        m.t = -h.t;
        m.k = -h.k;
        Acc r = halfline(m);
        r.value = std::conj(r.value);
        return r;
    }
    Acc acc;
    cell(h, acc);
    if (h.k == 0) {
        linear_tail(h, acc, 1.0);
    } else {
        cubic_tail(h, acc);
        if (h.subtract) linear_tail(h, acc, -1.0);
    }
    return acc;
}

void validate(const OscillatoryIntegrand& s, double tol) {
    if (!(tol >= 1e-12 && tol <= 1e-4)) throw std::invalid_argument("integrate_beta: tol must lie in [1e-12, 1e-4]");
    if (s.p != 0.5 && s.p != 1.0 && s.p != 1.5 && s.p != 2.0)
        throw ContractError("integrate_beta: singularity exponent must be one of 1/2, 1, 3/2, 2");
    if (!std::isfinite(s.t) || !std::isfinite(s.c) || !std::isfinite(s.cubic))
        throw ContractError("integrate_beta: non-finite parameters");
    if (s.subtract_one && s.cubic == 0) throw ContractError("integrate_beta: subtraction requires a cubic phase");
    if (s.p >= 1 && !s.subtract_one && s.sense == Sense::AbsolutelyConvergent)
        throw ContractError("integrate_beta: p >= 1 without subtraction is not absolutely convergent");
    if (s.cubic == 0 && s.t == 0) throw ContractError("integrate_beta: no oscillation, integral diverges");
    if (s.subtract_one && s.t == 0 && s.p <= 1)
        throw ContractError("integrate_beta: subtracted integrand diverges at infinity for t = 0, p <= 1");
}

Half make_half(const OscillatoryIntegrand& s, double tol, bool negative) {
    Half h{};
    h.p = s.p;
    h.theta = (negative ? -1 : 1) * s.c * kPi / 4;
    h.t = (negative ? -1 : 1) * s.t;
    h.k = (negative ? -1 : 1) * s.cubic;
    h.subtract = s.subtract_one;
    h.distributional = s.sense == Sense::Distributional;
    h.rel = std::max(1e-14, tol * 1e-2);
    h.abs = tol * 1e-3;
    return h;
}

}  // namespace

OscResult integrate_beta_halfline(const OscillatoryIntegrand& spec, double tol) {
    validate(spec, tol);
    Acc a = halfline(make_half(spec, tol, false));
    return {a.value, a.error, a.error > tol || !std::isfinite(a.value.real()) || !std::isfinite(a.value.imag())};
}

OscResult integrate_beta(const OscillatoryIntegrand& spec, double tol) {
    validate(spec, tol);
    Acc pos = halfline(make_half(spec, tol, false));
    Acc neg = halfline(make_half(spec, tol, true));
    OscResult r;
    r.value = pos.value + neg.value;
    r.error = pos.error + neg.error;
    r.degraded = r.error > tol || !std::isfinite(r.value.real()) || !std::isfinite(r.value.imag());
    return r;
}

std::vector<ExpansionTerm> stationary_phase_expand(const std::vector<CriticalPoint>& points, double lambda,
                                                   int order) {
    if (order < 0 || order > 1) throw std::invalid_argument("stationary_phase_expand: order must be 0 or 1");
    if (!(lambda > 0)) throw std::invalid_argument("stationary_phase_expand: large parameter must be positive");
    std::vector<ExpansionTerm> out;
    for (std::size_t j = 0; j < points.size(); ++j) {
        const CriticalPoint& c = points[j];
        if (c.phase2 == 0) throw DegeneracyError("stationary_phase_expand: degenerate critical point");
        const double f2 = c.phase2;
        const double sg = f2 > 0 ? 1.0 : -1.0;
        const cplx lead = std::sqrt(2 * kPi / (lambda * std::abs(f2))) * std::exp(I * (lambda * c.phase + sg * kPi / 4));
        out.push_back({j, 0, -0.5, lead * c.amplitude});
        if (order >= 1) {
            const cplx corr = I / lambda *
                              (c.amplitude2 / (2 * f2) - c.amplitude1 * c.phase3 / (2 * f2 * f2) -
                               c.amplitude * c.phase4 / (8 * f2 * f2) +
                               5 * c.amplitude * c.phase3 * c.phase3 / (24 * f2 * f2 * f2));
            out.push_back({j, 1, -1.5, lead * corr});
        }
    }
    return out;
}

cplx sum_terms(const std::vector<ExpansionTerm>& terms) {
    cplx s{};
    for (const auto& t : terms) s += t.value;
    return s;
}

}  // namespace semicl
