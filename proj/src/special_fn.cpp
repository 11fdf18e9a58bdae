#include "semicl/special_fn.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace semicl {
namespace {

// Ai(0) = 3^{-2/3}/Gamma(2/3), -Ai'(0) = 3^{-1/3}/Gamma(1/3)
constexpr double kAi0 = 0.35502805388781723926;
constexpr double kAip0 = 0.25881940379280679840;
constexpr double kInvSqrtPi = 0.56418958354775628695;

std::atomic<bool> g_corrupt{false};

double ai0() { return g_corrupt.load(std::memory_order_relaxed) ? kAi0 * (1 + 1e-3) : kAi0; }

// Switch points: Maclaurin series on [-7, 1], Macdonald-function quadrature on
// (1, 30], asymptotic expansions beyond. The series cancels catastrophically
// for large positive z, where Ai is exponentially small.
constexpr double kAiryPos = 30.0;
constexpr double kAirySeriesPos = 1.0;
constexpr double kAiryNeg = 7.0;
constexpr double kBesselSwitch = 12.0;

struct AiryPair {
    double ai, aip;
};

AiryPair airy_series(double z) {
    const double z3 = z * z * z;
    // f = sum a_k z^{3k}, g = sum b_k z^{3k+1}
    double f = 1, g = z, fp = 0, gp = 1;
    double tf = 1, tg = z, tfp = z * z / 2, tgp = 1;
    fp = tfp;
    for (int k = 1; k < 200; ++k) {
        tf *= z3 / ((3.0 * k - 1) * (3.0 * k));
        tg *= z3 / ((3.0 * k) * (3.0 * k + 1));
        tgp *= z3 / ((3.0 * k - 2) * (3.0 * k));
        f += tf;
        g += tg;
        gp += tgp;
        if (k >= 2) {
            tfp *= z3 / ((3.0 * (k - 1)) * (3.0 * (k - 1) + 2));
            fp += tfp;
        }
        const double scale = std::abs(f) + std::abs(g) + std::abs(fp) + std::abs(gp);
        if (std::abs(tf) + std::abs(tg) + std::abs(tfp) + std::abs(tgp) < 1e-18 * scale && k > 3) break;
    }
    return {ai0() * f - kAip0 * g, ai0() * fp - kAip0 * gp};
}

// u_k, v_k coefficients of the Airy asymptotic series, truncated at the
// smallest term for the given zeta.
struct Series {
    double u[64];
    double v[64];
    int n;
};

const Series& airy_coeffs() {
    static const Series s = [] {
        Series c{};
        c.u[0] = 1;
        c.v[0] = 1;
        for (int k = 1; k < 64; ++k) {
            c.u[k] = c.u[k - 1] * (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
            c.v[k] = -c.u[k] * (6.0 * k + 1) / (6.0 * k - 1);
        }
        c.n = 64;
        return c;
    }();
    return s;
}

AiryPair airy_asym_pos(double z) {
    const Series& c = airy_coeffs();
    const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
    double su = 0, sv = 0, p = 1, last = 1e300;
    for (int k = 0; k < c.n; ++k) {
        const double tu = c.u[k] * p, tv = c.v[k] * p;
        const double mag = std::abs(tu) + std::abs(tv);
        if (mag > last) break;
        const double sgn = (k % 2) ? -1.0 : 1.0;
        su += sgn * tu;
        sv += sgn * tv;
        last = mag;
        p /= zeta;
    }
    const double e = std::exp(-zeta);
    const double q = std::sqrt(std::sqrt(z));
    return {0.5 * kInvSqrtPi / q * e * su, -0.5 * kInvSqrtPi * q * e * sv};
}

AiryPair airy_asym_neg(double x) {
    // argument is -x with x > 0
    const Series& c = airy_coeffs();
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    double ue = 0, uo = 0, ve = 0, vo = 0, p = 1, last = 1e300;
    for (int k = 0; k < c.n; ++k) {
        const double tu = c.u[k] * p, tv = c.v[k] * p;
        const double mag = std::abs(tu) + std::abs(tv);
        if (mag > last) break;
        last = mag;
        const int m = k / 2;
        const double sgn = (m % 2) ? -1.0 : 1.0;
        if (k % 2 == 0) {
            ue += sgn * tu;
            ve += sgn * tv;
        } else {
            uo += sgn * tu;
            vo += sgn * tv;
        }
        p /= zeta;
    }
    const double ph = zeta - std::numbers::pi / 4;
    const double cs = std::cos(ph), sn = std::sin(ph);
    const double q = std::sqrt(std::sqrt(x));
    const double ai = kInvSqrtPi / q * (cs * ue + sn * uo);
    const double aip = kInvSqrtPi * q * (sn * ve - cs * vo);
    return {ai, aip};
}

// K_nu(x) = int_0^inf e^{-x cosh t} cosh(nu t) dt by the trapezoid rule,
// scaled by e^{x}. The integrand is analytic in |Im t| < pi/2, so a step of
// 1/4 leaves a discretization error near e^{-pi^2/0.25}.
double macdonald_scaled(double nu, double x) {
    const double step = 0.25;
    double sum = 0.5;
    for (int j = 1; j < 400; ++j) {
        const double t = j * step;
        const double term = std::exp(-x * (std::cosh(t) - 1)) * std::cosh(nu * t);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum * step;
}

AiryPair airy_macdonald(double z) {
    const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
    const double e = std::exp(-zeta) / std::numbers::pi;
    return {e * std::sqrt(z / 3) * macdonald_scaled(1.0 / 3.0, zeta),
            -e * z / std::sqrt(3.0) * macdonald_scaled(2.0 / 3.0, zeta)};
}

AiryPair airy_pair(double z) {
    if (!std::isfinite(z)) throw std::domain_error("airy: non-finite argument");
    if (z > kAiryPos) return airy_asym_pos(z);
    if (z > kAirySeriesPos) return airy_macdonald(z);
    if (z < -kAiryNeg) return airy_asym_neg(-z);
    return airy_series(z);
}

double j1_series(double x) {
    const double y = x / 2, y2 = y * y;
    double term = y, sum = y;
    for (int k = 1; k < 200; ++k) {
        term *= -y2 / (double(k) * (k + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
}

double j1_asym(double x) {
    // Hankel expansion: a_k(1) = prod_{j<=k} (4 - (2j-1)^2) / (k! 8^k)
    double p = 0, q = 0, a = 1, last = 1e300;
    double xp = 1;
    for (int k = 0; k < 80; ++k) {
        if (k > 0) a *= (4.0 - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k);
        const double t = a / xp;
        if (std::abs(t) > last) break;
        last = std::abs(t);
        const int m = k / 2;
        const double sgn = (m % 2) ? -1.0 : 1.0;
        if (k % 2 == 0)
            p += sgn * t;
        else
            q += sgn * t;
        xp *= x;
    }
    const double chi = x - 0.75 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double airy_ai(double z) { return airy_pair(z).ai; }
double airy_ai_prime(double z) { return airy_pair(z).aip; }

double bessel_j1(double x) {
    if (!std::isfinite(x)) throw std::domain_error("bessel_j1: non-finite argument");
    const double ax = std::abs(x);
    const double v = ax <= kBesselSwitch ? j1_series(ax) : j1_asym(ax);
    return x < 0 ? -v : v;
}

double eval_special(SpecialKind kind, double z) {
    switch (kind) {
        case SpecialKind::Ai:
            return airy_ai(z);
        case SpecialKind::AiPrime:
            return airy_ai_prime(z);
        case SpecialKind::BesselJ1:
            return bessel_j1(z);
    }
    throw std::domain_error("eval_special: unknown kind");
}

double unit_ball_volume(int d) {
    if (d < 1) throw std::domain_error("unit_ball_volume: dimension must be >= 1");
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

namespace testing {
void set_special_table_corruption(bool on) { g_corrupt.store(on); }
bool special_table_corrupted() { return g_corrupt.load(); }
}  // namespace testing

}  // namespace semicl
