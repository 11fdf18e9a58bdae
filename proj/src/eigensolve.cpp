#include "semicl/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace semicl {
namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kLanes = 8;
}  // namespace

std::size_t Discretization::vertex_of(double x) const {
    const double j = std::round((x - a) / delta);
    return static_cast<std::size_t>(std::clamp(j, 0.0, static_cast<double>(n_points - 1)));
}

std::size_t required_points(const std::function<double(double)>& V, double a, double b, double h, double energy_max,
                            double ppw) {
    double vmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 2000; ++i) vmin = std::min(vmin, V(a + (b - a) * i / 2000.0));
    const double kinetic = std::max(energy_max - vmin, 1e-12);
    const double wavelength = 2 * kPi * h / std::sqrt(kinetic);
    const double delta = wavelength / ppw;
    return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil((b - a) / delta)) + 1);
}

Discretization discretize(const std::function<double(double)>& V, double a, double b, EndCondition left,
                          EndCondition right, std::size_t n_points, double h, double energy_max) {
    if (!(b > a)) throw std::invalid_argument("discretize: empty interval");
    if (n_points < 64) throw std::invalid_argument("discretize: at least 64 points required");
    const std::size_t need = required_points(V, a, b, h, energy_max);
    if (n_points < need)
        throw std::invalid_argument("discretize: resolution rule needs at least " + std::to_string(need) + " points");
    Discretization d;
    d.a = a;
    d.b = b;
    d.n_points = n_points;
    d.delta = (b - a) / static_cast<double>(n_points - 1);
    d.h = h;
    d.left = left;
    d.right = right;
    d.first = left.kind == EndKind::Dirichlet ? 1 : 0;
    const std::size_t last = right.kind == EndKind::Dirichlet ? n_points - 2 : n_points - 1;
    const std::size_t m = last - d.first + 1;
    const double k = h * h / (d.delta * d.delta);
    d.diag.resize(m);
    d.off.assign(m - 1, -k);
    d.weight.assign(m, 1.0);
    for (std::size_t i = 0; i < m; ++i) d.diag[i] = 2 * k + V(d.x_of_vertex(d.first + i));
    auto fold = [&](const EndCondition& c, std::size_t row, std::size_t offrow) {
        const double beta = c.kind == EndKind::Robin ? c.beta : 0.0;
        d.diag[row] -= 2 * h * beta / d.delta;
        d.off[offrow] = -std::sqrt(2.0) * k;
        d.weight[row] = 0.5;
    };
    if (left.kind != EndKind::Dirichlet) fold(left, 0, 0);
    if (right.kind != EndKind::Dirichlet) fold(right, m - 1, m - 2);
    return d;
}

namespace {

struct Tri {
    const std::vector<double>& d;
    std::vector<double> e2;
    double pivmin;
    double gl, gu;
    explicit Tri(const Discretization& disc) : d(disc.diag) {
        const std::size_t n = d.size();
        e2.resize(n ? n - 1 : 0);
        double emax = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            e2[i] = disc.off[i] * disc.off[i];
            emax = std::max(emax, std::abs(disc.off[i]));
        }
        gl = 1e300;
        gu = -1e300;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = (i > 0 ? std::abs(disc.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(disc.off[i]) : 0.0);
            gl = std::min(gl, d[i] - r);
            gu = std::max(gu, d[i] + r);
        }
        pivmin = std::numeric_limits<double>::min() * std::max(1.0, emax * emax);
    }

    // number of eigenvalues strictly below each shift
    void counts(const double* sig, int* out) const {
        const std::size_t n = d.size();
        double q[kLanes];
        int c[kLanes];
        for (int k = 0; k < kLanes; ++k) {
            q[k] = d[0] - sig[k];
            c[k] = q[k] < 0;
        }
        const double pm = pivmin;
        for (std::size_t i = 1; i < n; ++i) {
            const double di = d[i], ei = e2[i - 1];
            for (int k = 0; k < kLanes; ++k) {
                const double qq = std::abs(q[k]) < pm ? -pm : q[k];
                q[k] = di - sig[k] - ei / qq;
                c[k] += q[k] < 0;
            }
        }
        for (int k = 0; k < kLanes; ++k) out[k] = c[k];
    }

    int count(double s) const {
        double sig[kLanes];
        int out[kLanes];
        std::fill(sig, sig + kLanes, s);
        counts(sig, out);
        return out[0];
    }
};

struct Interval {
    double lo, hi;
    int clo, chi;
};

std::vector<double> bisect_all(const Tri& t, double lambda_max) {
    const int total = t.count(lambda_max);
    std::vector<double> out(static_cast<std::size_t>(total), 0.0);
    if (total == 0) return out;
    const double scale = std::max(std::abs(t.gl), std::abs(lambda_max));
    const double tol = 4 * std::numeric_limits<double>::epsilon() * scale + 2 * t.pivmin;
    std::vector<Interval> work{{t.gl - 1e-12 * scale, lambda_max, 0, total}};
    double sig[kLanes];
    int cnt[kLanes];
    while (!work.empty()) {
        const int m = std::min<int>(kLanes, static_cast<int>(work.size()));
        Interval batch[kLanes];
        for (int k = 0; k < m; ++k) {
            batch[k] = work.back();
            work.pop_back();
        }
        for (int k = 0; k < kLanes; ++k) sig[k] = k < m ? 0.5 * (batch[k].lo + batch[k].hi) : sig[0];
        t.counts(sig, cnt);
        for (int k = 0; k < m; ++k) {
            const Interval& iv = batch[k];
            const double mid = sig[k];
            const int c = std::clamp(cnt[k], iv.clo, iv.chi);
            const Interval left{iv.lo, mid, iv.clo, c}, right{mid, iv.hi, c, iv.chi};
            for (const Interval& ch : {left, right}) {
                if (ch.chi == ch.clo) continue;
                if (ch.hi - ch.lo <= tol) {
                    for (int j = ch.clo; j < ch.chi; ++j) out[static_cast<std::size_t>(j)] = 0.5 * (ch.lo + ch.hi);
                } else {
                    work.push_back(ch);
                }
            }
        }
    }
    return out;
}

// Solves (T - lambda) x = b in place with partial pivoting.
struct ShiftedLU {
    std::vector<double> dl, dd, du, du2;
    std::vector<char> swapped;
    void factor(const Discretization& disc, double lambda) {
        const std::size_t n = disc.diag.size();
        dl.assign(disc.off.begin(), disc.off.end());
        du.assign(disc.off.begin(), disc.off.end());
        dd.resize(n);
        for (std::size_t i = 0; i < n; ++i) dd[i] = disc.diag[i] - lambda;
        du2.assign(n > 2 ? n - 2 : 0, 0.0);
        swapped.assign(n, 0);
        const double tiny = 1e-300;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(dd[i]) >= std::abs(dl[i])) {
                if (dd[i] == 0) dd[i] = tiny;
                const double f = dl[i] / dd[i];
                dl[i] = f;
                dd[i + 1] -= f * du[i];
            } else {
                const double f = dd[i] / dl[i];
                dd[i] = dl[i];
                dl[i] = f;
                const double tmp = du[i];
                du[i] = dd[i + 1];
                dd[i + 1] = tmp - f * dd[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du[i + 1];
                }
                swapped[i] = 1;
            }
        }
        if (n && dd[n - 1] == 0) dd[n - 1] = tiny;
    }
    void solve(std::vector<double>& x) const {
        const std::size_t n = dd.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                x[i + 1] -= dl[i] * x[i];
            } else {
                const double tmp = x[i];
                x[i] = x[i + 1];
                x[i + 1] = tmp - dl[i] * x[i];
            }
        }
        x[n - 1] /= dd[n - 1];
        if (n > 1) x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2];
        for (std::size_t ii = n - 2; ii-- > 0;) x[ii] = (x[ii] - du[ii] * x[ii + 1] - du2[ii] * x[ii + 2]) / dd[ii];
    }
};

double normalize(std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    const double nrm = std::sqrt(s);
    for (double& v : x) v /= nrm;
    return nrm;
}

}  // namespace

SpectralData solve_spectrum(const Discretization& disc, double lambda_max, const std::vector<std::size_t>& probes) {
    SpectralData out;
    out.probe_vertices = probes;
    const std::size_t n = disc.unknowns();
    Tri tri(disc);
    out.eigenvalues = bisect_all(tri, lambda_max);
    const std::size_t K = out.eigenvalues.size();
    out.density.assign(K * probes.size(), 0.0);
    double tnorm = 0;
    for (std::size_t i = 0; i < n; ++i)
        tnorm = std::max(tnorm, std::abs(disc.diag[i]) + (i ? std::abs(disc.off[i - 1]) : 0.0) +
                                    (i + 1 < n ? std::abs(disc.off[i]) : 0.0));
    // probe vertex -> unknown index (or none at a Dirichlet end)
    std::vector<long> unknown(probes.size(), -1);
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const long u = static_cast<long>(probes[k]) - static_cast<long>(disc.first);
        if (u >= 0 && u < static_cast<long>(n)) unknown[k] = u;
    }
    ShiftedLU lu;
    std::vector<double> x(n), r(n);
    for (std::size_t m = 0; m < K; ++m) {
        const double lam = out.eigenvalues[m];
        lu.factor(disc, lam);
        for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
        normalize(x);
        for (int it = 0; it < 3; ++it) {
            lu.solve(x);
            normalize(x);
        }
        double res = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double y = (disc.diag[i] - lam) * x[i];
            if (i) y += disc.off[i - 1] * x[i - 1];
            if (i + 1 < n) y += disc.off[i] * x[i + 1];
            res += y * y;
        }
        out.max_residual = std::max(out.max_residual, std::sqrt(res) / std::max(1.0, tnorm));
        for (std::size_t k = 0; k < probes.size(); ++k) {
            if (unknown[k] < 0) continue;
            const std::size_t u = static_cast<std::size_t>(unknown[k]);
            out.density[m * probes.size() + k] = x[u] * x[u] / (disc.delta * disc.weight[u]);
        }
    }
    return out;
}

KernelSample kernel_from_spectrum(const SpectralData& s, std::size_t k, double tau) {
    KernelSample ks;
    for (std::size_t n = 0; n < s.count(); ++n) {
        if (std::abs(s.eigenvalues[n] - tau) < 1e-8) ks.near_eigenvalue = true;
        if (s.eigenvalues[n] <= tau) ks.value += s.psi2(n, k);
    }
    return ks;
}

KernelSample spectral_kernel_bruteforce(const Discretization& disc, double x, double tau) {
    const SpectralData s = solve_spectrum(disc, tau + 10 * disc.h, {disc.vertex_of(x)});
    if (s.max_residual > 1e-10) throw std::runtime_error("spectral_kernel_bruteforce: eigensolve did not converge");
    return kernel_from_spectrum(s, 0, tau);
}

SpectralData richardson(const SpectralData& coarse, const SpectralData& fine) {
    if (coarse.probe_vertices.size() != fine.probe_vertices.size())
        throw std::invalid_argument("richardson: probe sets differ");
    const std::size_t P = coarse.probe_vertices.size();
    const std::size_t K = std::min(coarse.count(), fine.count());
    SpectralData out;
    out.probe_vertices = coarse.probe_vertices;
    out.max_residual = std::max(coarse.max_residual, fine.max_residual);
    out.eigenvalues.resize(K);
    out.density.resize(K * P);
    for (std::size_t n = 0; n < K; ++n) {
        out.eigenvalues[n] = (4 * fine.eigenvalues[n] - coarse.eigenvalues[n]) / 3;
        for (std::size_t k = 0; k < P; ++k)
            out.density[n * P + k] = (4 * fine.psi2(n, k) - coarse.psi2(n, k)) / 3;
    }
    return out;
}

SpectralData extrapolated_spectrum(const OracleSetup& s, double lambda_max, const std::vector<double>& probe_x,
                                   std::vector<double>* snapped_x) {
    const Discretization dc = discretize(s.V, s.a, s.b, s.left, s.right, s.coarse_points, s.h, lambda_max);
    const Discretization df = discretize(s.V, s.a, s.b, s.left, s.right, 2 * (s.coarse_points - 1) + 1, s.h, lambda_max);
    std::vector<std::size_t> pc, pf;
    if (snapped_x) snapped_x->clear();
    for (double x : probe_x) {
        const std::size_t j = dc.vertex_of(x);
        pc.push_back(j);
        pf.push_back(2 * j);
        if (snapped_x) snapped_x->push_back(dc.x_of_vertex(j));
    }
    // a slightly higher cap on the fine grid keeps index matching complete
    const SpectralData c = solve_spectrum(dc, lambda_max, pc);
    const SpectralData f = solve_spectrum(df, lambda_max, pf);
    return richardson(c, f);
}

ConvergenceReport convergence_check(const std::function<double(double)>& V, double a, double b, EndCondition left,
                                    EndCondition right, double h, double tau, double x,
                                    const std::vector<std::size_t>& ns, ConvergenceQuantity q) {
    if (ns.size() < 3) throw std::invalid_argument("convergence_check: at least three grids required");
    ConvergenceReport rep;
    rep.ns = ns;
    std::vector<double> deltas;
    for (std::size_t n : ns) {
        const Discretization d = discretize(V, a, b, left, right, n, h, tau + 10 * h);
        const SpectralData s = solve_spectrum(d, tau, {d.vertex_of(x)});
        double v;
        if (q == ConvergenceQuantity::KernelDiagonal) {
            v = kernel_from_spectrum(s, 0, tau).value;
        } else {
            if (s.count() == 0) throw std::runtime_error("convergence_check: no eigenvalue below tau");
            v = s.eigenvalues.back();
        }
        rep.values.push_back(v);
        deltas.push_back(d.delta);
    }
    const std::size_t m = rep.values.size();
    std::vector<double> diffs;
    for (std::size_t i = 0; i + 1 < m; ++i) diffs.push_back(rep.values[i] - rep.values[i + 1]);
    for (std::size_t i = 0; i + 1 < diffs.size(); ++i) {
        if (diffs[i] == 0 || diffs[i + 1] == 0) {
            rep.orders.push_back(NAN);
            continue;
        }
        rep.orders.push_back(std::log2(std::abs(diffs[i] / diffs[i + 1])));
        if ((diffs[i] > 0) != (diffs[i + 1] > 0) || std::abs(diffs[i + 1]) > std::abs(diffs[i])) rep.monotone = false;
    }
    // least-squares order from |v_k - v_{k+1}| ~ delta_k^p
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (diffs[i] == 0) continue;
        const double lx = std::log(deltas[i]), ly = std::log(std::abs(diffs[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    rep.fitted_order = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : NAN;
    const double p = rep.orders.empty() || std::isnan(rep.orders.back()) ? 2.0 : rep.orders.back();
    const double limit = rep.values[m - 1] - diffs.back() / (std::pow(2.0, p) - 1);
    for (double v : rep.values) rep.errors.push_back(std::abs(v - limit));
    return rep;
}

}  // namespace semicl
