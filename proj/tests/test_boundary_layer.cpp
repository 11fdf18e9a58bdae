#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "semicl/boundary_layer.hpp"
#include "semicl/verify.hpp"

using namespace semicl;

namespace {

constexpr double kPi = std::numbers::pi;

// Decay exponent of |profile| sampled at the crests of cos(2r - (d+1) pi/4).
double crest_exponent(const BoundaryModel& bm, double r0, double r1, int stride) {
    std::vector<std::pair<double, double>> pts;
    const double shift = (bm.dim + 1) * kPi / 4;
    for (int k = 0;; k += stride) {
        const double r = (k * kPi + shift) / 2;
        if (r > r1) break;
        if (r < r0) continue;
        pts.emplace_back(r, std::abs(upsilon_flat(bm, r)));
    }
    return fit_loglog_slope(pts).slope;
}

}  // namespace

TEST_SUITE("boundary_layer") {
    TEST_CASE("flat profile examples") {
        CHECK(upsilon_flat(dirichlet(1), 0) == doctest::Approx(-1 / kPi));
        CHECK(std::abs(upsilon_flat(dirichlet(1), kPi / 2)) <= 1e-16);
        CHECK(upsilon_flat(neumann(2), 0) == doctest::Approx(1 / (4 * kPi)).epsilon(1e-14));
        CHECK(upsilon_flat(neumann(2), 1e-9) == doctest::Approx(1 / (4 * kPi)).epsilon(1e-12));
        for (double r : {0.0, 0.3, 1.7, 12.0}) {
            for (int d : {1, 2, 3}) {
                CAPTURE(r);
                CAPTURE(d);
                CHECK(upsilon_flat(dirichlet(d), r) == -upsilon_flat(neumann(d), r));
            }
        }
        CHECK_THROWS(upsilon_flat(robin(1, 1), 0.5));
    }

    TEST_CASE("d = 2 profile against brute-force disc quadrature") {
        // (2 pi)^{-2} int_{|xi|<=1} cos(2 r xi_1) dxi = (2 pi)^{-2} int_{-1}^{1} 2 sqrt(1-s^2) cos(2 r s) ds
        for (double r : {0.0, 0.8, 3.1}) {
            const int n = 200000;
            double sum = 0;
            for (int i = 0; i < n; ++i) {
                const double th = kPi * (i + 0.5) / n;  // s = cos(th)
                const double s = std::cos(th);
                sum += 2 * std::sin(th) * std::sin(th) * std::cos(2 * r * s) * kPi / n;
            }
            CAPTURE(r);
            CHECK(std::abs(sum / (4 * kPi * kPi) - upsilon_flat(neumann(2), r)) <= 1e-9);
        }
    }

    TEST_CASE("d = 3 quadrature agrees with the elementary closed form") {
        // (2 pi)^{-3} 4 pi (sin u - u cos u) / u^3, u = 2r
        for (double r : {0.5, 2.0, 7.5}) {
            const double u = 2 * r;
            const double closed = 4 * kPi * (std::sin(u) - u * std::cos(u)) / (u * u * u) / std::pow(2 * kPi, 3);
            CAPTURE(r);
            CHECK(std::abs(upsilon_flat(neumann(3), r) - closed) <= 1e-10);
        }
    }

    TEST_CASE("decay exponents") {
        CHECK(crest_exponent(neumann(1), 10, 200, 1) == doctest::Approx(-1).epsilon(1e-3));
        CHECK(std::abs(crest_exponent(neumann(2), 10, 200, 1) + 1.5) <= 0.05);
        CHECK(std::abs(crest_exponent(dirichlet(3), 10, 200, 8) + 2.0) <= 0.05);
    }

    TEST_CASE("zero spacing approaches pi/2") {
        const BoundaryModel bm = neumann(2);
        std::vector<double> zeros;
        double prev = upsilon_flat(bm, 50);
        for (double r = 50.01; r <= 60; r += 0.01) {
            const double cur = upsilon_flat(bm, r);
            if ((prev < 0) != (cur < 0)) {
                double a = r - 0.01, b = r;
                for (int it = 0; it < 60; ++it) {
                    const double m = 0.5 * (a + b);
                    ((upsilon_flat(bm, m) < 0) == (upsilon_flat(bm, a) < 0) ? a : b) = m;
                }
                zeros.push_back(0.5 * (a + b));
            }
            prev = cur;
        }
        REQUIRE(zeros.size() >= 5);
        for (std::size_t i = 1; i < zeros.size(); ++i) CHECK(std::abs(zeros[i] - zeros[i - 1] - kPi / 2) <= 1e-2);
    }

    TEST_CASE("asymptotic form") {
        CHECK_THROWS_AS(upsilon_asymptotic(neumann(1), 10), std::domain_error);
        CHECK_THROWS_AS(upsilon_asymptotic(neumann(2), 4), std::domain_error);
        for (double r : {50.3, 120.9, 199.0}) {
            const UpsilonAsymptotic a = upsilon_asymptotic(dirichlet(2), r);
            const double env = std::pow(r, -1.5) / (4 * kPi * std::sqrt(kPi));
            CHECK(std::abs(a.leading - upsilon_flat(dirichlet(2), r)) <= 0.02 * env);
            CHECK(std::abs(a.calibrated - upsilon_flat(dirichlet(2), r)) <= 0.02 * env);
        }
        // J1 asymptotics: amplitude (4 pi)^{-1} pi^{-1/2}
        CHECK(upsilon_calibration(2).amplitude == doctest::Approx(1 / (4 * kPi * std::sqrt(kPi))).epsilon(0.01));
    }

    TEST_CASE("Robin limits") {
        for (int d : {1, 2}) {
            for (double r : {0.0, 0.7, 3.0, 11.0}) {
                CAPTURE(d);
                CAPTURE(r);
                CHECK(std::abs(upsilon_robin(robin(d, 0), r).value - upsilon_flat(neumann(d), r)) <= 1e-8);
                CHECK(std::abs(upsilon_robin(robin(d, 1e6), r).value - upsilon_flat(dirichlet(d), r)) <= 1e-4);
                CHECK(std::abs(upsilon_robin(robin(d, -1e6), r).value - upsilon_flat(dirichlet(d), r)) <= 1e-4);
            }
        }
    }

    TEST_CASE("Robin segment integral") {
        // beta = 1, r = 0: (1/2pi) int_{-1}^{1} Re (z+i)/(z-i) dz = (2 - pi)/(2 pi)
        const RobinValue v = upsilon_robin(robin(1, 1), 0, 1e-12);
        CHECK(std::abs(v.value - (2 - kPi) / (2 * kPi)) <= 1e-12);
        CHECK(std::abs(v.imag) <= 1e-12);
        CHECK_FALSE(v.degraded);
        // r = 3 against a 1e6-point midpoint rule
        const int n = 1000000;
        std::complex<double> sum = 0;
        for (int i = 0; i < n; ++i) {
            const double z = -1 + 2 * (i + 0.5) / n;
            sum += (z + std::complex<double>(0, 1)) / (z - std::complex<double>(0, 1)) *
                   std::exp(std::complex<double>(0, 6 * z)) * (2.0 / n);
        }
        CHECK(std::abs(upsilon_robin(robin(1, 1), 3).value - sum.real() / (2 * kPi)) <= 1e-10);
    }

    TEST_CASE("Robin continuity in beta") {
        for (double beta : {0.0, 1.0}) {
            double worst = 0;
            for (double r = 0; r <= 20; r += 0.25) {
                worst = std::max(worst, std::abs(upsilon_robin(robin(1, beta), r).value -
                                                 upsilon_robin(robin(1, beta + 1e-3), r).value));
            }
            CAPTURE(beta);
            CHECK(worst <= 1e-2);
            CHECK(worst > 0);
        }
        double worst2 = 0;
        for (double r = 0; r <= 20; r += 2.5)
            worst2 = std::max(worst2, std::abs(upsilon_robin(robin(2, 1), r).value - upsilon_robin(robin(2, 1.001), r).value));
        CHECK(worst2 <= 1e-2);
    }

    TEST_CASE("images kernel") {
        const double h = 0.05;
        CHECK(halfspace_kernel_exact(dirichlet(1), h, 0, 1) == 0);
        CHECK(halfspace_kernel_exact(neumann(1), h, 0, 1) == doctest::Approx(2 / (kPi * h)).epsilon(1e-15));
        for (int d : {1, 2, 3}) {
            for (double x = 0; x <= 1; x += 0.0173) {
                CHECK(halfspace_kernel_exact(dirichlet(d), h, x, 1) >= -1e-12 * std::pow(h, -d));
                CHECK(halfspace_kernel_exact(neumann(d), h, x, 1) >= 0);
            }
            for (double tau : {0.25, 2.0, 7.0}) {
                CAPTURE(d);
                CAPTURE(tau);
                CHECK(halfspace_kernel_exact(dirichlet(d), h, 0.137, tau) ==
                      doctest::Approx(halfspace_kernel_exact(dirichlet(d), h / std::sqrt(tau), 0.137, 1)).epsilon(1e-10));
            }
        }
        CHECK_THROWS_AS(halfspace_kernel_exact(robin(1, 1), h, 0.1, 1), std::domain_error);
        CHECK_THROWS_AS(halfspace_kernel_exact(dirichlet(1), h, 0.1, 0), std::domain_error);

        // half-line eigenfunction integral (1/(pi h)) int_0^1 (1 - cos(2 xi x/h)) dxi
        const double x = 0.0371;
        const int n = 100000;
        double s = 0;
        for (int i = 0; i < n; ++i) s += (1 - std::cos(2 * (i + 0.5) / n * x / h)) / n;
        CHECK(halfspace_kernel_exact(dirichlet(1), h, x, 1) == doctest::Approx(s / (kPi * h)).epsilon(1e-9));
    }

    TEST_CASE("near-boundary prediction") {
        for (double h : {0.04, 0.02, 0.01}) {
            double cmax = 0;
            for (double r = 0; r <= 200; r += 0.05) {
                const double x = r * h;
                const PredictedKernel k = predict_near_boundary(dirichlet(2), h, x, 1);
                CHECK(std::abs(k.total - halfspace_kernel_exact(dirichlet(2), h, x, 1)) <= 1e-12 * k.weyl);
                cmax = std::max(cmax, std::abs(k.correction) / (std::pow(h, -2) * std::pow(r + 1, -1.5)));
            }
            CHECK(cmax <= 2);
        }
        const PredictedKernel kr = predict_near_boundary(robin(1, 0.5), 0.05, 0.02, 2.0);
        CHECK(std::isfinite(kr.total));
        CHECK(kr.total == kr.weyl + kr.correction);
    }

    TEST_CASE("Weyl validity threshold") {
        CHECK(weyl_validity_threshold(1, 0.01) == 1);
        CHECK(weyl_validity_threshold(2, 1e-3) == doctest::Approx(0.1));
        CHECK(weyl_validity_threshold(3, 1e-4) == doctest::Approx(0.01));
    }

    TEST_CASE("ellipticity") {
        const std::vector<double> grid{-3, -2, -std::sqrt(2.0), -1.2, 1.2, std::sqrt(2.0), 2, 3};
        auto c = [](double v) { return BoundarySymbol([v](double) { return std::complex<double>(v); }); };
        const EllipticityReport dir = ellipticity_check(c(0), c(1), grid);
        CHECK(dir.pass);
        CHECK(dir.min_symbol == doctest::Approx(1));
        const EllipticityReport neu = ellipticity_check(c(1), c(0), {std::sqrt(2.0)});
        CHECK(neu.pass);
        CHECK(neu.min_symbol == doctest::Approx(1));
        // b1 = -i beta b0 with lambda = i sqrt(|xi'|^2 - tau): the symbol vanishes
        // for beta = +sqrt(|xi'|^2 - tau) in this sign convention
        const double beta = 1.0;
        auto b1 = BoundarySymbol([beta](double) { return std::complex<double>(0, -beta); });
        const EllipticityReport rob = ellipticity_check(c(1), b1, grid);
        CHECK_FALSE(rob.pass);
        CHECK(std::abs(rob.argmin) == doctest::Approx(std::sqrt(2.0)));
        CHECK(rob.min_symbol <= 1e-12);
        CHECK(rob.pass_relaxed);  // the gradient criterion still holds
        auto b1n = BoundarySymbol([](double) { return std::complex<double>(0, 1); });
        CHECK(ellipticity_check(c(1), b1n, grid).pass);
    }

    TEST_CASE("profile CSV") {
        const auto rows = boundary_profile(neumann(2), 0, 10, 21);
        REQUIRE(rows.size() == 21);
        std::istringstream in(boundary_profile_csv(rows));
        std::string line;
        std::getline(in, line);
        CHECK(line == "r,upsilon,upsilon_asym,envelope_bound");
        CHECK_THROWS_AS(boundary_profile(neumann(2), 5, 1, 10), std::invalid_argument);
    }
}
