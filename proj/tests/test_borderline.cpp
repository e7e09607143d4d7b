#include "kms/borderline.hpp"

#include "kms/core.hpp"
#include "kms/spectral.hpp"
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

using namespace kms;

namespace {
constexpr double PI = std::numbers::pi;
}

TEST_CASE("g vanishes at 0 and pi and is nonnegative") {
    for (int n : {2, 5, 8}) {
        CHECK(g(n, 0.0) == 0.0);
        CHECK(std::abs(g(n, PI)) <= 1e-12 * n * n);
        for (int k = 0; k <= 200; ++k) {
            double u = -PI + 2 * PI * k / 200.0;
            CHECK(g(n, u) >= -1e-12);
        }
    }
}

TEST_CASE("solve_v satisfies its defining equation") {
    for (int n : {3, 7, 12, 95}) {
        for (int k = 1; k < 40; ++k) {
            double u = PI * k / 40.0;
            auto sol = solve_v(n, u);
            double lhs = std::pow(std::sinh(double(n) * sol.v), 2) -
                         double(n) * double(n) * std::pow(std::sinh(sol.v), 2);
            double gg = g(n, u);
            CHECK(std::abs(lhs - gg) <= 1e-11 * std::max(1.0, gg));
            CHECK(sol.v >= 0.0);
        }
        CHECK(solve_v(n, 0.0).v == 0.0);
    }
}

TEST_CASE("solve_v frozen value and symmetries") {
    CHECK(solve_v(7, 0.1).v == doctest::Approx(0.0968230566571707).epsilon(1e-13));
    for (double u : {0.3, 1.1, 2.0}) {
        CHECK(solve_v(9, -u).v == doctest::Approx(solve_v(9, u).v).epsilon(1e-13));
        CHECK(solve_v(9, PI - u).v == doctest::Approx(solve_v(9, u).v).epsilon(1e-13));
    }
}

TEST_CASE("curve endpoints on the real axis") {
    // u = 0: type 1 starts at xi_n, type 2 at 1
    CHECK(std::abs(f_curve(6, 0.0, EigType::Type1) - xi(6)) <= 1e-15);
    CHECK(std::abs(f_curve(6, 0.0, EigType::Type2) - 1.0) <= 1e-15);
    // u = pi: the negative crossings swap roles with the parity of n
    CHECK(std::abs(f_curve(6, PI, EigType::Type1) + 1.0) <= 1e-15);
    CHECK(std::abs(f_curve(6, PI, EigType::Type2) + xi(6)) <= 1e-15);
    CHECK(std::abs(f_curve(7, PI, EigType::Type1) + xi(7)) <= 1e-15);
    CHECK(std::abs(f_curve(7, PI, EigType::Type2) + 1.0) <= 1e-15);
    // eigenvalue endpoints: -n at u = 0 for type 1, +n for type 2
    CHECK(std::abs(b_curve(8, 0.0, EigType::Type1) + 8.0) <= 1e-12);
    CHECK(std::abs(b_curve(8, 0.0, EigType::Type2) - 8.0) <= 1e-12);
}

TEST_CASE("lambda stays on the circle |lambda| = n along both curves") {
    for (int n : {3, 6, 11}) {
        for (EigType t : {EigType::Type1, EigType::Type2}) {
            for (int k = 0; k <= 64; ++k) {
                double u = -PI + 2 * PI * k / 64.0;
                CHECK(std::abs(std::abs(b_curve(n, u, t)) - n) <= 1e-9 * n);
            }
        }
    }
}

TEST_CASE("conjugate symmetry f(-u) = conj(f(u))") {
    for (int n : {4, 7}) {
        for (EigType t : {EigType::Type1, EigType::Type2}) {
            for (int k = 1; k < 32; ++k) {
                double u = PI * k / 32.0;
                cplx a = f_curve(n, u, t);
                cplx b = f_curve(n, -u, t);
                CHECK(std::abs(b - std::conj(a)) <= 1e-12 * (1 + std::abs(a)));
            }
        }
    }
}

TEST_CASE("mirror identity between the two curves") {
    // even n: f1(pi - u) = -conj(f2(u)); odd n: each curve maps to itself
    for (int k = 1; k < 24; ++k) {
        double u = PI * k / 24.0;
        cplx lhs6 = f_curve(6, PI - u, EigType::Type1);
        cplx rhs6 = -std::conj(f_curve(6, u, EigType::Type2));
        CHECK(std::abs(lhs6 - rhs6) <= 1e-11 * (1 + std::abs(rhs6)));
        cplx lhs7 = f_curve(7, PI - u, EigType::Type1);
        cplx rhs7 = -std::conj(f_curve(7, u, EigType::Type1));
        CHECK(std::abs(lhs7 - rhs7) <= 1e-11 * (1 + std::abs(rhs7)));
    }
}

TEST_CASE("f_curve agrees with the mode-parameter ratio") {
    for (int n : {5, 10}) {
        for (EigType t : {EigType::Type1, EigType::Type2}) {
            for (int k = 1; k < 20; ++k) {
                double u = PI * k / 20.0 - PI / 40.0;
                cplx mu(u, solve_v(n, u).v);
                cplx direct = rho_of_mu(n, mu, t);
                cplx factored = f_curve(n, u, t);
                CHECK(std::abs(direct - factored) <= 1e-11 * (1 + std::abs(direct)));
            }
        }
    }
}

TEST_CASE("curve_derivative matches central differences") {
    const double h = 1e-6;
    for (int n : {4, 7}) {
        for (EigType t : {EigType::Type1, EigType::Type2}) {
            for (double u : {0.4, 1.3, 2.6, -0.9}) {
                cplx fd = (f_curve(n, u + h, t) - f_curve(n, u - h, t)) / (2 * h);
                cplx an = curve_derivative(n, u, t);
                CHECK(std::abs(fd - an) <= 1e-6 * (1 + std::abs(an)));
            }
        }
    }
    CHECK_THROWS_AS(curve_derivative(5, 0.0, EigType::Type1), domain_error);
    CHECK_THROWS_AS(curve_derivative(5, PI, EigType::Type2), domain_error);
}

TEST_CASE("trace_curve sampling contract") {
    TracedCurve c = trace_curve(6, EigType::Type1, 512);
    REQUIRE(c.samples.size() >= 512);
    CHECK(c.n == 6);
    CHECK(c.closed);
    bool saw_zero = false, saw_pi = false;
    for (size_t i = 0; i < c.samples.size(); ++i) {
        if (i > 0) CHECK(c.samples[i].u > c.samples[i - 1].u); // strictly ordered
        if (c.samples[i].u == 0.0) {
            saw_zero = true;
            CHECK(c.samples[i].rho == cplx(xi(6), 0.0));
            CHECK(std::abs(c.samples[i].lambda + 6.0) <= 1e-12);
            CHECK(c.samples[i].drho_du == cplx(0.0));
        }
        if (c.samples[i].u == PI) saw_pi = true;
    }
    CHECK(saw_zero);
    CHECK(saw_pi);
    CHECK_THROWS_AS(trace_curve(6, EigType::Type1, 8), domain_error);
}

TEST_CASE("adaptive refinement tightens long chords") {
    TracedCurve c = trace_curve(5, EigType::Type2, 256);
    double maxchord = 0.0;
    for (size_t i = 1; i < c.samples.size(); ++i)
        maxchord = std::max(maxchord, std::abs(c.samples[i].rho - c.samples[i - 1].rho));
    // default refine_tol is 1e-3 of the bounding-box diagonal (~several units)
    CHECK(maxchord <= 0.02);
}

TEST_CASE("injectivity evidence for the simple-curve property") {
    for (int n : {5, 8}) {
        TracedCurve c = trace_curve(n, EigType::Type1, 1024);
        auto rep = injectivity_report(c, 0.5);
        CHECK(rep.min_distance > 1e-3);
    }
}
