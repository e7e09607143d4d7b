#include "kms/spectral.hpp"

#include "kms/core.hpp"
#include "kms/oracle.hpp"
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

using namespace kms;

namespace {
constexpr double PI = std::numbers::pi;
}

TEST_CASE("lambda_of_mu sign convention and removable fill") {
    cplx mu(0.9, 0.2);
    for (int n : {4, 7}) {
        cplx ratio = std::sin(double(n) * mu) / std::sin(mu);
        CHECK(std::abs(lambda_of_mu(n, mu, EigType::Type1) + ratio) <= 1e-12 * (1 + std::abs(ratio)));
        CHECK(std::abs(lambda_of_mu(n, mu, EigType::Type2) - ratio) <= 1e-12 * (1 + std::abs(ratio)));
        CHECK(std::abs(lambda_of_mu(n, 0.0, EigType::Type1) + double(n)) <= 1e-13);
        CHECK(std::abs(lambda_of_mu(n, 0.0, EigType::Type2) - double(n)) <= 1e-13);
    }
}

TEST_CASE("rho_of_mu matches the half-angle ratio at generic mu") {
    cplx mu(1.1, 0.35);
    for (int n : {3, 6, 11}) {
        cplx a = 0.5 * double(n + 1) * mu, b = 0.5 * double(n - 1) * mu;
        cplx s1 = std::sin(a) / std::sin(b);
        cplx s2 = std::cos(a) / std::cos(b);
        CHECK(std::abs(rho_of_mu(n, mu, EigType::Type1) - s1) <= 1e-12 * (1 + std::abs(s1)));
        CHECK(std::abs(rho_of_mu(n, mu, EigType::Type2) - s2) <= 1e-12 * (1 + std::abs(s2)));
    }
}

TEST_CASE("rho_of_mu endpoint values") {
    CHECK(std::abs(rho_of_mu(6, 0.0, EigType::Type1) - xi(6)) <= 1e-14);
    CHECK(std::abs(rho_of_mu(6, 0.0, EigType::Type2) - 1.0) <= 1e-14);
    // mu = pi: type 1 is regular for even n, removable for odd n
    CHECK(std::abs(rho_of_mu(6, PI, EigType::Type1) + 1.0) <= 1e-9);
    CHECK(std::abs(rho_of_mu(7, PI, EigType::Type1) + xi(7)) <= 1e-9);
    // type 2 swaps the pattern
    CHECK(std::abs(rho_of_mu(6, PI, EigType::Type2) + xi(6)) <= 1e-9);
    CHECK(std::abs(rho_of_mu(7, PI, EigType::Type2) + 1.0) <= 1e-9);
}

TEST_CASE("rho_of_mu series join near mu = 0") {
    // just outside the series window the direct ratio must agree with the
    // quadratic model to far below double resolution
    double delta = 1e-5;
    for (int n : {4, 6, 9}) {
        double model = xi(n) * (1.0 - double(n) / 6.0 * delta * delta);
        CHECK(std::abs(rho_of_mu(n, delta, EigType::Type1) - model) <= 1e-13);
    }
}

TEST_CASE("rho_of_mu throws pole_error at a genuine pole") {
    // n = 5, type 1: denominator sin(2 mu) vanishes at mu = pi/2, numerator
    // sin(3 mu) does not
    CHECK_THROWS_AS(rho_of_mu(5, PI / 2, EigType::Type1), pole_error);
}

TEST_CASE("rho_of_mu survives huge imaginary parts") {
    cplx mu(0.3, 300.0);
    cplx got = rho_of_mu(7, mu, EigType::Type1);
    cplx want = std::exp(cplx(300.0, -0.3)); // e^{-i mu} dominates
    CHECK(std::isfinite(got.real()));
    CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
    // the mirror (v < 0) regime picks the conjugate dominant exponential
    cplx got2 = rho_of_mu(7, std::conj(mu), EigType::Type2);
    CHECK(std::abs(got2 - std::conj(std::exp(cplx(300.0, -0.3)))) <= 1e-10 * std::abs(got2));
}

TEST_CASE("double_condition_residual excludes rho in {-1, 0, 1}") {
    CHECK_THROWS_AS(double_condition_residual(5, cplx(0.5, 0.5), 1.0, EigType::Type1), excluded_rho);
    CHECK_THROWS_AS(double_condition_residual(5, cplx(0.5, 0.5), 0.0, EigType::Type2), excluded_rho);
    CHECK_THROWS_AS(double_condition_residual(5, cplx(0.5, 0.5), -1.0, EigType::Type1), excluded_rho);
}

TEST_CASE("double_condition_residual matches the direct formula in range") {
    cplx mu(0.7, 0.4), rho(0.8, -0.3);
    for (int n : {4, 9}) {
        cplx a = 0.5 * double(n + 1) * mu, b = 0.5 * double(n - 1) * mu;
        double want1 = std::abs(xi(n) * std::cos(a) - rho * std::cos(b));
        double want2 = std::abs(xi(n) * std::sin(a) - rho * std::sin(b));
        CHECK(double_condition_residual(n, mu, rho, EigType::Type1) == doctest::Approx(want1).epsilon(1e-14));
        CHECK(double_condition_residual(n, mu, rho, EigType::Type2) == doctest::Approx(want2).epsilon(1e-14));
    }
}

TEST_CASE("double_condition_residual beyond the overflow horizon") {
    // v = 250 with n = 3 puts (n+1)v/2 = 500 past the switch; the damped
    // residual is exp(-2v)|xi cos(2iv) - rho cos(iv)| -> xi/2 for this mu
    cplx mu(0.0, 250.0);
    double r = double_condition_residual(3, mu, 2.0, EigType::Type1);
    CHECK(std::isfinite(r));
    CHECK(r == doctest::Approx(xi(3) / 2.0).epsilon(1e-9));
    // zeros of the condition survive the rescaling: solve for rho and re-test
    cplx mu2(0.3, 250.0);
    cplx iB(0.0, 2.0 * 250.0);
    auto e = [](cplx w) { return std::exp(cplx(0, 1) * w); };
    cplx cp = (e(2.0 * mu2 + iB) + e(-2.0 * mu2 + iB)) / 2.0;
    cplx cm = (e(mu2 + iB) + e(-mu2 + iB)) / 2.0;
    cplx rho_star = xi(3) * cp / cm;
    CHECK(std::isfinite(rho_star.real()));
    CHECK(double_condition_residual(3, mu2, rho_star, EigType::Type1) <= 1e-12);
}

TEST_CASE("asymptotic_spectrum shape") {
    auto a = asymptotic_spectrum(6, cplx(2.0, 1.0));
    cplx p5(-38.0, 41.0); // (2+i)^5
    CHECK(std::abs(a.lambda0 - p5) <= 1e-12 * std::abs(p5));
    CHECK(std::abs(a.lambda1 + p5) <= 1e-12 * std::abs(p5));
    CHECK(a.bulk_value == cplx(-1.0));
    CHECK(a.bulk_count == 4);
}

TEST_CASE("asymptotic_spectrum approximates the dense spectrum for large |rho|") {
    cplx rho = 8.0 * std::exp(cplx(0.0, 0.7));
    for (int n : {5, 8}) {
        auto a = asymptotic_spectrum(n, rho);
        auto ev = dense_eigs(build_kms(n, rho));
        double best0 = 1e300, best1 = 1e300;
        int bulk_close = 0;
        for (cplx z : ev) {
            best0 = std::min(best0, std::abs(z - a.lambda0) / std::abs(a.lambda0));
            best1 = std::min(best1, std::abs(z - a.lambda1) / std::abs(a.lambda1));
            if (std::abs(z + 1.0) <= 0.5) ++bulk_close;
        }
        CHECK(best0 <= 0.1);
        CHECK(best1 <= 0.1);
        CHECK(bulk_close == a.bulk_count);
    }
}

TEST_CASE("classify_eigenvalue bands") {
    CHECK(classify_eigenvalue(cplx(0.0, 5.0), 5, 1e-9) == EigClass::Borderline);
    CHECK(classify_eigenvalue(cplx(3.0, 3.9), 5, 1e-9) == EigClass::Ordinary);
    CHECK(classify_eigenvalue(cplx(-5.1, 0.0), 5, 1e-9) == EigClass::Extraordinary);
    CHECK(classify_eigenvalue(cplx(5.0 + 1e-10, 0.0), 5, 1e-9) == EigClass::Borderline);
    CHECK_THROWS_AS(classify_eigenvalue(cplx(1.0), 5, -1.0), domain_error);
}

TEST_CASE("exceptional_rho is an exact five-point test") {
    CHECK(exceptional_rho(3, 2.0));
    CHECK(exceptional_rho(3, -2.0));
    CHECK(exceptional_rho(3, 1.0));
    CHECK(exceptional_rho(3, -1.0));
    CHECK(exceptional_rho(3, 0.0));
    CHECK(exceptional_rho(7, cplx(4.0 / 3.0, 0.0)));
    CHECK_FALSE(exceptional_rho(3, 2.0000000001));
    CHECK_FALSE(exceptional_rho(3, cplx(2.0, 1e-12)));
    CHECK_FALSE(exceptional_rho(5, 2.0)); // xi(5) = 1.5, so 2 is unexceptional here
}
