#include "kms/oracle.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace kms;

namespace {

// Greedy nearest matching of two multisets; returns worst pair distance.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (cplx z : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](cplx p, cplx q) {
            return std::abs(p - z) < std::abs(q - z);
        });
        worst = std::max(worst, std::abs(*it - z) / (1.0 + std::abs(z)));
        b.erase(it);
    }
    return worst;
}

} // namespace

TEST_CASE("dense_eigs matches closed forms for n = 2 and 3") {
    std::mt19937_64 rng(501);
    std::uniform_real_distribution<double> d(-1.8, 1.8);
    for (int rep = 0; rep < 25; ++rep) {
        cplx rho(d(rng), d(rng));
        {
            auto ev = dense_eigs(build_kms(2, rho));
            CHECK(multiset_distance(ev, {1.0 + rho, 1.0 - rho}) <= 1e-10);
        }
        {
            cplx r2 = rho * rho;
            cplx disc = std::sqrt(r2 * r2 + 8.0 * r2);
            std::vector<cplx> want = {1.0 - r2, (2.0 + r2 + disc) / 2.0, (2.0 + r2 - disc) / 2.0};
            auto ev = dense_eigs(build_kms(3, rho));
            CHECK(multiset_distance(ev, want) <= 1e-9);
        }
    }
}

TEST_CASE("dense_eigs sums to the trace") {
    std::mt19937_64 rng(502);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    for (int n : {4, 7, 11, 20}) {
        cplx rho(d(rng), d(rng));
        auto ev = dense_eigs(build_kms(n, rho));
        REQUIRE(int(ev.size()) == n);
        cplx sum = 0.0;
        for (cplx z : ev) sum += z;
        CHECK(std::abs(sum - double(n)) <= 1e-8 * n); // trace of K_n is n
    }
}

TEST_CASE("spectrum_split partitions the dense spectrum") {
    std::mt19937_64 rng(503);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    for (int n : {3, 4, 5, 8, 9}) {
        cplx rho(d(rng), d(rng));
        auto [skew, sym] = spectrum_split(n, rho);
        CHECK(int(skew.size()) == n / 2);
        CHECK(int(sym.size()) == (n + 1) / 2);
        std::vector<cplx> merged = skew;
        merged.insert(merged.end(), sym.begin(), sym.end());
        CHECK(multiset_distance(merged, dense_eigs(build_kms(n, rho))) <= 1e-8);
    }
}

TEST_CASE("char_poly has monic shape and the determinant constant term") {
    std::mt19937_64 rng(504);
    std::uniform_real_distribution<double> d(-1.3, 1.3);
    for (int n : {2, 5, 9}) {
        cplx rho(d(rng), d(rng));
        CharPoly p = char_poly(n, rho);
        REQUIRE(int(p.coeffs.size()) == n + 1);
        CHECK(p.coeffs[0] == cplx(1.0));
        // p(lambda) = det(lambda I - K) so p(0) = (-1)^n det K
        cplx want = std::pow(1.0 - rho * rho, n - 1) * ((n % 2 == 0) ? 1.0 : -1.0);
        CHECK(std::abs(p.coeffs.back() - want) <= 1e-8 * (1 + std::abs(want)));
    }
}

TEST_CASE("poly_roots recovers constructed roots and multiplicities") {
    // (z - 2)^2 (z + 1) (z - 3i) = expand manually
    std::vector<cplx> roots = {2.0, 2.0, -1.0, cplx(0, 3)};
    std::vector<cplx> coeffs = {1.0};
    for (cplx r : roots) {
        std::vector<cplx> next(coeffs.size() + 1, 0.0);
        for (size_t i = 0; i < coeffs.size(); ++i) {
            next[i] += coeffs[i];
            next[i + 1] -= coeffs[i] * r;
        }
        coeffs = next;
    }
    auto found = poly_roots(coeffs);
    int total = 0;
    bool saw_double = false;
    for (auto [z, m] : found) {
        total += m;
        if (m == 2) {
            saw_double = true;
            CHECK(std::abs(z - 2.0) <= 1e-6);
        }
    }
    CHECK(total == 4);
    CHECK(saw_double);
}

TEST_CASE("poly_roots on a separated random polynomial") {
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<cplx> roots;
        while (roots.size() < 8) {
            cplx z(d(rng), d(rng));
            bool ok = true;
            for (cplx w : roots)
                if (std::abs(z - w) < 0.1) ok = false;
            if (ok) roots.push_back(z);
        }
        std::vector<cplx> coeffs = {1.0};
        for (cplx r : roots) {
            std::vector<cplx> next(coeffs.size() + 1, 0.0);
            for (size_t i = 0; i < coeffs.size(); ++i) {
                next[i] += coeffs[i];
                next[i + 1] -= coeffs[i] * r;
            }
            coeffs = next;
        }
        auto found = poly_roots(coeffs);
        std::vector<cplx> flat;
        for (auto [z, m] : found)
            for (int k = 0; k < m; ++k) flat.push_back(z);
        CHECK(multiset_distance(flat, roots) <= 1e-9);
    }
}

TEST_CASE("char_poly roots have small residuals") {
    std::mt19937_64 rng(506);
    std::uniform_real_distribution<double> d(-1.4, 1.4);
    for (int n : {5, 10, 17}) {
        cplx rho(d(rng), d(rng));
        CharPoly p = char_poly(n, rho);
        for (cplx z : dense_eigs(build_kms(n, rho))) {
            // scale by the Horner magnitude so huge eigenvalues don't dominate
            cplx acc = 0.0;
            double mag = 0.0;
            for (cplx ck : p.coeffs) {
                acc = acc * z + ck;
                mag = mag * std::abs(z) + std::abs(ck);
            }
            CHECK(std::abs(acc) <= 1e-9 * std::max(1.0, mag));
        }
    }
}

TEST_CASE("full_spectrum of the identity (rho = 0)") {
    SpectrumReport rep = full_spectrum(5, 0.0);
    int total = 0, per_type[2] = {0, 0};
    for (const auto& e : rep.entries) {
        CHECK(std::abs(e.value - 1.0) <= 1e-12);
        CHECK(e.cls == EigClass::Ordinary);
        total += e.multiplicity;
        per_type[type_index(e.type)] += e.multiplicity;
    }
    CHECK(total == 5);
    CHECK(per_type[0] == 2); // skew-symmetric class
    CHECK(per_type[1] == 3); // symmetric class
}

TEST_CASE("full_spectrum multiplicities always sum to n") {
    std::mt19937_64 rng(507);
    std::uniform_real_distribution<double> d(-1.6, 1.6);
    for (int n : {3, 6, 9, 12}) {
        for (int rep = 0; rep < 10; ++rep) {
            cplx rho(d(rng), d(rng));
            auto report = full_spectrum(n, rho);
            int total = 0;
            for (const auto& e : report.entries) total += e.multiplicity;
            CHECK(total == n);
        }
    }
}

TEST_CASE("spectral symmetry maps") {
    std::mt19937_64 rng(508);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    for (int n : {5, 6}) {
        cplx rho(d(rng), d(rng));
        auto [skew, sym] = spectrum_split(n, rho);
        auto [skew_c, sym_c] = spectrum_split(n, std::conj(rho));
        // conjugating rho conjugates each block in place
        auto conj_all = [](std::vector<cplx> v) {
            for (auto& z : v) z = std::conj(z);
            return v;
        };
        CHECK(multiset_distance(skew_c, conj_all(skew)) <= 1e-9);
        CHECK(multiset_distance(sym_c, conj_all(sym)) <= 1e-9);
        // negating rho: blocks swap for even n, stay for odd n
        auto [skew_m, sym_m] = spectrum_split(n, -rho);
        if (n % 2 == 0) {
            CHECK(multiset_distance(skew_m, sym) <= 1e-9);
            CHECK(multiset_distance(sym_m, skew) <= 1e-9);
        } else {
            CHECK(multiset_distance(skew_m, skew) <= 1e-9);
            CHECK(multiset_distance(sym_m, sym) <= 1e-9);
        }
    }
}

TEST_CASE("repeated eigenvalue at a known double point") {
    // rho on the type-2 curve cusp of n = 3 sits at lambda = -3 twice
    CharPoly p = char_poly(3, 1.0);
    auto found = poly_roots(p);
    bool saw_cluster = false, saw_three = false;
    for (auto [z, m] : found) {
        if (m == 2) {
            saw_cluster = true;
            CHECK(std::abs(z) <= 1e-6); // (1 - rho^2) root doubles at rho = 1
        }
        if (m == 1) {
            saw_three = std::abs(z - 3.0) <= 1e-8;
        }
    }
    CHECK(saw_cluster);
    CHECK(saw_three);
}
