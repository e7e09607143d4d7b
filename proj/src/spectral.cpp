#include "kms/spectral.hpp"

#include "kms/core.hpp"

#include <cmath>
#include <numbers>

namespace kms {

namespace {

constexpr double PI = std::numbers::pi;

// exp(i w) for complex w.
cplx eix(cplx w) { return std::exp(cplx(0.0, 1.0) * w); }

} // namespace

cplx lambda_of_mu(Dimension n, cplx mu, EigType t) {
    cplx d = dirichlet_ratio(n, mu);
    return t == EigType::Type1 ? -d : d;
}

cplx rho_of_mu(Dimension n, cplx mu, EigType t) {
    const double N = double(int(n));
    const double v = mu.imag();

    // Removable 0/0 points sit at mu = m*pi: always for type 1 with m even,
    // for m odd only when the parity of n lines up. Value there is
    // (+/-) xi_n (1 - n d^2/6 + O(d^4)), sign + for m even, - for m odd.
    long long m = llround(mu.real() / PI);
    bool odd_m = (m % 2 != 0);
    bool removable = (t == EigType::Type1) ? (!odd_m || int(n) % 2 == 1)
                                           : (odd_m && int(n) % 2 == 0);
    cplx delta = mu - double(m) * PI;
    if (removable && std::abs(delta) < 1e-6) {
        double sign = odd_m ? -1.0 : 1.0;
        return sign * xi(n) * (1.0 - N / 6.0 * delta * delta);
    }

    if ((N + 1.0) * std::abs(v) / 2.0 > 350.0) {
        // Factor out the dominant exponential from both half-angle sines /
        // cosines; the leftover correction terms are at most 1 in modulus.
        double sgn = v > 0.0 ? 1.0 : -1.0;
        cplx hi = eix(sgn * (N + 1.0) * mu); // modulus exp(-(n+1)|v|)
        cplx lo = eix(sgn * (N - 1.0) * mu); // modulus exp(-(n-1)|v|)
        cplx lead = eix(-sgn * mu);
        if (t == EigType::Type1) return lead * (1.0 - hi) / (1.0 - lo);
        return lead * (1.0 + hi) / (1.0 + lo);
    }

    cplx a = (N + 1.0) / 2.0 * mu, b = (N - 1.0) / 2.0 * mu;
    cplx num = (t == EigType::Type1) ? std::sin(a) : std::cos(a);
    cplx den = (t == EigType::Type1) ? std::sin(b) : std::cos(b);
    if (std::abs(den) <= 1e-12) throw pole_error("mode-parameter ratio has a pole at this mu");
    return num / den;
}

double double_condition_residual(Dimension n, cplx mu, cplx rho, EigType t) {
    if (rho == cplx(-1.0) || rho == cplx(0.0) || rho == cplx(1.0))
        throw excluded_rho("repeated-eigenvalue condition is not defined for rho in {-1, 0, 1}");

    const double N = double(int(n));
    const double v = mu.imag();
    cplx cp, cm; // the (n+1)/2 and (n-1)/2 half-angle factors

    if ((N + 1.0) * std::abs(v) / 2.0 > 350.0) {
        // Multiply everything by exp(-(n+1)|v|/2): with B = (n+1)|v|/2,
        // cos(w) e^{-B} = (e^{i(w+iB)} + e^{i(-w+iB)})/2 and both
        // exponentials have modulus <= exp(-|v|) regardless of sign(v).
        cplx iB(0.0, (N + 1.0) / 2.0 * std::abs(v));
        cplx wp = (N + 1.0) / 2.0 * mu, wm = (N - 1.0) / 2.0 * mu;
        if (t == EigType::Type1) {
            cp = (eix(wp + iB) + eix(-wp + iB)) / 2.0;
            cm = (eix(wm + iB) + eix(-wm + iB)) / 2.0;
        } else {
            cp = (eix(wp + iB) - eix(-wp + iB)) * cplx(0.0, -0.5);
            cm = (eix(wm + iB) - eix(-wm + iB)) * cplx(0.0, -0.5);
        }
    } else {
        cplx a = (N + 1.0) / 2.0 * mu, b = (N - 1.0) / 2.0 * mu;
        if (t == EigType::Type1) {
            cp = std::cos(a);
            cm = std::cos(b);
        } else {
            cp = std::sin(a);
            cm = std::sin(b);
        }
    }
    return std::abs(xi(n) * cp - rho * cm);
}

AsymptoticSpectrum asymptotic_spectrum(Dimension n, cplx rho) {
    AsymptoticSpectrum out;
    out.lambda0 = std::pow(rho, double(int(n) - 1));
    out.lambda1 = -out.lambda0;
    out.bulk_value = -1.0;
    out.bulk_count = int(n) - 2;
    return out;
}

EigClass classify_eigenvalue(cplx lambda, Dimension n, double tol) {
    if (tol < 0.0) throw domain_error("classification tolerance must be nonnegative");
    double a = std::abs(lambda);
    double N = double(int(n));
    if (std::abs(a - N) <= tol) return EigClass::Borderline;
    return a > N ? EigClass::Extraordinary : EigClass::Ordinary;
}

bool exceptional_rho(Dimension n, cplx rho) {
    double x = xi(n);
    return rho == cplx(-x) || rho == cplx(-1.0) || rho == cplx(0.0) || rho == cplx(1.0) ||
           rho == cplx(x);
}

} // namespace kms
