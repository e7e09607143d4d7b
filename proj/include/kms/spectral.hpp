#pragma once

#include "kms/types.hpp"

namespace kms {

// Leading-order spectrum for large |rho|: one eigenvalue near rho^{n-1},
// one near -rho^{n-1}, and n-2 bulk eigenvalues near -1.
struct AsymptoticSpectrum {
    cplx lambda0;
    cplx lambda1;
    cplx bulk_value;
    int bulk_count = 0;
};

// lambda as a function of the mode parameter mu: -sin(n mu)/sin(mu) for
// type 1, +sin(n mu)/sin(mu) for type 2, with removable points filled.
cplx lambda_of_mu(Dimension n, cplx mu, EigType t);

// rho as a function of mu: sin((n+1)mu/2)/sin((n-1)mu/2) for type 1 and the
// cosine analogue for type 2. Removable 0/0 points (mu near multiples of
// pi, parity permitting) are filled by series; non-removable vanishing
// denominators throw pole_error. Very large |Im mu| switches to rescaled
// exponential forms so nothing overflows before the final division.
cplx rho_of_mu(Dimension n, cplx mu, EigType t);

// Residual of the repeated-eigenvalue condition
//   xi_n * sin/cos((n+1)mu/2) = rho * sin/cos((n-1)mu/2)
// (cos for type 1, sin for type 2); zero exactly when (mu, rho) marks a
// repeated type-t eigenvalue. rho in {-1, 0, 1} is excluded by definition.
// Beyond the overflow horizon (|Im mu|*(n+1)/2 > 350) the value returned
// carries a positive damping factor exp(-(n+1)|Im mu|/2); the zero set is
// unchanged.
double double_condition_residual(Dimension n, cplx mu, cplx rho, EigType t);

// |rho| > 1 is the intended regime; accuracy degrades gracefully below.
AsymptoticSpectrum asymptotic_spectrum(Dimension n, cplx rho);

EigClass classify_eigenvalue(cplx lambda, Dimension n, double tol);

// The five parameter values excluded from the repeated-eigenvalue theory:
// {-xi_n, -1, 0, 1, xi_n}, compared exactly.
bool exceptional_rho(Dimension n, cplx rho);

} // namespace kms
