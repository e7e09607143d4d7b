#pragma once

#include "kms/types.hpp"

#include <vector>

namespace kms {

// Solution record of sinh^2(n v) - n^2 sinh^2(v) = g_n(u), v >= 0.
struct BorderlineSolve {
    int n = 0;
    double u = 0.0;
    double v = 0.0;
    double residual = 0.0;
};

struct CurveSample {
    EigType type = EigType::Type1;
    double u = 0.0;
    double v = 0.0;
    cplx rho;      // f_n^(k)(u)
    cplx lambda;   // b_n^(k)(u), |lambda| = n
    cplx drho_du;  // limit value 0 at u in {0, pi}
};

struct TracedCurve {
    EigType type = EigType::Type1;
    int n = 0;
    std::vector<CurveSample> samples; // ordered by u over (-pi, pi]
    bool closed = false;
};

struct InjectivityReport {
    double min_distance = 0.0;
    double u_a = 0.0;
    double u_b = 0.0;
};

// g_n(u) = n^2 sin^2(u) - sin^2(nu) >= 0.
double g(Dimension n, double u);

// Unique nonnegative root of sinh^2(nv) - n^2 sinh^2(v) = g_n(u);
// bracketed bisection plus Newton polish. Default tolerance 1e-12*max(1, g).
BorderlineSolve solve_v(Dimension n, double u, double tol);
BorderlineSolve solve_v(Dimension n, double u);

// Borderline curve point rho = f_n^(k)(u) and eigenvalue b_n^(k)(u).
cplx f_curve(Dimension n, double u, EigType t);
cplx b_curve(Dimension n, double u, EigType t);

// d(rho)/du on (-pi, 0) u (0, pi); throws domain_error at u in {0, +-pi}
// where the one-sided limits are 0 but the lemma's formula degenerates.
cplx curve_derivative(Dimension n, double u, EigType t);

// Uniform grid over (-pi, pi] (hits 0 and pi exactly) plus adaptive
// refinement where the chord exceeds refine_tol or |drho/du| collapses
// (cusp neighborhoods). refine_tol <= 0 selects 1e-3 of the base-grid
// bounding-box diagonal.
TracedCurve trace_curve(Dimension n, EigType t, int base_samples = 2048, double refine_tol = -1.0);

// Minimum |rho(u) - rho(u')| over sample pairs at circular parameter
// distance >= min_param_gap. Evidence for the simple-curve conjecture,
// never a theorem.
InjectivityReport injectivity_report(const TracedCurve& curve, double min_param_gap);

} // namespace kms
