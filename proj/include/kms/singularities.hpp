#pragma once

#include "kms/borderline.hpp"
#include "kms/types.hpp"

#include <vector>

namespace kms {

struct CuspResiduals {
    double curve_derivative = 0.0;  // |d rho/du| at u0
    double double_condition = 0.0;  // repeated-eigenvalue condition residual
    double oracle_double = 0.0;     // max of |p(-n)|, |p'(-n)| relative scales
};

struct CuspReport {
    EigType type = EigType::Type1;
    int n = 0;
    double u0 = 0.0;
    cplx rho0;
    cplx lambda0; // = -n up to solver noise
    double eta_abs = 0.0;
    double psi = 0.0;
    double bisector_angle = 0.0; // pi - 2 psi, the ray tangent to both arcs
    CuspResiduals residuals;
};

struct DoubleCheck {
    double p_at = 0.0;   // |p(-n)| over the Horner magnitude of p at -n
    double dp_at = 0.0;  // same for p'
    bool verdict = false;
};

struct CardioidFit {
    double eta_abs = 0.0;
    double psi = 0.0;
    double bisector_angle = 0.0;
    double fit_residual = 0.0;
};

struct ParabolaModel {
    EigType type = EigType::Type1;
    int n = 0;
    double vertex = 0.0;      // xi_n (type 1) or 1 (type 2)
    double coefficient = 0.0; // y^2 = coefficient * |vertex - x|
    enum class Opening { TowardMinusX, TowardPlusX } opening = Opening::TowardMinusX;
};

// Locate every cusp of the type-t borderline curve: scan the phase of
// b(u) over (0, pi) for sign changes of arg(-b) (the eigenvalue crossing
// -n), refine by bisection, and emit reports for u0 and its conjugate
// partner -u0. Each report carries an independent cardioid fit and the
// three residuals.
std::vector<CuspReport> find_cusps(Dimension n, EigType t);

// Relative magnitudes of the characteristic polynomial and its derivative
// at lambda = -n; both small iff -n is a repeated eigenvalue of K_n(rho0).
DoubleCheck verify_double(Dimension n, cplx rho0);

// Least-squares cardioid r = a(1 + cos(theta + 2 psi)) through trace
// samples within `window` of the cusp (falling back to the 0.05
// neighborhood when the tighter window is too sparse).
CardioidFit fit_cardioid(Dimension n, const CuspReport& cusp, const TracedCurve& trace,
                         double window = 0.03);

// Truncated expansion of f_n^(k)(u) about u = 0, O(u^6) error.
cplx small_u_series(Dimension n, double u, EigType t);

ParabolaModel parabola_model(Dimension n, EigType t);

// The ray from rho0 pointing away from the curve's notch — the direction
// in which the two borderline eigenvalues split across |lambda| = n.
// Opposite of bisector_angle, normalized to (-pi, pi].
double outward_bisector_angle(const CuspReport& cusp);

} // namespace kms
