#pragma once

#include "kms/types.hpp"

#include <vector>

namespace kms {

// Dense row-major n x n complex matrix, just enough for this library.
struct Matrix {
    int n = 0;
    std::vector<cplx> a;

    Matrix() = default;
    explicit Matrix(int dim) : n(dim), a(size_t(dim) * dim) {}

    cplx& at(int i, int j) { return a[size_t(i) * n + j]; }
    const cplx& at(int i, int j) const { return a[size_t(i) * n + j]; }
};

// K_n(rho) with entries rho^|j-k| (unit diagonal; rho^0 == 1 even for rho == 0).
Matrix build_kms(Dimension n, cplx rho);

// diag(1, -1, 1, ...): conjugation sends K_n(rho) to K_n(-rho).
Matrix signature_matrix(Dimension n);

// (n+1)/(n-1), the outermost real crossing of the borderline curves.
double xi(Dimension n);

// sin(n x)/sin(x) continued analytically through multiples of pi, where its
// value is ±n. Accepts complex x; the series branch engages when |sin x| is
// tiny, which forces x to sit near a real multiple of pi.
cplx dirichlet_ratio(Dimension n, cplx x);

// Determinant via partially pivoted LU on a copy.
cplx lu_det(const Matrix& m);

} // namespace kms
