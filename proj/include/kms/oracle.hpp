#pragma once

#include "kms/core.hpp"
#include "kms/types.hpp"

#include <array>
#include <utility>
#include <vector>

namespace kms {

// Monic characteristic polynomial, coefficients in descending degree order
// (coeffs[0] == 1, coeffs[n] == det up to sign convention det(lambda I - K)).
struct CharPoly {
    int n = 0;
    cplx rho;
    std::vector<cplx> coeffs;
};

struct SpectrumEntry {
    cplx value;
    int multiplicity = 1;
    EigType type = EigType::Type2;
    EigClass cls = EigClass::Ordinary;
};

struct SpectrumReport {
    int n = 0;
    cplx rho;
    std::vector<SpectrumEntry> entries;
};

// All eigenvalues of a dense complex matrix (with multiplicity, unordered
// beyond a deterministic internal order). Throws non_convergence if the
// root iteration stalls.
std::vector<cplx> dense_eigs(const Matrix& m);

// Eigenvalues of K_n(rho) split by symmetry class of the eigenvector:
// first = skew-symmetric class, second = symmetric class. Computed from
// explicit orthonormal bases of the two invariant subspaces, so the two
// lists are independent of the full-matrix path.
std::pair<std::vector<cplx>, std::vector<cplx>> spectrum_split(Dimension n, cplx rho);

// Characteristic polynomial reconstructed from the computed spectrum.
// Throws overflow_limit if coefficient expansion leaves double range.
CharPoly char_poly(Dimension n, cplx rho);

// Roots of an arbitrary polynomial (descending coefficients) grouped into
// clusters of radius 1e-6*(1+|z|); returns (representative, multiplicity).
std::vector<std::pair<cplx, int>> poly_roots(const std::vector<cplx>& coeffs);
std::vector<std::pair<cplx, int>> poly_roots(const CharPoly& p);

// Full typed spectrum: eigenvalues clustered, matched against the two
// symmetry blocks for type assignment, classified ordinary / borderline /
// extraordinary with |lambda| vs n band of half-width `band` (absolute).
SpectrumReport full_spectrum(Dimension n, cplx rho, double band);
SpectrumReport full_spectrum(Dimension n, cplx rho); // band = 1e-9 * n

} // namespace kms
