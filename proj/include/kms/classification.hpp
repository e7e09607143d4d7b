#pragma once

#include "kms/borderline.hpp"
#include "kms/types.hpp"

#include <array>
#include <vector>

namespace kms {

enum class Membership { Interior, OnCurve, Exterior };

// Signed winding of the closed traced polyline around rho. The caller is
// expected to have ruled out OnCurve: within 1e-9 of a segment the count
// is ill-defined and on_curve_error is thrown.
int winding_number(cplx rho, const TracedCurve& curve);

// Interior / OnCurve / Exterior with an explicit on-curve band (distance
// to the closest polyline segment).
Membership membership(cplx rho, const TracedCurve& curve, double band = 1e-6);

// Number of extraordinary eigenvalues per type, [j1, j2]: 1 outside the
// respective curve, 0 inside or on it.
std::array<int, 2> count_extraordinary(Dimension n, cplx rho);
std::array<int, 2> count_extraordinary(cplx rho, const TracedCurve& curve1,
                                       const TracedCurve& curve2, double band = 1e-6);

struct Region {
    cplx representative;
    std::array<int, 2> label;
};

// Flood-partition a padded bounding box of both curves into connected
// components off the curves; one representative (deep interior point) and
// label per region. grid_resolution is the cell count per axis.
std::vector<Region> region_labels(Dimension n, int grid_resolution);

struct ScanResult {
    std::vector<double> distances;
    std::vector<std::array<double, 2>> pair_magnitudes;
    std::vector<std::array<cplx, 2>> pair_values;
};

// March rho = start + d * direction over [d_lo, d_hi] and record, at each
// step, the two type-t eigenvalues whose magnitudes sit closest to n
// (ties: larger magnitude first).
ScanResult scan_path(Dimension n, EigType t, cplx start, cplx direction, double d_lo,
                     double d_hi, int steps);

} // namespace kms
