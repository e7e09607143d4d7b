#include "kms/classification.hpp"

#include "kms/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace kms {

namespace {

double point_segment_distance(cplx p, cplx a, cplx b) {
    cplx ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

double curve_distance(cplx p, const TracedCurve& curve) {
    const auto& s = curve.samples;
    double best = 1e300;
    for (size_t i = 0; i < s.size(); ++i) {
        cplx a = s[i].rho;
        cplx b = s[(i + 1) % s.size()].rho;
        best = std::min(best, point_segment_distance(p, a, b));
    }
    return best;
}

} // namespace

int winding_number(cplx rho, const TracedCurve& curve) {
    if (curve.samples.size() < 3) throw domain_error("winding needs at least 3 samples");
    if (curve_distance(rho, curve) < 1e-9)
        throw on_curve_error("winding number undefined this close to the curve");
    const auto& s = curve.samples;
    const double x = rho.real(), y = rho.imag();
    int w = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        cplx p = s[i].rho;
        cplx q = s[(i + 1) % s.size()].rho;
        if ((p.imag() > y) == (q.imag() > y)) continue;
        double t = (y - p.imag()) / (q.imag() - p.imag());
        double xc = p.real() + t * (q.real() - p.real());
        if (xc > x) w += (q.imag() > p.imag()) ? 1 : -1;
    }
    return w;
}

Membership membership(cplx rho, const TracedCurve& curve, double band) {
    if (curve_distance(rho, curve) <= band) return Membership::OnCurve;
    return winding_number(rho, curve) != 0 ? Membership::Interior : Membership::Exterior;
}

std::array<int, 2> count_extraordinary(cplx rho, const TracedCurve& curve1,
                                       const TracedCurve& curve2, double band) {
    std::array<int, 2> out{0, 0};
    out[0] = membership(rho, curve1, band) == Membership::Exterior ? 1 : 0;
    out[1] = membership(rho, curve2, band) == Membership::Exterior ? 1 : 0;
    return out;
}

std::array<int, 2> count_extraordinary(Dimension n, cplx rho) {
    TracedCurve c1 = trace_curve(n, EigType::Type1);
    TracedCurve c2 = trace_curve(n, EigType::Type2);
    return count_extraordinary(rho, c1, c2);
}

std::vector<Region> region_labels(Dimension n, int grid_resolution) {
    if (grid_resolution < 16) throw ambiguous_region("grid resolution below 16 cannot separate regions");
    TracedCurve c1 = trace_curve(n, EigType::Type1);
    TracedCurve c2 = trace_curve(n, EigType::Type2);

    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto* c : {&c1, &c2})
        for (const auto& s : c->samples) {
            xlo = std::min(xlo, s.rho.real());
            xhi = std::max(xhi, s.rho.real());
            ylo = std::min(ylo, s.rho.imag());
            yhi = std::max(yhi, s.rho.imag());
        }
    double mx = 0.15 * (xhi - xlo), my = 0.15 * (yhi - ylo);
    xlo -= mx;
    xhi += mx;
    ylo -= my;
    yhi += my;

    const int R = grid_resolution;
    const double dx = (xhi - xlo) / R, dy = (yhi - ylo) / R;
    std::vector<char> blocked(size_t(R) * R, 0);

    auto mark_cell = [&](double x, double y) {
        int ix = int(std::floor((x - xlo) / dx));
        int iy = int(std::floor((y - ylo) / dy));
        ix = std::clamp(ix, 0, R - 1);
        iy = std::clamp(iy, 0, R - 1);
        blocked[size_t(iy) * R + ix] = 1;
    };
    for (const auto* c : {&c1, &c2}) {
        const auto& s = c->samples;
        for (size_t i = 0; i < s.size(); ++i) {
            cplx a = s[i].rho, b = s[(i + 1) % s.size()].rho;
            double len = std::abs(b - a);
            int steps = std::max(1, int(std::ceil(len / (0.5 * std::min(dx, dy)))));
            for (int k = 0; k <= steps; ++k) {
                double t = double(k) / steps;
                mark_cell(a.real() + t * (b.real() - a.real()),
                          a.imag() + t * (b.imag() - a.imag()));
            }
        }
    }

    // Connected components of free cells (4-neighborhood).
    std::vector<int> comp(size_t(R) * R, -1);
    int ncomp = 0;
    for (int iy = 0; iy < R; ++iy)
        for (int ix = 0; ix < R; ++ix) {
            size_t id = size_t(iy) * R + ix;
            if (blocked[id] || comp[id] >= 0) continue;
            std::queue<std::pair<int, int>> q;
            q.push({ix, iy});
            comp[id] = ncomp;
            while (!q.empty()) {
                auto [cx, cy] = q.front();
                q.pop();
                const int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
                for (const auto& d : nb) {
                    int nx2 = cx + d[0], ny2 = cy + d[1];
                    if (nx2 < 0 || ny2 < 0 || nx2 >= R || ny2 >= R) continue;
                    size_t nid = size_t(ny2) * R + nx2;
                    if (blocked[nid] || comp[nid] >= 0) continue;
                    comp[nid] = ncomp;
                    q.push({nx2, ny2});
                }
            }
            ++ncomp;
        }

    // Distance (in cells) from the curve cells; the representative of each
    // component is its deepest cell, so labels are evaluated well away
    // from any curve.
    std::vector<int> dist(size_t(R) * R, -1);
    std::queue<std::pair<int, int>> q;
    for (int iy = 0; iy < R; ++iy)
        for (int ix = 0; ix < R; ++ix)
            if (blocked[size_t(iy) * R + ix]) {
                dist[size_t(iy) * R + ix] = 0;
                q.push({ix, iy});
            }
    while (!q.empty()) {
        auto [cx, cy] = q.front();
        q.pop();
        const int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& d : nb) {
            int nx2 = cx + d[0], ny2 = cy + d[1];
            if (nx2 < 0 || ny2 < 0 || nx2 >= R || ny2 >= R) continue;
            size_t nid = size_t(ny2) * R + nx2;
            if (dist[nid] >= 0) continue;
            dist[nid] = dist[size_t(cy) * R + cx] + 1;
            q.push({nx2, ny2});
        }
    }

    std::vector<int> best_cell(size_t(ncomp), -1), comp_size(size_t(ncomp), 0);
    for (int iy = 0; iy < R; ++iy)
        for (int ix = 0; ix < R; ++ix) {
            size_t id = size_t(iy) * R + ix;
            if (comp[id] < 0) continue;
            ++comp_size[size_t(comp[id])];
            int& bc = best_cell[size_t(comp[id])];
            if (bc < 0 || dist[id] > dist[size_t(bc)]) bc = int(id);
        }
    for (int c = 0; c < ncomp; ++c)
        if (comp_size[size_t(c)] < 3)
            throw ambiguous_region("a region resolved to fewer than 3 cells; raise the resolution");

    std::vector<Region> regions;
    for (int c = 0; c < ncomp; ++c) {
        int id = best_cell[size_t(c)];
        int iy = id / R, ix = id % R;
        cplx rep(xlo + (ix + 0.5) * dx, ylo + (iy + 0.5) * dy);
        regions.push_back({rep, count_extraordinary(rep, c1, c2)});
    }
    std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) {
        if (a.representative.real() != b.representative.real())
            return a.representative.real() < b.representative.real();
        return a.representative.imag() < b.representative.imag();
    });
    return regions;
}

ScanResult scan_path(Dimension n, EigType t, cplx start, cplx direction, double d_lo,
                     double d_hi, int steps) {
    if (steps < 2) throw domain_error("scan needs at least 2 steps");
    double dn = std::abs(direction);
    if (dn == 0.0) throw domain_error("scan direction must be nonzero");
    cplx unit = direction / dn;

    ScanResult res;
    for (int k = 0; k < steps; ++k) {
        double d = d_lo + (d_hi - d_lo) * double(k) / (steps - 1);
        cplx rho = start + d * unit;
        auto [skew, sym] = spectrum_split(n, rho);
        const auto& pool = (t == EigType::Type1) ? skew : sym;
        if (pool.size() < 2)
            throw domain_error("fewer than two eigenvalues of the requested type");
        std::vector<cplx> sorted(pool.begin(), pool.end());
        const double N = double(int(n));
        std::sort(sorted.begin(), sorted.end(), [&](cplx a, cplx b) {
            double da = std::abs(std::abs(a) - N), db = std::abs(std::abs(b) - N);
            if (da != db) return da < db;
            return std::abs(a) > std::abs(b);
        });
        res.distances.push_back(d);
        res.pair_magnitudes.push_back({std::abs(sorted[0]), std::abs(sorted[1])});
        res.pair_values.push_back({sorted[0], sorted[1]});
    }
    return res;
}

} // namespace kms
