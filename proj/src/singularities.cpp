#include "kms/singularities.hpp"

#include "kms/core.hpp"
#include "kms/oracle.hpp"
#include "kms/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kms {

namespace {

constexpr double PI = std::numbers::pi;

double normalize_angle(double a) {
    while (a > PI) a -= 2.0 * PI;
    while (a <= -PI) a += 2.0 * PI;
    return a;
}

// arg(-b(u)): continuous and crossing zero exactly where the borderline
// eigenvalue passes through -n, i.e. at cusp parameters.
double cusp_phase(Dimension n, double u, EigType t) {
    cplx mb = -b_curve(n, u, t);
    return std::atan2(mb.imag(), mb.real());
}

CuspReport build_report(Dimension n, EigType t, double u0, const TracedCurve& trace) {
    CuspReport rep;
    rep.type = t;
    rep.n = n;
    rep.u0 = u0;
    auto sol = solve_v(n, u0);
    rep.rho0 = f_curve(n, u0, t);
    rep.lambda0 = b_curve(n, u0, t);
    rep.residuals.curve_derivative = std::abs(curve_derivative(n, u0, t));
    rep.residuals.double_condition =
        double_condition_residual(n, cplx(u0, sol.v), rep.rho0, t);
    auto chk = verify_double(n, rep.rho0);
    rep.residuals.oracle_double = std::max(chk.p_at, chk.dp_at);
    auto fit = fit_cardioid(n, rep, trace);
    rep.eta_abs = fit.eta_abs;
    rep.psi = fit.psi;
    rep.bisector_angle = fit.bisector_angle;
    return rep;
}

} // namespace

std::vector<CuspReport> find_cusps(Dimension n, EigType t) {
    constexpr int M = 4096;
    std::vector<double> phase(M + 1, 0.0);
    for (int j = 1; j < M; ++j) phase[size_t(j)] = cusp_phase(n, PI * j / M, t);

    std::vector<double> roots;
    for (int j = 1; j + 1 < M; ++j) {
        double a = phase[size_t(j)], b = phase[size_t(j + 1)];
        // Restrict to the half-plane Re(-b) > 0 so the sign change marks a
        // zero crossing of arg(-b), not its +-pi branch cut (b near +n).
        if (std::abs(a) >= PI / 2 || std::abs(b) >= PI / 2) continue;
        if (!((a <= 0.0 && b > 0.0) || (a >= 0.0 && b < 0.0))) continue;
        if (a == 0.0 && b == 0.0) continue;
        double lo = PI * j / M, hi = PI * (j + 1) / M;
        double flo = a;
        for (int it = 0; it < 64; ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = cusp_phase(n, mid, t);
            if ((flo <= 0.0) == (fm <= 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }

    if (roots.empty()) return {};
    TracedCurve trace = trace_curve(n, t);
    std::vector<CuspReport> out;
    for (double u0 : roots) {
        out.push_back(build_report(n, t, -u0, trace));
        out.push_back(build_report(n, t, u0, trace));
    }
    std::sort(out.begin(), out.end(),
              [](const CuspReport& a, const CuspReport& b) { return a.u0 < b.u0; });
    return out;
}

DoubleCheck verify_double(Dimension n, cplx rho0) {
    if (exceptional_rho(n, rho0))
        throw excluded_rho("repeated-eigenvalue check excludes rho in {-xi, -1, 0, 1, xi}");
    CharPoly p = char_poly(n, rho0);
    const double N = double(int(n));

    auto horner_rel = [&](const std::vector<cplx>& c) {
        cplx val{};
        double mag = 0.0;
        for (const auto& ck : c) {
            val = val * (-N) + ck;
            mag = mag * N + std::abs(ck);
        }
        return std::abs(val) / std::max(mag, 1e-300);
    };

    std::vector<cplx> dc(p.coeffs.size() - 1);
    const int deg = int(p.coeffs.size()) - 1;
    for (int k = 0; k < deg; ++k) dc[size_t(k)] = p.coeffs[size_t(k)] * double(deg - k);

    DoubleCheck out;
    out.p_at = horner_rel(p.coeffs);
    out.dp_at = horner_rel(dc);
    out.verdict = out.p_at <= 1e-6 && out.dp_at <= 1e-6;
    return out;
}

CardioidFit fit_cardioid(Dimension n, const CuspReport& cusp, const TracedCurve& trace,
                         double window) {
    std::vector<std::pair<double, double>> pts; // (r, theta) within 0.05
    for (const auto& s : trace.samples) {
        cplx d = s.rho - cusp.rho0;
        double r = std::abs(d);
        if (r < 1e-14 || r >= 0.05) continue;
        pts.push_back({r, std::atan2(d.imag(), d.real())});
    }
    if (pts.size() < 12)
        throw insufficient_samples("cardioid fit needs >= 12 trace samples near the cusp");

    std::vector<std::pair<double, double>> fitset;
    for (const auto& p : pts)
        if (p.first < window) fitset.push_back(p);
    if (fitset.size() < 12) fitset = pts;

    // Normal equations for r ~ A + B cos(theta) + C sin(theta).
    double M[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double rhs[3] = {0, 0, 0};
    for (const auto& [r, th] : fitset) {
        double row[3] = {1.0, std::cos(th), std::sin(th)};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) M[i][j] += row[i] * row[j];
            rhs[i] += row[i] * r;
        }
    }
    // Gaussian elimination with partial pivoting on the 3x3 system.
    int idx[3] = {0, 1, 2};
    for (int k = 0; k < 3; ++k) {
        int piv = k;
        for (int i = k + 1; i < 3; ++i)
            if (std::abs(M[idx[i]][k]) > std::abs(M[idx[piv]][k])) piv = i;
        std::swap(idx[k], idx[piv]);
        if (M[idx[k]][k] == 0.0) throw non_convergence("degenerate cardioid fit system");
        for (int i = k + 1; i < 3; ++i) {
            double f = M[idx[i]][k] / M[idx[k]][k];
            for (int j = k; j < 3; ++j) M[idx[i]][j] -= f * M[idx[k]][j];
            rhs[idx[i]] -= f * rhs[idx[k]];
        }
    }
    double coef[3];
    for (int k = 2; k >= 0; --k) {
        double s = rhs[idx[k]];
        for (int j = k + 1; j < 3; ++j) s -= M[idx[k]][j] * coef[j];
        coef[k] = s / M[idx[k]][k];
    }

    double a = coef[0];
    if (!(a > 0.0)) throw non_convergence("cardioid fit produced nonpositive amplitude");

    CardioidFit fit;
    fit.eta_abs = double(int(n)) * std::sqrt(2.0 / a);
    double two_psi = std::atan2(-coef[2], coef[1]);
    fit.psi = 0.5 * two_psi;
    fit.bisector_angle = normalize_angle(PI - two_psi);

    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& [r, th] : fitset) {
        double model = coef[0] + coef[1] * std::cos(th) + coef[2] * std::sin(th);
        ss_res += (r - model) * (r - model);
        ss_tot += r * r;
    }
    fit.fit_residual = std::sqrt(ss_res / std::max(ss_tot, 1e-300));
    return fit;
}

cplx small_u_series(Dimension n, double u, EigType t) {
    if (std::abs(u) > 0.3) throw domain_error("series expansion is limited to |u| <= 0.3");
    if (u < 0.0) return std::conj(small_u_series(n, -u, t));
    const double N = double(int(n));
    double u2 = u * u, u4 = u2 * u2;
    if (t == EigType::Type1) {
        cplx inner = 1.0 - cplx(0.0, N / 3.0) * u2 -
                     N * cplx((N * N + 5.0 * N + 1.0) / 90.0, -(N * N + 1.0) / 45.0) * u4;
        return xi(n) * inner;
    }
    return 1.0 - cplx(0.0, N) * u2 +
           N * cplx((N * N - 5.0 * N + 1.0) / 10.0, (N * N + 1.0) / 15.0) * u4;
}

ParabolaModel parabola_model(Dimension n, EigType t) {
    const double N = double(int(n));
    ParabolaModel m;
    m.type = t;
    m.n = n;
    if (t == EigType::Type1) {
        m.vertex = xi(n);
        m.coefficient = 10.0 * N * xi(n) / (N * N + 5.0 * N + 1.0);
        m.opening = ParabolaModel::Opening::TowardMinusX;
    } else {
        double q = N * N - 5.0 * N + 1.0; // nonzero for every integer n
        m.vertex = 1.0;
        m.coefficient = 10.0 * N / std::abs(q);
        m.opening = int(n) <= 4 ? ParabolaModel::Opening::TowardMinusX
                                : ParabolaModel::Opening::TowardPlusX;
    }
    return m;
}

double outward_bisector_angle(const CuspReport& cusp) {
    return normalize_angle(cusp.bisector_angle + PI);
}

} // namespace kms
