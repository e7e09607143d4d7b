#include "kms/borderline.hpp"

#include "kms/core.hpp"
#include "kms/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kms {

namespace {

constexpr double PI = std::numbers::pi;

void check_u(double u) {
    if (!(u >= -PI - 1e-12 && u <= PI + 1e-12))
        throw domain_error("curve parameter u outside [-pi, pi]");
}

// f_n^(k) from a precomputed (u, v) pair, in the factored half-angle form:
// every additive group below is a product of same-sign factors, so the
// subtractions of nearly equal cosh/cos pairs never happen explicitly.
cplx f_from_uv(int n, double u, double v, EigType t) {
    const double N = n;
    double shp = std::sinh((N + 1.0) / 2.0 * v), shm = std::sinh((N - 1.0) / 2.0 * v);
    double chp = std::cosh((N + 1.0) / 2.0 * v);
    double snp = std::sin((N + 1.0) / 2.0 * u), snm = std::sin((N - 1.0) / 2.0 * u);
    double csp = std::cos((N + 1.0) / 2.0 * u), csm = std::cos((N - 1.0) / 2.0 * u);
    double cu = std::cos(u), su = std::sin(u);
    double cv = std::cosh(v), sv = std::sinh(v);

    double re, im, den;
    if (t == EigType::Type1) {
        den = 2.0 * (shm * shm + snm * snm);
        re = 2.0 * (cu * shp * shm + cv * snp * snm);
        im = -2.0 * (su * chp * shm - sv * csp * snm);
    } else {
        den = 2.0 * (shm * shm + csm * csm);
        re = 2.0 * (cu * shp * shm + cv * csp * csm);
        im = -2.0 * (su * chp * shm + sv * snp * csm);
    }
    return cplx(re / den, im / den);
}

cplx endpoint_rho(int n, double u, EigType t) {
    double x = double(n + 1) / double(n - 1);
    bool at_zero = std::abs(u) < PI / 2;
    bool even = n % 2 == 0;
    if (t == EigType::Type1) return at_zero ? cplx(x) : (even ? cplx(-1.0) : cplx(-x));
    return at_zero ? cplx(1.0) : (even ? cplx(-x) : cplx(-1.0));
}

} // namespace

double g(Dimension n, double u) {
    check_u(u);
    double N = double(int(n));
    double s = N * std::sin(u), sn = std::sin(N * u);
    double val = s * s - sn * sn;
    return val < 0.0 ? 0.0 : val;
}

BorderlineSolve solve_v(Dimension n, double u, double tol) {
    if (!(tol > 0.0)) throw domain_error("solver tolerance must be positive");
    check_u(u);
    const double gu = g(n, u);
    if (gu < 1e-20) return {n, u, 0.0, gu};

    const double N = double(int(n));
    auto lhs = [&](double v) {
        double a = std::sinh(N * v), b = std::sinh(v);
        return a * a - N * N * b * b;
    };

    double hi = std::asinh(std::sqrt(gu + N * N * std::sinh(1.0) * std::sinh(1.0))) / N + 1.0;
    for (int guard = 0; lhs(hi) < gu; ++guard) {
        if (guard > 60) throw non_convergence("borderline bracket expansion failed");
        hi *= 2.0;
    }
    double lo = 0.0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (lhs(mid) < gu ? lo : hi) = mid;
    }
    double v = 0.5 * (lo + hi);
    for (int it = 0; it < 5; ++it) {
        double fv = lhs(v) - gu;
        double dv = N * std::sinh(2.0 * N * v) - N * N * std::sinh(2.0 * v);
        if (!(dv > 0.0)) break;
        v -= fv / dv;
        if (v < 0.0) v = 0.0;
    }
    double res = std::abs(lhs(v) - gu);
    if (res > tol) throw non_convergence("borderline solve residual above tolerance");
    return {n, u, v, res};
}

BorderlineSolve solve_v(Dimension n, double u) {
    return solve_v(n, u, 1e-12 * std::max(1.0, g(n, u)));
}

cplx f_curve(Dimension n, double u, EigType t) {
    check_u(u);
    if (g(n, u) < 1e-20) return endpoint_rho(n, u, t);
    auto s = solve_v(n, u);
    return f_from_uv(n, u, s.v, t);
}

cplx b_curve(Dimension n, double u, EigType t) {
    check_u(u);
    double v = (g(n, u) < 1e-20) ? 0.0 : solve_v(n, u).v;
    return lambda_of_mu(n, cplx(u, v), t);
}

cplx curve_derivative(Dimension n, double u, EigType t) {
    check_u(u);
    const double N = double(int(n));
    if (g(n, u) < 1e-20)
        throw domain_error("curve derivative formula degenerates at u in {0, +-pi}");
    double v = solve_v(n, u).v;

    double num_v = -(std::sin(2.0 * N * u) - N * std::sin(2.0 * u));
    double den_v = std::sinh(2.0 * N * v) - N * std::sinh(2.0 * v);
    double dv_du = num_v / den_v;
    cplx dmu_du(1.0, dv_du);

    cplx mu(u, v);
    cplx num = -N * std::sin(mu) + (t == EigType::Type1 ? 1.0 : -1.0) * std::sin(N * mu);
    cplx half = (N - 1.0) / 2.0 * mu;
    cplx den = (t == EigType::Type1) ? 2.0 * std::sin(half) * std::sin(half)
                                     : 2.0 * std::cos(half) * std::cos(half);
    return num / den * dmu_du;
}

namespace {

CurveSample eval_sample(Dimension n, double u_raw, EigType t) {
    // Map parameters from the wrap-around segment back into (-pi, pi].
    double u = u_raw;
    if (u > PI) u -= 2.0 * PI;
    if (u <= -PI) u += 2.0 * PI;
    CurveSample s;
    s.type = t;
    s.u = u;
    if (g(n, u) < 1e-20) {
        s.v = 0.0;
        s.rho = endpoint_rho(n, u, t);
        s.lambda = lambda_of_mu(n, cplx(u, 0.0), t);
        s.drho_du = 0.0; // true one-sided limit
        return s;
    }
    auto sol = solve_v(n, u);
    s.v = sol.v;
    s.rho = f_from_uv(n, u, sol.v, t);
    s.lambda = lambda_of_mu(n, cplx(u, sol.v), t);
    s.drho_du = curve_derivative(n, u, t);
    return s;
}

} // namespace

TracedCurve trace_curve(Dimension n, EigType t, int base_samples, double refine_tol) {
    if (base_samples < 16) throw domain_error("trace requires base_samples >= 16");
    int N = base_samples + (base_samples % 2); // even count puts 0 and pi on the grid

    std::vector<CurveSample> base;
    base.reserve(size_t(N));
    for (int k = 1; k <= N; ++k) {
        double u = -PI + (2.0 * PI) * (double(k) / N);
        base.push_back(eval_sample(n, u, t));
    }

    if (refine_tol <= 0.0) {
        double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
        for (const auto& s : base) {
            xlo = std::min(xlo, s.rho.real());
            xhi = std::max(xhi, s.rho.real());
            ylo = std::min(ylo, s.rho.imag());
            yhi = std::max(yhi, s.rho.imag());
        }
        refine_tol = 1e-3 * std::hypot(xhi - xlo, yhi - ylo);
    }

    auto needs_split = [&](const CurveSample& a, const CurveSample& b, double du) {
        if (std::abs(b.rho - a.rho) > refine_tol) return true;
        return std::min(std::abs(a.drho_du), std::abs(b.drho_du)) < 10.0 * du;
    };
    // In-order recursive bisection; u arguments are monotone (the wrap
    // segment runs past +pi and samples are mapped back when evaluated).
    auto refine = [&](auto&& self, double ua, double ub, const CurveSample& sa,
                      const CurveSample& sb, int depth, std::vector<CurveSample>& out) -> void {
        if (depth >= 20 || !needs_split(sa, sb, ub - ua)) return;
        double um = 0.5 * (ua + ub);
        CurveSample sm = eval_sample(n, um, t);
        self(self, ua, um, sa, sm, depth + 1, out);
        out.push_back(sm);
        self(self, um, ub, sm, sb, depth + 1, out);
    };

    // Wrap segment (u = pi back around to the first grid point) first: its
    // refined samples map to the low end of (-pi, pi].
    std::vector<CurveSample> prefix;
    refine(refine, PI, base.front().u + 2.0 * PI, base.back(), base.front(), 0, prefix);

    TracedCurve curve;
    curve.type = t;
    curve.n = n;
    curve.samples = std::move(prefix);
    for (int i = 0; i + 1 < N; ++i) {
        curve.samples.push_back(base[size_t(i)]);
        refine(refine, base[size_t(i)].u, base[size_t(i + 1)].u, base[size_t(i)],
               base[size_t(i + 1)], 0, curve.samples);
    }
    curve.samples.push_back(base.back());

    double wrap_gap = std::abs(curve.samples.front().rho - curve.samples.back().rho);
    curve.closed = wrap_gap <= std::max(refine_tol, 1e-9);
    return curve;
}

InjectivityReport injectivity_report(const TracedCurve& curve, double min_param_gap) {
    if (curve.samples.size() < 64) throw domain_error("injectivity scan needs >= 64 samples");
    const double period = 2.0 * PI;
    InjectivityReport rep;
    rep.min_distance = -1.0;
    for (size_t i = 0; i < curve.samples.size(); ++i) {
        for (size_t j = i + 1; j < curve.samples.size(); ++j) {
            double du = std::abs(curve.samples[j].u - curve.samples[i].u);
            double circ = std::min(du, period - du);
            if (circ < min_param_gap) continue;
            double dist = std::abs(curve.samples[j].rho - curve.samples[i].rho);
            if (rep.min_distance < 0.0 || dist < rep.min_distance) {
                rep.min_distance = dist;
                rep.u_a = curve.samples[i].u;
                rep.u_b = curve.samples[j].u;
            }
        }
    }
    if (rep.min_distance < 0.0) throw empty_pair_error("no sample pair satisfies the parameter gap");
    return rep;
}

} // namespace kms
