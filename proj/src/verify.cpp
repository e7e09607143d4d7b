#include "kms/verify.hpp"

#include "kms/borderline.hpp"
#include "kms/classification.hpp"
#include "kms/cli.hpp"
#include "kms/core.hpp"
#include "kms/oracle.hpp"
#include "kms/singularities.hpp"
#include "kms/spectral.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace kms {

namespace {

constexpr double PI = std::numbers::pi;

template <class... Ts>
std::string failmsg(Ts&&... parts) {
    std::ostringstream os;
    os.precision(17);
    (os << ... << parts);
    return os.str();
}

struct Suite {
    const char* prefix;
    std::vector<CheckResult>& out;

    void run(const char* name, const std::function<std::string()>& body) {
        CheckResult r;
        r.name = std::string(prefix) + "." + name;
        try {
            r.detail = body();
            r.pass = r.detail.empty();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = failmsg("exception: ", e.what());
        }
        out.push_back(std::move(r));
    }
};

cplx rand_disk(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> d(-radius, radius);
    for (;;) {
        cplx z(d(rng), d(rng));
        if (std::abs(z) <= radius) return z;
    }
}

// Greedy nearest matching of two complex multisets, tolerance rel*(1+|w|).
std::string match_multisets(const std::vector<cplx>& want, std::vector<cplx> got, double rel) {
    if (want.size() != got.size())
        return failmsg("size mismatch: ", want.size(), " vs ", got.size());
    for (cplx w : want) {
        size_t best = got.size();
        double bd = 1e300;
        for (size_t i = 0; i < got.size(); ++i) {
            double d = std::abs(got[i] - w);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        if (best == got.size() || bd > rel * (1.0 + std::abs(w)))
            return failmsg("unmatched value ", format_complex(w), " (off by ", bd, ")");
        got.erase(got.begin() + ptrdiff_t(best));
    }
    return {};
}

std::vector<cplx> conj_all(std::vector<cplx> v) {
    for (auto& z : v) z = std::conj(z);
    return v;
}

// ---------------------------------------------------------------- core ----

void core_suite(std::vector<CheckResult>& out) {
    Suite s{"core", out};

    s.run("dirichlet-bound", []() -> std::string {
        std::mt19937_64 rng(101);
        std::uniform_real_distribution<double> ux(-10.0, 10.0);
        std::uniform_int_distribution<int> un(2, 12);
        for (int k = 0; k < 10000; ++k) {
            double x = ux(rng);
            int n = un(rng);
            double r = dirichlet_ratio(n, cplx(x, 0.0)).real();
            if (std::abs(r) > n + 1e-12)
                return failmsg("ratio ", r, " exceeds bound ", n, " at x=", x);
            if (std::abs(r) >= n - 1e-9) {
                double d = std::abs(x - std::round(x / PI) * PI);
                if (d >= 1e-4)
                    return failmsg("near-extremal ratio away from pi-multiples, x=", x);
            }
        }
        return {};
    });

    s.run("sinh-ratio-bound", []() -> std::string {
        std::mt19937_64 rng(103);
        std::uniform_real_distribution<double> uv(1e-6, 5.0);
        std::uniform_int_distribution<int> un(2, 12);
        for (int k = 0; k < 5000; ++k) {
            double v = uv(rng);
            int n = un(rng);
            if (std::sinh(n * v) < n * std::sinh(v) * (1.0 - 1e-12))
                return failmsg("sinh(nv) < n sinh(v) at n=", n, " v=", v);
        }
        return {};
    });

    s.run("det-identity", []() -> std::string {
        std::mt19937_64 rng(107);
        std::uniform_int_distribution<int> un(2, 10);
        for (int k = 0; k < 50; ++k) {
            cplx rho;
            do {
                rho = rand_disk(rng, 2.5);
            } while (std::abs(rho - 1.0) < 0.05 || std::abs(rho + 1.0) < 0.05);
            int n = un(rng);
            cplx det = lu_det(build_kms(n, rho));
            cplx ref = std::pow(cplx(1.0) - rho * rho, n - 1);
            if (std::abs(det - ref) > 1e-8 * std::abs(ref))
                return failmsg("det mismatch at n=", n, " rho=", format_complex(rho), ": ",
                               format_complex(det), " vs ", format_complex(ref));
        }
        return {};
    });

    s.run("signature-similarity", []() -> std::string {
        std::mt19937_64 rng(109);
        for (int n : {2, 5, 8}) {
            cplx rho = rand_disk(rng, 2.0);
            Matrix k = build_kms(n, rho);
            Matrix sgn = signature_matrix(n);
            Matrix lhs(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    lhs.at(i, j) = sgn.at(i, i) * k.at(i, j) * sgn.at(j, j);
            Matrix rhs = build_kms(n, -rho);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (lhs.at(i, j) != rhs.at(i, j))
                        return failmsg("entry (", i, ",", j, ") differs at n=", n);
        }
        return {};
    });

    s.run("spectrum-maps", []() -> std::string {
        std::mt19937_64 rng(113);
        for (int n : {3, 6}) {
            for (int k = 0; k < 5; ++k) {
                cplx rho = rand_disk(rng, 2.0);
                auto base = dense_eigs(build_kms(n, rho));
                auto cj = dense_eigs(build_kms(n, std::conj(rho)));
                if (auto m = match_multisets(conj_all(base), cj, 1e-9); !m.empty())
                    return "conjugation map: " + m;
                auto fl = dense_eigs(build_kms(n, -rho));
                if (auto m = match_multisets(base, fl, 1e-9); !m.empty())
                    return "sign-flip map: " + m;
            }
        }
        return {};
    });

    s.run("format-roundtrip", []() -> std::string {
        std::mt19937_64 rng(127);
        std::uniform_real_distribution<double> um(-1.0, 1.0);
        std::uniform_int_distribution<int> ue(-20, 20);
        auto draw = [&] { return um(rng) * std::pow(10.0, ue(rng)); };
        std::vector<cplx> cases = {cplx(0, 0), cplx(1, 0),  cplx(-1, 0), cplx(0, 1),
                                   cplx(0, -1), cplx(-0.0, 0.0)};
        for (int k = 0; k < 2000; ++k) {
            switch (k % 4) {
            case 0: cases.assign(1, cplx(draw(), draw())); break;
            case 1: cases.assign(1, cplx(draw(), 0.0)); break;
            case 2: cases.assign(1, cplx(0.0, draw())); break;
            default: cases.assign(1, cplx(draw(), 1.0)); break;
            }
            for (cplx z : cases) {
                std::string txt = format_complex(z);
                cplx back = parse_complex(txt);
                if (back != z)
                    return failmsg("complex round-trip broke: ", txt);
                std::string dtxt = format_double(z.real());
                double d = 0;
                auto [p, ec] = std::from_chars(dtxt.data(), dtxt.data() + dtxt.size(), d);
                if (ec != std::errc() || p != dtxt.data() + dtxt.size() || d != z.real())
                    return failmsg("double round-trip broke: ", dtxt);
            }
        }
        return {};
    });

    s.run("mu-evenness", []() -> std::string {
        std::mt19937_64 rng(131);
        std::uniform_real_distribution<double> ur(-3.0, 3.0);
        std::uniform_real_distribution<double> ui(0.01, 2.0);
        std::uniform_int_distribution<int> un(2, 10);
        std::uniform_int_distribution<int> usn(0, 1);
        for (int k = 0; k < 500; ++k) {
            int n = un(rng);
            cplx mu(ur(rng), (usn(rng) ? 1.0 : -1.0) * ui(rng));
            if (k % 5 == 0) mu = cplx(mu.real(), 0.0); // some real draws
            for (EigType t : {EigType::Type1, EigType::Type2}) {
                cplx a, b;
                try {
                    a = rho_of_mu(n, mu, t);
                    b = rho_of_mu(n, -mu, t);
                } catch (const pole_error&) {
                    continue;
                }
                if (std::abs(a - b) > 1e-13 * (1.0 + std::abs(a)))
                    return failmsg("rho not even at n=", n, " mu=", format_complex(mu));
                cplx la = lambda_of_mu(n, mu, t);
                cplx lb = lambda_of_mu(n, -mu, t);
                if (std::abs(la - lb) > 1e-13 * (1.0 + std::abs(la)))
                    return failmsg("lambda not even at n=", n, " mu=", format_complex(mu));
            }
        }
        return {};
    });

    s.run("asymptotic-regime", []() -> std::string {
        std::mt19937_64 rng(137);
        std::uniform_real_distribution<double> uth(0.0, 2.0 * PI);
        for (int n : {4, 6, 7}) {
            for (int k = 0; k < 8; ++k) {
                cplx rho = std::polar(8.0, uth(rng));
                AsymptoticSpectrum model = asymptotic_spectrum(n, rho);
                auto ev = dense_eigs(build_kms(n, rho));
                std::sort(ev.begin(), ev.end(),
                          [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
                double t = std::abs(model.lambda0);
                double direct = std::abs(ev[0] - model.lambda0) + std::abs(ev[1] - model.lambda1);
                double crossed = std::abs(ev[0] - model.lambda1) + std::abs(ev[1] - model.lambda0);
                if (std::min(direct, crossed) / t > 0.1)
                    return failmsg("extreme pair off at n=", n, " rho=", format_complex(rho));
                if (model.bulk_count != n - 2)
                    return failmsg("bulk count ", model.bulk_count, " at n=", n);
                for (size_t i = 2; i < ev.size(); ++i)
                    if (std::abs(ev[i] - model.bulk_value) > 0.5)
                        return failmsg("bulk eigenvalue far from ", format_complex(model.bulk_value),
                                       ": ", format_complex(ev[i]));
            }
        }
        return {};
    });
}

// -------------------------------------------------------------- curves ----

void curves_suite(std::vector<CheckResult>& out) {
    Suite s{"curves", out};

    s.run("v-symmetry", []() -> std::string {
        for (int n : {3, 6, 9})
            for (int k = 1; k < 40; ++k) {
                double u = 0.05 + (PI - 0.1) * k / 40.0;
                double va = solve_v(n, u).v;
                double vb = solve_v(n, -u).v;
                double vc = solve_v(n, PI - u).v;
                if (std::abs(va - vb) > 1e-12 * (1.0 + va) ||
                    std::abs(va - vc) > 1e-12 * (1.0 + va))
                    return failmsg("v asymmetry at n=", n, " u=", u);
            }
        return {};
    });

    s.run("conjugate-symmetry", []() -> std::string {
        for (int n : {4, 7})
            for (EigType t : {EigType::Type1, EigType::Type2})
                for (int k = 1; k < 30; ++k) {
                    double u = 0.1 + (PI - 0.2) * k / 30.0;
                    cplx f = f_curve(n, u, t);
                    cplx fm = f_curve(n, -u, t);
                    if (std::abs(fm - std::conj(f)) > 1e-12 * (1.0 + std::abs(f)))
                        return failmsg("rho conjugate symmetry broke at n=", n, " u=", u);
                    cplx b = b_curve(n, u, t);
                    cplx bm = b_curve(n, -u, t);
                    if (std::abs(bm - std::conj(b)) > 1e-12 * (1.0 + std::abs(b)))
                        return failmsg("lambda conjugate symmetry broke at n=", n, " u=", u);
                }
        return {};
    });

    s.run("even-mirror", []() -> std::string {
        for (int n : {4, 6, 8})
            for (int k = 1; k < 25; ++k) {
                double u = 0.05 + (PI - 0.1) * k / 25.0;
                cplx a = f_curve(n, PI - u, EigType::Type1);
                cplx b = f_curve(n, u, EigType::Type2);
                if (std::abs(a + std::conj(b)) > 1e-11)
                    return failmsg("mirror identity broke at n=", n, " u=", u);
            }
        return {};
    });

    s.run("matches-ratio-form", []() -> std::string {
        for (int n : {3, 5, 8})
            for (EigType t : {EigType::Type1, EigType::Type2})
                for (int k = 0; k <= 50; ++k) {
                    double u = -PI + 2.0 * PI * k / 50.0;
                    double v = solve_v(n, u).v;
                    cplx direct = rho_of_mu(n, cplx(u, v), t);
                    cplx fc = f_curve(n, u, t);
                    if (std::abs(direct - fc) > 1e-11 * (1.0 + std::abs(fc)))
                        return failmsg("factored form deviates at n=", n, " u=", u,
                                       " type=", type_index(t) + 1);
                }
        return {};
    });

    s.run("unit-magnitude-lambda", []() -> std::string {
        for (int n : {3, 6, 10})
            for (EigType t : {EigType::Type1, EigType::Type2})
                for (int k = 0; k <= 60; ++k) {
                    double u = -PI + 2.0 * PI * k / 60.0;
                    double m = std::abs(b_curve(n, u, t));
                    if (std::abs(m - n) > 1e-9 * n)
                        return failmsg("|lambda| = ", m, " != ", n, " at u=", u);
                }
        return {};
    });

    s.run("oracle-on-curve", []() -> std::string {
        std::mt19937_64 rng(211);
        std::uniform_real_distribution<double> uu(-PI, PI);
        for (int n = 3; n <= 10; ++n)
            for (EigType t : {EigType::Type1, EigType::Type2})
                for (int k = 0; k < 50; ++k) {
                    double u = uu(rng);
                    cplx rho = f_curve(n, u, t);
                    cplx lam = b_curve(n, u, t);
                    auto [skew, symm] = spectrum_split(n, rho);
                    const auto& block = (t == EigType::Type1) ? skew : symm;
                    double best = 1e300;
                    for (cplx z : block) best = std::min(best, std::abs(z - lam));
                    if (best > 1e-7 * n)
                        return failmsg("curve eigenvalue missing from block: n=", n, " u=", u,
                                       " type=", type_index(t) + 1, " gap=", best);
                }
        return {};
    });

    s.run("axis-crossings", []() -> std::string {
        for (int n = 2; n <= 12; ++n)
            for (EigType t : {EigType::Type1, EigType::Type2}) {
                TracedCurve tc = trace_curve(n, t, 512);
                double cell = 2.0 * PI / 512.0;
                bool even = n % 2 == 0;
                double at0 = (t == EigType::Type1) ? xi(n) : 1.0;
                double atpi = (t == EigType::Type1) ? (even ? -1.0 : -xi(n))
                                                    : (even ? -xi(n) : -1.0);
                bool saw0 = false, sawpi = false;
                for (const auto& smp : tc.samples) {
                    if (std::abs(smp.rho.imag()) < 1e-9) {
                        double gap = std::min(std::abs(smp.u), PI - std::abs(smp.u));
                        if (gap > 2.0 * cell)
                            return failmsg("stray real-axis point at n=", n, " u=", smp.u,
                                           " rho=", format_complex(smp.rho));
                    }
                    if (smp.u == 0.0) {
                        saw0 = true;
                        if (std::abs(smp.rho - at0) > 1e-10)
                            return failmsg("crossing at u=0 is ", format_complex(smp.rho),
                                           ", expected ", at0, " (n=", n, ")");
                    }
                    if (smp.u == PI) {
                        sawpi = true;
                        if (std::abs(smp.rho - atpi) > 1e-10)
                            return failmsg("crossing at u=pi is ", format_complex(smp.rho),
                                           ", expected ", atpi, " (n=", n, ")");
                    }
                }
                if (!saw0 || !sawpi) return failmsg("grid missed an endpoint at n=", n);
            }
        return {};
    });

    s.run("solver-residual", []() -> std::string {
        std::mt19937_64 rng(223);
        std::uniform_real_distribution<double> uu(0.01, PI - 0.01);
        std::uniform_int_distribution<int> un(2, 12);
        for (int k = 0; k < 200; ++k) {
            int n = un(rng);
            double u = uu(rng);
            BorderlineSolve sol = solve_v(n, u);
            if (sol.v < 0.0) return failmsg("negative v at n=", n, " u=", u);
            double gg = g(n, u);
            double res = std::abs(std::pow(std::sinh(n * sol.v), 2) -
                                  double(n) * n * std::pow(std::sinh(sol.v), 2) - gg);
            if (res > 1e-12 * std::max(1.0, gg) * (1.0 + 1e-9))
                return failmsg("residual ", res, " too large at n=", n, " u=", u);
        }
        return {};
    });

    s.run("derivative-matches-fd", []() -> std::string {
        const double h = 1e-6;
        for (int n : {5, 7, 10})
            for (EigType t : {EigType::Type1, EigType::Type2})
                for (double u : {0.3, 0.5, 1.2, 2.0, 2.8}) {
                    cplx d = curve_derivative(n, u, t);
                    cplx fd = (f_curve(n, u + h, t) - f_curve(n, u - h, t)) / (2.0 * h);
                    if (std::abs(d - fd) > 1e-6 * (1.0 + std::abs(d)))
                        return failmsg("derivative mismatch at n=", n, " u=", u,
                                       " type=", type_index(t) + 1);
                }
        return {};
    });

    s.run("injectivity-evidence", []() -> std::string {
        for (int n : {5, 8})
            for (EigType t : {EigType::Type1, EigType::Type2}) {
                TracedCurve tc = trace_curve(n, t, 1024);
                InjectivityReport rep = injectivity_report(tc, 0.5);
                if (rep.min_distance <= 1e-3)
                    return failmsg("near self-intersection at n=", n, ": |rho(", rep.u_a,
                                   ") - rho(", rep.u_b, ")| = ", rep.min_distance);
            }
        return {};
    });
}

// --------------------------------------------------------------- cusps ----

void cusps_suite(std::vector<CheckResult>& out) {
    Suite s{"cusps", out};

    s.run("forward", []() -> std::string {
        for (int n = 3; n <= 10; ++n)
            for (EigType t : {EigType::Type1, EigType::Type2}) {
                auto cusps = find_cusps(n, t);
                size_t expect = 2 * size_t(t == EigType::Type1 ? (n - 2) / 2 : (n - 1) / 2);
                if (cusps.size() != expect)
                    return failmsg("cusp count ", cusps.size(), " != ", expect, " at n=", n,
                                   " type=", type_index(t) + 1);
                for (const auto& c : cusps) {
                    if (c.residuals.curve_derivative >= 1e-6)
                        return failmsg("derivative residual ", c.residuals.curve_derivative,
                                       " at n=", n, " u0=", c.u0);
                    if (c.residuals.double_condition >= 1e-6)
                        return failmsg("pair condition residual ", c.residuals.double_condition,
                                       " at n=", n, " u0=", c.u0);
                    if (std::abs(c.lambda0 + double(n)) > 1e-8 * n)
                        return failmsg("lambda0 = ", format_complex(c.lambda0), " != ", -n);
                    DoubleCheck dc = verify_double(n, c.rho0);
                    if (!dc.verdict)
                        return failmsg("oracle rejects repeated eigenvalue at n=", n,
                                       " rho0=", format_complex(c.rho0), " (", dc.p_at, ", ",
                                       dc.dp_at, ")");
                }
            }
        return {};
    });

    s.run("converse", []() -> std::string {
        for (int n = 3; n <= 10; ++n)
            for (EigType t : {EigType::Type1, EigType::Type2}) {
                auto cusps = find_cusps(n, t);
                auto resid = [&](double u) {
                    double v = solve_v(n, u).v;
                    return double_condition_residual(n, cplx(u, v), f_curve(n, u, t), t);
                };
                const int M = 2048;
                std::vector<double> us(M - 1), rs(M - 1);
                for (int j = 1; j < M; ++j) {
                    us[j - 1] = PI * j / M;
                    rs[j - 1] = resid(us[j - 1]);
                }
                for (int j = 1; j + 1 < M - 1; ++j) {
                    if (!(rs[j] <= rs[j - 1] && rs[j] <= rs[j + 1] && rs[j] < 1e-2)) continue;
                    double a = us[j - 1], b = us[j + 1];
                    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
                    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
                    double f1v = resid(x1), f2v = resid(x2);
                    for (int it = 0; it < 100; ++it) {
                        if (f1v < f2v) {
                            b = x2; x2 = x1; f2v = f1v;
                            x1 = b - gr * (b - a); f1v = resid(x1);
                        } else {
                            a = x1; x1 = x2; f1v = f2v;
                            x2 = a + gr * (b - a); f2v = resid(x2);
                        }
                    }
                    double ustar = 0.5 * (a + b);
                    if (resid(ustar) >= 1e-6) continue;
                    bool matched = false;
                    for (const auto& c : cusps)
                        if (std::abs(c.u0 - ustar) < 1e-6) matched = true;
                    if (!matched)
                        return failmsg("pair-condition zero at u=", ustar, " (n=", n,
                                       " type=", type_index(t) + 1, ") has no reported cusp");
                }
            }
        return {};
    });

    s.run("imaginary-axis-counts", []() -> std::string {
        auto count_axis = [](int n, EigType t) {
            int c = 0;
            for (const auto& r : find_cusps(n, t))
                if (std::abs(r.rho0.real()) <= 1e-8) ++c;
            return c;
        };
        for (int n : {5, 9, 13})
            if (count_axis(n, EigType::Type1) != 2)
                return failmsg("type-1 imaginary-axis cusp count wrong at n=", n);
        for (int n : {3, 7, 11})
            if (count_axis(n, EigType::Type2) != 2)
                return failmsg("type-2 imaginary-axis cusp count wrong at n=", n);
        return {};
    });

    s.run("never-real", []() -> std::string {
        for (int n = 3; n <= 10; ++n)
            for (EigType t : {EigType::Type1, EigType::Type2})
                for (const auto& c : find_cusps(n, t))
                    if (std::abs(c.rho0.imag()) <= 1e-6)
                        return failmsg("cusp on real axis at n=", n,
                                       " rho0=", format_complex(c.rho0));
        return {};
    });

    s.run("cardioid-sanity", []() -> std::string {
        auto cusps = find_cusps(5, EigType::Type1);
        if (cusps.size() != 2) return failmsg("expected the two n=5 cusps, got ", cusps.size());
        const CuspReport* up = nullptr;
        const CuspReport* dn = nullptr;
        for (const auto& c : cusps) (c.rho0.imag() > 0 ? up : dn) = &c;
        if (!up || !dn) return failmsg("n=5 cusps not a conjugate pair");
        for (const CuspReport* c : {up, dn})
            if (std::abs(std::abs(c->bisector_angle) - PI / 2) > 1e-3)
                return failmsg("bisector angle ", c->bisector_angle, " not at +-pi/2");
        double dsum = std::remainder(up->psi + dn->psi, PI);
        if (std::abs(dsum) > 2e-3)
            return failmsg("psi pair does not negate mod pi: ", up->psi, ", ", dn->psi);
        TracedCurve tc = trace_curve(5, EigType::Type1);
        CardioidFit f05 = fit_cardioid(5, *up, tc, 0.05);
        CardioidFit f03 = fit_cardioid(5, *up, tc, 0.03);
        CardioidFit f01 = fit_cardioid(5, *up, tc, 0.01);
        if (f05.fit_residual >= 0.05)
            return failmsg("wide-window fit residual ", f05.fit_residual);
        if (!(f01.fit_residual <= f03.fit_residual * 1.05 + 1e-12 &&
              f03.fit_residual <= f05.fit_residual * 1.05 + 1e-12 &&
              f01.fit_residual < 0.9 * f05.fit_residual + 1e-12))
            return failmsg("residual not improving with window: ", f05.fit_residual, " -> ",
                           f03.fit_residual, " -> ", f01.fit_residual);
        return {};
    });

    s.run("series-order", []() -> std::string {
        for (EigType t : {EigType::Type1, EigType::Type2}) {
            auto err = [&](double u) {
                return std::abs(f_curve(7, u, t) - small_u_series(7, u, t));
            };
            double r1 = err(0.2) / err(0.1);
            double r2 = err(0.1) / err(0.05);
            if (r1 < 32.0 || r2 < 32.0)
                return failmsg("series error ratios ", r1, ", ", r2,
                               " below sixth-order expectation (type ", type_index(t) + 1, ")");
        }
        return {};
    });

    s.run("parabola-window", []() -> std::string {
        TracedCurve tc = trace_curve(7, EigType::Type1);
        ParabolaModel pm = parabola_model(7, EigType::Type1);
        int used = 0;
        for (const auto& smp : tc.samples) {
            double au = std::abs(smp.u);
            if (au < 5e-4 || au > 0.1) continue;
            ++used;
            double dx = pm.vertex - smp.rho.real();
            double pred = smp.rho.imag() * smp.rho.imag() / pm.coefficient;
            if (dx <= 0.0) return failmsg("curve on the wrong side of the vertex at u=", smp.u);
            if (std::abs(pred - dx) > 0.05 * dx)
                return failmsg("parabola deviation ", std::abs(pred - dx) / dx, " at u=", smp.u);
        }
        if (used < 8) return failmsg("only ", used, " samples in the test window");
        return {};
    });

    s.run("parabola-structure", []() -> std::string {
        for (int n : {3, 4, 5, 7, 10}) {
            ParabolaModel p1 = parabola_model(n, EigType::Type1);
            double c1 = 10.0 * n * xi(n) / (double(n) * n + 5.0 * n + 1.0);
            if (p1.vertex != xi(n) || std::abs(p1.coefficient - c1) > 1e-12 ||
                p1.opening != ParabolaModel::Opening::TowardMinusX)
                return failmsg("type-1 model wrong at n=", n);
            ParabolaModel p2 = parabola_model(n, EigType::Type2);
            double c2 = 10.0 * n / std::abs(double(n) * n - 5.0 * n + 1.0);
            auto want = n <= 4 ? ParabolaModel::Opening::TowardMinusX
                               : ParabolaModel::Opening::TowardPlusX;
            if (p2.vertex != 1.0 || std::abs(p2.coefficient - c2) > 1e-12 || p2.opening != want)
                return failmsg("type-2 model wrong at n=", n);
            // opening side must match the actual curve
            double s1 = f_curve(n, 0.05, EigType::Type1).real() - xi(n);
            if (s1 >= 0.0) return failmsg("type-1 curve opens the wrong way at n=", n);
            double s2 = f_curve(n, 0.05, EigType::Type2).real() - 1.0;
            if ((s2 < 0.0) != (want == ParabolaModel::Opening::TowardMinusX))
                return failmsg("type-2 curve opens the wrong way at n=", n);
        }
        return {};
    });
}

// ------------------------------------------------------------ classify ----

std::array<int, 2> oracle_label(int n, cplx rho) {
    SpectrumReport rep = full_spectrum(n, rho);
    std::array<int, 2> c{0, 0};
    for (const auto& e : rep.entries)
        if (e.cls == EigClass::Extraordinary) c[size_t(type_index(e.type))] += e.multiplicity;
    return c;
}

void classify_suite(std::vector<CheckResult>& out) {
    Suite s{"classify", out};

    s.run("oracle-agreement", []() -> std::string {
        std::mt19937_64 rng(307);
        for (int n = 3; n <= 10; ++n) {
            TracedCurve c1 = trace_curve(n, EigType::Type1);
            TracedCurve c2 = trace_curve(n, EigType::Type2);
            int done = 0;
            while (done < 1000) {
                cplx rho = rand_disk(rng, 3.0);
                if (membership(rho, c1, 1e-3) == Membership::OnCurve ||
                    membership(rho, c2, 1e-3) == Membership::OnCurve)
                    continue;
                ++done;
                auto fast = count_extraordinary(rho, c1, c2);
                auto slow = oracle_label(n, rho);
                if (fast != slow)
                    return failmsg("label mismatch at n=", n, " rho=", format_complex(rho),
                                   ": geometric [", fast[0], ",", fast[1], "] vs spectral [",
                                   slow[0], ",", slow[1], "]");
            }
        }
        return {};
    });

    s.run("real-axis-table", []() -> std::string {
        for (int n = 2; n <= 10; ++n) {
            double x = xi(n);
            for (int k = 0; k < 200; ++k) {
                double rho = -3.0 + 6.0 * k / 199.0;
                std::array<int, 2> want;
                if (rho < -x)
                    want = {1, 1};
                else if (rho < -1.0)
                    want = n % 2 == 0 ? std::array<int, 2>{1, 0} : std::array<int, 2>{0, 1};
                else if (rho <= 1.0)
                    want = {0, 0};
                else if (rho <= x)
                    want = {0, 1};
                else
                    want = {1, 1};
                auto got = count_extraordinary(n, cplx(rho, 0.0));
                if (got != want)
                    return failmsg("real-axis label [", got[0], ",", got[1], "] != [", want[0],
                                   ",", want[1], "] at n=", n, " rho=", rho);
            }
        }
        return {};
    });

    s.run("crossing-monotone", []() -> std::string {
        TracedCurve c1 = trace_curve(5, EigType::Type1);
        TracedCurve c2 = trace_curve(5, EigType::Type2);
        int flips = 0, prev = -1;
        for (int k = 0; k < 21; ++k) {
            cplx rho(1.405 + 0.2 * k / 20.0, 0.0);
            if (membership(rho, c1) == Membership::OnCurve ||
                membership(rho, c2) == Membership::OnCurve)
                continue;
            auto lab = count_extraordinary(rho, c1, c2);
            if (lab[1] != 1) return failmsg("outer count changed on a non-crossing path");
            if (prev >= 0 && lab[0] != prev) ++flips;
            prev = lab[0];
        }
        if (flips != 1) return failmsg("inner count flipped ", flips, " times, expected 1");
        return {};
    });

    s.run("simultaneous-crossing", []() -> std::string {
        TracedCurve c1 = trace_curve(6, EigType::Type1);
        TracedCurve c2 = trace_curve(6, EigType::Type2);
        // bracket Re rho = 0 on the u>0 branch of the type-1 curve
        double ua = 0, ub = 0;
        for (size_t i = 1; i < c1.samples.size(); ++i) {
            const auto& p = c1.samples[i - 1];
            const auto& q = c1.samples[i];
            if (p.u > 0.0 && q.u > 0.0 && p.rho.real() > 0.0 && q.rho.real() <= 0.0) {
                ua = p.u;
                ub = q.u;
                break;
            }
        }
        if (ua == ub) return failmsg("no imaginary-axis bracket found");
        for (int it = 0; it < 80; ++it) {
            double um = 0.5 * (ua + ub);
            (f_curve(6, um, EigType::Type1).real() > 0.0 ? ua : ub) = um;
        }
        double ystar = f_curve(6, 0.5 * (ua + ub), EigType::Type1).imag();
        int changes = 0;
        std::array<int, 2> prev{-1, -1};
        for (int k = 0; k < 21; ++k) {
            double y = ystar + 0.15 - 0.3 * k / 20.0; // inside -> outside (y* < 0)
            cplx rho(0.0, y);
            if (membership(rho, c1) == Membership::OnCurve ||
                membership(rho, c2) == Membership::OnCurve)
                continue;
            auto lab = count_extraordinary(rho, c1, c2);
            if (lab != std::array<int, 2>{0, 0} && lab != std::array<int, 2>{1, 1})
                return failmsg("mixed label [", lab[0], ",", lab[1],
                               "] on the imaginary axis at y=", y);
            if (prev[0] >= 0 && lab != prev) ++changes;
            prev = lab;
        }
        if (changes != 1) return failmsg("label changed ", changes, " times, expected 1");
        return {};
    });

    s.run("label-symmetries", []() -> std::string {
        std::mt19937_64 rng(311);
        for (int n : {5, 6}) {
            TracedCurve c1 = trace_curve(n, EigType::Type1);
            TracedCurve c2 = trace_curve(n, EigType::Type2);
            int done = 0;
            while (done < 20) {
                cplx rho = rand_disk(rng, 2.5);
                cplx rc = std::conj(rho);
                cplx rm = -std::conj(rho);
                bool onc = false;
                for (cplx z : {rho, rc, rm})
                    if (membership(z, c1, 1e-4) == Membership::OnCurve ||
                        membership(z, c2, 1e-4) == Membership::OnCurve)
                        onc = true;
                if (onc) continue;
                ++done;
                auto base = count_extraordinary(rho, c1, c2);
                if (count_extraordinary(rc, c1, c2) != base)
                    return failmsg("conjugation changed the label at n=", n,
                                   " rho=", format_complex(rho));
                if (n % 2 == 0) {
                    auto sw = count_extraordinary(rm, c1, c2);
                    if (sw != std::array<int, 2>{base[1], base[0]})
                        return failmsg("mirror map did not swap the label at n=", n,
                                       " rho=", format_complex(rho));
                }
            }
        }
        return {};
    });
}

// -------------------------------------------------------------- oracle ----

void oracle_suite(std::vector<CheckResult>& out) {
    Suite s{"oracle", out};

    s.run("multiplicity-sum", []() -> std::string {
        std::mt19937_64 rng(401);
        std::uniform_int_distribution<int> un(2, 12);
        for (int k = 0; k < 50; ++k) {
            int n = un(rng);
            SpectrumReport rep = full_spectrum(n, rand_disk(rng, 3.0));
            int total = 0;
            for (const auto& e : rep.entries) total += e.multiplicity;
            if (total != n) return failmsg("multiplicities sum to ", total, " != ", n);
        }
        return {};
    });

    s.run("root-residual", []() -> std::string {
        std::mt19937_64 rng(409);
        std::uniform_int_distribution<int> un(2, 16);
        for (int k = 0; k < 30; ++k) {
            int n = un(rng);
            cplx rho = rand_disk(rng, 4.0);
            CharPoly p = char_poly(n, rho);
            for (const auto& [z, mult] : poly_roots(p)) {
                cplx val = 0.0;
                double mag = 0.0;
                for (cplx c : p.coeffs) {
                    val = val * z + c;
                    mag = mag * std::abs(z) + std::abs(c);
                }
                if (std::abs(val) > 1e-9 * mag)
                    return failmsg("root residual ", std::abs(val) / mag, " at n=", n,
                                   " rho=", format_complex(rho));
                (void)mult;
            }
        }
        return {};
    });

    s.run("typed-symmetry-maps", []() -> std::string {
        std::mt19937_64 rng(419);
        for (int n : {3, 4, 5, 6, 9, 10})
            for (int k = 0; k < 4; ++k) {
                cplx rho = rand_disk(rng, 2.0);
                auto [sk, sy] = spectrum_split(n, rho);
                auto [skc, syc] = spectrum_split(n, std::conj(rho));
                if (auto m = match_multisets(conj_all(sk), skc, 1e-9); !m.empty())
                    return "conjugation (skew block): " + m;
                if (auto m = match_multisets(conj_all(sy), syc, 1e-9); !m.empty())
                    return "conjugation (symmetric block): " + m;
                auto [skf, syf] = spectrum_split(n, -rho);
                const auto& wk = (n % 2 == 0) ? sy : sk;
                const auto& wy = (n % 2 == 0) ? sk : sy;
                if (auto m = match_multisets(wk, skf, 1e-9); !m.empty())
                    return "sign flip (skew block): " + m;
                if (auto m = match_multisets(wy, syf, 1e-9); !m.empty())
                    return "sign flip (symmetric block): " + m;
            }
        return {};
    });

    s.run("repeated-value-law", []() -> std::string {
        std::mt19937_64 rng(421);
        std::uniform_int_distribution<int> un(3, 10);
        for (int k = 0; k < 500; ++k) {
            int n = un(rng);
            cplx rho = rand_disk(rng, 3.0);
            for (const auto& e : full_spectrum(n, rho).entries) {
                if (e.multiplicity > 2)
                    return failmsg("multiplicity ", e.multiplicity, " at n=", n,
                                   " rho=", format_complex(rho));
                if (e.multiplicity == 2 && std::abs(e.value + double(n)) > 1e-7 * n)
                    return failmsg("repeated value ", format_complex(e.value), " != ", -n,
                                   " at rho=", format_complex(rho));
            }
        }
        return {};
    });

    s.run("construct-then-solve", []() -> std::string {
        std::mt19937_64 rng(431);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<cplx> roots;
            while (roots.size() < 8) {
                cplx z = rand_disk(rng, 3.0);
                bool far = true;
                for (cplx w : roots)
                    if (std::abs(z - w) < 0.1) far = false;
                if (far) roots.push_back(z);
            }
            std::vector<cplx> coeffs{1.0};
            for (cplx r : roots) {
                coeffs.push_back(0.0);
                for (size_t i = coeffs.size() - 1; i > 0; --i) coeffs[i] -= r * coeffs[i - 1];
            }
            std::vector<cplx> got;
            for (const auto& [z, m] : poly_roots(coeffs)) {
                if (m != 1) return failmsg("spurious multiplicity ", m);
                got.push_back(z);
            }
            if (auto msg = match_multisets(roots, got, 1e-9); !msg.empty()) return msg;
        }
        return {};
    });

    s.run("small-n-closed-forms", []() -> std::string {
        std::mt19937_64 rng(433);
        for (int k = 0; k < 20; ++k) {
            cplx rho = rand_disk(rng, 2.5);
            auto e2 = dense_eigs(build_kms(2, rho));
            if (auto m = match_multisets({1.0 + rho, 1.0 - rho}, e2, 1e-9); !m.empty())
                return "n=2: " + m;
            cplx disc = std::sqrt(rho * rho * rho * rho + 8.0 * rho * rho);
            cplx base = 2.0 + rho * rho;
            auto e3 = dense_eigs(build_kms(3, rho));
            if (auto m = match_multisets(
                    {1.0 - rho * rho, (base + disc) / 2.0, (base - disc) / 2.0}, e3, 1e-9);
                !m.empty())
                return "n=3: " + m;
        }
        return {};
    });

    s.run("block-union", []() -> std::string {
        std::mt19937_64 rng(439);
        std::uniform_int_distribution<int> un(2, 12);
        for (int k = 0; k < 30; ++k) {
            int n = un(rng);
            cplx rho = rand_disk(rng, 2.5);
            auto [sk, sy] = spectrum_split(n, rho);
            std::vector<cplx> split = sk;
            split.insert(split.end(), sy.begin(), sy.end());
            auto dense = dense_eigs(build_kms(n, rho));
            if (auto m = match_multisets(split, dense, 1e-8); !m.empty())
                return failmsg("n=", n, " rho=", format_complex(rho), ": ", m);
        }
        return {};
    });

    s.run("identity-spectrum", []() -> std::string {
        SpectrumReport rep = full_spectrum(5, cplx(0.0, 0.0));
        int total = 0;
        std::array<int, 2> per{0, 0};
        for (const auto& e : rep.entries) {
            if (std::abs(e.value - 1.0) > 1e-12)
                return failmsg("identity eigenvalue drifted: ", format_complex(e.value));
            if (e.cls != EigClass::Ordinary) return failmsg("identity eigenvalue misclassified");
            total += e.multiplicity;
            per[size_t(type_index(e.type))] += e.multiplicity;
        }
        if (total != 5 || per != std::array<int, 2>{2, 3})
            return failmsg("identity type split [", per[0], ",", per[1], "], total ", total);
        return {};
    });

    s.run("constant-coefficient", []() -> std::string {
        std::mt19937_64 rng(443);
        std::uniform_int_distribution<int> un(2, 10);
        for (int k = 0; k < 20; ++k) {
            int n = un(rng);
            cplx rho;
            do {
                rho = rand_disk(rng, 2.0);
            } while (std::abs(rho - 1.0) < 0.05 || std::abs(rho + 1.0) < 0.05);
            CharPoly p = char_poly(n, rho);
            if (p.coeffs.size() != size_t(n) + 1 || p.coeffs[0] != cplx(1.0))
                return failmsg("characteristic polynomial is not monic degree ", n);
            cplx want = (n % 2 == 0 ? 1.0 : -1.0) * std::pow(cplx(1.0) - rho * rho, n - 1);
            if (std::abs(p.coeffs.back() - want) > 1e-8 * std::abs(want))
                return failmsg("constant term ", format_complex(p.coeffs.back()), " != ",
                               format_complex(want), " at n=", n);
        }
        return {};
    });

    s.run("repeated-root-cluster", []() -> std::string {
        auto roots = poly_roots(char_poly(3, cplx(1.0, 0.0)));
        if (roots.size() != 2) return failmsg("expected 2 clusters, got ", roots.size());
        if (std::abs(roots[0].first) > 1e-6 || roots[0].second != 2)
            return failmsg("missing double root at 0");
        if (std::abs(roots[1].first - 3.0) > 1e-8 || roots[1].second != 1)
            return failmsg("missing simple root at 3");
        return {};
    });
}

// ----------------------------------------------------------------- cli ----

std::pair<int, std::string> run_cli(std::vector<std::string> args) {
    std::ostringstream o, e;
    int rc = cli::run(std::move(args), o, e);
    return {rc, o.str()};
}

void cli_suite(std::vector<CheckResult>& out) {
    Suite s{"cli", out};

    s.run("trace-csv-roundtrip", []() -> std::string {
        auto [rc, text] = run_cli({"trace", "--n", "6", "--type", "1", "--samples", "64"});
        if (rc != 0) return failmsg("exit code ", rc);
        std::istringstream is(text);
        std::string line;
        if (!std::getline(is, line) ||
            line != "u,v,re_rho,im_rho,re_lambda,im_lambda,re_drho,im_drho")
            return "bad header: " + line;
        int rows = 0;
        while (std::getline(is, line)) {
            ++rows;
            size_t start = 0;
            int fields = 0;
            while (start <= line.size()) {
                size_t comma = line.find(',', start);
                std::string fld = line.substr(
                    start, comma == std::string::npos ? std::string::npos : comma - start);
                double x = 0;
                auto [p, ec] = std::from_chars(fld.data(), fld.data() + fld.size(), x);
                if (ec != std::errc() || p != fld.data() + fld.size())
                    return "unparseable field: " + fld;
                if (format_double(x) != fld) return "field not in canonical form: " + fld;
                ++fields;
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            if (fields != 8) return failmsg("row with ", fields, " fields");
        }
        if (rows < 64) return failmsg("only ", rows, " rows");
        return {};
    });

    s.run("determinism", []() -> std::string {
        for (auto args : {std::vector<std::string>{"trace", "--n", "5", "--type", "2",
                                                   "--samples", "128"},
                          std::vector<std::string>{"cusps", "--n", "6", "--type", "2", "--json"},
                          std::vector<std::string>{"figure", "--id", "phase", "--n", "6"}}) {
            auto a = run_cli(args);
            auto b = run_cli(args);
            if (a.first != 0) return failmsg("exit code ", a.first);
            if (a.second != b.second) return "two runs differ for " + args[0];
        }
        return {};
    });

    s.run("classify-json", []() -> std::string {
        auto [rc, text] = run_cli({"classify", "--n", "5", "--rho", "1.2"});
        if (rc != 0) return failmsg("exit code ", rc);
        if (text != "{\"j1\":0,\"j2\":1}\n") return "unexpected output: " + text;
        auto [rc2, text2] = run_cli({"classify", "--n", "5", "--rho", "1.5"});
        if (rc2 != 0) return failmsg("exit code ", rc2);
        if (text2.find("\"on_curve\":true") == std::string::npos)
            return "vertex point not flagged as on-curve: " + text2;
        return {};
    });

    s.run("spectrum-parse-back", []() -> std::string {
        auto [rc, text] = run_cli({"spectrum", "--n", "4", "--rho", "0.5+0.25i"});
        if (rc != 0) return failmsg("exit code ", rc);
        auto j = nlohmann::json::parse(text);
        if (j.at("n").get<int>() != 4) return "wrong n";
        if (parse_complex(j.at("rho").get<std::string>()) != cplx(0.5, 0.25))
            return "rho did not round-trip";
        int total = 0;
        for (const auto& e : j.at("entries")) {
            total += e.at("multiplicity").get<int>();
            parse_complex(e.at("value").get<std::string>()); // must parse
        }
        if (total != 4) return failmsg("multiplicities sum to ", total);
        return {};
    });

    s.run("exit-codes", []() -> std::string {
        if (auto [rc, text] = run_cli({"nosuchcommand"}); rc != 2)
            return failmsg("unknown command gave ", rc);
        if (auto [rc, text] = run_cli({"classify", "--n", "5", "--rho", "zebra"}); rc != 2)
            return failmsg("bad complex literal gave ", rc);
        if (auto [rc, text] = run_cli({"trace", "--n", "1", "--type", "1"}); rc != 1)
            return failmsg("invalid dimension gave ", rc);
        if (auto [rc, text] = run_cli({"--help"}); rc != 0)
            return failmsg("--help gave ", rc);
        return {};
    });
}

} // namespace

std::vector<CheckResult> run_suite(const std::string& which) {
    static const std::vector<std::string> known = {"core",     "curves", "cusps",
                                                   "classify", "oracle", "all"};
    if (std::find(known.begin(), known.end(), which) == known.end())
        throw domain_error("unknown suite: " + which);
    bool all = which == "all";
    std::vector<CheckResult> out;
    if (all || which == "core") core_suite(out);
    if (all || which == "curves") curves_suite(out);
    if (all || which == "cusps") cusps_suite(out);
    if (all || which == "classify") classify_suite(out);
    if (all || which == "oracle") oracle_suite(out);
    if (all) cli_suite(out);
    return out;
}

} // namespace kms
