#include "kms/oracle.hpp"

#include "kms/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kms {

namespace {

constexpr double EPS = 2.22e-16;

// Unitary similarity to upper Hessenberg form via Householder reflectors.
void hessenberg_inplace(Matrix& H) {
    const int n = H.n;
    std::vector<cplx> v;
    for (int k = 0; k + 2 < n; ++k) {
        double nx = 0.0;
        for (int i = k + 1; i < n; ++i) nx += std::norm(H.at(i, k));
        nx = std::sqrt(nx);
        if (nx == 0.0) continue;
        cplx x0 = H.at(k + 1, k);
        cplx ph = (x0 != 0.0) ? x0 / std::abs(x0) : cplx(1.0);
        v.assign(size_t(n - k - 1), cplx{});
        for (int i = k + 1; i < n; ++i) v[size_t(i - k - 1)] = H.at(i, k);
        v[0] += ph * nx;
        double nv = 0.0;
        for (auto& c : v) nv += std::norm(c);
        nv = std::sqrt(nv);
        if (nv == 0.0) continue;
        for (auto& c : v) c /= nv;
        // rows k+1.. : H -= 2 v (v^H H)
        for (int j = k; j < n; ++j) {
            cplx w{};
            for (int i = k + 1; i < n; ++i) w += std::conj(v[size_t(i - k - 1)]) * H.at(i, j);
            w *= 2.0;
            for (int i = k + 1; i < n; ++i) H.at(i, j) -= v[size_t(i - k - 1)] * w;
        }
        // cols k+1.. : H -= 2 (H v) v^H
        for (int i = 0; i < n; ++i) {
            cplx s{};
            for (int j = k + 1; j < n; ++j) s += H.at(i, j) * v[size_t(j - k - 1)];
            s *= 2.0;
            for (int j = k + 1; j < n; ++j) H.at(i, j) -= s * std::conj(v[size_t(j - k - 1)]);
        }
        for (int i = k + 2; i < n; ++i) H.at(i, k) = 0.0;
    }
}

struct HymanOut {
    cplx r, rp;
    double scale;
};

// det-proportional characteristic value of the leading m x m block of an
// unreduced Hessenberg matrix, with derivative, by back substitution.
// Intermediate vectors are rescaled to dodge overflow; r and rp share the
// same hidden factor so the Newton correction r/rp is unaffected.
HymanOut hyman(const Matrix& H, int m, cplx lam, std::vector<cplx>& x, std::vector<cplx>& xp) {
    x.assign(size_t(m), cplx{});
    xp.assign(size_t(m), cplx{});
    x[size_t(m - 1)] = 1.0;
    for (int i = m - 1; i > 0; --i) {
        cplx s = lam * x[size_t(i)];
        cplx sp = x[size_t(i)] + lam * xp[size_t(i)];
        for (int j = i; j < m; ++j) {
            s -= H.at(i, j) * x[size_t(j)];
            sp -= H.at(i, j) * xp[size_t(j)];
        }
        cplx b = H.at(i, i - 1);
        x[size_t(i - 1)] = s / b;
        xp[size_t(i - 1)] = sp / b;
        double a = std::abs(x[size_t(i - 1)]);
        if (a > 1e140) {
            double inv = 1.0 / a;
            for (int j = i - 1; j < m; ++j) {
                x[size_t(j)] *= inv;
                xp[size_t(j)] *= inv;
            }
        }
    }
    cplx r = -lam * x[0];
    cplx rp = -lam * xp[0] - x[0];
    double scale = std::abs(lam) * std::abs(x[0]);
    for (int j = 0; j < m; ++j) {
        r += H.at(0, j) * x[size_t(j)];
        rp += H.at(0, j) * xp[size_t(j)];
        scale += std::abs(H.at(0, j)) * std::abs(x[size_t(j)]);
    }
    return {r, rp, scale};
}

// Aberth-Ehrlich on an unreduced Hessenberg block, warm-started one
// dimension at a time: the leading m x m spectrum seeds the (m+1) stage,
// with the trace supplying the one missing guess. The deterministic
// off-axis kick keeps conjugate-symmetric spectra from stalling.
std::vector<cplx> aberth_block(const Matrix& H, int mblk) {
    std::vector<cplx> z{H.at(0, 0)};
    std::vector<cplx> x, xp;

    auto sweep_once = [&](int m, std::vector<char>& done, double res_factor, double step_tol) {
        bool all_done = true;
        for (int i = 0; i < m; ++i) {
            if (done[size_t(i)]) continue;
            auto [r, rp, scale] = hyman(H, m, z[size_t(i)], x, xp);
            if (std::abs(r) <= res_factor * m * EPS * scale) {
                done[size_t(i)] = 1;
                continue;
            }
            cplx N = (rp != cplx{}) ? r / rp : cplx(0.1 * (1.0 + std::abs(z[size_t(i)])));
            cplx s{};
            for (int j = 0; j < m; ++j)
                if (j != i) s += 1.0 / (z[size_t(i)] - z[size_t(j)]);
            cplx den = 1.0 - N * s;
            cplx w = (den != cplx{}) ? N / den : N;
            z[size_t(i)] -= w;
            if (std::abs(w) <= step_tol * (1.0 + std::abs(z[size_t(i)])))
                done[size_t(i)] = 1;
            else
                all_done = false;
        }
        return all_done;
    };

    for (int m = 2; m <= mblk; ++m) {
        cplx tr{};
        for (int i = 0; i < m; ++i) tr += H.at(i, i);
        cplx newz = tr;
        for (auto& zi : z) newz -= zi;
        newz += cplx(0.0, 0.4) * (1.0 + std::abs(newz));
        auto clashes = [&] {
            for (auto& zi : z)
                if (std::abs(newz - zi) < 1e-8 * (1.0 + std::abs(newz))) return true;
            return false;
        };
        while (!z.empty() && clashes()) newz += cplx(0.05, 0.17) * (1.0 + std::abs(newz));
        z.push_back(newz);

        std::vector<char> done(size_t(m), 0);
        for (int sweep = 0; sweep < 64; ++sweep)
            if (sweep_once(m, done, 4.0, 1e-13)) break;
    }

    // Final polish with a tighter residual floor.
    for (int sweep = 0; sweep < 6; ++sweep) {
        bool moved = false;
        for (int i = 0; i < mblk; ++i) {
            auto [r, rp, scale] = hyman(H, mblk, z[size_t(i)], x, xp);
            if (std::abs(r) <= 2.0 * mblk * EPS * scale) continue;
            cplx N = (rp != cplx{}) ? r / rp : cplx{};
            cplx s{};
            for (int j = 0; j < mblk; ++j)
                if (j != i) s += 1.0 / (z[size_t(i)] - z[size_t(j)]);
            cplx den = 1.0 - N * s;
            cplx w = (den != cplx{}) ? N / den : N;
            z[size_t(i)] -= w;
            if (std::abs(w) > 1e-14 * (1.0 + std::abs(z[size_t(i)]))) moved = true;
        }
        if (!moved) break;
    }
    return z;
}

} // namespace

std::vector<cplx> dense_eigs(const Matrix& m) {
    if (m.n < 1) throw domain_error("empty matrix");
    Matrix H = m;
    hessenberg_inplace(H);
    const int n = H.n;

    double hmax = 1.0;
    for (const auto& c : H.a) hmax = std::max(hmax, std::abs(c));
    const double cut_tol = EPS * hmax;

    std::vector<int> cuts{0};
    for (int i = 1; i < n; ++i)
        if (std::abs(H.at(i, i - 1)) <= cut_tol) cuts.push_back(i);
    cuts.push_back(n);

    std::vector<cplx> out;
    out.reserve(size_t(n));
    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
        int a = cuts[c], b = cuts[c + 1];
        int mb = b - a;
        if (mb == 1) {
            out.push_back(H.at(a, a));
            continue;
        }
        Matrix blk(mb);
        for (int i = 0; i < mb; ++i)
            for (int j = 0; j < mb; ++j) blk.at(i, j) = H.at(a + i, a + j);
        auto roots = aberth_block(blk, mb);
        out.insert(out.end(), roots.begin(), roots.end());
    }
    for (const auto& z : out)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw non_convergence("eigenvalue iteration diverged");
    return out;
}

std::pair<std::vector<cplx>, std::vector<cplx>> spectrum_split(Dimension n, cplx rho) {
    const int N = n;
    const int h_sym = (N + 1) / 2;
    const int h_skew = N / 2;
    const double r2 = 1.0 / std::sqrt(2.0);

    // Orthonormal bases of the symmetric / skew-symmetric invariant
    // subspaces of the flip S: columns (e_j ± e_{n-1-j})/sqrt(2), plus the
    // middle coordinate for odd n on the symmetric side.
    std::vector<double> Qs(size_t(N) * h_sym, 0.0), Qk(size_t(N) * h_skew, 0.0);
    auto qs = [&](int i, int j) -> double& { return Qs[size_t(i) * h_sym + j]; };
    auto qk = [&](int i, int j) -> double& { return Qk[size_t(i) * h_skew + j]; };
    for (int j = 0; j < N / 2; ++j) {
        qs(j, j) = r2;
        qs(N - 1 - j, j) = r2;
        qk(j, j) = r2;
        qk(N - 1 - j, j) = -r2;
    }
    if (N % 2) qs(N / 2, h_sym - 1) = 1.0;

    Matrix K = build_kms(n, rho);
    auto compress = [&](const std::vector<double>& Q, int h, auto q) {
        Matrix B(h);
        std::vector<cplx> KQ(size_t(N) * h);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < h; ++j) {
                cplx s{};
                for (int l = 0; l < N; ++l)
                    if (q(l, j) != 0.0) s += K.at(i, l) * q(l, j);
                KQ[size_t(i) * h + j] = s;
            }
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < h; ++j) {
                cplx s{};
                for (int l = 0; l < N; ++l)
                    if (q(l, i) != 0.0) s += q(l, i) * KQ[size_t(l) * h + j];
                B.at(i, j) = s;
            }
        (void)Q;
        return B;
    };

    Matrix Bk = compress(Qk, h_skew, [&](int i, int j) { return qk(i, j); });
    Matrix Bs = compress(Qs, h_sym, [&](int i, int j) { return qs(i, j); });
    return {dense_eigs(Bk), dense_eigs(Bs)};
}

CharPoly char_poly(Dimension n, cplx rho) {
    auto roots = dense_eigs(build_kms(n, rho));
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    CharPoly p;
    p.n = n;
    p.rho = rho;
    p.coeffs.assign(1, cplx(1.0));
    for (const auto& r : roots) {
        p.coeffs.push_back(cplx{});
        for (size_t j = p.coeffs.size(); j-- > 1;)
            p.coeffs[j] = p.coeffs[j] - r * p.coeffs[j - 1];
        for (const auto& c : p.coeffs)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw overflow_limit("characteristic coefficients exceed double range");
    }
    return p;
}

std::vector<std::pair<cplx, int>> poly_roots(const std::vector<cplx>& coeffs_in) {
    std::vector<cplx> c = coeffs_in;
    while (!c.empty() && c.front() == cplx{}) c.erase(c.begin());
    if (c.size() < 2) throw domain_error("polynomial of degree < 1 has no root set");
    for (auto& ck : c) ck /= coeffs_in[coeffs_in.size() - c.size()];

    // Roots at the origin: strip trailing coefficients that are zero up to
    // the backward error of the (normalized) coefficient set. A constant
    // term below d*EPS*|c|_max is indistinguishable from an exact zero and
    // stalls the root iteration if kept.
    double cmax = 0.0;
    for (const auto& ck : c) cmax = std::max(cmax, std::abs(ck));
    const double zero_tol = 16.0 * double(c.size()) * EPS * cmax;
    std::vector<cplx> roots;
    while (std::abs(c.back()) <= zero_tol) {
        roots.push_back(cplx{});
        c.pop_back();
        if (c.size() < 2) break;
    }

    const int d = int(c.size()) - 1;
    if (d >= 1) {
        double R = 1.0;
        for (int k = 1; k <= d; ++k) R = std::max(R, std::abs(c[size_t(k)]));
        R += 1.0; // Cauchy bound for a monic polynomial
        double r0 = (c[size_t(d)] != cplx{}) ? std::pow(std::abs(c[size_t(d)]), 1.0 / d) : 1.0;
        r0 = std::clamp(r0, 1e-3, R);

        std::vector<cplx> z(static_cast<size_t>(d));
        const double two_pi = 6.283185307179586;
        for (int j = 0; j < d; ++j) {
            double th = two_pi * j / d + 0.4;
            double rr = r0 * (1.0 + 0.02 * (j + 1) / d);
            z[size_t(j)] = cplx(rr * std::cos(th), rr * std::sin(th));
        }

        auto horner = [&](cplx zz, cplx& p, cplx& dp, double& scale) {
            p = c[0];
            dp = cplx{};
            scale = std::abs(c[0]);
            double az = std::abs(zz);
            for (int k = 1; k <= d; ++k) {
                dp = dp * zz + p;
                p = p * zz + c[size_t(k)];
                scale = scale * az + std::abs(c[size_t(k)]);
            }
        };

        std::vector<char> done(size_t(d), 0);
        bool all_done = false;
        for (int sweep = 0; sweep < 500 && !all_done; ++sweep) {
            all_done = true;
            for (int i = 0; i < d; ++i) {
                if (done[size_t(i)]) continue;
                cplx p, dp;
                double scale;
                horner(z[size_t(i)], p, dp, scale);
                if (std::abs(p) <= 8.0 * d * EPS * scale) {
                    done[size_t(i)] = 1;
                    continue;
                }
                cplx N = (dp != cplx{}) ? p / dp : cplx(0.1 * (1.0 + std::abs(z[size_t(i)])));
                cplx s{};
                for (int j = 0; j < d; ++j)
                    if (j != i) s += 1.0 / (z[size_t(i)] - z[size_t(j)]);
                cplx den = 1.0 - N * s;
                cplx w = (den != cplx{}) ? N / den : N;
                z[size_t(i)] -= w;
                if (std::abs(w) <= 1e-13 * (1.0 + std::abs(z[size_t(i)])))
                    done[size_t(i)] = 1;
                else
                    all_done = false;
            }
        }
        for (int i = 0; i < d; ++i) {
            cplx p, dp;
            double scale;
            horner(z[size_t(i)], p, dp, scale);
            if (!(std::abs(p) <= 1e-6 * scale) || !std::isfinite(z[size_t(i)].real()) ||
                !std::isfinite(z[size_t(i)].imag()))
                throw non_convergence("polynomial root iteration failed");
        }
        roots.insert(roots.end(), z.begin(), z.end());
    }

    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<std::pair<cplx, int>> out; // clusters: (running mean, count)
    std::vector<cplx> sums;
    for (const auto& r : roots) {
        bool placed = false;
        for (size_t g = 0; g < out.size(); ++g) {
            if (std::abs(r - out[g].first) <= 1e-6 * (1.0 + std::abs(r))) {
                sums[g] += r;
                out[g].second += 1;
                out[g].first = sums[g] / double(out[g].second);
                placed = true;
                break;
            }
        }
        if (!placed) {
            out.push_back({r, 1});
            sums.push_back(r);
        }
    }
    return out;
}

std::vector<std::pair<cplx, int>> poly_roots(const CharPoly& p) { return poly_roots(p.coeffs); }

SpectrumReport full_spectrum(Dimension n, cplx rho, double band) {
    auto global = dense_eigs(build_kms(n, rho));
    auto [skew, sym] = spectrum_split(n, rho);

    std::sort(global.begin(), global.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    // Cluster the full-matrix roots.
    struct Cluster {
        cplx sum;
        std::vector<cplx> members;
    };
    std::vector<Cluster> clusters;
    for (const auto& z : global) {
        bool placed = false;
        for (auto& cl : clusters) {
            cplx rep = cl.sum / double(cl.members.size());
            if (std::abs(z - rep) <= 1e-6 * (1.0 + std::abs(z))) {
                cl.sum += z;
                cl.members.push_back(z);
                placed = true;
                break;
            }
        }
        if (!placed) clusters.push_back({z, {z}});
    }

    // Pool of block roots; each may absorb exactly one full-matrix root.
    struct PoolEntry {
        cplx value;
        EigType type;
        bool used = false;
    };
    std::vector<PoolEntry> pool;
    pool.reserve(global.size());
    for (const auto& z : skew) pool.push_back({z, EigType::Type1});
    for (const auto& z : sym) pool.push_back({z, EigType::Type2});

    SpectrumReport rep;
    rep.n = n;
    rep.rho = rho;
    for (const auto& cl : clusters) {
        int count[2] = {0, 0};
        for (const auto& z : cl.members) {
            int best = -1;
            double bd = std::numeric_limits<double>::infinity();
            for (size_t k = 0; k < pool.size(); ++k) {
                if (pool[k].used) continue;
                double dist = std::abs(z - pool[k].value);
                if (dist < bd) {
                    bd = dist;
                    best = int(k);
                }
            }
            if (best < 0 || bd > 1e-6 * (1.0 + std::abs(z)))
                throw ambiguous_type("eigenvalue cannot be attributed to a symmetry class");
            pool[size_t(best)].used = true;
            ++count[type_index(pool[size_t(best)].type)];
        }
        cplx mean = cl.sum / double(cl.members.size());
        for (EigType t : {EigType::Type1, EigType::Type2}) {
            int c = count[type_index(t)];
            if (c == 0) continue;
            rep.entries.push_back({mean, c, t, classify_eigenvalue(mean, n, band)});
        }
    }
    std::sort(rep.entries.begin(), rep.entries.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
        double ma = std::abs(a.value), mb = std::abs(b.value);
        if (ma != mb) return ma > mb;
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        if (a.value.imag() != b.value.imag()) return a.value.imag() < b.value.imag();
        return int(a.type) < int(b.type);
    });
    return rep;
}

SpectrumReport full_spectrum(Dimension n, cplx rho) {
    return full_spectrum(n, rho, 1e-9 * double(int(n)));
}

} // namespace kms
