#include "kms/core.hpp"

#include <cmath>
#include <numbers>

namespace kms {

Matrix build_kms(Dimension n, cplx rho) {
    const int N = n;
    std::vector<cplx> pow(N);
    pow[0] = 1.0;
    for (int k = 1; k < N; ++k) pow[k] = pow[k - 1] * rho;
    Matrix m(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            m.at(i, j) = pow[std::abs(i - j)];
    return m;
}

Matrix signature_matrix(Dimension n) {
    Matrix m(n);
    for (int i = 0; i < int(n); ++i) m.at(i, i) = (i % 2 == 0) ? 1.0 : -1.0;
    return m;
}

double xi(Dimension n) { return double(int(n) + 1) / double(int(n) - 1); }

cplx dirichlet_ratio(Dimension n, cplx x) {
    const double N = double(int(n));
    cplx sx = std::sin(x);
    if (std::abs(sx) >= 1e-8) return std::sin(N * x) / sx;

    // Near x = m*pi both sines vanish; expand the ratio in d = x - m*pi.
    const double pi = std::numbers::pi;
    long long m = llround(x.real() / pi);
    cplx d = x - double(m) * pi;
    double n2 = N * N;
    cplx d2 = d * d;
    cplx series = N * (1.0 - (n2 - 1.0) / 6.0 * d2 + (n2 - 1.0) * (3.0 * n2 - 7.0) / 360.0 * (d2 * d2));
    bool flip = (m % 2 != 0) && ((int(n) - 1) % 2 != 0); // sign (-1)^{m(n-1)}
    return flip ? -series : series;
}

cplx lu_det(const Matrix& m) {
    const int N = m.n;
    std::vector<cplx> a = m.a;
    auto at = [&](int i, int j) -> cplx& { return a[size_t(i) * N + j]; };
    cplx det = 1.0;
    for (int k = 0; k < N; ++k) {
        int piv = k;
        double best = std::abs(at(k, k));
        for (int i = k + 1; i < N; ++i) {
            double v = std::abs(at(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) return 0.0;
        if (piv != k) {
            for (int j = 0; j < N; ++j) std::swap(at(piv, j), at(k, j));
            det = -det;
        }
        det *= at(k, k);
        for (int i = k + 1; i < N; ++i) {
            cplx f = at(i, k) / at(k, k);
            for (int j = k + 1; j < N; ++j) at(i, j) -= f * at(k, j);
        }
    }
    return det;
}

} // namespace kms
