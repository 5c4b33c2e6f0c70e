#pragma once

// Independent eigenvalue oracle for the Hermitian eigensolver tests. The
// complex Hermitian matrix H = A + iB is embedded as the real symmetric
//     M = [[A, -B], [B, A]]
// whose spectrum is that of H with every eigenvalue doubled. M is reduced
// to tridiagonal form by Householder reflections and diagonalized by QL
// iteration with implicit shifts — a completely different algorithm family
// from the cyclic Jacobi used by the library.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "rydgate/linalg.hpp"

namespace oracle {

// Householder reduction of a symmetric matrix (row-major, n x n) to
// tridiagonal form; eigenvectors are not accumulated.
inline void householder_tridiag(std::vector<double>& a, int n, std::vector<double>& d,
                                std::vector<double>& e) {
    const auto at = [&](int i, int j) -> double& {
        return a[static_cast<std::size_t>(i) * n + j];
    };
    d.assign(n, 0.0);
    e.assign(n, 0.0);

    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (int k = 0; k <= l; ++k) scale += std::abs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
                    for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
                    e[j] = g / h;
                    f += e[j] * at(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = at(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k)
                        at(j, k) -= f * e[k] + g * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }
    for (int i = 0; i < n; ++i) d[i] = at(i, i);
}

// QL with implicit shifts on a tridiagonal matrix; eigenvalues land in d.
inline void ql_implicit(std::vector<double>& d, std::vector<double>& e, int n) {
    // shift the subdiagonal so e[i] couples d[i] and d[i+1]
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-15 * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw std::runtime_error("ql_implicit: too many iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// Eigenvalues of a complex Hermitian matrix, ascending. Each eigenvalue of
// the doubled embedding appears twice; the duplicates are averaged, which
// also serves as an internal consistency check.
inline std::vector<double> hermitian_eigenvalues(const rydgate::OperatorMatrix& h) {
    const int n = h.dim();
    const int m = 2 * n;
    std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double re = h(i, j).real();
            const double im = h(i, j).imag();
            a[static_cast<std::size_t>(i) * m + j] = re;
            a[static_cast<std::size_t>(i + n) * m + (j + n)] = re;
            a[static_cast<std::size_t>(i) * m + (j + n)] = -im;
            a[static_cast<std::size_t>(i + n) * m + j] = im;
        }
    }
    std::vector<double> d, e;
    householder_tridiag(a, m, d, e);
    ql_implicit(d, e, m);
    std::sort(d.begin(), d.end());

    std::vector<double> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double lo = d[2 * k];
        const double hi = d[2 * k + 1];
        const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
        if (std::abs(hi - lo) > 1e-9 * scale)
            throw std::runtime_error("hermitian_eigenvalues: embedding pair split");
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

}  // namespace oracle
