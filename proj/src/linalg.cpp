#include "rydgate/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rydgate {

StateVector StateVector::basis(int dim, int index) {
    if (index < 0 || index >= dim) {
        throw DimensionMismatch("basis index " + std::to_string(index) +
                                " out of range for dim " + std::to_string(dim));
    }
    StateVector v(dim);
    v[index] = Complex(1.0, 0.0);
    return v;
}

double StateVector::norm2() const {
    double s = 0.0;
    for (const Complex& a : amp_) s += std::norm(a);
    return s;
}

double StateVector::norm() const { return std::sqrt(norm2()); }

StateVector StateVector::normalized() const {
    const double n = norm();
    StateVector out(*this);
    if (n > 0.0) {
        for (Complex& a : out.amp_) a /= n;
    }
    return out;
}

OperatorMatrix OperatorMatrix::identity(int dim) {
    OperatorMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = Complex(1.0, 0.0);
    return m;
}

OperatorMatrix OperatorMatrix::adjoint() const {
    OperatorMatrix out(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

Complex OperatorMatrix::trace() const {
    Complex t(0.0, 0.0);
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double OperatorMatrix::max_abs() const {
    double m = 0.0;
    for (const Complex& a : a_) m = std::max(m, std::abs(a));
    return m;
}

double OperatorMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Complex& a : a_) s += std::norm(a);
    return std::sqrt(s);
}

double OperatorMatrix::hermiticity_error() const {
    double m = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
}

OperatorMatrix tensor_product(const OperatorMatrix& a, const OperatorMatrix& b) {
    const int m = a.dim();
    const int n = b.dim();
    OperatorMatrix out(m * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex(0.0, 0.0)) continue;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) out(i * n + k, j * n + l) = aij * b(k, l);
        }
    return out;
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
    const int m = a.dim();
    const int n = b.dim();
    StateVector out(m * n);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) out[i * n + k] = a[i] * b[k];
    return out;
}

StateVector matvec(const OperatorMatrix& a, const StateVector& v) {
    if (a.dim() != v.dim()) {
        throw DimensionMismatch("matvec: matrix dim " + std::to_string(a.dim()) +
                                " vs vector dim " + std::to_string(v.dim()));
    }
    const int n = a.dim();
    StateVector out(n);
    for (int i = 0; i < n; ++i) {
        Complex s(0.0, 0.0);
        for (int j = 0; j < n; ++j) s += a(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Complex inner(const StateVector& u, const StateVector& v) {
    if (u.dim() != v.dim()) {
        throw DimensionMismatch("inner: dims " + std::to_string(u.dim()) + " vs " +
                                std::to_string(v.dim()));
    }
    Complex s(0.0, 0.0);
    for (int i = 0; i < u.dim(); ++i) s += std::conj(u[i]) * v[i];
    return s;
}

OperatorMatrix matmul(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("matmul: dims " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
    }
    const int n = a.dim();
    OperatorMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0, 0.0)) continue;
            for (int j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

DensityMatrix projector(const StateVector& psi) {
    const int n = psi.dim();
    DensityMatrix rho(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
    return rho;
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("operator+: matrix dims differ");
    OperatorMatrix out(a);
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("operator-: matrix dims differ");
    OperatorMatrix out(a);
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] -= b.data()[i];
    return out;
}

OperatorMatrix operator*(Complex s, const OperatorMatrix& a) {
    OperatorMatrix out(a);
    for (Complex& x : out.data()) x *= s;
    return out;
}

StateVector operator+(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("operator+: vector dims differ");
    StateVector out(a);
    for (int i = 0; i < out.dim(); ++i) out[i] += b[i];
    return out;
}

StateVector operator-(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("operator-: vector dims differ");
    StateVector out(a);
    for (int i = 0; i < out.dim(); ++i) out[i] -= b[i];
    return out;
}

StateVector operator*(Complex s, const StateVector& a) {
    StateVector out(a);
    for (int i = 0; i < out.dim(); ++i) out[i] *= s;
    return out;
}

namespace {

// One two-sided rotation G^dagger A G with
//   G[p,p] = c, G[p,q] = s e^{i phi}, G[q,p] = -s e^{-i phi}, G[q,q] = c,
// chosen to annihilate A(p,q). Eigenvector accumulator V picks up V G.
void jacobi_rotate(std::vector<Complex>& a, std::vector<Complex>& v, int n, int p, int q) {
    const auto at = [n](std::vector<Complex>& m, int i, int j) -> Complex& {
        return m[static_cast<std::size_t>(i) * n + j];
    };

    const Complex apq = at(a, p, q);
    const double mag = std::abs(apq);
    if (mag < 1e-300) {
        at(a, p, q) = Complex(0.0, 0.0);
        at(a, q, p) = Complex(0.0, 0.0);
        return;
    }
    const Complex phase = apq / mag;  // e^{i phi}
    const double app = at(a, p, p).real();
    const double aqq = at(a, q, q).real();

    // tan(2 theta) = 2|apq| / (aqq - app); smaller root keeps rotations small.
    const double tau = (aqq - app) / (2.0 * mag);
    double t;
    if (tau >= 0.0)
        t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
    else
        t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const Complex gpq = s * phase;             // G[p,q]
    const Complex gqp = -s * std::conj(phase); // G[q,p]

    // columns: M <- M G
    for (int k = 0; k < n; ++k) {
        const Complex mkp = at(a, k, p);
        const Complex mkq = at(a, k, q);
        at(a, k, p) = c * mkp + gqp * mkq;
        at(a, k, q) = gpq * mkp + c * mkq;
    }
    // rows: M <- G^dagger M
    for (int k = 0; k < n; ++k) {
        const Complex mpk = at(a, p, k);
        const Complex mqk = at(a, q, k);
        at(a, p, k) = c * mpk + std::conj(gqp) * mqk;
        at(a, q, k) = std::conj(gpq) * mpk + c * mqk;
    }
    at(a, p, q) = Complex(0.0, 0.0);
    at(a, q, p) = Complex(0.0, 0.0);
    at(a, p, p) = Complex(at(a, p, p).real(), 0.0);
    at(a, q, q) = Complex(at(a, q, q).real(), 0.0);

    for (int k = 0; k < n; ++k) {
        const Complex vkp = at(v, k, p);
        const Complex vkq = at(v, k, q);
        at(v, k, p) = c * vkp + gqp * vkq;
        at(v, k, q) = gpq * vkp + c * vkq;
    }
}

double offdiag_norm2(const std::vector<Complex>& a, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += std::norm(a[static_cast<std::size_t>(i) * n + j]);
    return s;
}

}  // namespace

EigenDecomposition eigh(const OperatorMatrix& h) {
    const int n = h.dim();
    if (n <= 0) throw DimensionMismatch("eigh: empty matrix");

    const double herm = h.hermiticity_error();
    const double scale = h.max_abs();
    if (herm > 1e-12 * std::max(1.0, scale)) {
        throw NonHermitianInput("eigh: max|H - H^dagger| = " + std::to_string(herm));
    }

    // Work on the symmetrized copy so roundoff asymmetry cannot leak in.
    std::vector<Complex> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a[static_cast<std::size_t>(i) * n + j] =
                0.5 * (h(i, j) + std::conj(h(j, i)));

    std::vector<Complex> v(static_cast<std::size_t>(n) * n, Complex(0.0, 0.0));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = Complex(1.0, 0.0);

    const double frob2 = [&] {
        double s = 0.0;
        for (const Complex& x : a) s += std::norm(x);
        return s;
    }();
    const double stop = std::max(frob2 * 1e-30, 1e-300);

    for (int sweep = 0; sweep < 100; ++sweep) {
        if (offdiag_norm2(a, n) <= stop) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) jacobi_rotate(a, v, n, p, q);
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return a[static_cast<std::size_t>(x) * n + x].real() <
               a[static_cast<std::size_t>(y) * n + y].real();
    });

    EigenDecomposition out;
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const int col = order[static_cast<std::size_t>(k)];
        out.values[static_cast<std::size_t>(k)] =
            a[static_cast<std::size_t>(col) * n + col].real();
        StateVector vec(n);
        for (int i = 0; i < n; ++i) vec[i] = v[static_cast<std::size_t>(i) * n + col];
        // gauge: largest-magnitude amplitude real, non-negative
        int imax = 0;
        double amax = 0.0;
        for (int i = 0; i < n; ++i) {
            const double m = std::abs(vec[i]);
            if (m > amax) {
                amax = m;
                imax = i;
            }
        }
        if (amax > 0.0) {
            const Complex ph = std::conj(vec[imax]) / amax;
            for (int i = 0; i < n; ++i) vec[i] *= ph;
        }
        out.vectors[static_cast<std::size_t>(k)] = std::move(vec);
    }
    return out;
}

}  // namespace rydgate
