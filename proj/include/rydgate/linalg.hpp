#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include "rydgate/errors.hpp"

namespace rydgate {

using Complex = std::complex<double>;

// Dense complex vector. Dimensions in this project are 4 (one atom) or
// 16 (two atoms); everything is small enough that value semantics and
// plain loops beat any clever storage.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(int dim) : amp_(static_cast<std::size_t>(dim)) {}
    StateVector(std::initializer_list<Complex> amps) : amp_(amps) {}

    static StateVector basis(int dim, int index);

    int dim() const { return static_cast<int>(amp_.size()); }

    Complex& operator[](int i) { return amp_[static_cast<std::size_t>(i)]; }
    const Complex& operator[](int i) const { return amp_[static_cast<std::size_t>(i)]; }

    double norm2() const;  // sum |a_i|^2
    double norm() const;
    StateVector normalized() const;

    std::vector<Complex>& amplitudes() { return amp_; }
    const std::vector<Complex>& amplitudes() const { return amp_; }

private:
    std::vector<Complex> amp_;
};

// Dense complex square matrix, row-major.
class OperatorMatrix {
public:
    OperatorMatrix() = default;
    explicit OperatorMatrix(int dim)
        : dim_(dim), a_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {}

    static OperatorMatrix identity(int dim);

    int dim() const { return dim_; }

    Complex& operator()(int i, int j) { return a_[idx(i, j)]; }
    const Complex& operator()(int i, int j) const { return a_[idx(i, j)]; }

    OperatorMatrix adjoint() const;
    Complex trace() const;
    double max_abs() const;
    double frobenius_norm() const;
    double hermiticity_error() const;  // max_ij |a(i,j) - conj(a(j,i))|

    std::vector<Complex>& data() { return a_; }
    const std::vector<Complex>& data() const { return a_; }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
               static_cast<std::size_t>(j);
    }

    int dim_ = 0;
    std::vector<Complex> a_;
};

// A density matrix shares the operator storage; the propagate module owns
// the trace/Hermiticity/positivity contracts.
using DensityMatrix = OperatorMatrix;

struct EigenDecomposition {
    std::vector<double> values;        // ascending
    std::vector<StateVector> vectors;  // orthonormal; vectors[k] pairs with values[k]
};

// (a (x) b)[(i*n+k),(j*n+l)] = a(i,j) * b(k,l)
OperatorMatrix tensor_product(const OperatorMatrix& a, const OperatorMatrix& b);
StateVector tensor_product(const StateVector& a, const StateVector& b);

StateVector matvec(const OperatorMatrix& a, const StateVector& v);
Complex inner(const StateVector& u, const StateVector& v);  // <u|v>, conjugate-linear in u
OperatorMatrix matmul(const OperatorMatrix& a, const OperatorMatrix& b);
DensityMatrix projector(const StateVector& psi);  // |psi><psi|

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(Complex s, const OperatorMatrix& a);
StateVector operator+(const StateVector& a, const StateVector& b);
StateVector operator-(const StateVector& a, const StateVector& b);
StateVector operator*(Complex s, const StateVector& a);

// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
// Eigenvalues ascending; each eigenvector gauge-fixed so that its
// largest-magnitude amplitude is real and non-negative. Throws
// NonHermitianInput when max|H - H^dagger| > 1e-12 * max(1, max|H|).
EigenDecomposition eigh(const OperatorMatrix& h);

}  // namespace rydgate
