#pragma once

#include <random>

#include "rydgate/linalg.hpp"
#include "rydgate/model.hpp"

namespace testutil {

using rydgate::Complex;
using rydgate::OperatorMatrix;
using rydgate::StateVector;

inline std::mt19937& rng() {
    static std::mt19937 gen(0xC0FFEEu);  // fixed seed, deterministic tests
    return gen;
}

inline Complex random_amplitude() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng()), u(rng())};
}

inline OperatorMatrix random_matrix(int dim) {
    OperatorMatrix m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = random_amplitude();
    return m;
}

inline OperatorMatrix random_hermitian(int dim) {
    const OperatorMatrix m = random_matrix(dim);
    OperatorMatrix h(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return h;
}

inline StateVector random_state(int dim) {
    StateVector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = random_amplitude();
    return v.normalized();
}

inline double max_entry_diff(const OperatorMatrix& a, const OperatorMatrix& b) {
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

// Fig. 2-style working point: Omega/2pi = 50 MHz, tau = 0.25 us.
inline rydgate::PhysicalParams base_params(double delta_mhz = 0.0, double v_r_mhz = 25.0) {
    rydgate::PhysicalParams p;
    p.omega_mhz = 50.0;
    p.delta_mhz = delta_mhz;
    p.v_r_mhz = v_r_mhz;
    p.tau_us = 0.25;
    return p;
}

}  // namespace testutil
