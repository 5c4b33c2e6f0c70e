#pragma once

#include <map>
#include <vector>

#include "rydgate/model.hpp"

namespace rydgate {

// One continuity-tracked eigenbranch over the time grid.
struct Branch {
    int label_t0 = -1;  // composite basis index of max overlap at t = 0
    std::vector<double> energies;      // rad/us, one per grid time
    std::vector<StateVector> vectors;  // gauge: <v(t_k)|v(t_k+1)> real > 0
};

struct SpectrumBranches {
    std::vector<double> times;  // uniform grid over [0, 2 tau], includes t = tau
    std::vector<Branch> branches;  // 16, ordered by (energy at t=0, label)
    std::map<int, int> connectivity;  // t=0 basis label -> max-overlap label at t=tau
    std::size_t tau_sample = 0;       // grid index of t = tau
};

// cos(theta)|1> - sin(theta)|r>; a zero eigenvector of the single-atom
// Hamiltonian for any detuning when theta matches the pulse.
StateVector dark_state(double theta);

// Normalized (cos^2 t - sin^2 t)|11> - cos t sin t (|1r> + |r1>) + sin^2 t |pp>
// with prefactor 1/sqrt(cos^4 + 2 sin^4). Zero eigenvector of the two-atom
// Hamiltonian at Delta = 0 for any V_R. Throws DegenerateAngle when the
// normalization denominator underflows (cannot happen on [0, pi/2]; the
// guard documents the formula's domain).
StateVector two_atom_dark_state(double theta);

EigenDecomposition instantaneous_spectrum(const PhysicalParams& params, double t);

// Eigenbranches matched between consecutive grid points by greedy maximal
// overlap. grid_size >= 100 (rounded up to even so t = tau lands on the
// grid). Throws AmbiguousTracking when the best overlap drops below 0.5.
SpectrumBranches track_branches(const PhysicalParams& params, int grid_size);

// phi(t) = V_R * integral_0^t sin^4 theta(t') dt' by composite trapezoid
// quadrature (>= 10^4 points over the full cycle).
double perturbative_phase(const PhysicalParams& params, double t);

// max over grid times and energy-adjacent eigenpairs of
// |<v_m| dH/dt |v_n>| / (E_m - E_n)^2; < 1 indicates adiabatic operation.
// Exactly degenerate pairs with symmetry-protected zero coupling are
// skipped; DegenerateGap is raised only when a sub-1e-9 gap carries a
// non-negligible coupling.
double adiabaticity_metric(const PhysicalParams& params, int grid_size);

}  // namespace rydgate
