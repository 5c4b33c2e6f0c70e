#pragma once

#include <array>
#include <vector>

#include "rydgate/model.hpp"

namespace rydgate {

struct SolverConfig {
    // Base integration step in us. 0 selects the default tau/10000, which
    // keeps the RK4 self-consistency of the shipped presets below 1e-8.
    double dt_us = 0.0;
    int record_every = 10;    // observable/state recording stride, in steps
    double tolerance = 1e-8;  // convergence-certification target

    double effective_dt(double tau_us) const { return dt_us > 0.0 ? dt_us : tau_us / 10000.0; }

    bool operator==(const SolverConfig&) const = default;
};

struct Observables {
    std::array<double, kPairDim> populations;  // per composite basis state
    double norm_or_trace;  // sum of populations: |psi|^2 (pure) or Tr rho (mixed)
    double p_rr;           // population of |rr>
    double p_p_total;      // population with at least one atom in |p>
};

struct Trajectory {
    std::vector<double> times;  // strictly increasing, first = t_start, last = t_end
    std::vector<StateVector> pure_states;
    std::vector<DensityMatrix> mixed_states;
    std::vector<Observables> observables;
    bool mixed = false;

    const StateVector& final_state() const { return pure_states.back(); }
    const DensityMatrix& final_rho() const { return mixed_states.back(); }
    const Observables& final_observables() const { return observables.back(); }
};

// d psi/dt = -i H(t) psi with H(t) = two_atom_hamiltonian. Fixed-step
// classical RK4; the step count is chosen so the interval divides exactly.
// Throws NormDrift when | |psi|^2 - 1 | exceeds 1e-6 at any step.
Trajectory evolve_schrodinger(const PhysicalParams& params, const StateVector& psi0,
                              double t_start, double t_end, const SolverConfig& cfg);

// d rho/dt = -i [H(t), rho] + sum_k (C_k rho C_k^dag - 1/2 {C_k^dag C_k, rho}),
// the standard trace-preserving Lindblad form. Throws TraceDrift when
// |Tr rho - 1| > 1e-6 at any step and PositivityLoss when the smallest
// eigenvalue drops below -1e-6 at a recorded sample.
Trajectory evolve_lindblad(const PhysicalParams& params, const DensityMatrix& rho0,
                           double t_start, double t_end, const SolverConfig& cfg);

// Max deviation (state component, infinity norm over recorded samples)
// between trajectories at cfg's dt and dt/2, over [0, 2 tau] from psi0.
// Certifies the step size: for RK4 the deviation shrinks ~16x per halving.
double step_convergence_check(const PhysicalParams& params, const StateVector& psi0,
                              const SolverConfig& cfg);

Observables observables_from_state(const StateVector& psi);
Observables observables_from_density(const DensityMatrix& rho);

}  // namespace rydgate
