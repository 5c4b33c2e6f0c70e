#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rydgate/propagate.hpp"

namespace rydgate {

// Qubit basis labels in the fixed order used throughout the gate module.
inline constexpr std::array<const char*, 4> kQubitLabels{"00", "01", "10", "11"};
inline constexpr std::array<int, 4> kQubitIndices{kIdx00, kIdx01, kIdx10, kIdx11};

// Controlled-phase target diag(e^{i phi}, 1, 1, 1) in basis order
// |11>, |10>, |01>, |00>.
struct TargetGate {
    double phi = 0.0;
    OperatorMatrix matrix;  // 4x4
};

TargetGate target_gate(double phi);

// The 16x16 embedding: target on the qubit block, identity elsewhere, so
// leakage population counts fully against fidelity.
OperatorMatrix embed_target(const TargetGate& target);

struct GateResult {
    // final states at t = 2 tau by label order 00, 01, 10, 11
    std::array<StateVector, 4> final_states;   // unitary mode
    std::array<DensityMatrix, 4> final_rhos;   // dissipative mode
    std::array<double, 4> return_probabilities{};  // diagonal |<b|psi_b>|^2 / <b|rho_b|b>
    std::array<double, 4> qubit_populations{};     // total population left in the qubit subspace
    std::optional<double> entangling_phase;  // (-pi, pi]; unitary mode only
    bool dissipative = false;
};

// Propagates each qubit basis state over [0, 2 tau]. In unitary mode the
// entangling phase is the gauge-invariant combination
//   arg<11|psi_11> - arg<10|psi_10> - arg<01|psi_01> + arg<00|psi_00>,
// and LowReturn is raised when any diagonal return probability is < 0.5
// (the phase is ill-defined then). Dissipative mode propagates projectors
// under the master equation and extracts no phase.
GateResult simulate_gate(const PhysicalParams& params, bool dissipative,
                         const SolverConfig& cfg);

// Tr[U rho(0) U^dag rho(2tau)] with rho(0) = |psi0><psi0|; psi0 must live in
// the qubit subspace (|p>/|r> amplitudes below 1e-10). Real within 1e-10,
// clipped to [0, 1].
double fidelity(const DensityMatrix& rho_final, const StateVector& psi0,
                const TargetGate& target);

// Bisection of the unitary entangling phase to |phi - phi_target| < tol_rad.
// A pre-scan across [tau_lo, tau_hi] unwraps the phase by continuity; the
// target is shifted by the integer multiple of 2 pi that lands inside the
// scanned range (the gate only fixes the phase mod 2 pi). When several
// crossings exist, the smallest-tau one is used. Scan points that fail with
// LowReturn (non-adiabatic, no usable phase) are skipped. params.tau_us is
// ignored. scan_points should keep the per-segment phase change below ~pi/2.
double calibrate_tau(const PhysicalParams& params, double phi_target, double tau_lo,
                     double tau_hi, double tol_rad, const SolverConfig& cfg,
                     int scan_points = 16);

struct SweepRow {
    double v_r_mhz = 0.0;
    double tau_us = 0.0;
    double f_pi = 0.0;
    double entangling_phase = 0.0;
    bool ok = false;
    std::string error;  // error kind for failed rows
};

// For each V_R: calibrate tau to the pi phase in unitary mode, then evaluate
// the dissipative fidelity for rho(0) built from the product state
// (|0>+|1>)(|0>+|1>)/2. Failed rows carry their error and the sweep
// continues. Rows are ordered by ascending V_R.
std::vector<SweepRow> fidelity_sweep(const PhysicalParams& base,
                                     const std::vector<double>& v_r_mhz_values,
                                     const SolverConfig& cfg, int threads = 1);

// (|0>+|1>)(|0>+|1>)/2, the input state of the fidelity figure of merit.
StateVector plus_plus_state();

double wrap_to_pi(double angle);

}  // namespace rydgate
