#pragma once

#include <vector>

#include "rydgate/linalg.hpp"

namespace rydgate {

// Single-atom level scheme. |0> and |1> are the qubit ground states, |p>
// the optically excited intermediate state, |r> the Rydberg state.
enum class Level : int { G0 = 0, G1 = 1, P = 2, R = 3 };

inline constexpr int kAtomDim = 4;
inline constexpr int kPairDim = 16;

// Two-atom composite index, atom-1 major: |a b> -> 4*a + b. This ordering
// is fixed everywhere, including CSV output.
constexpr int pair_index(Level a, Level b) { return 4 * static_cast<int>(a) + static_cast<int>(b); }
constexpr int pair_index(int a, int b) { return 4 * a + b; }

inline constexpr int kIdx00 = pair_index(Level::G0, Level::G0);  // 0
inline constexpr int kIdx01 = pair_index(Level::G0, Level::G1);  // 1
inline constexpr int kIdx10 = pair_index(Level::G1, Level::G0);  // 4
inline constexpr int kIdx11 = pair_index(Level::G1, Level::G1);  // 5
inline constexpr int kIdxPP = pair_index(Level::P, Level::P);    // 10
inline constexpr int kIdxRR = pair_index(Level::R, Level::R);    // 15

// Frequencies and rates are entered as ordinary frequencies in MHz (the x
// of "f/2pi = x MHz") and times in microseconds. All dynamics run in
// angular units, rad/us; the *_rad() accessors are the single conversion
// point, so a 2pi can only be applied once.
struct PhysicalParams {
    double omega_mhz = 50.0;    // peak Rabi amplitude Omega
    double delta_mhz = 0.0;     // detuning of the intermediate level
    double v_r_mhz = 25.0;      // Rydberg pair shift V_R
    double tau_us = 0.25;       // half-cycle duration; pulses span [0, 2*tau]
    double gamma0_mhz = 0.0;    // |p> -> |0> decay
    double gamma1_mhz = 0.0;    // |p> -> |1> decay
    double gamma_r_mhz = 0.0;   // |r> -> |p> decay
    double gamma_rd_mhz = 0.0;  // Rydberg dephasing

    double omega_rad() const { return two_pi() * omega_mhz; }
    double delta_rad() const { return two_pi() * delta_mhz; }
    double v_r_rad() const { return two_pi() * v_r_mhz; }
    double gamma0_rad() const { return two_pi() * gamma0_mhz; }
    double gamma1_rad() const { return two_pi() * gamma1_mhz; }
    double gamma_r_rad() const { return two_pi() * gamma_r_mhz; }
    double gamma_rd_rad() const { return two_pi() * gamma_rd_mhz; }

    double gamma_p_mhz() const { return gamma0_mhz + gamma1_mhz; }
    // gamma_p splits evenly between the two ground states unless gamma0/gamma1
    // are set individually.
    void set_gamma_p_mhz(double g) {
        gamma0_mhz = 0.5 * g;
        gamma1_mhz = 0.5 * g;
    }

    void validate() const;  // throws ConfigError

    bool operator==(const PhysicalParams&) const = default;

    static constexpr double two_pi() { return 6.283185307179586476925286766559; }
};

struct PulseSample {
    double t;       // us
    double omega1;  // |1>-|p> coupling, rad/us, >= 0
    double omega2;  // |p>-|r> coupling, rad/us, >= 0
    double theta;   // mixing angle atan2(omega1, omega2), in [0, pi/2]
};

// Omega_1(t) = Omega sin(pi t / 2 tau), Omega_2(t) = Omega |cos(pi t / 2 tau)|,
// valid on [0, 2 tau]. Throws TimeOutOfRange outside (with a ~1e-9*tau slack
// for accumulated floating-point endpoints).
PulseSample pulse(const PhysicalParams& params, double t);

// H = Delta|p><p| + Omega_1(t)|1><p| + Omega_2(t)|p><r| + h.c. in the
// 4-level basis; the |0> row/column is identically zero.
OperatorMatrix single_atom_hamiltonian(const PhysicalParams& params, double t);

// H(t) = H1 (x) I + I (x) H2 + V_R |rr><rr|, dim 16.
OperatorMatrix two_atom_hamiltonian(const PhysicalParams& params, double t);

// Analytic time derivatives of the above (the pulse is differentiated in
// closed form; at t = tau the |cos| kink takes the left-sided slope).
OperatorMatrix single_atom_hamiltonian_dt(const PhysicalParams& params, double t);
OperatorMatrix two_atom_hamiltonian_dt(const PhysicalParams& params, double t);

// The 8 Lindblad collapse operators (4 channel types x 2 atoms), embedded in
// the two-atom space, with rates in angular units. Channels whose rate is
// zero are omitted, so the list is empty when all rates vanish.
//   C0 = sqrt(g0)|0><p|, C1 = sqrt(g1)|1><p|, Cr = sqrt(gr)|p><r|,
//   Crd = sqrt(grd)(I - 2|r><r|)
// Order: atom 1 (C0, C1, Cr, Crd) then atom 2 (same order).
std::vector<OperatorMatrix> collapse_operators(const PhysicalParams& params);

// 16x16 permutation exchanging the two atoms: S|ab> = |ba>.
OperatorMatrix atom_swap();

}  // namespace rydgate
