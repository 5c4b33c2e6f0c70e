#pragma once

#include "rydgate/linalg.hpp"

namespace rydgate {

// Harmonic-trap parameters for the motional-excitation estimate. Interface
// units follow the quoted experimental numbers (kHz trap frequency, nm
// ground-state width, um separation); conversions to angular rad/us and um
// happen internally.
struct TrapParams {
    double omega0_khz = 36.0;  // trap frequency
    double r0_nm = 390.0;      // ground-state position uncertainty
    double r_um = 11.73;       // interatomic separation

    double omega0_rad_per_us() const;  // 2 pi * omega0 in rad/us
    double r0_um() const { return 1e-3 * r0_nm; }

    void validate() const;  // throws ConfigError

    bool operator==(const TrapParams&) const = default;
};

// van der Waals force scale on the doubly excited pair: 6 V_R / r,
// in rad/us per um.
double motional_force_scale(double v_r_mhz, double r_um);

// First-order motional excitation amplitude
//   f * (r0 / r) * (V_R / omega0) * (1 - e^{-i omega0 tau}),
// with f = 6 (the literal van der Waals prefactor) or f = 1. The two
// conventions disagree in the source material; both are exposed.
Complex motional_amplitude(double v_r_mhz, const TrapParams& trap, double tau_us,
                           bool with_factor6 = true);

// (1/2) |amplitude|^2 — the 1/2 being the average |rr> population during the
// gate — clipped to [0, 1]. The default convention (no factor 6) is the one
// consistent with the quoted ~0.022 benchmark. When |amplitude|^2 > 0.5 the
// first-order estimate is outside its validity range; that is reported
// through *perturbation_invalid rather than an exception.
double excitation_probability(double v_r_mhz, const TrapParams& trap, double tau_us,
                              bool with_factor6 = false,
                              bool* perturbation_invalid = nullptr);

struct MotionEstimate {
    bool with_factor6 = false;
    Complex amplitude;
    double amplitude_abs2 = 0.0;
    double probability = 0.0;
    bool perturbation_invalid = false;
};

struct MotionReport {
    double force_scale = 0.0;         // rad/us per um
    MotionEstimate no_factor6;        // default convention
    MotionEstimate literal_factor6;   // literal formula
};

MotionReport motion_report(double v_r_mhz, const TrapParams& trap, double tau_us);

}  // namespace rydgate
