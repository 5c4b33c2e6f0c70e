#include "rydgate/motion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rydgate/model.hpp"

namespace rydgate {

double TrapParams::omega0_rad_per_us() const {
    // kHz -> MHz -> rad/us
    return PhysicalParams::two_pi() * 1e-3 * omega0_khz;
}

void TrapParams::validate() const {
    if (!(omega0_khz > 0.0) || !(r0_nm > 0.0) || !(r_um > 0.0))
        throw ConfigError("trap parameters must be strictly positive");
    if (!std::isfinite(omega0_khz) || !std::isfinite(r0_nm) || !std::isfinite(r_um))
        throw ConfigError("trap parameters must be finite");
}

double motional_force_scale(double v_r_mhz, double r_um) {
    if (!(r_um > 0.0)) throw ConfigError("separation r must be > 0");
    return 6.0 * PhysicalParams::two_pi() * v_r_mhz / r_um;
}

Complex motional_amplitude(double v_r_mhz, const TrapParams& trap, double tau_us,
                           bool with_factor6) {
    trap.validate();
    const double factor = with_factor6 ? 6.0 : 1.0;
    const double omega0 = trap.omega0_rad_per_us();
    const double v_r = PhysicalParams::two_pi() * v_r_mhz;
    const Complex ring = Complex(1.0, 0.0) - std::polar(1.0, -omega0 * tau_us);
    return factor * (trap.r0_um() / trap.r_um) * (v_r / omega0) * ring;
}

double excitation_probability(double v_r_mhz, const TrapParams& trap, double tau_us,
                              bool with_factor6, bool* perturbation_invalid) {
    const Complex amp = motional_amplitude(v_r_mhz, trap, tau_us, with_factor6);
    const double abs2 = std::norm(amp);
    if (perturbation_invalid) *perturbation_invalid = abs2 > 0.5;
    return std::min(1.0, 0.5 * abs2);
}

MotionReport motion_report(double v_r_mhz, const TrapParams& trap, double tau_us) {
    MotionReport rep;
    rep.force_scale = motional_force_scale(v_r_mhz, trap.r_um);
    for (const bool factor6 : {false, true}) {
        MotionEstimate est;
        est.with_factor6 = factor6;
        est.amplitude = motional_amplitude(v_r_mhz, trap, tau_us, factor6);
        est.amplitude_abs2 = std::norm(est.amplitude);
        est.probability = excitation_probability(v_r_mhz, trap, tau_us, factor6,
                                                 &est.perturbation_invalid);
        (factor6 ? rep.literal_factor6 : rep.no_factor6) = est;
    }
    return rep;
}

}  // namespace rydgate
