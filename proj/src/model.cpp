#include "rydgate/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rydgate {

namespace {

bool all_finite(const PhysicalParams& p) {
    return std::isfinite(p.omega_mhz) && std::isfinite(p.delta_mhz) &&
           std::isfinite(p.v_r_mhz) && std::isfinite(p.tau_us) &&
           std::isfinite(p.gamma0_mhz) && std::isfinite(p.gamma1_mhz) &&
           std::isfinite(p.gamma_r_mhz) && std::isfinite(p.gamma_rd_mhz);
}

// Clamp t to [0, 2 tau] when it is within floating-point slack of the
// endpoints; otherwise report the violation.
double checked_time(const PhysicalParams& p, double t) {
    const double span = 2.0 * p.tau_us;
    const double slack = 1e-9 * std::max(1.0, span);
    if (t < -slack || t > span + slack) {
        throw TimeOutOfRange("t = " + std::to_string(t) + " outside [0, " +
                             std::to_string(span) + "]");
    }
    if (t < 0.0) return 0.0;
    if (t > span) return span;
    return t;
}

}  // namespace

void PhysicalParams::validate() const {
    if (!all_finite(*this)) throw ConfigError("physical parameters must be finite");
    if (!(omega_mhz > 0.0)) throw ConfigError("omega_mhz must be > 0");
    if (!(tau_us > 0.0)) throw ConfigError("tau_us must be > 0");
    if (gamma0_mhz < 0.0 || gamma1_mhz < 0.0 || gamma_r_mhz < 0.0 || gamma_rd_mhz < 0.0)
        throw ConfigError("decay rates must be >= 0");
}

PulseSample pulse(const PhysicalParams& params, double t) {
    const double tc = checked_time(params, t);
    const double x = 0.5 * std::numbers::pi_v<double> * tc / params.tau_us;
    const double omega = params.omega_rad();
    PulseSample s;
    s.t = t;
    s.omega1 = omega * std::sin(x);
    s.omega2 = omega * std::abs(std::cos(x));
    if (s.omega1 < 0.0) s.omega1 = 0.0;  // sin rounds to -0 near the ends
    s.theta = std::atan2(s.omega1, s.omega2);
    return s;
}

OperatorMatrix single_atom_hamiltonian(const PhysicalParams& params, double t) {
    const PulseSample s = pulse(params, t);
    OperatorMatrix h(kAtomDim);
    const int g1 = static_cast<int>(Level::G1);
    const int p = static_cast<int>(Level::P);
    const int r = static_cast<int>(Level::R);
    h(p, p) = params.delta_rad();
    h(g1, p) = s.omega1;
    h(p, g1) = s.omega1;
    h(p, r) = s.omega2;
    h(r, p) = s.omega2;
    return h;
}

OperatorMatrix two_atom_hamiltonian(const PhysicalParams& params, double t) {
    const OperatorMatrix h1 = single_atom_hamiltonian(params, t);
    const OperatorMatrix eye = OperatorMatrix::identity(kAtomDim);
    OperatorMatrix h = tensor_product(h1, eye) + tensor_product(eye, h1);
    h(kIdxRR, kIdxRR) += params.v_r_rad();
    return h;
}

OperatorMatrix single_atom_hamiltonian_dt(const PhysicalParams& params, double t) {
    const double tc = [&] {
        // reuse the pulse range check
        (void)pulse(params, t);
        return std::clamp(t, 0.0, 2.0 * params.tau_us);
    }();
    const double rate = 0.5 * std::numbers::pi_v<double> / params.tau_us;
    const double x = rate * tc;
    const double omega = params.omega_rad();
    const double domega1 = omega * rate * std::cos(x);
    // d|cos x|/dx = -sin(x) sgn(cos x); the sign convention at the kink
    // (x = pi/2) keeps the left-sided slope.
    const double sgn = (std::cos(x) >= 0.0) ? 1.0 : -1.0;
    const double domega2 = -omega * rate * std::sin(x) * sgn;

    OperatorMatrix dh(kAtomDim);
    const int g1 = static_cast<int>(Level::G1);
    const int p = static_cast<int>(Level::P);
    const int r = static_cast<int>(Level::R);
    dh(g1, p) = domega1;
    dh(p, g1) = domega1;
    dh(p, r) = domega2;
    dh(r, p) = domega2;
    return dh;
}

OperatorMatrix two_atom_hamiltonian_dt(const PhysicalParams& params, double t) {
    const OperatorMatrix dh1 = single_atom_hamiltonian_dt(params, t);
    const OperatorMatrix eye = OperatorMatrix::identity(kAtomDim);
    return tensor_product(dh1, eye) + tensor_product(eye, dh1);
}

std::vector<OperatorMatrix> collapse_operators(const PhysicalParams& params) {
    params.validate();

    const int g0 = static_cast<int>(Level::G0);
    const int g1 = static_cast<int>(Level::G1);
    const int p = static_cast<int>(Level::P);
    const int r = static_cast<int>(Level::R);

    struct Channel {
        double rate_rad;
        OperatorMatrix op;  // single-atom, without the sqrt(rate) factor
    };

    std::vector<Channel> channels;
    {
        OperatorMatrix c0(kAtomDim);
        c0(g0, p) = 1.0;
        channels.push_back({params.gamma0_rad(), c0});

        OperatorMatrix c1(kAtomDim);
        c1(g1, p) = 1.0;
        channels.push_back({params.gamma1_rad(), c1});

        OperatorMatrix cr(kAtomDim);
        cr(p, r) = 1.0;
        channels.push_back({params.gamma_r_rad(), cr});

        // literal form including the identity part
        OperatorMatrix crd = OperatorMatrix::identity(kAtomDim);
        crd(r, r) = -1.0;
        channels.push_back({params.gamma_rd_rad(), crd});
    }

    const OperatorMatrix eye = OperatorMatrix::identity(kAtomDim);
    std::vector<OperatorMatrix> out;
    for (int atom = 0; atom < 2; ++atom) {
        for (const Channel& ch : channels) {
            if (ch.rate_rad <= 0.0) continue;
            const Complex amp(std::sqrt(ch.rate_rad), 0.0);
            OperatorMatrix embedded = (atom == 0) ? tensor_product(ch.op, eye)
                                                  : tensor_product(eye, ch.op);
            out.push_back(amp * embedded);
        }
    }
    return out;
}

OperatorMatrix atom_swap() {
    OperatorMatrix s(kPairDim);
    for (int a = 0; a < kAtomDim; ++a)
        for (int b = 0; b < kAtomDim; ++b) s(pair_index(a, b), pair_index(b, a)) = 1.0;
    return s;
}

}  // namespace rydgate
