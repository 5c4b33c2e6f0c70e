#include "rydgate/gate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

namespace rydgate {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;

// TargetGate row/column k acts on qubit label order |11>, |10>, |01>, |00>;
// map to composite indices.
constexpr std::array<int, 4> kTargetBasis{kIdx11, kIdx10, kIdx01, kIdx00};

double qubit_population(const Observables& o) {
    double s = 0.0;
    for (int idx : kQubitIndices) s += o.populations[static_cast<std::size_t>(idx)];
    return s;
}

}  // namespace

double wrap_to_pi(double angle) {
    double a = std::remainder(angle, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;  // remainder returns (-pi, pi]; keep the contract explicit
    return a;
}

TargetGate target_gate(double phi) {
    TargetGate g;
    g.phi = phi;
    g.matrix = OperatorMatrix::identity(4);
    g.matrix(0, 0) = std::polar(1.0, phi);
    return g;
}

OperatorMatrix embed_target(const TargetGate& target) {
    OperatorMatrix u = OperatorMatrix::identity(kPairDim);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) u(kTargetBasis[r], kTargetBasis[c]) = target.matrix(r, c);
    return u;
}

StateVector plus_plus_state() {
    StateVector one(kAtomDim);
    one[static_cast<int>(Level::G0)] = Complex(1.0 / std::sqrt(2.0), 0.0);
    one[static_cast<int>(Level::G1)] = Complex(1.0 / std::sqrt(2.0), 0.0);
    return tensor_product(one, one);
}

GateResult simulate_gate(const PhysicalParams& params, bool dissipative,
                         const SolverConfig& cfg) {
    params.validate();
    GateResult result;
    result.dissipative = dissipative;

    const double t_end = 2.0 * params.tau_us;
    std::array<double, 4> diag_phase{};

    for (std::size_t b = 0; b < 4; ++b) {
        const StateVector psi0 = StateVector::basis(kPairDim, kQubitIndices[b]);
        if (!dissipative) {
            const Trajectory traj = evolve_schrodinger(params, psi0, 0.0, t_end, cfg);
            const StateVector& fin = traj.final_state();
            const Complex amp = fin[kQubitIndices[b]];
            result.return_probabilities[b] = std::norm(amp);
            result.qubit_populations[b] = qubit_population(traj.final_observables());
            diag_phase[b] = std::arg(amp);
            result.final_states[b] = fin;
        } else {
            const Trajectory traj =
                evolve_lindblad(params, projector(psi0), 0.0, t_end, cfg);
            const DensityMatrix& fin = traj.final_rho();
            result.return_probabilities[b] =
                fin(kQubitIndices[b], kQubitIndices[b]).real();
            result.qubit_populations[b] = qubit_population(traj.final_observables());
            result.final_rhos[b] = fin;
        }
    }

    if (!dissipative) {
        for (std::size_t b = 0; b < 4; ++b) {
            if (result.return_probabilities[b] < 0.5) {
                throw LowReturn("input |" + std::string(kQubitLabels[b]) +
                                "> returns with probability " +
                                std::to_string(result.return_probabilities[b]) +
                                "; entangling phase ill-defined");
            }
        }
        // phi_11 - phi_10 - phi_01 + phi_00: single-qubit frame phases cancel
        result.entangling_phase =
            wrap_to_pi(diag_phase[3] - diag_phase[2] - diag_phase[1] + diag_phase[0]);
    }
    return result;
}

double fidelity(const DensityMatrix& rho_final, const StateVector& psi0,
                const TargetGate& target) {
    if (rho_final.dim() != kPairDim || psi0.dim() != kPairDim)
        throw DimensionMismatch("fidelity expects dim-16 arguments");
    for (int i = 0; i < kPairDim; ++i) {
        const bool qubit = (std::find(kQubitIndices.begin(), kQubitIndices.end(), i) !=
                            kQubitIndices.end());
        if (!qubit && std::abs(psi0[i]) > 1e-10)
            throw SupportOutsideQubitSubspace("psi0 has amplitude " +
                                              std::to_string(std::abs(psi0[i])) +
                                              " on basis state " + std::to_string(i));
    }

    const OperatorMatrix u = embed_target(target);
    const StateVector psi_target = matvec(u, psi0);

    // Tr[U rho0 U^dag rho_final] = <psi_t| rho_final |psi_t> for pure rho0
    Complex f(0.0, 0.0);
    for (int i = 0; i < kPairDim; ++i)
        for (int j = 0; j < kPairDim; ++j)
            f += std::conj(psi_target[i]) * rho_final(i, j) * psi_target[j];

    if (std::abs(f.imag()) > 1e-10)
        throw SolverError("fidelity has imaginary part " + std::to_string(f.imag()));
    return std::clamp(f.real(), 0.0, 1.0);
}

namespace {

double unitary_phase(const PhysicalParams& base, double tau, const SolverConfig& cfg) {
    PhysicalParams p = base;
    p.tau_us = tau;
    SolverConfig run_cfg = cfg;
    run_cfg.record_every = 1 << 30;  // endpoints only; intermediate states unused
    const GateResult r = simulate_gate(p, /*dissipative=*/false, run_cfg);
    return *r.entangling_phase;
}

}  // namespace

double calibrate_tau(const PhysicalParams& params, double phi_target, double tau_lo,
                     double tau_hi, double tol_rad, const SolverConfig& cfg,
                     int scan_points) {
    if (!(tau_lo > 0.0) || !(tau_hi > tau_lo))
        throw BracketInvalid("need 0 < tau_lo < tau_hi");
    if (!(tol_rad > 0.0)) throw BracketInvalid("tolerance must be > 0");

    // Coarse pre-scan; the wrapped phases are unwrapped by continuity in tau.
    // Points where the gate does not return (LowReturn) carry no usable
    // phase; they are skipped and only gaps between valid neighbors count.
    const int n_scan = std::clamp(scan_points, 8, 128);
    std::vector<double> taus(n_scan), phases(n_scan);
    std::vector<bool> valid(n_scan, false);
    int prev_valid = -1;
    for (int i = 0; i < n_scan; ++i) {
        taus[i] = tau_lo + (tau_hi - tau_lo) * i / (n_scan - 1);
        try {
            const double wrapped = unitary_phase(params, taus[i], cfg);
            phases[i] = (prev_valid < 0)
                            ? wrapped
                            : phases[prev_valid] + wrap_to_pi(wrapped - phases[prev_valid]);
            valid[i] = true;
            prev_valid = i;
        } catch (const LowReturn&) {
            phases[i] = 0.0;
        }
    }
    if (prev_valid < 0)
        throw LowReturn("no point of the calibration bracket returns to the qubit "
                        "subspace; enlarge tau");

    // Shift the target by 2 pi k into the scanned range and take the
    // smallest-tau crossing (the fastest gate with the requested phase).
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_scan; ++i) {
        if (!valid[i]) continue;
        lo = std::min(lo, phases[i]);
        hi = std::max(hi, phases[i]);
    }
    int seg = -1;
    double shifted = 0.0;
    const int k_min = static_cast<int>(std::floor((lo - phi_target) / (2.0 * kPi))) - 1;
    const int k_max = static_cast<int>(std::ceil((hi - phi_target) / (2.0 * kPi))) + 1;
    for (int i = 0; i + 1 < n_scan && seg < 0; ++i) {
        if (!valid[i] || !valid[i + 1]) continue;
        for (int k = k_min; k <= k_max; ++k) {
            const double t = phi_target + 2.0 * kPi * k;
            if ((phases[i] - t) * (phases[i + 1] - t) <= 0.0) {
                seg = i;
                shifted = t;
                break;
            }
        }
    }
    if (seg < 0) {
        throw BracketInvalid("entangling phase spans [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "] rad over the bracket; target " +
                             std::to_string(phi_target) + " + 2 pi k not crossed");
    }

    double a = taus[seg], b = taus[seg + 1];
    double fa = phases[seg] - shifted, fb = phases[seg + 1] - shifted;
    if (std::abs(fa) < tol_rad) return a;
    if (std::abs(fb) < tol_rad) return b;

    double best_tau = (std::abs(fa) < std::abs(fb)) ? a : b;
    double best_err = std::min(std::abs(fa), std::abs(fb));
    for (int iter = 0; iter < 80; ++iter) {
        const double mid = 0.5 * (a + b);
        const double wrapped = unitary_phase(params, mid, cfg);
        // rebranch the wrapped phase next to the bracket's unwrapped values
        const double guide = 0.5 * (fa + fb) + shifted;
        const double fm =
            wrapped + 2.0 * kPi * std::round((guide - wrapped) / (2.0 * kPi)) - shifted;
        if (std::abs(fm) < best_err) {
            best_err = std::abs(fm);
            best_tau = mid;
        }
        if (std::abs(fm) < tol_rad) return mid;
        if ((fa <= 0.0) == (fm <= 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
        if (b - a < 1e-13 * std::max(1.0, b)) break;
    }
    if (best_err < tol_rad) return best_tau;
    throw BracketInvalid("bisection failed to reach phase tolerance; residual " +
                         std::to_string(best_err) + " rad");
}

std::vector<SweepRow> fidelity_sweep(const PhysicalParams& base,
                                     const std::vector<double>& v_r_mhz_values,
                                     const SolverConfig& cfg, int threads) {
    if (v_r_mhz_values.empty()) throw ConfigError("fidelity_sweep: empty V_R list");
    base.validate();

    std::vector<double> values = v_r_mhz_values;
    std::sort(values.begin(), values.end());

    std::vector<SweepRow> rows(values.size());
    const StateVector psi0 = plus_plus_state();
    const TargetGate target = target_gate(kPi);

    const auto worker = [&](std::size_t r) {
        SweepRow& row = rows[r];
        row.v_r_mhz = values[r];
        PhysicalParams p = base;
        p.v_r_mhz = values[r];
        try {
            // Perturbatively tau_pi ~ 4 pi / (3 V_R). The bracket starts in the
            // solidly adiabatic band (Omega tau >= 25; below that the return
            // probability oscillates and the phase is unreliable) and is wide
            // enough to contain at least one pi + 2 pi k crossing at the
            // perturbative phase rate.
            const double tau_est = 4.0 * kPi / (3.0 * p.v_r_rad());
            const double tau_lo = std::max(0.15 * tau_est, 25.0 / p.omega_rad());
            const double width = std::max(2.2 * tau_est, 18.9 / p.v_r_rad());
            const double tau_hi = tau_lo + width;
            const int scan = std::max(
                24, static_cast<int>(std::ceil(0.75 * p.v_r_rad() * width / 1.2)));
            row.tau_us = calibrate_tau(p, kPi, tau_lo, tau_hi, 1e-3, cfg, scan);
            p.tau_us = row.tau_us;

            SolverConfig run_cfg = cfg;
            run_cfg.record_every = 1 << 30;
            const GateResult unitary = simulate_gate(p, false, run_cfg);
            row.entangling_phase = *unitary.entangling_phase;

            const Trajectory traj =
                evolve_lindblad(p, projector(psi0), 0.0, 2.0 * p.tau_us, run_cfg);
            row.f_pi = fidelity(traj.final_rho(), psi0, target);
            row.ok = true;
        } catch (const Error& e) {
            row.ok = false;
            row.error = e.kind();
        }
    };

    const int n_threads = std::max(1, threads);
    if (n_threads == 1 || rows.size() <= 1) {
        for (std::size_t r = 0; r < rows.size(); ++r) worker(r);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        std::mutex mtx;
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t r;
                    {
                        std::lock_guard<std::mutex> lock(mtx);
                        if (next >= rows.size()) return;
                        r = next++;
                    }
                    worker(r);
                }
            });
        }
        for (std::thread& th : pool) th.join();
    }
    return rows;
}

}  // namespace rydgate
