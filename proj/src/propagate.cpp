#include "rydgate/propagate.hpp"

#include <cmath>
#include <algorithm>
#include <numbers>
#include <string>

namespace rydgate {

namespace {

constexpr int kN = kPairDim;
constexpr std::size_t kN2 = static_cast<std::size_t>(kN) * kN;
using Buf = std::vector<Complex>;

// Sparse application of H(t). The sparsity pattern of Eq.-style
// H = H1 (x) I + I (x) H1 + V_R |rr><rr| is fixed; only the three pulse
// values change with t, so the pattern is precomputed once and the values
// refreshed per evaluation time.
struct SparseHamiltonian {
    explicit SparseHamiltonian(const PhysicalParams& p) : params(p) {
        const int g1 = static_cast<int>(Level::G1);
        const int pp = static_cast<int>(Level::P);
        const int rr = static_cast<int>(Level::R);
        add_pair(g1, pp, &omega1_pos);
        add_pair(pp, rr, &omega2_pos);
        for (int k = 0; k < kAtomDim; ++k) {
            delta_pos.push_back({pair_index(pp, k), pair_index(pp, k)});
            delta_pos.push_back({pair_index(k, pp), pair_index(k, pp)});
        }
    }

    void set_time(double t) {
        const PulseSample s = pulse(params, t);
        omega1 = s.omega1;
        omega2 = s.omega2;
    }

    // y += H x
    void accumulate(const Complex* x, Complex* y) const {
        for (const auto& [i, j] : omega1_pos) y[i] += omega1 * x[j];
        for (const auto& [i, j] : omega2_pos) y[i] += omega2 * x[j];
        const double delta = params.delta_rad();
        if (delta != 0.0)
            for (const auto& [i, j] : delta_pos) y[i] += delta * x[j];
        y[kIdxRR] += params.v_r_rad() * x[kIdxRR];
    }

    // out = -i H x
    void schrodinger_rhs(const Complex* x, Complex* out) const {
        Complex hx[kN] = {};
        accumulate(x, hx);
        for (int i = 0; i < kN; ++i) out[i] = Complex(hx[i].imag(), -hx[i].real());
    }

    // acc += H rho (left) and accR += rho H (right), rho row-major kN x kN
    void left_right_accumulate(const Complex* rho, Complex* hrho, Complex* rhoh) const {
        apply_group(omega1_pos, omega1, rho, hrho, rhoh);
        apply_group(omega2_pos, omega2, rho, hrho, rhoh);
        const double delta = params.delta_rad();
        if (delta != 0.0) apply_group(delta_pos, delta, rho, hrho, rhoh);
        const double vr = params.v_r_rad();
        for (int k = 0; k < kN; ++k) {
            hrho[static_cast<std::size_t>(kIdxRR) * kN + k] +=
                vr * rho[static_cast<std::size_t>(kIdxRR) * kN + k];
            rhoh[static_cast<std::size_t>(k) * kN + kIdxRR] +=
                vr * rho[static_cast<std::size_t>(k) * kN + kIdxRR];
        }
    }

    PhysicalParams params;
    double omega1 = 0.0;
    double omega2 = 0.0;
    std::vector<std::pair<int, int>> omega1_pos, omega2_pos, delta_pos;

private:
    // Hermitian single-atom coupling (a,b)+(b,a), embedded for both atoms.
    void add_pair(int a, int b, std::vector<std::pair<int, int>>* pos) {
        for (int k = 0; k < kAtomDim; ++k) {
            pos->push_back({pair_index(a, k), pair_index(b, k)});
            pos->push_back({pair_index(b, k), pair_index(a, k)});
            pos->push_back({pair_index(k, a), pair_index(k, b)});
            pos->push_back({pair_index(k, b), pair_index(k, a)});
        }
    }

    static void apply_group(const std::vector<std::pair<int, int>>& pos, double value,
                            const Complex* rho, Complex* hrho, Complex* rhoh) {
        for (const auto& [i, j] : pos) {
            const Complex* src = rho + static_cast<std::size_t>(j) * kN;
            Complex* dst = hrho + static_cast<std::size_t>(i) * kN;
            for (int k = 0; k < kN; ++k) dst[k] += value * src[k];
            // (rho H)[k,j] += rho[k,i] * H[i,j]; H is real here
            for (int k = 0; k < kN; ++k)
                rhoh[static_cast<std::size_t>(k) * kN + j] +=
                    value * rho[static_cast<std::size_t>(k) * kN + i];
        }
    }
};

struct SparseTriplet {
    int i, j;
    Complex v;
};

std::vector<SparseTriplet> to_triplets(const OperatorMatrix& m) {
    std::vector<SparseTriplet> out;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j)
            if (m(i, j) != Complex(0.0, 0.0)) out.push_back({i, j, m(i, j)});
    return out;
}

// Precompiled dissipator: each collapse operator as triplets plus the
// summed K = sum C^dag C (also triplets; diagonal for this model, but the
// application is generic).
struct Dissipator {
    explicit Dissipator(const PhysicalParams& params) {
        const auto ops = collapse_operators(params);
        OperatorMatrix ksum(kN);
        for (const OperatorMatrix& c : ops) {
            collapse.push_back(to_triplets(c));
            ksum = ksum + matmul(c.adjoint(), c);
        }
        k_triplets = to_triplets(ksum);
    }

    bool empty() const { return collapse.empty(); }

    // acc += sum_k C rho C^dag - 1/2 {K, rho}
    void accumulate(const Complex* rho, Complex* acc, Buf& scratch) const {
        Complex* tmp = scratch.data();  // kN2
        for (const auto& c : collapse) {
            std::fill(tmp, tmp + kN2, Complex(0.0, 0.0));
            // tmp = C rho
            for (const auto& t : c) {
                const Complex* src = rho + static_cast<std::size_t>(t.j) * kN;
                Complex* dst = tmp + static_cast<std::size_t>(t.i) * kN;
                for (int k = 0; k < kN; ++k) dst[k] += t.v * src[k];
            }
            // acc += tmp C^dag : (tmp C^dag)[a, i] = tmp[a, j] conj(C[i, j])
            for (const auto& t : c) {
                const Complex cv = std::conj(t.v);
                for (int a = 0; a < kN; ++a)
                    acc[static_cast<std::size_t>(a) * kN + t.i] +=
                        tmp[static_cast<std::size_t>(a) * kN + t.j] * cv;
            }
        }
        // acc -= 1/2 (K rho + rho K)
        for (const auto& t : k_triplets) {
            const Complex half = 0.5 * t.v;
            const Complex* src = rho + static_cast<std::size_t>(t.j) * kN;
            Complex* dst = acc + static_cast<std::size_t>(t.i) * kN;
            for (int k = 0; k < kN; ++k) dst[k] -= half * src[k];
            for (int k = 0; k < kN; ++k)
                acc[static_cast<std::size_t>(k) * kN + t.j] -=
                    half * rho[static_cast<std::size_t>(k) * kN + t.i];
        }
    }

    std::vector<std::vector<SparseTriplet>> collapse;
    std::vector<SparseTriplet> k_triplets;
};

struct StepPlan {
    int n_steps;
    double dt;
};

StepPlan plan_steps(const PhysicalParams& params, double t_start, double t_end,
                    const SolverConfig& cfg) {
    const double span = t_end - t_start;
    const double base = cfg.effective_dt(params.tau_us);
    int n = static_cast<int>(std::ceil(span / base - 1e-12));
    if (n < 1) n = 1;
    return {n, span / n};
}

void check_interval(const PhysicalParams& params, double t_start, double t_end) {
    const double span = 2.0 * params.tau_us;
    const double slack = 1e-9 * std::max(1.0, span);
    if (t_start < -slack || t_end > span + slack || t_end < t_start) {
        throw TimeOutOfRange("evolution interval [" + std::to_string(t_start) + ", " +
                             std::to_string(t_end) + "] not within [0, " +
                             std::to_string(span) + "]");
    }
}

}  // namespace

Observables observables_from_state(const StateVector& psi) {
    Observables o{};
    double total = 0.0;
    for (int i = 0; i < kN; ++i) {
        const double p = std::norm(psi[i]);
        o.populations[static_cast<std::size_t>(i)] = p;
        total += p;
        const int a = i / 4;
        const int b = i % 4;
        if (a == static_cast<int>(Level::P) || b == static_cast<int>(Level::P))
            o.p_p_total += p;
    }
    o.norm_or_trace = total;
    o.p_rr = o.populations[kIdxRR];
    return o;
}

Observables observables_from_density(const DensityMatrix& rho) {
    Observables o{};
    double total = 0.0;
    for (int i = 0; i < kN; ++i) {
        const double p = rho(i, i).real();
        o.populations[static_cast<std::size_t>(i)] = p;
        total += p;
        const int a = i / 4;
        const int b = i % 4;
        if (a == static_cast<int>(Level::P) || b == static_cast<int>(Level::P))
            o.p_p_total += p;
    }
    o.norm_or_trace = total;
    o.p_rr = o.populations[kIdxRR];
    return o;
}

Trajectory evolve_schrodinger(const PhysicalParams& params, const StateVector& psi0,
                              double t_start, double t_end, const SolverConfig& cfg) {
    params.validate();
    check_interval(params, t_start, t_end);
    if (psi0.dim() != kN)
        throw DimensionMismatch("evolve_schrodinger expects dim 16, got " +
                                std::to_string(psi0.dim()));
    if (std::abs(psi0.norm() - 1.0) > 1e-10)
        throw NormDrift("initial state norm " + std::to_string(psi0.norm()) + " != 1");

    Trajectory traj;
    traj.mixed = false;

    if (t_start == t_end) {
        traj.times.push_back(t_start);
        traj.pure_states.push_back(psi0);
        traj.observables.push_back(observables_from_state(psi0));
        return traj;
    }

    const StepPlan plan = plan_steps(params, t_start, t_end, cfg);
    SparseHamiltonian ham(params);

    Buf y(psi0.amplitudes());
    Buf k1(kN), k2(kN), k3(kN), k4(kN), tmp(kN);

    const auto record = [&](int step) {
        const double t = (step == plan.n_steps) ? t_end : t_start + step * plan.dt;
        StateVector s(kN);
        s.amplitudes() = y;
        traj.times.push_back(t);
        traj.observables.push_back(observables_from_state(s));
        traj.pure_states.push_back(std::move(s));
    };

    record(0);
    const int stride = std::max(1, cfg.record_every);
    for (int step = 0; step < plan.n_steps; ++step) {
        const double t = t_start + step * plan.dt;
        const double h = plan.dt;

        ham.set_time(t);
        ham.schrodinger_rhs(y.data(), k1.data());
        for (int i = 0; i < kN; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        ham.set_time(t + 0.5 * h);
        ham.schrodinger_rhs(tmp.data(), k2.data());
        for (int i = 0; i < kN; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        ham.schrodinger_rhs(tmp.data(), k3.data());
        for (int i = 0; i < kN; ++i) tmp[i] = y[i] + h * k3[i];
        ham.set_time(t + h);
        ham.schrodinger_rhs(tmp.data(), k4.data());
        for (int i = 0; i < kN; ++i)
            y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        double n2 = 0.0;
        for (int i = 0; i < kN; ++i) n2 += std::norm(y[i]);
        if (std::abs(n2 - 1.0) > 1e-6) {
            throw NormDrift("|psi|^2 = " + std::to_string(n2) + " at t = " +
                            std::to_string(t + h) + "; reduce dt");
        }

        const int done = step + 1;
        if (done == plan.n_steps || done % stride == 0) record(done);
    }
    return traj;
}

Trajectory evolve_lindblad(const PhysicalParams& params, const DensityMatrix& rho0,
                           double t_start, double t_end, const SolverConfig& cfg) {
    params.validate();
    check_interval(params, t_start, t_end);
    if (rho0.dim() != kN)
        throw DimensionMismatch("evolve_lindblad expects dim 16, got " +
                                std::to_string(rho0.dim()));
    if (rho0.hermiticity_error() > 1e-10)
        throw NonHermitianInput("initial density matrix is not Hermitian");
    if (std::abs(rho0.trace().real() - 1.0) > 1e-8 || std::abs(rho0.trace().imag()) > 1e-10)
        throw TraceDrift("initial density matrix trace != 1");
    {
        const EigenDecomposition eig = eigh(rho0);
        if (eig.values.front() < -1e-8)
            throw PositivityLoss("initial density matrix has eigenvalue " +
                                 std::to_string(eig.values.front()));
    }

    Trajectory traj;
    traj.mixed = true;

    if (t_start == t_end) {
        traj.times.push_back(t_start);
        traj.mixed_states.push_back(rho0);
        traj.observables.push_back(observables_from_density(rho0));
        return traj;
    }

    const StepPlan plan = plan_steps(params, t_start, t_end, cfg);
    SparseHamiltonian ham(params);
    const Dissipator diss(params);

    Buf y(rho0.data());
    Buf k(kN2), tmp(kN2), scratchA(kN2), scratchB(kN2), stage(kN2), acc(kN2);

    // rhs(t, rho) -> k
    const auto rhs = [&](double t, const Buf& rho, Buf& out) {
        std::fill(scratchA.begin(), scratchA.end(), Complex(0.0, 0.0));
        std::fill(scratchB.begin(), scratchB.end(), Complex(0.0, 0.0));
        ham.set_time(t);
        ham.left_right_accumulate(rho.data(), scratchA.data(), scratchB.data());
        for (std::size_t i = 0; i < kN2; ++i) {
            const Complex comm = scratchA[i] - scratchB[i];
            out[i] = Complex(comm.imag(), -comm.real());  // -i [H, rho]
        }
        if (!diss.empty()) diss.accumulate(rho.data(), out.data(), tmp);
    };

    const auto record = [&](int step) {
        const double t = (step == plan.n_steps) ? t_end : t_start + step * plan.dt;
        DensityMatrix rho(kN);
        rho.data() = y;
        const EigenDecomposition eig = eigh(rho);
        if (eig.values.front() < -1e-6)
            throw PositivityLoss("min eigenvalue " + std::to_string(eig.values.front()) +
                                 " at t = " + std::to_string(t) + "; reduce dt");
        traj.times.push_back(t);
        traj.observables.push_back(observables_from_density(rho));
        traj.mixed_states.push_back(std::move(rho));
    };

    record(0);
    const int stride = std::max(1, cfg.record_every);
    for (int step = 0; step < plan.n_steps; ++step) {
        const double t = t_start + step * plan.dt;
        const double h = plan.dt;

        rhs(t, y, k);
        for (std::size_t i = 0; i < kN2; ++i) stage[i] = y[i] + 0.5 * h * k[i];
        acc = k;
        rhs(t + 0.5 * h, stage, k);
        for (std::size_t i = 0; i < kN2; ++i) {
            acc[i] += 2.0 * k[i];
            stage[i] = y[i] + 0.5 * h * k[i];
        }
        rhs(t + 0.5 * h, stage, k);
        for (std::size_t i = 0; i < kN2; ++i) {
            acc[i] += 2.0 * k[i];
            stage[i] = y[i] + h * k[i];
        }
        rhs(t + h, stage, k);
        for (std::size_t i = 0; i < kN2; ++i) y[i] += (h / 6.0) * (acc[i] + k[i]);

        double tr = 0.0;
        for (int i = 0; i < kN; ++i) tr += y[static_cast<std::size_t>(i) * kN + i].real();
        if (std::abs(tr - 1.0) > 1e-6)
            throw TraceDrift("Tr rho = " + std::to_string(tr) + " at t = " +
                             std::to_string(t + h) + "; reduce dt");

        const int done = step + 1;
        if (done == plan.n_steps || done % stride == 0) record(done);
    }
    return traj;
}

double step_convergence_check(const PhysicalParams& params, const StateVector& psi0,
                              const SolverConfig& cfg) {
    SolverConfig coarse = cfg;
    coarse.dt_us = cfg.effective_dt(params.tau_us);
    SolverConfig fine = coarse;
    fine.dt_us = 0.5 * coarse.dt_us;
    fine.record_every = 2 * std::max(1, coarse.record_every);

    const double t_end = 2.0 * params.tau_us;
    const Trajectory a = evolve_schrodinger(params, psi0, 0.0, t_end, coarse);
    const Trajectory b = evolve_schrodinger(params, psi0, 0.0, t_end, fine);

    const std::size_t n = std::min(a.times.size(), b.times.size());
    double dev = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        for (int i = 0; i < kN; ++i)
            dev = std::max(dev, std::abs(a.pure_states[s][i] - b.pure_states[s][i]));
    }
    return dev;
}

}  // namespace rydgate
