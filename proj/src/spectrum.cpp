#include "rydgate/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rydgate {

namespace {

constexpr int kN = kPairDim;

// Re-basis each (numerically exact) degenerate eigenvalue cluster so its
// vectors align with the given reference states. Inside a degenerate
// subspace the Jacobi output basis is arbitrary and can rotate wildly
// between neighboring grid points; the references restore a well-defined
// choice. At t = 0 the references are the computational basis states (the
// Hamiltonian is block diagonal there, so the cluster spans contain exact
// basis states); at later grid points they are the previous step's branch
// vectors, which keeps tracking continuous through persistent degeneracies
// such as the zero eigenspace at Delta = 0.
void align_degenerate_clusters(EigenDecomposition& eig,
                               const std::vector<StateVector>& refs, double cluster_tol) {
    const int n = static_cast<int>(eig.values.size());
    int lo = 0;
    while (lo < n) {
        int hi = lo + 1;
        while (hi < n && eig.values[hi] - eig.values[hi - 1] <= cluster_tol) ++hi;
        const int m = hi - lo;
        if (m > 1) {
            std::vector<StateVector> chosen;
            for (std::size_t r = 0;
                 r < refs.size() && static_cast<int>(chosen.size()) < m; ++r) {
                // project the reference onto the cluster span
                StateVector q(kN);
                for (int k = lo; k < hi; ++k) {
                    const Complex c = inner(eig.vectors[k], refs[r]);
                    for (int i = 0; i < kN; ++i) q[i] += c * eig.vectors[k][i];
                }
                if (q.norm2() < 0.25) continue;
                for (const StateVector& prev : chosen) {
                    const Complex c = inner(prev, q);
                    for (int i = 0; i < kN; ++i) q[i] -= c * prev[i];
                }
                if (q.norm() < 1e-3) continue;
                chosen.push_back(q.normalized());
            }
            // complete the basis of the span with the original vectors
            for (int k = lo; k < hi && static_cast<int>(chosen.size()) < m; ++k) {
                StateVector q = eig.vectors[k];
                for (const StateVector& prev : chosen) {
                    const Complex c = inner(prev, q);
                    for (int i = 0; i < kN; ++i) q[i] -= c * prev[i];
                }
                if (q.norm() < 1e-8) continue;
                chosen.push_back(q.normalized());
            }
            for (int k = 0; k < static_cast<int>(chosen.size()) && lo + k < hi; ++k)
                eig.vectors[lo + k] = chosen[k];
        }
        lo = hi;
    }
}

std::vector<StateVector> basis_references() {
    std::vector<StateVector> refs;
    refs.reserve(kN);
    for (int b = 0; b < kN; ++b) refs.push_back(StateVector::basis(kN, b));
    return refs;
}

int dominant_label(const StateVector& v) {
    int best = 0;
    double bestp = -1.0;
    for (int i = 0; i < v.dim(); ++i) {
        const double p = std::norm(v[i]);
        if (p > bestp) {
            bestp = p;
            best = i;
        }
    }
    return best;
}

}  // namespace

StateVector dark_state(double theta) {
    StateVector v(kAtomDim);
    v[static_cast<int>(Level::G1)] = std::cos(theta);
    v[static_cast<int>(Level::R)] = -std::sin(theta);
    return v;
}

StateVector two_atom_dark_state(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double denom = c * c * c * c + 2.0 * s * s * s * s;
    if (denom < 1e-12)
        throw DegenerateAngle("normalization cos^4 + 2 sin^4 = " + std::to_string(denom));
    const double norm = 1.0 / std::sqrt(denom);
    StateVector v(kPairDim);
    v[kIdx11] = norm * (c * c - s * s);
    v[pair_index(Level::G1, Level::R)] = -norm * c * s;
    v[pair_index(Level::R, Level::G1)] = -norm * c * s;
    v[kIdxPP] = norm * s * s;
    return v;
}

EigenDecomposition instantaneous_spectrum(const PhysicalParams& params, double t) {
    return eigh(two_atom_hamiltonian(params, t));
}

SpectrumBranches track_branches(const PhysicalParams& params, int grid_size) {
    params.validate();
    if (grid_size < 100) throw ConfigError("track_branches: grid_size must be >= 100");
    const int steps = grid_size + (grid_size % 2);  // even, so t = tau is on the grid

    SpectrumBranches out;
    const double span = 2.0 * params.tau_us;
    out.times.resize(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k)
        out.times[static_cast<std::size_t>(k)] = span * k / steps;
    out.tau_sample = static_cast<std::size_t>(steps / 2);

    const double cluster_tol = 1e-9 * std::max(1.0, 4.0 * params.omega_rad() +
                                                        std::abs(params.delta_rad()) +
                                                        std::abs(params.v_r_rad()));

    EigenDecomposition eig = instantaneous_spectrum(params, 0.0);
    align_degenerate_clusters(eig, basis_references(), cluster_tol);

    out.branches.resize(kN);
    for (int m = 0; m < kN; ++m) {
        Branch& br = out.branches[static_cast<std::size_t>(m)];
        br.label_t0 = dominant_label(eig.vectors[m]);
        br.energies.reserve(out.times.size());
        br.vectors.reserve(out.times.size());
        br.energies.push_back(eig.values[m]);
        br.vectors.push_back(eig.vectors[m]);
    }

    for (std::size_t k = 1; k < out.times.size(); ++k) {
        EigenDecomposition next = instantaneous_spectrum(params, out.times[k]);
        {
            std::vector<StateVector> refs;
            refs.reserve(kN);
            for (int m = 0; m < kN; ++m)
                refs.push_back(out.branches[static_cast<std::size_t>(m)].vectors.back());
            align_degenerate_clusters(next, refs, cluster_tol);
        }

        // greedy maximal-overlap assignment prev branch -> new eigenvector
        std::vector<int> assign(kN, -1);
        std::vector<bool> used(kN, false);
        std::vector<std::vector<Complex>> ov(kN, std::vector<Complex>(kN));
        for (int m = 0; m < kN; ++m)
            for (int j = 0; j < kN; ++j)
                ov[m][j] = inner(out.branches[static_cast<std::size_t>(m)].vectors.back(),
                                 next.vectors[j]);
        for (int pick = 0; pick < kN; ++pick) {
            int bm = -1, bj = -1;
            double best = -1.0;
            for (int m = 0; m < kN; ++m) {
                if (assign[m] >= 0) continue;
                for (int j = 0; j < kN; ++j) {
                    if (used[j]) continue;
                    const double a = std::abs(ov[m][j]);
                    if (a > best) {
                        best = a;
                        bm = m;
                        bj = j;
                    }
                }
            }
            if (best < 0.5) {
                throw AmbiguousTracking(
                    "best overlap " + std::to_string(best) + " at t = " +
                    std::to_string(out.times[k]) + "; refine the grid");
            }
            assign[bm] = bj;
            used[bj] = true;
        }

        for (int m = 0; m < kN; ++m) {
            Branch& br = out.branches[static_cast<std::size_t>(m)];
            const int j = assign[m];
            StateVector v = next.vectors[j];
            const Complex o = ov[m][j];
            const Complex ph = std::conj(o) / std::abs(o);  // make overlap real > 0
            for (int i = 0; i < kN; ++i) v[i] *= ph;
            br.energies.push_back(next.values[j]);
            br.vectors.push_back(std::move(v));
        }
    }

    for (int m = 0; m < kN; ++m) {
        const Branch& br = out.branches[static_cast<std::size_t>(m)];
        const StateVector& v0 = br.vectors.front();
        if (std::norm(v0[br.label_t0]) > 0.5) {
            out.connectivity[br.label_t0] = dominant_label(br.vectors[out.tau_sample]);
        }
    }
    return out;
}

double perturbative_phase(const PhysicalParams& params, double t) {
    params.validate();
    const int n = 10000;  // intervals; integrand is smooth, trapezoid is ample
    if (t == 0.0) return 0.0;
    const double h = t / n;
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double s = std::sin(pulse(params, k * h).theta);
        const double f = s * s * s * s;
        sum += (k == 0 || k == n) ? 0.5 * f : f;
    }
    return params.v_r_rad() * h * sum;
}

double adiabaticity_metric(const PhysicalParams& params, int grid_size) {
    params.validate();
    if (grid_size < 100) throw ConfigError("adiabaticity_metric: grid_size must be >= 100");

    const double span = 2.0 * params.tau_us;
    double metric = 0.0;
    for (int k = 0; k <= grid_size; ++k) {
        const double t = span * k / grid_size;
        const EigenDecomposition eig = instantaneous_spectrum(params, t);
        const OperatorMatrix dh = two_atom_hamiltonian_dt(params, t);
        const double dh_scale = dh.frobenius_norm();
        const double coupling_floor = 1e-8 * std::max(1.0, dh_scale);

        for (int m = 0; m + 1 < kN; ++m) {
            const double gap = eig.values[m + 1] - eig.values[m];
            const double coupling =
                std::abs(inner(eig.vectors[m], matvec(dh, eig.vectors[m + 1])));
            if (gap < 1e-9) {
                if (coupling > coupling_floor) {
                    throw DegenerateGap("gap " + std::to_string(gap) +
                                        " with coupling " + std::to_string(coupling) +
                                        " at t = " + std::to_string(t));
                }
                continue;  // protected crossing
            }
            metric = std::max(metric, coupling / (gap * gap));
        }
    }
    return metric;
}

}  // namespace rydgate
