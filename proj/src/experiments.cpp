#include "rydgate/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "rydgate/gate.hpp"
#include "rydgate/spectrum.hpp"

namespace fs = std::filesystem;

namespace rydgate {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Index-based pool; results land in preallocated slots, so the output is
// independent of scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    const int nt = std::min<std::size_t>(std::max(1, threads), n);
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::mutex mtx;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i;
                {
                    std::lock_guard<std::mutex> lock(mtx);
                    if (next >= n) return;
                    i = next++;
                }
                fn(i);
            }
        });
    }
    for (std::thread& th : pool) th.join();
}

// filesystem-safe tag for a numeric value: 37.5 -> "37p5", -2 -> "m2"
std::string value_tag(double v) {
    std::string s = format_number(v);
    for (char& c : s) {
        if (c == '.') c = 'p';
        else if (c == '-') c = 'm';
        else if (c == '+') c = '_';
    }
    return s;
}

std::vector<std::string> provenance(const ExperimentConfig& cfg) {
    const PhysicalParams& p = cfg.physical;
    std::vector<std::string> c;
    c.push_back("rydgate " + to_string(cfg.experiment));
    c.push_back("basis: |0>,|1>,|p>,|r> -> 0,1,2,3; pair index = 4*atom1 + atom2 "
                "(atom-1 major)");
    c.push_back("frequencies below are ordinary (f = x means f/2pi = x MHz); "
                "dynamics run at 2*pi*f rad/us");
    c.push_back("omega_mhz = " + format_number(p.omega_mhz) +
                ", delta_mhz = " + format_number(p.delta_mhz) +
                ", v_r_mhz = " + format_number(p.v_r_mhz) +
                ", tau_us = " + format_number(p.tau_us));
    c.push_back("gamma0_mhz = " + format_number(p.gamma0_mhz) +
                ", gamma1_mhz = " + format_number(p.gamma1_mhz) +
                ", gamma_r_mhz = " + format_number(p.gamma_r_mhz) +
                ", gamma_rd_mhz = " + format_number(p.gamma_rd_mhz));
    c.push_back("solver: dt_us = " +
                format_number(cfg.solver.effective_dt(p.tau_us)) +
                " (rk4), record_every = " + std::to_string(cfg.solver.record_every) +
                ", tolerance = " + format_number(cfg.solver.tolerance));
    return c;
}

std::size_t sample_closest(const std::vector<double>& times, double t) {
    std::size_t best = 0;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double d = std::abs(times[i] - t);
        if (d < dist) {
            dist = d;
            best = i;
        }
    }
    return best;
}

struct Writer {
    fs::path dir;
    bool plots;
    RunResult result;

    std::string csv(const std::string& name, const CsvTable& table) {
        const fs::path path = dir / name;
        write_csv(path.string(), table);
        result.files.push_back(path.string());
        return name;
    }

    void script(const std::string& name, PlotKind kind,
                const std::vector<std::string>& csv_names) {
        if (!plots) return;
        result.files.push_back(emit_plot_script(dir.string(), name, kind, csv_names));
    }
};

std::vector<double> delta_list(const ExperimentConfig& cfg) {
    if (cfg.sweep) {
        if (cfg.sweep->axis != "delta_mhz")
            throw ConfigError("fig2 sweeps delta_mhz; got axis '" + cfg.sweep->axis + "'");
        std::vector<double> v = cfg.sweep->values;
        std::sort(v.begin(), v.end());
        return v;
    }
    const double w = cfg.physical.omega_mhz;
    return {0.0, 0.5 * w, w, 1.5 * w};
}

void run_fig2(const ExperimentConfig& cfg, int threads, Writer& w) {
    const std::vector<double> deltas = delta_list(cfg);
    const StateVector psi0 = StateVector::basis(kPairDim, kIdx11);

    struct Series {
        double delta;
        Trajectory traj;
    };
    std::vector<Series> series(deltas.size());
    parallel_for(deltas.size(), threads, [&](std::size_t i) {
        PhysicalParams p = cfg.physical;
        p.delta_mhz = deltas[i];
        series[i] = {deltas[i],
                     evolve_schrodinger(p, psi0, 0.0, 2.0 * p.tau_us, cfg.solver)};
    });

    std::vector<std::string> names;
    CsvTable summary;
    summary.comments = provenance(cfg);
    summary.comments.push_back("per-delta traces in fig2_delta_<tag>.csv");
    summary.header = {"delta_mhz", "p_rr_at_tau", "p_rr_at_2tau", "max_p_p_total"};

    for (const Series& s : series) {
        CsvTable t;
        t.comments = provenance(cfg);
        t.comments.push_back("delta_mhz = " + format_number(s.delta) +
                             " for this trace; initial state |11>");
        t.header = {"t_us", "p_rr", "p_p_total", "norm2"};
        for (std::size_t k = 0; k < s.traj.times.size(); ++k) {
            const Observables& o = s.traj.observables[k];
            t.rows.push_back({s.traj.times[k], o.p_rr, o.p_p_total, o.norm_or_trace});
        }
        names.push_back(
            w.csv("fig2_delta_" + value_tag(s.delta) + ".csv", t));

        const std::size_t at_tau = sample_closest(s.traj.times, cfg.physical.tau_us);
        double max_pp = 0.0;
        for (const Observables& o : s.traj.observables)
            max_pp = std::max(max_pp, o.p_p_total);
        summary.rows.push_back({s.delta, s.traj.observables[at_tau].p_rr,
                                s.traj.observables.back().p_rr, max_pp});
    }
    w.csv("fig2_summary.csv", summary);

    // inset: P_rr(tau) versus V_R for each delta
    std::vector<double> vr_values;
    for (int k = 0; k <= 10; ++k) vr_values.push_back(cfg.physical.omega_mhz * k / 10.0);
    CsvTable inset;
    inset.comments = provenance(cfg);
    inset.comments.push_back("P_rr at t = tau versus v_r_mhz, one column per delta");
    inset.header = {"v_r_mhz"};
    for (const double d : deltas) inset.header.push_back("p_rr_tau_delta_" + value_tag(d));
    inset.rows.resize(vr_values.size());
    parallel_for(vr_values.size(), threads, [&](std::size_t i) {
        std::vector<double>& row = inset.rows[i];
        row.push_back(vr_values[i]);
        SolverConfig sc = cfg.solver;
        sc.record_every = 1 << 30;
        for (const double d : deltas) {
            PhysicalParams p = cfg.physical;
            p.delta_mhz = d;
            p.v_r_mhz = vr_values[i];
            const Trajectory traj =
                evolve_schrodinger(p, psi0, 0.0, p.tau_us, sc);
            row.push_back(traj.final_observables().p_rr);
        }
    });
    names.push_back(w.csv("fig2_inset.csv", inset));

    w.script("plot_fig2.py", PlotKind::Fig2, names);
}

void run_fig3(const ExperimentConfig& cfg, int /*threads*/, Writer& w) {
    const SpectrumBranches sb = track_branches(cfg.physical, cfg.grid_size);

    // branch carrying |11> at t = 0
    std::size_t b11 = 0;
    for (std::size_t m = 0; m < sb.branches.size(); ++m)
        if (sb.branches[m].label_t0 == kIdx11) b11 = m;

    CsvTable t;
    t.comments = provenance(cfg);
    t.comments.push_back("tracked eigenbranch energies in rad/us; branches ordered by "
                         "energy at t = 0");
    for (const auto& [from, to] : sb.connectivity)
        t.comments.push_back("connectivity: basis " + std::to_string(from) +
                             " at t=0 -> basis " + std::to_string(to) + " at t=tau");
    t.header = {"t_us"};
    for (std::size_t m = 0; m < sb.branches.size(); ++m)
        t.header.push_back("e" + std::to_string(m + 1) + "_rad_per_us");
    t.header.push_back("p11_branch11");
    t.header.push_back("prr_branch11");

    for (std::size_t k = 0; k < sb.times.size(); ++k) {
        std::vector<double> row;
        row.push_back(sb.times[k]);
        for (const Branch& br : sb.branches) row.push_back(br.energies[k]);
        row.push_back(std::norm(sb.branches[b11].vectors[k][kIdx11]));
        row.push_back(std::norm(sb.branches[b11].vectors[k][kIdxRR]));
        t.rows.push_back(std::move(row));
    }
    const std::string name = w.csv("fig3_energies.csv", t);
    w.script("plot_fig3.py", PlotKind::Fig3, {name});
}

std::vector<double> fig4_vr_list(const ExperimentConfig& cfg) {
    if (cfg.sweep) {
        if (cfg.sweep->axis != "v_r_mhz")
            throw ConfigError("fig4 sweeps v_r_mhz; got axis '" + cfg.sweep->axis + "'");
        std::vector<double> v = cfg.sweep->values;
        std::sort(v.begin(), v.end());
        return v;
    }
    return {0.5, 1.0, 2.0, 3.0, 5.0, 7.5, 10.0, 15.0, 20.0, 25.0, 35.0, 50.0};
}

void run_fig4(const ExperimentConfig& cfg, int threads, Writer& w) {
    SolverConfig sc = cfg.solver;
    sc.record_every = 1 << 30;

    const std::vector<SweepRow> rows =
        fidelity_sweep(cfg.physical, fig4_vr_list(cfg), sc, threads);

    CsvTable t;
    t.comments = provenance(cfg);
    t.comments.push_back("tau calibrated (unitary) to the pi entangling phase per row; "
                         "f_pi evaluated with the configured rates");
    t.comments.push_back("ok = 0 rows failed; see error comments below");
    t.header = {"v_r_mhz", "tau_us", "f_pi", "entangling_phase_rad", "ok"};
    for (const SweepRow& r : rows) {
        if (r.ok) {
            t.rows.push_back({r.v_r_mhz, r.tau_us, r.f_pi, r.entangling_phase, 1.0});
        } else {
            t.comments.push_back("row v_r_mhz = " + format_number(r.v_r_mhz) +
                                 " failed: " + r.error);
            t.rows.push_back({r.v_r_mhz, kNaN, kNaN, kNaN, 0.0});
        }
    }
    const std::string main_name = w.csv("fig4_fidelity.csv", t);

    // inset: P_rr(tau) versus tau from |11> for the two gamma_p presets
    const std::vector<double> gamma_p = {1.01, 6.0};
    std::vector<double> taus;
    for (int k = 1; k <= 20; ++k) taus.push_back(0.025 * k);

    CsvTable inset;
    inset.comments = provenance(cfg);
    inset.comments.push_back("P_rr at t = tau from |11><11| under the master equation; "
                             "gamma_p splits evenly into gamma0/gamma1");
    inset.header = {"tau_us"};
    for (const double g : gamma_p)
        inset.header.push_back("p_rr_gamma_p_" + value_tag(g) + "mhz");
    inset.rows.resize(taus.size());
    const DensityMatrix rho0 = projector(StateVector::basis(kPairDim, kIdx11));
    parallel_for(taus.size(), threads, [&](std::size_t i) {
        std::vector<double>& row = inset.rows[i];
        row.push_back(taus[i]);
        for (const double g : gamma_p) {
            PhysicalParams p = cfg.physical;
            p.tau_us = taus[i];
            p.set_gamma_p_mhz(g);
            const Trajectory traj = evolve_lindblad(p, rho0, 0.0, p.tau_us, sc);
            row.push_back(traj.final_observables().p_rr);
        }
    });
    const std::string inset_name = w.csv("fig4_inset.csv", inset);

    w.script("plot_fig4.py", PlotKind::Fig4, {main_name, inset_name});
}

void run_gate(const ExperimentConfig& cfg, int /*threads*/, Writer& w) {
    const bool dissipative = cfg.dissipative_mode
                                 ? *cfg.dissipative_mode
                                 : cfg.physical.gamma_p_mhz() > 0.0 ||
                                       cfg.physical.gamma_r_mhz > 0.0 ||
                                       cfg.physical.gamma_rd_mhz > 0.0;

    const GateResult unitary = simulate_gate(cfg.physical, false, cfg.solver);
    GateResult dis;
    double f_pi = kNaN;
    if (dissipative) {
        dis = simulate_gate(cfg.physical, true, cfg.solver);
        SolverConfig sc = cfg.solver;
        sc.record_every = 1 << 30;
        const StateVector psi0 = plus_plus_state();
        const Trajectory traj = evolve_lindblad(cfg.physical, projector(psi0), 0.0,
                                               2.0 * cfg.physical.tau_us, sc);
        f_pi = fidelity(traj.final_rho(),  psi0,
                        target_gate(std::numbers::pi_v<double>));
    }

    CsvTable t;
    t.comments = provenance(cfg);
    t.comments.push_back("entangling_phase_rad = " +
                         format_number(*unitary.entangling_phase));
    if (dissipative)
        t.comments.push_back("f_pi (dissipative, vs pi target, from the (|0>+|1>)^2/2 "
                             "input) = " + format_number(f_pi));
    t.header = {"input_index",        "return_prob_unitary", "qubit_pop_unitary",
                "phase_rad_unitary",  "return_prob_dissipative",
                "qubit_pop_dissipative"};
    for (std::size_t b = 0; b < 4; ++b) {
        const double phase =
            std::arg(unitary.final_states[b][kQubitIndices[b]]);
        t.rows.push_back({static_cast<double>(kQubitIndices[b]),
                          unitary.return_probabilities[b], unitary.qubit_populations[b],
                          phase, dissipative ? dis.return_probabilities[b] : kNaN,
                          dissipative ? dis.qubit_populations[b] : kNaN});
    }
    w.csv("gate_result.csv", t);
}

void run_sweep(const ExperimentConfig& cfg, int threads, Writer& w) {
    if (!cfg.sweep) throw ConfigError("sweep experiment needs a [sweep] section");
    std::vector<double> values = cfg.sweep->values;
    std::sort(values.begin(), values.end());

    const bool dissipative = cfg.dissipative_mode
                                 ? *cfg.dissipative_mode
                                 : cfg.physical.gamma_p_mhz() > 0.0 ||
                                       cfg.physical.gamma_r_mhz > 0.0 ||
                                       cfg.physical.gamma_rd_mhz > 0.0;

    struct Row {
        double value = 0.0, phase = kNaN, min_return = kNaN, f_pi = kNaN;
        bool ok = false;
        std::string error;
    };
    std::vector<Row> rows(values.size());
    SolverConfig sc = cfg.solver;
    sc.record_every = 1 << 30;

    parallel_for(values.size(), threads, [&](std::size_t i) {
        Row& row = rows[i];
        row.value = values[i];
        PhysicalParams p = cfg.physical;
        *physical_param_field(p, cfg.sweep->axis) = values[i];
        try {
            const GateResult unitary = simulate_gate(p, false, sc);
            row.phase = *unitary.entangling_phase;
            row.min_return = *std::min_element(unitary.return_probabilities.begin(),
                                               unitary.return_probabilities.end());
            if (dissipative) {
                const StateVector psi0 = plus_plus_state();
                const Trajectory traj =
                    evolve_lindblad(p, projector(psi0), 0.0, 2.0 * p.tau_us, sc);
                row.f_pi = fidelity(traj.final_rho(), psi0,
                                    target_gate(std::numbers::pi_v<double>));
            }
            row.ok = true;
        } catch (const Error& e) {
            row.error = e.kind();
        }
    });

    CsvTable t;
    t.comments = provenance(cfg);
    t.comments.push_back("sweep axis: " + cfg.sweep->axis +
                         " (tau is taken from the config; no calibration)");
    t.header = {"value", "entangling_phase_rad", "min_return_prob", "f_pi", "ok"};
    for (const Row& r : rows) {
        if (!r.ok)
            t.comments.push_back("row value = " + format_number(r.value) +
                                 " failed: " + r.error);
        t.rows.push_back({r.value, r.phase, r.min_return, r.f_pi, r.ok ? 1.0 : 0.0});
    }
    const std::string name = w.csv("sweep.csv", t);
    w.script("plot_sweep.py", PlotKind::Sweep, {name});
}

void run_motion(const ExperimentConfig& cfg, int /*threads*/, Writer& w) {
    const MotionReport rep =
        motion_report(cfg.physical.v_r_mhz, *cfg.trap, cfg.physical.tau_us);

    CsvTable t;
    t.comments = provenance(cfg);
    t.comments.push_back("trap: omega0_khz = " + format_number(cfg.trap->omega0_khz) +
                         ", r0_nm = " + format_number(cfg.trap->r0_nm) +
                         ", r_um = " + format_number(cfg.trap->r_um));
    t.comments.push_back("force scale 6 V_R / r = " + format_number(rep.force_scale) +
                         " rad/us/um");
    t.comments.push_back("probability = 0.5 |amplitude|^2 (the 1/2 is the average |rr> "
                         "population during the gate), clipped at 1");
    t.comments.push_back("perturbation_invalid = 1 flags |amplitude|^2 > 0.5: the "
                         "first-order estimate is outside its validity range");
    t.header = {"with_factor6", "amplitude_re", "amplitude_im", "amplitude_abs2",
                "probability", "perturbation_invalid"};
    for (const MotionEstimate* est : {&rep.no_factor6, &rep.literal_factor6}) {
        t.rows.push_back({est->with_factor6 ? 1.0 : 0.0, est->amplitude.real(),
                          est->amplitude.imag(), est->amplitude_abs2, est->probability,
                          est->perturbation_invalid ? 1.0 : 0.0});
    }
    w.csv("motion.csv", t);
}

}  // namespace

RunResult run(const ExperimentConfig& config, const RunOptions& options) {
    config.validate();
    const int threads = resolve_threads(options.threads);

    Writer w;
    w.dir = options.out_override.empty() ? fs::path(config.output_dir)
                                         : fs::path(options.out_override);
    w.plots = config.plot_script;
    fs::create_directories(w.dir);

    switch (config.experiment) {
        case ExperimentKind::Fig2: run_fig2(config, threads, w); break;
        case ExperimentKind::Fig3: run_fig3(config, threads, w); break;
        case ExperimentKind::Fig4: run_fig4(config, threads, w); break;
        case ExperimentKind::Gate: run_gate(config, threads, w); break;
        case ExperimentKind::Sweep: run_sweep(config, threads, w); break;
        case ExperimentKind::Motion: run_motion(config, threads, w); break;
    }
    return std::move(w.result);
}

std::string emit_plot_script(const std::string& dir, const std::string& script_name,
                             PlotKind kind, const std::vector<std::string>& csv_names) {
    const fs::path path = fs::path(dir) / script_name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path.string() + " for writing");

    f << "#!/usr/bin/env python3\n";
    f << "# auto-generated; reads the CSVs next to this script\n";
    f << "import numpy as np\n";
    f << "import matplotlib\n";
    f << "matplotlib.use(\"Agg\")\n";
    f << "import matplotlib.pyplot as plt\n\n";
    f << "def load(path):\n";
    f << "    return np.genfromtxt(path, delimiter=\",\", names=True)\n\n";

    switch (kind) {
        case PlotKind::Fig2: {
            f << "files = [\n";
            for (const std::string& n : csv_names)
                if (n.rfind("fig2_delta_", 0) == 0) f << "    \"" << n << "\",\n";
            f << "]\n";
            f << "fig, ax = plt.subplots(figsize=(6, 4))\n";
            f << "for path in files:\n";
            f << "    d = load(path)\n";
            f << "    tag = path[len(\"fig2_delta_\"):-len(\".csv\")].replace(\"p\", \".\")\n";
            f << "    ax.plot(d[\"t_us\"], d[\"p_rr\"], label=\"delta = \" + tag + \" MHz\")\n";
            f << "ax.set_xlabel(\"t (us)\")\n";
            f << "ax.set_ylabel(\"P_rr\")\n";
            f << "ax.legend()\n";
            f << "inset = load(\"fig2_inset.csv\")\n";
            f << "axins = fig.add_axes([0.55, 0.25, 0.3, 0.3])\n";
            f << "for name in inset.dtype.names[1:]:\n";
            f << "    axins.plot(inset[\"v_r_mhz\"], inset[name], lw=0.8)\n";
            f << "axins.set_xlabel(\"V_R (MHz)\", fontsize=7)\n";
            f << "axins.set_ylabel(\"P_rr(tau)\", fontsize=7)\n";
            f << "fig.savefig(\"fig2.png\", dpi=160)\n";
            break;
        }
        case PlotKind::Fig3: {
            f << "d = load(\"" << csv_names.front() << "\")\n";
            f << "fig, ax = plt.subplots(figsize=(6, 4))\n";
            f << "for k in range(1, 17):\n";
            f << "    ax.plot(d[\"t_us\"], d[\"e%d_rad_per_us\" % k], lw=0.8)\n";
            f << "ax.set_xlabel(\"t (us)\")\n";
            f << "ax.set_ylabel(\"E (rad/us)\")\n";
            f << "fig.savefig(\"fig3.png\", dpi=160)\n";
            break;
        }
        case PlotKind::Fig4: {
            f << "d = load(\"" << csv_names.front() << "\")\n";
            f << "fig, ax = plt.subplots(figsize=(6, 4))\n";
            f << "ok = d[\"ok\"] > 0\n";
            f << "ax.plot(d[\"v_r_mhz\"][ok], d[\"f_pi\"][ok], \"o-\")\n";
            f << "ax.set_xlabel(\"V_R (MHz)\")\n";
            f << "ax.set_ylabel(\"F_pi\")\n";
            if (csv_names.size() > 1) {
                f << "inset = load(\"" << csv_names[1] << "\")\n";
                f << "axins = fig.add_axes([0.55, 0.25, 0.3, 0.3])\n";
                f << "for name in inset.dtype.names[1:]:\n";
                f << "    axins.plot(inset[\"tau_us\"], inset[name], lw=0.8)\n";
                f << "axins.set_xlabel(\"tau (us)\", fontsize=7)\n";
                f << "axins.set_ylabel(\"P_rr(tau)\", fontsize=7)\n";
            }
            f << "fig.savefig(\"fig4.png\", dpi=160)\n";
            break;
        }
        case PlotKind::Sweep: {
            f << "d = load(\"" << csv_names.front() << "\")\n";
            f << "fig, ax = plt.subplots(figsize=(6, 4))\n";
            f << "ax.plot(d[\"value\"], d[\"entangling_phase_rad\"], \"o-\")\n";
            f << "ax.set_xlabel(\"swept value\")\n";
            f << "ax.set_ylabel(\"entangling phase (rad)\")\n";
            f << "fig.savefig(\"sweep.png\", dpi=160)\n";
            break;
        }
    }
    if (!f) throw ConfigError("write failed for " + path.string());
    return path.string();
}

}  // namespace rydgate
