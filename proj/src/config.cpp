#include "rydgate/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rydgate {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_comment(const std::string& s) {
    const std::size_t pos = s.find_first_of("#;");
    return pos == std::string::npos ? s : s.substr(0, pos);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double x = std::stod(value, &used);
        if (trim(value.substr(used)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': cannot parse number from '" + value + "'");
}

int parse_int(const std::string& key, const std::string& value) {
    const double x = parse_double(key, value);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
    return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw ConfigError("key '" + key + "': expected on/off, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell = trim(cell);
        if (cell.empty()) throw ConfigError("key '" + key + "': empty list entry");
        out.push_back(parse_double(key, cell));
    }
    return out;
}

std::string format_exact(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Fig2: return "fig2";
        case ExperimentKind::Fig3: return "fig3";
        case ExperimentKind::Fig4: return "fig4";
        case ExperimentKind::Gate: return "gate";
        case ExperimentKind::Sweep: return "sweep";
        case ExperimentKind::Motion: return "motion";
    }
    throw ConfigError("invalid experiment kind");
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
    for (const ExperimentKind k :
         {ExperimentKind::Fig2, ExperimentKind::Fig3, ExperimentKind::Fig4,
          ExperimentKind::Gate, ExperimentKind::Sweep, ExperimentKind::Motion}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown experiment '" + name + "'");
}

double* physical_param_field(PhysicalParams& params, const std::string& name) {
    if (name == "omega_mhz") return &params.omega_mhz;
    if (name == "delta_mhz") return &params.delta_mhz;
    if (name == "v_r_mhz") return &params.v_r_mhz;
    if (name == "tau_us") return &params.tau_us;
    if (name == "gamma0_mhz") return &params.gamma0_mhz;
    if (name == "gamma1_mhz") return &params.gamma1_mhz;
    if (name == "gamma_r_mhz") return &params.gamma_r_mhz;
    if (name == "gamma_rd_mhz") return &params.gamma_rd_mhz;
    return nullptr;
}

void ExperimentConfig::validate() const {
    physical.validate();
    if (solver.dt_us < 0.0) throw ConfigError("dt_us must be >= 0 (0 = auto)");
    if (solver.dt_us > 0.0 && solver.dt_us > physical.tau_us / 100.0)
        throw ConfigError("dt_us must be <= tau/100");
    if (solver.record_every < 1) throw ConfigError("record_every must be >= 1");
    if (!(solver.tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
    if (grid_size < 100) throw ConfigError("grid_size must be >= 100");
    if (trap) trap->validate();
    if (sweep) {
        if (sweep->values.empty()) throw ConfigError("sweep values list is empty");
        PhysicalParams probe = physical;
        if (!physical_param_field(probe, sweep->axis))
            throw ConfigError("unknown sweep axis '" + sweep->axis + "'");
    }
    if (experiment == ExperimentKind::Motion && !trap)
        throw ConfigError("motion experiment needs a [trap] section");
    if (output_dir.empty()) throw ConfigError("output dir must not be empty");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    cfg.trap.reset();
    cfg.sweep.reset();

    bool gamma_p_seen = false, gamma01_seen = false;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;

    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            const bool known = section == "experiment" || section == "physical" ||
                               section == "solver" || section == "trap" ||
                               section == "sweep" || section == "output";
            if (!known)
                throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" +
                                  section + "]");
            if (section == "trap" && !cfg.trap) cfg.trap = TrapParams{};
            if (section == "sweep" && !cfg.sweep) cfg.sweep = SweepAxis{};
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");

        if (section == "experiment") {
            if (key == "kind") cfg.experiment = experiment_kind_from_string(value);
            else if (key == "grid_size") cfg.grid_size = parse_int(key, value);
            else if (key == "dissipative") {
                if (value == "auto") cfg.dissipative_mode.reset();
                else cfg.dissipative_mode = parse_bool(key, value);
            } else throw ConfigError("unknown key '" + key + "' in [experiment]");
        } else if (section == "physical") {
            if (key == "gamma_p_mhz") {
                cfg.physical.set_gamma_p_mhz(parse_double(key, value));
                gamma_p_seen = true;
            } else if (double* field = physical_param_field(cfg.physical, key)) {
                *field = parse_double(key, value);
                if (key == "gamma0_mhz" || key == "gamma1_mhz") gamma01_seen = true;
            } else {
                throw ConfigError("unknown key '" + key + "' in [physical]");
            }
        } else if (section == "solver") {
            if (key == "dt_us") cfg.solver.dt_us = parse_double(key, value);
            else if (key == "record_every") cfg.solver.record_every = parse_int(key, value);
            else if (key == "tolerance") cfg.solver.tolerance = parse_double(key, value);
            else throw ConfigError("unknown key '" + key + "' in [solver]");
        } else if (section == "trap") {
            if (key == "omega0_khz") cfg.trap->omega0_khz = parse_double(key, value);
            else if (key == "r0_nm") cfg.trap->r0_nm = parse_double(key, value);
            else if (key == "r_um") cfg.trap->r_um = parse_double(key, value);
            else throw ConfigError("unknown key '" + key + "' in [trap]");
        } else if (section == "sweep") {
            if (key == "axis") cfg.sweep->axis = value;
            else if (key == "values") cfg.sweep->values = parse_list(key, value);
            else throw ConfigError("unknown key '" + key + "' in [sweep]");
        } else if (section == "output") {
            if (key == "dir") cfg.output_dir = value;
            else if (key == "plot_script") cfg.plot_script = parse_bool(key, value);
            else throw ConfigError("unknown key '" + key + "' in [output]");
        } else {
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        }
    }

    if (gamma_p_seen && gamma01_seen)
        throw ConfigError("give either gamma_p_mhz or gamma0_mhz/gamma1_mhz, not both");

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "[experiment]\n";
    out << "kind = " << to_string(config.experiment) << "\n";
    out << "grid_size = " << config.grid_size << "\n";
    out << "dissipative = "
        << (config.dissipative_mode ? (*config.dissipative_mode ? "on" : "off") : "auto")
        << "\n";
    out << "\n[physical]\n";
    const PhysicalParams& p = config.physical;
    out << "omega_mhz = " << format_exact(p.omega_mhz) << "\n";
    out << "delta_mhz = " << format_exact(p.delta_mhz) << "\n";
    out << "v_r_mhz = " << format_exact(p.v_r_mhz) << "\n";
    out << "tau_us = " << format_exact(p.tau_us) << "\n";
    out << "gamma0_mhz = " << format_exact(p.gamma0_mhz) << "\n";
    out << "gamma1_mhz = " << format_exact(p.gamma1_mhz) << "\n";
    out << "gamma_r_mhz = " << format_exact(p.gamma_r_mhz) << "\n";
    out << "gamma_rd_mhz = " << format_exact(p.gamma_rd_mhz) << "\n";
    out << "\n[solver]\n";
    out << "dt_us = " << format_exact(config.solver.dt_us) << "\n";
    out << "record_every = " << config.solver.record_every << "\n";
    out << "tolerance = " << format_exact(config.solver.tolerance) << "\n";
    if (config.trap) {
        out << "\n[trap]\n";
        out << "omega0_khz = " << format_exact(config.trap->omega0_khz) << "\n";
        out << "r0_nm = " << format_exact(config.trap->r0_nm) << "\n";
        out << "r_um = " << format_exact(config.trap->r_um) << "\n";
    }
    if (config.sweep) {
        out << "\n[sweep]\n";
        out << "axis = " << config.sweep->axis << "\n";
        out << "values = ";
        for (std::size_t i = 0; i < config.sweep->values.size(); ++i) {
            if (i) out << ", ";
            out << format_exact(config.sweep->values[i]);
        }
        out << "\n";
    }
    out << "\n[output]\n";
    out << "dir = " << config.output_dir << "\n";
    out << "plot_script = " << (config.plot_script ? "on" : "off") << "\n";
    return out.str();
}

}  // namespace rydgate
