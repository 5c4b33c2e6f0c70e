#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydgate/model.hpp"
#include "rydgate/motion.hpp"
#include "rydgate/propagate.hpp"

namespace rydgate {

enum class ExperimentKind { Fig2, Fig3, Fig4, Gate, Sweep, Motion };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);  // ConfigError

struct SweepAxis {
    std::string axis;            // a PhysicalParams field name, e.g. "v_r_mhz"
    std::vector<double> values;  // nonempty; sorted ascending before running

    bool operator==(const SweepAxis&) const = default;
};

// One experiment = one config file. Sections: [experiment], [physical],
// [solver], [trap], [sweep], [output]. Keys are `name = value`; '#' and ';'
// start comments. Unknown sections or keys are rejected.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Gate;
    PhysicalParams physical;
    SolverConfig solver;
    std::optional<TrapParams> trap;
    std::optional<SweepAxis> sweep;
    std::string output_dir = "out";
    bool plot_script = true;
    int grid_size = 400;                    // fig3 branch tracking
    std::optional<bool> dissipative_mode;   // gate: unset = on iff any rate > 0

    void validate() const;  // throws ConfigError

    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical text form; parse_config_text(serialize_config(c)) == c exactly
// (doubles are written with 17 significant digits).
std::string serialize_config(const ExperimentConfig& config);

// Pointer to the named MHz/us field, or nullptr when the name is unknown.
double* physical_param_field(PhysicalParams& params, const std::string& name);

}  // namespace rydgate
