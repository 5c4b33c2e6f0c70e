#pragma once

#include <string>
#include <vector>

#include "rydgate/config.hpp"
#include "rydgate/csv.hpp"

namespace rydgate {

struct RunOptions {
    int threads = 0;           // 0 = hardware concurrency
    std::string out_override;  // when nonempty, replaces config.output_dir
};

struct RunResult {
    std::vector<std::string> files;  // paths written, in a fixed order
};

// Runs the configured experiment and writes its CSV outputs (and plot
// scripts, unless disabled). Output is deterministic: identical configs
// produce byte-identical files regardless of the thread count.
RunResult run(const ExperimentConfig& config, const RunOptions& options = {});

enum class PlotKind { Fig2, Fig3, Fig4, Sweep };

// Writes a standalone matplotlib script next to the CSVs it references (by
// relative filename; the script never embeds data). Returns the script path.
std::string emit_plot_script(const std::string& dir, const std::string& script_name,
                             PlotKind kind, const std::vector<std::string>& csv_names);

}  // namespace rydgate
