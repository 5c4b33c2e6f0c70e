#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rydgate/experiments.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::string out_dir;
    int threads = 0;
    long seed = 0;  // accepted for interface compatibility; runs are deterministic
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rydgate - adiabatic-passage Rydberg phase-gate simulator"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> experiments = {
        {"fig2", "doubly excited Rydberg population versus time, per detuning"},
        {"fig3", "tracked adiabatic eigenbranches and their connectivity"},
        {"fig4", "pi-gate fidelity versus interaction strength, with transfer inset"},
        {"gate", "single gate run: return probabilities, phases, fidelity"},
        {"sweep", "gate characterization along a configured parameter axis"},
        {"motion", "perturbative motional-excitation estimate"},
    };

    CliArgs args;
    std::vector<CLI::App*> subs;
    for (const auto& [name, desc] : experiments) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", args.config_path, "experiment config file")
            ->required();
        sub->add_option("--out", args.out_dir, "output directory (overrides config)");
        sub->add_option("--threads", args.threads, "worker threads (0 = hardware)");
        sub->add_option("--seed", args.seed, "ignored; all runs are deterministic");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        rydgate::ExperimentConfig config = rydgate::load_config(args.config_path);

        const std::string selected = app.get_subcommands().front()->get_name();
        const rydgate::ExperimentKind kind =
            rydgate::experiment_kind_from_string(selected);
        if (config.experiment != kind) {
            throw rydgate::ConfigError("config declares '" +
                                       rydgate::to_string(config.experiment) +
                                       "' but subcommand is '" + selected + "'");
        }

        rydgate::RunOptions options;
        options.threads = args.threads;
        options.out_override = args.out_dir;

        const rydgate::RunResult result = rydgate::run(config, options);
        for (const std::string& f : result.files) std::cout << f << "\n";
        return 0;
    } catch (const rydgate::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const rydgate::Error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
