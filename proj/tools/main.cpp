#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"

using namespace catspec::cli;

int main(int argc, char** argv) {
    CLI::App app{"Cat-state spectroscopy simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> shots;
    std::string out_dir;
    bool plot = false;
    bool check = false;
    app.add_option("--config", config_path, "Config file ([section] key = value)")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Seed for stochastic runs");
    app.add_option("--shots", shots, "Shot count for the command's main simulation");
    app.add_option("--out", out_dir, "Output directory");
    app.add_flag("--plot", plot, "Also write SVG plots");
    app.add_flag("--check", check, "Evaluate acceptance checks; exit non-zero if any fails");

    auto* fringe = app.add_subcommand("fringe", "Scatter-phase fringes in both readout bases");
    auto* spectrum = app.add_subcommand("spectrum", "Line profile at several drive powers");
    auto* sensitivity = app.add_subcommand("sensitivity", "Five-method signal, noise and sensitivity table");
    bool from_paper = false;
    sensitivity->add_flag("--from-paper", from_paper, "Recompute from the published signal values and shot counts");
    auto* heating = app.add_subcommand("heating", "Heating random walk against its closed form");
    auto* oracle = app.add_subcommand("oracle", "Truncated Fock-space check of the analytic signal");
    auto* sequence = app.add_subcommand("sequence", "Parse, validate and schedule a pulse sequence");
    std::string seq_path;
    std::size_t sweep_points = 16;
    sequence->add_option("path", seq_path, "Sequence file (.seq)")->required()->check(CLI::ExistingFile);
    sequence->add_option("--sweep", sweep_points, "Delays in the scatter-phase sweep")->check(CLI::Range(2, 100000));

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : config_from_ini(IniFile::load(config_path));
        if (seed) cfg.seed = seed;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        cfg.plot = plot;
        cfg.check = check;
        if (shots) {
            if (fringe->parsed()) cfg.fringe.shots = *shots;
            if (spectrum->parsed()) cfg.spectrum.shots = *shots;
            if (sensitivity->parsed()) cfg.methods.shots.fill(*shots);
            if (heating->parsed()) cfg.heating.walks = *shots;
        }
        cfg.finalize();

        CommandOutcome outcome;
        if (fringe->parsed()) outcome = cmd_fringe(cfg, std::cout);
        if (spectrum->parsed()) outcome = cmd_spectrum(cfg, std::cout);
        if (sensitivity->parsed()) outcome = cmd_sensitivity(cfg, from_paper, std::cout);
        if (heating->parsed()) outcome = cmd_heating(cfg, std::cout);
        if (oracle->parsed()) outcome = cmd_oracle(cfg, std::cout);
        if (sequence->parsed()) outcome = cmd_sequence(cfg, seq_path, sweep_points, std::cout);
        for (const auto& f : outcome.files) std::cout << "wrote " << f.string() << '\n';
        return outcome.exit_code(check);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
