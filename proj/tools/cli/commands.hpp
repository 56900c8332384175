#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "catspec/fitting.hpp"
#include "catspec/sequence.hpp"
#include "catspec/statistics.hpp"
#include "config.hpp"

namespace catspec::cli {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CommandOutcome {
    std::vector<Check> checks;
    std::vector<std::filesystem::path> files;
    bool errors = false;

    bool all_passed() const;
    /// 0 iff no errors and, in check mode, every check passed.
    int exit_code(bool check_mode) const;
};

// fringe

struct FringeRow {
    double phi_sc = 0.0;
    double sz = 0.0;
    double sy = 0.0;
    double sz_err = 0.0;
    double sy_err = 0.0;
    double analytic_sz = 0.0;
    double analytic_sy = 0.0;
};

struct FringeRun {
    std::vector<FringeRow> rows;
    SinusoidFit analytic_z; // model curves, unit weights
    SinusoidFit analytic_y;
    SinusoidFit synthetic_z; // pure sinusoids at half and full motional period with the model's fringe extremes
    SinusoidFit synthetic_y;
    double symmetry_defect = 0.0; // max |sz(phi + pi) - sz(phi)|, |sy(phi + pi) + sy(phi)|
    bool sampled = false;
    SinusoidFit sampled_y; // shot data weighted by projection noise
};

/// Closed grid of `points` phases symmetric about pi/2, spanning 2 pi.
std::vector<double> fringe_grid(std::size_t points);
FringeRun run_fringe(const RunConfig& cfg);

// spectrum

struct SpectrumTrace {
    double power = 0.0;
    double resonant_scatter = 0.0;
    std::vector<SpectrumPoint> points;
    GaussianFit fit;
};

struct SpectrumRun {
    double saturation_scale = 0.0;
    std::vector<SpectrumTrace> traces;
};

std::vector<double> detuning_grid(const SpectrumConfig& s);
/// Sampled when shots > 0 (then a seed is required).
SpectrumRun run_spectrum(const RunConfig& cfg);

// sensitivity

/// SNR, beta and shots-to-3-sigma recomputed from the printed (A, B, N).
std::vector<MethodReport> reports_from_published();

// heating

struct HeatingRow {
    std::string profile;
    double analytic = 0.0;
    double discrete = 0.0;
    double mc = 0.0;
    double std_error = 0.0;
    double z_score = 0.0;
};

std::vector<HeatingRow> run_heating(const RunConfig& cfg);

// oracle

struct OracleRow {
    double alpha = 0.0;
    double eta_abs = 0.0;
    double eta_em = 0.0;
    double cos_theta = 0.0; // NaN for the emission-averaged row
    double max_dsz = 0.0;
    double max_dsy = 0.0;
    bool truncation_error = false;
};

struct OracleRun {
    std::vector<OracleRow> rows;
    double max_directed = 0.0;
    double max_averaged = 0.0;
    double direct_detection_error = 0.0;
};

OracleRun run_oracle(const RunConfig& cfg);

// commands: write files under cfg.out_dir and print a summary to `log`

CommandOutcome cmd_fringe(const RunConfig& cfg, std::ostream& log);
CommandOutcome cmd_spectrum(const RunConfig& cfg, std::ostream& log);
CommandOutcome cmd_sensitivity(const RunConfig& cfg, bool from_paper, std::ostream& log);
CommandOutcome cmd_heating(const RunConfig& cfg, std::ostream& log);
CommandOutcome cmd_oracle(const RunConfig& cfg, std::ostream& log);
CommandOutcome cmd_sequence(const RunConfig& cfg, const std::filesystem::path& path, std::size_t sweep_points,
                            std::ostream& log);

} // namespace catspec::cli
