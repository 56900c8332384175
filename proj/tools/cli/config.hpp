#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catspec/lineprofile.hpp"
#include "catspec/signal.hpp"
#include "catspec/statistics.hpp"

namespace catspec::cli {

/// `[section]` headers and `key = value` lines; `#` or `;` start a comment.
class IniFile {
public:
    static IniFile parse(const std::string& text);
    static IniFile load(const std::filesystem::path& path);

    const std::map<std::string, std::string>& values() const { return values_; } // "section.key" -> value
    std::optional<std::string> get(const std::string& dotted) const;

private:
    std::map<std::string, std::string> values_;
};

struct FringeConfig {
    std::size_t points = 41;
    std::size_t shots = 4200; // per basis and point; 0 writes the analytic curve only
    double scatter_prob = 1.0;
};

struct SpectrumConfig {
    SpectralModel model{};
    double span = 80e6; // Hz, grid covers [-span, span]
    std::size_t points = 41;
    std::vector<double> powers{1.0, 2.0, 4.0}; // relative to the calibration power
    double duration = 10e-6;                   // s
    double p0_lowest = 0.75;                   // resonant scatter probability at powers[0]
    std::size_t shots = 2000;                  // per fringe extreme and detuning
};

struct HeatingConfig {
    std::size_t walks = 10000;
    std::size_t steps = 1000;
};

struct OracleConfig {
    std::size_t dim = 128;
    std::size_t points = 64;
    std::vector<double> alphas{0.5, 1.0, 2.0, 2.9};
    std::vector<double> etas{0.0, 0.05, 0.1, 0.2};
    std::vector<double> cos_thetas{-1.0, 0.0, 1.0};
    std::size_t quadrature_nodes = 16;
};

struct RunConfig {
    std::optional<std::uint64_t> seed;
    std::filesystem::path out_dir = ".";
    bool plot = false;
    bool check = false;
    unsigned workers = 0;

    ProtocolParams protocol = ProtocolParams::demonstration();
    MethodsConfig methods{};
    FringeConfig fringe{};
    SpectrumConfig spectrum{};
    HeatingConfig heating{};
    OracleConfig oracle{};

    /// Copy the shared protocol and detector into the method settings and
    /// check every sub-configuration.
    void finalize();
    std::uint64_t require_seed(const char* command) const;
};

/// Defaults overridden by the keys present in `ini`. Unknown keys are errors.
RunConfig config_from_ini(const IniFile& ini);

/// Keys accepted in config files, as "section.key".
std::vector<std::string> known_config_keys();

} // namespace catspec::cli
