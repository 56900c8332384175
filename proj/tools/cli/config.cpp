#include "config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "catspec/error.hpp"

namespace catspec::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw InvalidParameter("config key " + key + ": '" + text + "' is not a number");
    return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw InvalidParameter("config key " + key + ": '" + text + "' is not a non-negative integer");
    return v;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

template <typename F>
Setter number(F field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v) { field(c) = to_double(k, v); };
}

template <typename F>
Setter count(F field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v) {
        field(c) = static_cast<std::size_t>(to_unsigned(k, v));
    };
}

template <typename F>
Setter list(F field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v) {
        std::vector<double> out;
        for (const auto& item : split_list(v)) out.push_back(to_double(k, item));
        if (out.empty()) throw InvalidParameter("config key " + k + " needs at least one value");
        field(c) = out;
    };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        t["run.seed"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_unsigned(k, v); };
        t["run.out"] = [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; };
        t["run.workers"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.workers = static_cast<unsigned>(to_unsigned(k, v));
        };

        t["protocol.alpha"] = number([](RunConfig& c) -> double& { return c.protocol.alpha; });
        t["protocol.eta_abs"] = number([](RunConfig& c) -> double& { return c.protocol.eta_abs; });
        t["protocol.eta_em"] = number([](RunConfig& c) -> double& { return c.protocol.eta_em; });
        t["protocol.mode_frequency"] = number([](RunConfig& c) -> double& { return c.protocol.mode_frequency; });
        t["protocol.heating_rate"] = number([](RunConfig& c) -> double& { return c.protocol.heating_rate; });
        t["protocol.tau_cat"] = number([](RunConfig& c) -> double& { return c.protocol.tau_cat; });
        t["protocol.tau_wait"] = number([](RunConfig& c) -> double& { return c.protocol.tau_wait; });
        t["protocol.branch_blue"] = number([](RunConfig& c) -> double& { return c.protocol.branch_blue; });

        t["detector.mean_dark"] = number([](RunConfig& c) -> double& { return c.methods.detector.mean_dark; });
        t["detector.mean_bright"] = number([](RunConfig& c) -> double& { return c.methods.detector.mean_bright; });
        t["detector.window"] = number([](RunConfig& c) -> double& { return c.methods.detector.window; });
        t["detector.threshold"] = number([](RunConfig& c) -> double& { return c.methods.detector.threshold; });
        t["detector.metastable_lifetime"] =
            number([](RunConfig& c) -> double& { return c.methods.detector.metastable_lifetime; });

        t["sensitivity.scatter_prob"] = number([](RunConfig& c) -> double& { return c.methods.scatter_prob; });
        t["sensitivity.direct_background"] =
            number([](RunConfig& c) -> double& { return c.methods.direct_background; });
        t["sensitivity.no_cooling_contrast"] =
            number([](RunConfig& c) -> double& { return c.methods.no_cooling_contrast; });
        t["sensitivity.shots"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            const auto items = split_list(v);
            if (items.size() != c.methods.shots.size())
                throw InvalidParameter("config key " + k + " needs one shot count per method (5)");
            for (std::size_t i = 0; i < items.size(); ++i)
                c.methods.shots[i] = static_cast<std::size_t>(to_unsigned(k, items[i]));
        };
        t["sensitivity.quadrature_nodes"] =
            count([](RunConfig& c) -> std::size_t& { return c.methods.quadrature_nodes; });

        t["fringe.points"] = count([](RunConfig& c) -> std::size_t& { return c.fringe.points; });
        t["fringe.shots"] = count([](RunConfig& c) -> std::size_t& { return c.fringe.shots; });
        t["fringe.scatter_prob"] = number([](RunConfig& c) -> double& { return c.fringe.scatter_prob; });

        t["spectrum.natural_fwhm"] = number([](RunConfig& c) -> double& { return c.spectrum.model.natural_fwhm; });
        t["spectrum.b_field"] = number([](RunConfig& c) -> double& { return c.spectrum.model.b_field; });
        t["spectrum.span"] = number([](RunConfig& c) -> double& { return c.spectrum.span; });
        t["spectrum.points"] = count([](RunConfig& c) -> std::size_t& { return c.spectrum.points; });
        t["spectrum.powers"] = list([](RunConfig& c) -> std::vector<double>& { return c.spectrum.powers; });
        t["spectrum.duration"] = number([](RunConfig& c) -> double& { return c.spectrum.duration; });
        t["spectrum.p0_lowest"] = number([](RunConfig& c) -> double& { return c.spectrum.p0_lowest; });
        t["spectrum.shots"] = count([](RunConfig& c) -> std::size_t& { return c.spectrum.shots; });

        t["heating.walks"] = count([](RunConfig& c) -> std::size_t& { return c.heating.walks; });
        t["heating.steps"] = count([](RunConfig& c) -> std::size_t& { return c.heating.steps; });

        t["oracle.dim"] = count([](RunConfig& c) -> std::size_t& { return c.oracle.dim; });
        t["oracle.points"] = count([](RunConfig& c) -> std::size_t& { return c.oracle.points; });
        t["oracle.alphas"] = list([](RunConfig& c) -> std::vector<double>& { return c.oracle.alphas; });
        t["oracle.etas"] = list([](RunConfig& c) -> std::vector<double>& { return c.oracle.etas; });
        t["oracle.cos_thetas"] = list([](RunConfig& c) -> std::vector<double>& { return c.oracle.cos_thetas; });
        t["oracle.quadrature_nodes"] =
            count([](RunConfig& c) -> std::size_t& { return c.oracle.quadrature_nodes; });
        return t;
    }();
    return table;
}

} // namespace

IniFile IniFile::parse(const std::string& text) {
    IniFile ini;
    std::string section;
    std::stringstream ss(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw InvalidParameter("config line " + std::to_string(line_no) + ": unclosed section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw InvalidParameter("config line " + std::to_string(line_no) + ": empty key");
        const std::string dotted = section.empty() ? key : section + "." + key;
        if (ini.values_.contains(dotted))
            throw InvalidParameter("config line " + std::to_string(line_no) + ": duplicate key " + dotted);
        ini.values_[dotted] = trim(line.substr(eq + 1));
    }
    return ini;
}

IniFile IniFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::optional<std::string> IniFile::get(const std::string& dotted) const {
    const auto it = values_.find(dotted);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

RunConfig config_from_ini(const IniFile& ini) {
    RunConfig cfg;
    const auto& table = setters();
    for (const auto& [key, value] : ini.values()) {
        const auto it = table.find(key);
        if (it == table.end()) throw InvalidParameter("unknown config key " + key);
        it->second(cfg, key, value);
    }
    return cfg;
}

std::vector<std::string> known_config_keys() {
    std::vector<std::string> out;
    for (const auto& [key, setter] : setters()) out.push_back(key);
    return out;
}

void RunConfig::finalize() {
    methods.protocol = protocol;
    protocol.validate();
    methods.detector.validate();
    spectrum.model.validate();
    if (!(fringe.scatter_prob >= 0.0 && fringe.scatter_prob <= 1.0))
        throw InvalidParameter("fringe.scatter_prob must lie in [0, 1]");
    if (fringe.points < 5) throw InvalidParameter("fringe.points must be at least 5");
    if (spectrum.points < 5) throw InvalidParameter("spectrum.points must be at least 5");
    if (!(spectrum.span > 0.0)) throw InvalidParameter("spectrum.span must be positive");
    if (!(spectrum.duration > 0.0)) throw InvalidParameter("spectrum.duration must be positive");
    for (double p : spectrum.powers)
        if (!(p > 0.0)) throw InvalidParameter("spectrum.powers must be positive");
    if (heating.walks < 2) throw InvalidParameter("heating.walks must be at least 2");
    if (oracle.dim < 8) throw InvalidParameter("oracle.dim must be at least 8");
    if (oracle.points == 0) throw InvalidParameter("oracle.points must be positive");
    if (oracle.quadrature_nodes == 0) throw InvalidParameter("oracle.quadrature_nodes must be positive");
}

std::uint64_t RunConfig::require_seed(const char* command) const {
    if (!seed) throw InvalidParameter(std::string(command) + " is stochastic: pass --seed or set [run] seed");
    return *seed;
}

} // namespace catspec::cli
