#include "catspec/sequence.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "catspec/constants.hpp"
#include "catspec/error.hpp"

namespace catspec {

namespace {

struct KindName {
    StepKind kind;
    const char* name;
};

constexpr std::array<KindName, 12> kKindNames{{
    {StepKind::DopplerCool, "DopplerCool"},
    {StepKind::OpticalPump, "OpticalPump"},
    {StepKind::SidebandCool, "SidebandCool"},
    {StepKind::Hide, "Hide"},
    {StepKind::Unhide, "Unhide"},
    {StepKind::CatPulse, "CatPulse"},
    {StepKind::SpecTrain, "SpecTrain"},
    {StepKind::SpecPulse, "SpecPulse"},
    {StepKind::CatInverse, "CatInverse"},
    {StepKind::Rotation, "Rotation"},
    {StepKind::Wait, "Wait"},
    {StepKind::Detect, "Detect"},
}};

struct Unit {
    const char* suffix;
    double scale;
};

constexpr std::array<Unit, 4> kTimeUnits{{{"ns", 1e-9}, {"us", 1e-6}, {"ms", 1e-3}, {"s", 1.0}}};
constexpr std::array<Unit, 3> kFrequencyUnits{{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}}};

enum class Quantity { Time, Frequency, Angle, Count, Plain };

struct Token {
    std::string_view text;
    std::size_t column = 0;
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

// Leading decimal number; returns characters consumed, 0 on failure.
std::size_t leading_number(std::string_view s, double& value) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{}) return 0;
    return static_cast<std::size_t>(ptr - s.data());
}

std::optional<double> parse_angle(std::string_view s) {
    double coef = 1.0;
    bool negative = false;
    if (!s.empty() && s[0] == '-') {
        negative = true;
        s.remove_prefix(1);
    }
    const std::size_t pi_at = s.find("pi");
    if (pi_at == std::string_view::npos) {
        double v = 0.0;
        if (leading_number(s, v) != s.size() || s.empty()) return std::nullopt;
        return negative ? -v : v;
    }
    if (pi_at > 0) {
        const std::string_view head = s.substr(0, pi_at);
        if (leading_number(head, coef) != head.size()) return std::nullopt;
    }
    double value = coef * constants::pi;
    std::string_view tail = s.substr(pi_at + 2);
    if (!tail.empty()) {
        if (tail[0] != '/') return std::nullopt;
        tail.remove_prefix(1);
        double den = 0.0;
        if (tail.empty() || leading_number(tail, den) != tail.size() || den == 0.0) return std::nullopt;
        value /= den;
    }
    return negative ? -value : value;
}

template <std::size_t N>
std::optional<double> parse_with_units(std::string_view s, const std::array<Unit, N>& units) {
    double v = 0.0;
    const std::size_t used = leading_number(s, v);
    if (used == 0) return std::nullopt;
    const std::string_view suffix = s.substr(used);
    for (const auto& u : units)
        if (suffix == u.suffix) return v * u.scale;
    return std::nullopt;
}

std::optional<double> parse_quantity(std::string_view s, Quantity q) {
    switch (q) {
    case Quantity::Time: return parse_with_units(s, kTimeUnits);
    case Quantity::Frequency: return parse_with_units(s, kFrequencyUnits);
    case Quantity::Angle: return parse_angle(s);
    case Quantity::Count:
    case Quantity::Plain: {
        double v = 0.0;
        if (s.empty() || leading_number(s, v) != s.size()) return std::nullopt;
        if (q == Quantity::Count && (v < 0.0 || v != std::floor(v))) return std::nullopt;
        return v;
    }
    }
    return std::nullopt;
}

const char* quantity_hint(Quantity q) {
    switch (q) {
    case Quantity::Time: return "a time with unit ns, us, ms or s";
    case Quantity::Frequency: return "a frequency with unit Hz, kHz or MHz";
    case Quantity::Angle: return "an angle in radians or a multiple of pi";
    case Quantity::Count: return "a non-negative integer";
    case Quantity::Plain: return "a number";
    }
    return "a value";
}

struct KeySpec {
    const char* key;
    Quantity quantity;
    bool required;
};

std::vector<KeySpec> keys_for(StepKind kind) {
    switch (kind) {
    case StepKind::CatPulse: return {{"duration", Quantity::Time, true}, {"alpha", Quantity::Plain, false}};
    case StepKind::SpecTrain:
        return {{"n", Quantity::Count, true},
                {"width", Quantity::Time, true},
                {"period", Quantity::Time, true},
                {"delay", Quantity::Time, false}};
    case StepKind::SpecPulse: return {{"duration", Quantity::Time, true}, {"delay", Quantity::Time, false}};
    case StepKind::Rotation: return {{"angle", Quantity::Angle, true}, {"axis", Quantity::Plain, true},
                                     {"duration", Quantity::Time, true}};
    case StepKind::Detect: return {{"window", Quantity::Time, true}};
    default: return {{"duration", Quantity::Time, true}};
    }
}

std::optional<Axis> parse_axis(std::string_view s) {
    if (s == "x") return Axis::X;
    if (s == "y") return Axis::Y;
    if (s == "z") return Axis::Z;
    if (s == "rsb") return Axis::RedSideband;
    return std::nullopt;
}

const char* axis_name(Axis a) {
    switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
    case Axis::RedSideband: return "rsb";
    }
    return "x";
}

struct KeyValue {
    std::string_view key;
    std::string_view value;
    std::size_t column;
    std::size_t value_column;
};

std::vector<KeyValue> split_pairs(const std::vector<Token>& tokens, std::size_t line) {
    std::vector<KeyValue> out;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const auto eq = tokens[i].text.find('=');
        if (eq == std::string_view::npos || eq == 0)
            throw ParseError("expected key=value, got '" + std::string(tokens[i].text) + "'", line, tokens[i].column);
        KeyValue kv{tokens[i].text.substr(0, eq), tokens[i].text.substr(eq + 1), tokens[i].column,
                    tokens[i].column + eq + 1};
        for (const auto& prev : out)
            if (prev.key == kv.key) throw ParseError("duplicate key '" + std::string(kv.key) + "'", line, kv.column);
        out.push_back(kv);
    }
    return out;
}

void parse_header(SequenceProgram& prog, const std::vector<Token>& tokens, std::size_t line) {
    bool have_nu = false, have_basis = false, have_method = false;
    for (const auto& kv : split_pairs(tokens, line)) {
        if (kv.key == "nu") {
            const auto v = parse_quantity(kv.value, Quantity::Frequency);
            if (!v || !(*v > 0.0))
                throw ParseError("nu must be a positive frequency with unit Hz, kHz or MHz", line, kv.value_column);
            prog.mode_frequency = *v;
            have_nu = true;
        } else if (kv.key == "basis") {
            if (kv.value == "z")
                prog.basis = Basis::Z;
            else if (kv.value == "y")
                prog.basis = Basis::Y;
            else
                throw ParseError("basis must be z or y", line, kv.value_column);
            have_basis = true;
        } else if (kv.key == "method") {
            if (kv.value.empty()) throw ParseError("method must not be empty", line, kv.value_column);
            prog.method = std::string(kv.value);
            have_method = true;
        } else {
            throw ParseError("unknown header key '" + std::string(kv.key) + "'", line, kv.column);
        }
    }
    const std::size_t end_col = tokens.back().column + tokens.back().text.size();
    if (!have_method) throw ParseError("missing required key 'method'", line, end_col);
    if (!have_nu) throw ParseError("missing required key 'nu'", line, end_col);
    if (!have_basis) throw ParseError("missing required key 'basis'", line, end_col);
}

Step parse_step(StepKind kind, const std::vector<Token>& tokens, std::size_t line) {
    Step step;
    step.kind = kind;
    step.line = line;
    const auto specs = keys_for(kind);
    std::map<std::string, double, std::less<>> values;
    for (const auto& kv : split_pairs(tokens, line)) {
        const auto spec = std::find_if(specs.begin(), specs.end(), [&](const KeySpec& s) { return kv.key == s.key; });
        if (spec == specs.end())
            throw ParseError("unknown key '" + std::string(kv.key) + "' for " + step_kind_name(kind), line, kv.column);
        if (kind == StepKind::Rotation && kv.key == "axis") {
            const auto a = parse_axis(kv.value);
            if (!a) throw ParseError("axis must be x, y, z or rsb", line, kv.value_column);
            step.axis = *a;
            values.emplace("axis", 0.0);
            continue;
        }
        const auto v = parse_quantity(kv.value, spec->quantity);
        if (!v)
            throw ParseError("malformed value '" + std::string(kv.value) + "' for '" + std::string(kv.key) +
                                 "': expected " + quantity_hint(spec->quantity),
                             line, kv.value_column);
        values.emplace(std::string(kv.key), *v);
    }
    const std::size_t end_col = tokens.back().column + tokens.back().text.size();
    for (const auto& s : specs)
        if (s.required && !values.contains(s.key))
            throw ParseError(std::string("missing required key '") + s.key + "' for " + step_kind_name(kind), line,
                             end_col);

    auto get = [&](const char* key, double fallback) {
        const auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    };
    switch (kind) {
    case StepKind::SpecTrain: {
        const double n = get("n", 0.0);
        if (n < 1.0) throw ParseError("SpecTrain needs n >= 1", line, tokens[0].column);
        step.pulses = static_cast<std::size_t>(n);
        step.width = get("width", 0.0);
        step.period = get("period", 0.0);
        step.delay = get("delay", 0.0);
        if (!(step.width > 0.0) || !(step.period > 0.0))
            throw ParseError("SpecTrain width and period must be positive", line, tokens[0].column);
        step.duration = step.delay + static_cast<double>(step.pulses - 1) * step.period + step.width;
        break;
    }
    case StepKind::Detect: step.duration = get("window", 0.0); break;
    default:
        step.duration = get("duration", 0.0);
        if (kind == StepKind::CatPulse && values.contains("alpha")) step.alpha = get("alpha", 0.0);
        if (kind == StepKind::SpecPulse) step.delay = get("delay", 0.0);
        if (kind == StepKind::Rotation) step.angle = get("angle", 0.0);
        break;
    }
    if (step.delay < 0.0) throw ParseError("delay must be non-negative", line, tokens[0].column);
    if (!(step.duration > 0.0)) throw ParseError("duration must be positive", line, tokens[0].column);
    return step;
}

std::string shortest(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

template <std::size_t N>
std::string render_with_units(double v, const std::array<Unit, N>& units) {
    std::string best;
    for (const auto& u : units) {
        const std::string text = shortest(v / u.scale) + u.suffix;
        const auto back = parse_with_units(text, units);
        if (!back || *back != v) continue;
        if (best.empty() || text.size() < best.size()) best = text;
    }
    return best.empty() ? shortest(v) + "s" : best;
}

std::string render_angle(double angle) {
    for (int den : {1, 2, 3, 4, 6, 8, 12, 16}) {
        const double coef = std::round(angle / constants::pi * den);
        std::string text;
        const double num = std::abs(coef);
        if (num == 0.0) continue;
        text = (coef < 0 ? "-" : "");
        if (num != 1.0) text += shortest(num);
        text += "pi";
        if (den != 1) text += "/" + std::to_string(den);
        const auto back = parse_angle(text);
        if (back && *back == angle) return text;
    }
    return shortest(angle);
}

} // namespace

const char* step_kind_name(StepKind kind) {
    for (const auto& k : kKindNames)
        if (k.kind == kind) return k.name;
    return "Unknown";
}

std::optional<StepKind> step_kind_from_name(std::string_view name) {
    for (const auto& k : kKindNames)
        if (name == k.name) return k.kind;
    return std::nullopt;
}

bool is_spectroscopy(StepKind kind) { return kind == StepKind::SpecTrain || kind == StepKind::SpecPulse; }

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line), column_(column) {}

SequenceProgram parse_sequence(std::string_view text) {
    SequenceProgram prog;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;

        if (tokens[0].text == "Sequence") {
            if (have_header) throw ParseError("duplicate Sequence header", line_no, tokens[0].column);
            if (!prog.steps.empty()) throw ParseError("Sequence header must precede all steps", line_no, tokens[0].column);
            parse_header(prog, tokens, line_no);
            have_header = true;
            continue;
        }
        const auto kind = step_kind_from_name(tokens[0].text);
        if (!kind) throw ParseError("unknown step kind '" + std::string(tokens[0].text) + "'", line_no, tokens[0].column);
        if (!have_header) throw ParseError("missing Sequence header before first step", line_no, tokens[0].column);
        prog.steps.push_back(parse_step(*kind, tokens, line_no));
    }
    if (prog.steps.empty()) throw ParseError("no steps", std::max<std::size_t>(line_no, 1), 1);
    return prog;
}

SequenceProgram load_sequence(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open sequence file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sequence(ss.str());
}

std::string render_sequence(const SequenceProgram& program) {
    std::ostringstream os;
    os << "Sequence method=" << program.method << " nu=" << render_with_units(program.mode_frequency, kFrequencyUnits)
       << " basis=" << (program.basis == Basis::Y ? "y" : "z") << '\n';
    for (const auto& s : program.steps) {
        os << step_kind_name(s.kind);
        switch (s.kind) {
        case StepKind::SpecTrain:
            os << " n=" << s.pulses << " width=" << render_with_units(s.width, kTimeUnits)
               << " period=" << render_with_units(s.period, kTimeUnits)
               << " delay=" << render_with_units(s.delay, kTimeUnits);
            break;
        case StepKind::Detect: os << " window=" << render_with_units(s.duration, kTimeUnits); break;
        case StepKind::Rotation:
            os << " angle=" << render_angle(s.angle) << " axis=" << axis_name(s.axis)
               << " duration=" << render_with_units(s.duration, kTimeUnits);
            break;
        default:
            os << " duration=" << render_with_units(s.duration, kTimeUnits);
            if (s.kind == StepKind::CatPulse && s.alpha) os << " alpha=" << shortest(*s.alpha);
            if (s.kind == StepKind::SpecPulse) os << " delay=" << render_with_units(s.delay, kTimeUnits);
            break;
        }
        os << '\n';
    }
    return os.str();
}

std::vector<Diagnostic> validate_sequence(const SequenceProgram& program, const ValidationOptions& options) {
    std::vector<Diagnostic> out;
    auto error = [&](std::size_t line, std::string code, std::string msg) {
        out.push_back({Severity::Error, line, std::move(code), std::move(msg)});
    };
    auto warn = [&](std::size_t line, std::string code, std::string msg) {
        out.push_back({Severity::Warning, line, std::move(code), std::move(msg)});
    };
    const auto& steps = program.steps;
    if (steps.empty()) {
        error(0, "empty", "program has no steps");
        return out;
    }

    bool method_known = false;
    for (Method m : kAllMethods) method_known = method_known || program.method == method_name(m);
    if (!method_known) error(0, "unknown-method", "method '" + program.method + "' has no simulator");
    const bool y_method = program.method.find("sigma_y") != std::string::npos;
    if (method_known && y_method != (program.basis == Basis::Y))
        error(0, "basis-mismatch", "method '" + program.method + "' does not match the declared basis");

    const auto first_spec = std::find_if(steps.begin(), steps.end(), [](const Step& s) { return is_spectroscopy(s.kind); });
    if (first_spec == steps.end()) warn(0, "no-spectroscopy", "sequence contains no spectroscopy step");

    // Hide / Unhide nesting.
    bool hidden = false;
    std::size_t hide_line = 0;
    bool hide_seen = false;
    for (auto it = steps.begin(); it != steps.end(); ++it) {
        if (it->kind == StepKind::Hide) {
            if (hidden) error(it->line, "hide-nesting", "Hide while already hidden");
            hidden = true;
            hide_seen = true;
            hide_line = it->line;
        } else if (it->kind == StepKind::Unhide) {
            if (!hidden) error(it->line, "hide-nesting", "Unhide without a preceding Hide");
            hidden = false;
        } else if (it->kind == StepKind::Detect && hidden) {
            error(it->line, "hide-unmatched", "Detect while the logic ion is hidden");
        }
        if (it == first_spec && !hide_seen)
            error(it->line, "hide-order", "spectroscopy step before any Hide step");
    }
    if (hidden) error(hide_line, "hide-unmatched", "Hide is never followed by Unhide");

    // Cat pulse pairing.
    std::size_t open_cats = 0;
    std::size_t cat_line = 0;
    for (const auto& s : steps) {
        if (s.kind == StepKind::CatPulse) {
            ++open_cats;
            cat_line = s.line;
        } else if (s.kind == StepKind::CatInverse) {
            if (open_cats == 0)
                error(s.line, "cat-pairing", "CatInverse without a preceding CatPulse");
            else
                --open_cats;
        }
    }
    if (open_cats > 0) error(cat_line, "cat-pairing", "CatPulse without a matching CatInverse");

    // Spectroscopy timing.
    for (const auto& s : steps) {
        if (s.kind != StepKind::SpecTrain) continue;
        if (s.pulses > 1 && s.width > s.period)
            error(s.line, "pulse-overlap", "SpecTrain pulses are wider than their period");
        const double expected = 1.0 / program.mode_frequency;
        const double deviation = std::abs(s.period / expected - 1.0);
        if (deviation > options.period_tolerance) {
            std::ostringstream msg;
            msg << "SpecTrain period " << s.period * 1e9 << " ns differs from 1/nu = " << expected * 1e9 << " ns by "
                << deviation * 100.0 << "%";
            warn(s.line, "period-mismatch", msg.str());
        }
    }

    // Detection.
    for (std::size_t i = 0; i < steps.size(); ++i)
        if (steps[i].kind == StepKind::Detect && i + 1 != steps.size())
            error(steps[i].line, "detect-last", "Detect must be the last step");
    if (steps.back().kind != StepKind::Detect) error(steps.back().line, "detect-last", "sequence does not end with Detect");

    if (program.basis == Basis::Y) {
        // The analysis rotation has to follow the last step that builds the signal.
        std::size_t anchor = 0;
        for (std::size_t i = 0; i < steps.size(); ++i)
            if (is_spectroscopy(steps[i].kind) || steps[i].kind == StepKind::CatInverse) anchor = i;
        bool rotated = false;
        for (std::size_t i = anchor; i < steps.size(); ++i)
            rotated = rotated || (steps[i].kind == StepKind::Rotation && steps[i].axis != Axis::RedSideband &&
                                  steps[i].axis != Axis::Z);
        if (!rotated)
            error(steps.back().line, "missing-rotation", "sigma_y readout needs an analysis Rotation before Detect");
    }
    return out;
}

std::size_t count_errors(const std::vector<Diagnostic>& diagnostics) {
    return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                  [](const Diagnostic& d) { return d.severity == Severity::Error; }));
}

std::size_t count_warnings(const std::vector<Diagnostic>& diagnostics) {
    return diagnostics.size() - count_errors(diagnostics);
}

Method sequence_method(const SequenceProgram& program) {
    for (Method m : kAllMethods)
        if (program.method == method_name(m)) return m;
    throw InvalidParameter("method '" + program.method + "' has no simulator");
}

std::vector<Timeline> schedule_sequence(const SequenceProgram& program, const std::vector<double>& delay_sweep) {
    if (program.steps.empty()) throw SchedulingError("cannot schedule an empty program");
    std::vector<Timeline> out;
    out.reserve(delay_sweep.size());
    for (double sweep : delay_sweep) {
        if (!(sweep >= 0.0) || !std::isfinite(sweep)) throw SchedulingError("sweep delays must be finite and non-negative");
        Timeline tl;
        tl.sweep_delay = sweep;
        double t = 0.0;
        bool shifted = false;
        for (const auto& s : program.steps) {
            if (!(s.duration > 0.0)) throw SchedulingError(std::string(step_kind_name(s.kind)) + " has no duration");
            if (s.kind == StepKind::SpecTrain && s.pulses > 1 && s.width > s.period)
                throw SchedulingError("SpecTrain pulses overlap");
            TimelineEntry e;
            e.kind = s.kind;
            if (is_spectroscopy(s.kind)) {
                if (!shifted) t += sweep;
                shifted = true;
                e.phi_sc = constants::two_pi * program.mode_frequency * (s.delay + sweep);
            }
            e.start = t;
            e.end = t + s.duration;
            if (!tl.entries.empty() && e.start < tl.entries.back().end) throw SchedulingError("steps overlap");
            t = e.end;
            tl.entries.push_back(e);
        }
        tl.total_duration = t;
        out.push_back(std::move(tl));
    }
    return out;
}

std::vector<double> motional_period_sweep(double mode_frequency, std::size_t points) {
    if (!(mode_frequency > 0.0)) throw InvalidParameter("mode frequency must be positive");
    if (points < 2) throw InvalidParameter("a sweep needs at least two points");
    std::vector<double> out(points);
    const double period = 1.0 / mode_frequency;
    for (std::size_t i = 0; i < points; ++i)
        out[i] = period * static_cast<double>(i) / static_cast<double>(points - 1);
    return out;
}

void write_timeline_csv(std::ostream& os, const Timeline& timeline) {
    os << "start_s,end_s,kind,phi_sc_rad\n";
    for (const auto& e : timeline.entries) {
        os << shortest(e.start) << ',' << shortest(e.end) << ',' << step_kind_name(e.kind) << ',';
        if (e.phi_sc) os << shortest(*e.phi_sc);
        os << '\n';
    }
}

} // namespace catspec
