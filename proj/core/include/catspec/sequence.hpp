#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "catspec/statistics.hpp"

namespace catspec {

enum class StepKind {
    DopplerCool,
    OpticalPump,
    SidebandCool,
    Hide,
    Unhide,
    CatPulse,
    SpecTrain,
    SpecPulse,
    CatInverse,
    Rotation,
    Wait,
    Detect,
};

const char* step_kind_name(StepKind kind);
std::optional<StepKind> step_kind_from_name(std::string_view name);
bool is_spectroscopy(StepKind kind);

enum class Axis { X, Y, Z, RedSideband };
enum class Basis { Z, Y };

struct Step {
    StepKind kind = StepKind::Wait;
    double duration = 0.0; // s; derived for SpecTrain
    std::size_t line = 0;  // source line, 0 when built in code

    std::optional<double> alpha; // CatPulse
    std::size_t pulses = 0;      // SpecTrain
    double width = 0.0;          // SpecTrain, s
    double period = 0.0;         // SpecTrain, s
    double delay = 0.0;          // SpecTrain / SpecPulse, s
    double angle = 0.0;          // Rotation, rad
    Axis axis = Axis::X;         // Rotation

    bool operator==(const Step&) const = default;
};

struct SequenceProgram {
    std::string method;         // one of the method names from statistics
    double mode_frequency = 0.0; // Hz
    Basis basis = Basis::Z;
    std::vector<Step> steps;

    bool operator==(const SequenceProgram&) const = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Grammar (one statement per line, `#` starts a comment):
///
///   Sequence method=NAME nu=FREQ basis=z|y
///   KIND key=value ...
///
/// Times take ns, us, ms or s; frequencies Hz, kHz or MHz; angles are plain
/// radians or multiples of pi (`pi`, `pi/2`, `3pi/4`).
SequenceProgram parse_sequence(std::string_view text);
SequenceProgram load_sequence(const std::string& path);

/// Canonical text form; parse(render(p)) == p.
std::string render_sequence(const SequenceProgram& program);

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::size_t line = 0;
    std::string code;
    std::string message;
};

struct ValidationOptions {
    double period_tolerance = 0.02; // relative deviation of SpecTrain period from 1/nu
};

std::vector<Diagnostic> validate_sequence(const SequenceProgram& program, const ValidationOptions& options = {});
std::size_t count_errors(const std::vector<Diagnostic>& diagnostics);
std::size_t count_warnings(const std::vector<Diagnostic>& diagnostics);

/// Statistics method simulated by this program.
Method sequence_method(const SequenceProgram& program);

struct TimelineEntry {
    double start = 0.0;
    double end = 0.0;
    StepKind kind = StepKind::Wait;
    std::optional<double> phi_sc;
};

struct Timeline {
    double sweep_delay = 0.0;
    double total_duration = 0.0;
    std::vector<TimelineEntry> entries;
};

/// One timeline per sweep delay. The delay shifts every spectroscopy step and
/// all later steps; the scatter phase is 2 pi nu (step delay + sweep delay).
std::vector<Timeline> schedule_sequence(const SequenceProgram& program, const std::vector<double>& delay_sweep);

/// `points` delays evenly covering [0, 1/nu].
std::vector<double> motional_period_sweep(double mode_frequency, std::size_t points);

/// Columns start_s,end_s,kind,phi_sc_rad; phi_sc empty where not applicable.
void write_timeline_csv(std::ostream& os, const Timeline& timeline);

} // namespace catspec
