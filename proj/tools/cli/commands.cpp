#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "catspec/constants.hpp"
#include "catspec/error.hpp"
#include "catspec/fock_oracle.hpp"
#include "catspec/lineprofile.hpp"
#include "catspec/montecarlo.hpp"
#include "catspec/quadrature.hpp"
#include "catspec/rng.hpp"
#include "catspec/signal.hpp"
#include "output.hpp"

namespace catspec::cli {

namespace {

// Stream ids keep the commands' random draws apart for a shared seed.
constexpr std::uint64_t kFringeStream = 1;
constexpr std::uint64_t kSpectrumStream = 2;
constexpr std::uint64_t kSensitivityStream = 3;
constexpr std::uint64_t kHeatingStream = 4;

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

void add_check(CommandOutcome& out, std::string name, bool passed, std::string detail) {
    out.checks.push_back({std::move(name), passed, std::move(detail)});
}

void print_checks(const CommandOutcome& out, std::ostream& log) {
    for (const auto& c : out.checks)
        log << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
}

WeightedSeries series(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& sigma) {
    WeightedSeries s;
    s.x = x;
    s.y = y;
    s.sigma = sigma;
    return s;
}

} // namespace

bool CommandOutcome::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

int CommandOutcome::exit_code(bool check_mode) const {
    if (errors) return 1;
    if (check_mode && !all_passed()) return 1;
    return 0;
}

// fringe

std::vector<double> fringe_grid(std::size_t points) {
    if (points < 2) throw InvalidParameter("fringe grid needs at least two points");
    std::vector<double> out(points);
    const double start = constants::pi / 2.0 - constants::pi;
    for (std::size_t i = 0; i < points; ++i)
        out[i] = start + constants::two_pi * static_cast<double>(i) / static_cast<double>(points - 1);
    return out;
}

FringeRun run_fringe(const RunConfig& cfg) {
    const auto grid = fringe_grid(cfg.fringe.points);
    const double ps = cfg.fringe.scatter_prob;
    const QubitExpectation idle = expectation(cfg.protocol, 0.0, false);

    FringeRun run;
    run.sampled = cfg.fringe.shots > 0;
    std::optional<RngStream> base;
    if (run.sampled) base.emplace(cfg.require_seed("fringe"), kFringeStream);

    std::vector<double> az, ay, sz, sy, sy_err;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        FringeRow row;
        row.phi_sc = grid[i];
        const QubitExpectation hit = expectation(cfg.protocol, row.phi_sc, true);
        row.analytic_sz = ps * hit.sz + (1.0 - ps) * idle.sz;
        row.analytic_sy = ps * hit.sy + (1.0 - ps) * idle.sy;
        row.sz = row.analytic_sz;
        row.sy = row.analytic_sy;
        if (run.sampled) {
            const ProtocolEstimate est =
                simulate_protocol(cfg.protocol, row.phi_sc, cfg.fringe.shots, ps, base->substream(i), cfg.workers);
            row.sz = est.sz;
            row.sy = est.sy;
            row.sz_err = est.sz_err;
            row.sy_err = est.sy_err;
        }
        az.push_back(row.analytic_sz);
        ay.push_back(row.analytic_sy);
        sy.push_back(row.sy);
        // A +-1 outcome average never has less spread than one shot in N.
        const double floor = run.sampled ? 1.0 / static_cast<double>(cfg.fringe.shots) : 1.0;
        sy_err.push_back(std::max(row.sy_err, floor));
        run.rows.push_back(row);
    }
    const std::vector<double> unit(grid.size(), 1.0);
    FitOptions tight;
    tight.max_iterations = 500;
    tight.step_tolerance = 1e-15;
    run.analytic_z = fit_sinusoid(series(grid, az, unit), constants::pi, tight);
    run.analytic_y = fit_sinusoid(series(grid, ay, unit), constants::two_pi, tight);

    const auto [zmin, zmax] = std::minmax_element(az.begin(), az.end());
    const auto [ymin, ymax] = std::minmax_element(ay.begin(), ay.end());
    std::vector<double> syn_z, syn_y;
    for (double phi : grid) {
        syn_z.push_back(0.5 * (*zmax + *zmin) - 0.5 * (*zmax - *zmin) * std::cos(2.0 * (phi - constants::pi / 2.0)));
        syn_y.push_back(0.5 * (*ymax + *ymin) + 0.5 * (*ymax - *ymin) * std::cos(phi - constants::pi / 2.0));
    }
    // Hints off by 10% so the period is found, not copied.
    run.synthetic_z = fit_sinusoid(series(grid, syn_z, unit), 1.1 * constants::pi, tight);
    run.synthetic_y = fit_sinusoid(series(grid, syn_y, unit), 0.9 * constants::two_pi, tight);
    for (double phi : grid) {
        const QubitExpectation a = expectation(cfg.protocol, phi, true);
        const QubitExpectation b = expectation(cfg.protocol, phi + constants::pi, true);
        run.symmetry_defect = std::max({run.symmetry_defect, std::abs(b.sz - a.sz), std::abs(b.sy + a.sy)});
    }
    if (run.sampled) run.sampled_y = fit_sinusoid(series(grid, sy, sy_err), constants::two_pi);
    return run;
}

CommandOutcome cmd_fringe(const RunConfig& cfg, std::ostream& log) {
    CommandOutcome out;
    const FringeRun run = run_fringe(cfg);

    const auto csv_path = cfg.out_dir / "fringe.csv";
    {
        OutputFile f(csv_path);
        auto& os = f.stream();
        os << "phi_sc,sz,sy,sz_err,sy_err,analytic_sz,analytic_sy\n";
        for (const auto& r : run.rows)
            os << num(r.phi_sc) << ',' << num(r.sz) << ',' << num(r.sy) << ',' << num(r.sz_err) << ',' << num(r.sy_err)
               << ',' << num(r.analytic_sz) << ',' << num(r.analytic_sy) << '\n';
        f.close();
    }
    out.files.push_back(csv_path);

    const double ratio = run.synthetic_z.period / run.synthetic_y.period;
    const double ratio_err = std::abs(ratio - 0.5) / 0.5;
    log << "fringe: " << run.rows.size() << " phases, " << cfg.fringe.shots << " shots per basis and phase\n";
    log << "  model fit: period_z = " << num(run.analytic_z.period) << ", period_y = " << num(run.analytic_y.period)
        << ", A_y = " << fixed(run.analytic_y.amplitude, 5) << " (sinusoid fit to a non-sinusoidal curve)\n";
    log << "  synthetic fit: period_z = " << num(run.synthetic_z.period)
        << ", period_y = " << num(run.synthetic_y.period) << '\n';
    add_check(out, "sigma_z period is half the sigma_y period", ratio_err < 1e-9,
              "relative error " + num(ratio_err));
    add_check(out, "model: sigma_z repeats and sigma_y flips after pi", run.symmetry_defect < 1e-12,
              "max defect " + num(run.symmetry_defect));
    if (run.sampled) {
        const double diff = std::abs(run.sampled_y.amplitude - run.analytic_y.amplitude);
        const double err = run.sampled_y.amplitude_err;
        log << "  sampled fit: A_y = " << fixed(run.sampled_y.amplitude, 5) << " +- " << fixed(err, 5) << '\n';
        add_check(out, "sampled A_y within 3 sigma of analytic", diff < 3.0 * err,
                  fixed(run.sampled_y.amplitude, 5) + " vs " + fixed(run.analytic_y.amplitude, 5) + " (" +
                      fixed(diff / err, 2) + " sigma)");
    }

    if (cfg.plot) {
        Plot plot{"Interference fringes", "scatter phase (rad)", "expectation", {}};
        PlotSeries z{"sigma_z", {}, {}, {}, false, "#1f77b4"}, y{"sigma_y", {}, {}, {}, false, "#d62728"};
        PlotSeries zl{"sigma_z model", {}, {}, {}, true, "#1f77b4"}, yl{"sigma_y model", {}, {}, {}, true, "#d62728"};
        for (const auto& r : run.rows) {
            z.x.push_back(r.phi_sc), z.y.push_back(r.sz), z.err.push_back(r.sz_err);
            y.x.push_back(r.phi_sc), y.y.push_back(r.sy), y.err.push_back(r.sy_err);
            zl.x.push_back(r.phi_sc), zl.y.push_back(r.analytic_sz);
            yl.x.push_back(r.phi_sc), yl.y.push_back(r.analytic_sy);
        }
        plot.series = {zl, yl};
        if (run.sampled) plot.series.insert(plot.series.end(), {z, y});
        write_svg(cfg.out_dir / "fringe.svg", plot);
        out.files.push_back(cfg.out_dir / "fringe.svg");
    }
    print_checks(out, log);
    return out;
}

// spectrum

std::vector<double> detuning_grid(const SpectrumConfig& s) {
    std::vector<double> out(s.points);
    for (std::size_t i = 0; i < s.points; ++i)
        out[i] = -s.span + 2.0 * s.span * static_cast<double>(i) / static_cast<double>(s.points - 1);
    return out;
}

namespace {

GaussianFit fit_trace(const std::vector<SpectrumPoint>& pts, bool sampled) {
    WeightedSeries s;
    for (const auto& p : pts) {
        s.x.push_back(p.detuning / 1e6);
        s.y.push_back(p.ay);
        s.sigma.push_back(sampled ? p.ay_err : 1.0);
    }
    return fit_gaussian(s);
}

} // namespace

SpectrumRun run_spectrum(const RunConfig& cfg) {
    const auto& sc = cfg.spectrum;
    const auto grid = detuning_grid(sc);
    const LineShape line(sc.model);
    SpectrumRun run;
    run.saturation_scale = calibrate_saturation(sc.model, sc.powers.front(), sc.duration, sc.p0_lowest);
    std::optional<RngStream> base;
    if (sc.shots > 0) base.emplace(cfg.require_seed("spectrum"), kSpectrumStream);

    for (std::size_t k = 0; k < sc.powers.size(); ++k) {
        SpectrumTrace trace;
        trace.power = sc.powers[k];
        const DriveParams drive{trace.power, sc.duration, run.saturation_scale};
        trace.resonant_scatter = scatter_probability(line, drive, line.peak_detuning());
        std::optional<SpectrumSampling> sampling;
        if (base) sampling = SpectrumSampling{sc.shots, base->substream(k)};
        trace.points = spectrum_scan(sc.model, drive, cfg.protocol, grid, sampling);
        trace.fit = fit_trace(trace.points, sampling.has_value());
        run.traces.push_back(std::move(trace));
    }
    return run;
}

CommandOutcome cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
    CommandOutcome out;
    const SpectrumRun run = run_spectrum(cfg);

    const auto csv_path = cfg.out_dir / "spectrum.csv";
    {
        OutputFile f(csv_path);
        auto& os = f.stream();
        os << "power,detuning_hz,ay,ay_err,ay_model\n";
        for (const auto& t : run.traces)
            for (const auto& p : t.points)
                os << num(t.power) << ',' << num(p.detuning) << ',' << num(p.ay) << ',' << num(p.ay_err) << ','
                   << num(p.ay_model) << '\n';
        f.close();
    }
    out.files.push_back(csv_path);
    const auto fit_path = cfg.out_dir / "spectrum_fit.csv";
    {
        OutputFile f(fit_path);
        auto& os = f.stream();
        os << "power,resonant_scatter,center_mhz,fwhm_mhz,fwhm_err_mhz,amplitude,offset\n";
        for (const auto& t : run.traces)
            os << num(t.power) << ',' << num(t.resonant_scatter) << ',' << num(t.fit.center) << ',' << num(t.fit.fwhm)
               << ',' << num(t.fit.fwhm_err) << ',' << num(t.fit.amplitude) << ',' << num(t.fit.offset) << '\n';
        f.close();
    }
    out.files.push_back(fit_path);

    log << "spectrum: B = " << cfg.spectrum.model.b_field << " G, kappa = " << num(run.saturation_scale) << '\n';
    for (const auto& t : run.traces)
        log << "  power " << t.power << ": P(scatter, resonant) = " << fixed(t.resonant_scatter, 4)
            << ", Gaussian FWHM = " << fixed(t.fit.fwhm, 2) << " +- " << fixed(t.fit.fwhm_err, 2) << " MHz\n";

    const double low = run.traces.front().fit.fwhm;
    add_check(out, "lowest-power FWHM in [33, 43] MHz", low >= 33.0 && low <= 43.0, fixed(low, 2) + " MHz");
    bool increasing = true;
    for (std::size_t k = 1; k < run.traces.size(); ++k)
        increasing = increasing && run.traces[k].fit.fwhm > run.traces[k - 1].fit.fwhm;
    add_check(out, "FWHM increases with power", increasing && run.traces.size() >= 2,
              std::to_string(run.traces.size()) + " powers");

    // Field-free line in the weak-drive limit against a Gaussian fit of the bare Lorentzian.
    RunConfig weak = cfg;
    weak.spectrum.model.b_field = 0.0;
    const auto grid = detuning_grid(weak.spectrum);
    const double kappa0 = calibrate_saturation(weak.spectrum.model, 1.0, 1.0, 1e-9);
    const auto pts = spectrum_scan(weak.spectrum.model, DriveParams{1.0, 1.0, kappa0}, cfg.protocol, grid);
    const GaussianFit weak_fit = fit_trace(pts, false);
    std::vector<SpectrumPoint> bare;
    const double hw = 0.5 * cfg.spectrum.model.natural_fwhm;
    for (double d : grid) bare.push_back({d, 1.0 / (1.0 + (d / hw) * (d / hw)), 0.0, 0.0});
    const GaussianFit bare_fit = fit_trace(bare, false);
    const double natural = cfg.spectrum.model.natural_fwhm / 1e6;
    log << "  B = 0, weak drive: Gaussian FWHM = " << fixed(weak_fit.fwhm, 3) << " MHz for a " << natural
        << " MHz Lorentzian (fit bias x" << fixed(weak_fit.fwhm / natural, 4) << ")\n";
    add_check(out, "field-free weak-drive line matches the Gaussian fit of the Lorentzian",
              std::abs(weak_fit.fwhm - bare_fit.fwhm) < 1e-3,
              fixed(weak_fit.fwhm, 4) + " vs " + fixed(bare_fit.fwhm, 4) + " MHz");

    if (cfg.plot) {
        Plot plot{"Line profile", "detuning (MHz)", "A_y", {}};
        const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};
        for (std::size_t k = 0; k < run.traces.size(); ++k) {
            const auto& t = run.traces[k];
            PlotSeries s{"power " + num(t.power), {}, {}, {}, false, colors[k % 5]};
            PlotSeries m{"", {}, {}, {}, true, colors[k % 5]};
            for (const auto& p : t.points) {
                s.x.push_back(p.detuning / 1e6), s.y.push_back(p.ay), s.err.push_back(p.ay_err);
                m.x.push_back(p.detuning / 1e6), m.y.push_back(p.ay_model);
            }
            plot.series.push_back(s);
            plot.series.push_back(m);
        }
        write_svg(cfg.out_dir / "spectrum.svg", plot);
        out.files.push_back(cfg.out_dir / "spectrum.svg");
    }
    print_checks(out, log);
    return out;
}

// sensitivity

std::vector<MethodReport> reports_from_published() {
    std::vector<MethodReport> out;
    for (const auto& row : published_methods())
        out.push_back(method_report(row.name, row.signal_a, row.signal_b, row.n, row.n));
    return out;
}

CommandOutcome cmd_sensitivity(const RunConfig& cfg, bool from_paper, std::ostream& log) {
    CommandOutcome out;
    std::vector<MethodReport> reports;
    if (from_paper) {
        reports = reports_from_published();
    } else {
        reports = compare_methods(cfg.methods, RngStream(cfg.require_seed("sensitivity"), kSensitivityStream));
    }
    const auto csv_path = cfg.out_dir / (from_paper ? "sensitivity_published.csv" : "sensitivity.csv");
    {
        OutputFile f(csv_path);
        write_reports_csv(f.stream(), reports);
        f.close();
    }
    out.files.push_back(csv_path);

    log << "sensitivity (" << (from_paper ? "published inputs" : "simulated") << "):\n";
    for (const auto& r : reports)
        log << "  " << r.name << ": SNR = " << fixed(r.snr, 2) << ", beta = " << fixed(r.beta, 4)
            << ", shots to 3 sigma = " << (r.reaches_3sigma ? num(r.shots_3sigma_rounded) : std::string("inf")) << '\n';

    if (from_paper) {
        const auto& rows = published_methods();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = reports[i];
            // The first printed SNR does not follow from its own A, B and N; the recomputed value is asserted.
            const double snr_ref = i == 0 ? 3.02 : rows[i].snr;
            const double snr_tol = i == 0 ? 0.02 : 0.2;
            add_check(out, std::string(rows[i].name) + " SNR", std::abs(r.snr - snr_ref) <= snr_tol,
                      fixed(r.snr, 3) + " vs " + fixed(snr_ref, 2));
            add_check(out, std::string(rows[i].name) + " beta", std::abs(r.beta - rows[i].beta) <= 0.01,
                      fixed(r.beta, 4) + " vs " + fixed(rows[i].beta, 3));
            const double lo = rows[i].shots_3sigma - rows[i].shots_3sigma_err;
            const double hi = rows[i].shots_3sigma + rows[i].shots_3sigma_err;
            add_check(out, std::string(rows[i].name) + " shots to 3 sigma",
                      r.shots_3sigma >= lo && r.shots_3sigma <= hi,
                      num(std::round(r.shots_3sigma)) + " in [" + num(lo) + ", " + num(hi) + "]");
        }
    } else {
        const double ratio = reports[3].beta / reports[0].beta;
        add_check(out, "beta(css_sigma_y) / beta(direct_sigma_z) >= 10", ratio >= 10.0, fixed(ratio, 2));
        // Phase-sensitive and uncooled cat readouts agree within their published errors and are not ranked.
        const bool ordered = reports[3].beta > reports[2].beta && reports[2].beta > reports[1].beta &&
                             reports[2].beta > reports[4].beta && reports[1].beta > reports[0].beta &&
                             reports[4].beta > reports[0].beta;
        add_check(out, "method ordering", ordered,
                  "css_sigma_y > css_sigma_z > {phase_sensitive_sigma_y, css_sigma_y_no_gsc} > direct_sigma_z");
    }
    print_checks(out, log);
    return out;
}

// heating

std::vector<HeatingRow> run_heating(const RunConfig& cfg) {
    const double rate = cfg.protocol.heating_rate;
    std::vector<HeatingRow> rows;
    const RngStream base(cfg.require_seed("heating"), kHeatingStream);
    const WalkProfile trapezoid{WalkShape::Trapezoid, cfg.protocol.tau_cat, cfg.protocol.tau_wait, cfg.protocol.n_cat(),
                                cfg.heating.steps};
    const WalkProfile triangle{WalkShape::Triangle, cfg.protocol.tau_cat, 0.0, cfg.protocol.n_cat(), cfg.heating.steps};
    std::uint64_t id = 0;
    for (const auto& [name, profile] : {std::pair{"trapezoid", trapezoid}, std::pair{"triangle", triangle}}) {
        HeatingRow row;
        row.profile = name;
        row.analytic = walk_variance_analytic(profile, rate);
        row.discrete = walk_variance_discrete(profile, rate);
        const WalkStatistics st =
            heating_walk_statistics(profile, rate, cfg.heating.walks, base.substream(id++), cfg.workers);
        row.mc = st.variance;
        row.std_error = st.std_error;
        row.z_score = st.std_error > 0.0 ? (row.mc - row.analytic) / st.std_error : 0.0;
        rows.push_back(row);
    }
    return rows;
}

CommandOutcome cmd_heating(const RunConfig& cfg, std::ostream& log) {
    CommandOutcome out;
    const auto rows = run_heating(cfg);
    const auto csv_path = cfg.out_dir / "heating.csv";
    {
        OutputFile f(csv_path);
        auto& os = f.stream();
        os << "profile,analytic,discrete,mc,std_error,z_score\n";
        for (const auto& r : rows)
            os << r.profile << ',' << num(r.analytic) << ',' << num(r.discrete) << ',' << num(r.mc) << ','
               << num(r.std_error) << ',' << num(r.z_score) << '\n';
        f.close();
    }
    out.files.push_back(csv_path);

    const double contrast = heating_contrast(cfg.protocol);
    log << "heating: R_h = " << cfg.protocol.heating_rate << " /s, n_cat = " << fixed(cfg.protocol.n_cat(), 4)
        << ", contrast exp(-<phi^2>/2) = " << fixed(contrast, 5) << '\n';
    for (const auto& r : rows) {
        log << "  " << r.profile << ": analytic " << num(r.analytic) << ", MC " << num(r.mc) << " +- "
            << num(r.std_error) << '\n';
        add_check(out, r.profile + " walk variance within 3 SE", std::abs(r.z_score) < 3.0,
                  "z = " + fixed(r.z_score, 3));
    }
    print_checks(out, log);
    return out;
}

// oracle

OracleRun run_oracle(const RunConfig& cfg) {
    const auto& oc = cfg.oracle;
    const auto grid = phase_grid(oc.points, 0.0, constants::two_pi);
    const QuadratureRule rule = gauss_legendre(oc.quadrature_nodes);
    OracleRun run;
    for (double alpha : oc.alphas) {
        const fock::ProtocolOracle oracle(alpha, oc.dim);
        for (double ea : oc.etas) {
            for (double ee : oc.etas) {
                ProtocolParams p = cfg.protocol;
                p.alpha = alpha;
                p.eta_abs = ea;
                p.eta_em = ee;
                p.heating_rate = 0.0;
                for (double c : oc.cos_thetas) {
                    OracleRow row{alpha, ea, ee, c, 0.0, 0.0, oracle.truncation_error()};
                    for (double phi : grid) {
                        const fock::OracleResult r = oracle.run(ea, ee, phi, c);
                        const QubitExpectation a = expectation_directed(p, phi, c);
                        row.max_dsz = std::max(row.max_dsz, std::abs(r.value.sz - a.sz));
                        row.max_dsy = std::max(row.max_dsy, std::abs(r.value.sy - a.sy));
                        row.truncation_error = row.truncation_error || r.truncation_error;
                    }
                    run.max_directed = std::max({run.max_directed, row.max_dsz, row.max_dsy});
                    run.rows.push_back(row);
                }
                OracleRow avg{alpha, ea, ee, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0,
                              oracle.truncation_error()};
                for (double phi : grid) {
                    double sz = 0.0, sy = 0.0;
                    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                        const fock::OracleResult r = oracle.run(ea, ee, phi, rule.nodes[k]);
                        sz += 0.5 * rule.weights[k] * r.value.sz;
                        sy += 0.5 * rule.weights[k] * r.value.sy;
                    }
                    const QubitExpectation a = expectation(p, phi, true);
                    avg.max_dsz = std::max(avg.max_dsz, std::abs(sz - a.sz));
                    avg.max_dsy = std::max(avg.max_dsy, std::abs(sy - a.sy));
                }
                run.max_averaged = std::max({run.max_averaged, avg.max_dsz, avg.max_dsy});
                run.rows.push_back(avg);
            }
        }
    }
    for (double eta : oc.etas) {
        const auto d = fock::direct_detection_exact(eta);
        run.direct_detection_error =
            std::max(run.direct_detection_error, std::abs(d.p_excited - eta * eta * std::exp(-eta * eta)));
    }
    return run;
}

CommandOutcome cmd_oracle(const RunConfig& cfg, std::ostream& log) {
    CommandOutcome out;
    const OracleRun run = run_oracle(cfg);
    const auto csv_path = cfg.out_dir / "oracle.csv";
    bool truncated = false;
    {
        OutputFile f(csv_path);
        auto& os = f.stream();
        os << "alpha,eta_abs,eta_em,cos_theta,max_abs_dsz,max_abs_dsy,truncation_error\n";
        for (const auto& r : run.rows) {
            os << num(r.alpha) << ',' << num(r.eta_abs) << ',' << num(r.eta_em) << ','
               << (std::isnan(r.cos_theta) ? std::string("averaged") : num(r.cos_theta)) << ',' << num(r.max_dsz)
               << ',' << num(r.max_dsy) << ',' << (r.truncation_error ? 1 : 0) << '\n';
            truncated = truncated || r.truncation_error;
        }
        f.close();
    }
    out.files.push_back(csv_path);
    log << "oracle: dim " << cfg.oracle.dim << ", " << run.rows.size() << " configurations\n";
    log << "  max |delta| fixed emission direction: " << num(run.max_directed) << '\n';
    log << "  max |delta| emission-averaged:        " << num(run.max_averaged) << '\n';
    log << "  max |P(n=1) - eta^2 exp(-eta^2)|:     " << num(run.direct_detection_error) << '\n';
    add_check(out, "oracle matches analytic signal", run.max_directed < 1e-6, num(run.max_directed));
    add_check(out, "emission average matches sinc form", run.max_averaged < 1e-6, num(run.max_averaged));
    add_check(out, "direct detection probability", run.direct_detection_error < 1e-10,
              num(run.direct_detection_error));
    add_check(out, "no truncation error", !truncated, truncated ? "edge population too large" : "ok");
    print_checks(out, log);
    return out;
}

// sequence

CommandOutcome cmd_sequence(const RunConfig& cfg, const std::filesystem::path& path, std::size_t sweep_points,
                            std::ostream& log) {
    CommandOutcome out;
    SequenceProgram program;
    try {
        program = load_sequence(path.string());
    } catch (const ParseError& e) {
        log << path.string() << ':' << e.line() << ':' << e.column() << ": error: " << e.what() << '\n';
        out.errors = true;
        return out;
    }
    const auto diags = validate_sequence(program);
    for (const auto& d : diags)
        log << path.string() << ':' << d.line << ": " << (d.severity == Severity::Error ? "error" : "warning") << " ["
            << d.code << "] " << d.message << '\n';
    const std::size_t errors = count_errors(diags);
    log << path.filename().string() << ": " << program.steps.size() << " steps, " << errors << " errors, "
        << count_warnings(diags) << " warnings\n";
    if (errors > 0) {
        out.errors = true;
        return out;
    }

    const auto sweep = motional_period_sweep(program.mode_frequency, std::max<std::size_t>(sweep_points, 2));
    const auto timelines = schedule_sequence(program, sweep);
    const std::string stem = path.stem().string();
    const auto timeline_path = cfg.out_dir / (stem + "_timeline.csv");
    {
        OutputFile f(timeline_path);
        write_timeline_csv(f.stream(), timelines.front());
        f.close();
    }
    out.files.push_back(timeline_path);
    const auto sweep_path = cfg.out_dir / (stem + "_sweep.csv");
    double steps_total = 0.0;
    for (const auto& s : program.steps) steps_total += s.duration;
    double duration_err = 0.0;
    {
        OutputFile f(sweep_path);
        auto& os = f.stream();
        os << "delay_s,phi_sc_rad,total_s\n";
        for (const auto& tl : timelines) {
            std::optional<double> phi;
            for (const auto& e : tl.entries)
                if (e.phi_sc && !phi) phi = e.phi_sc;
            os << num(tl.sweep_delay) << ',' << (phi ? num(*phi) : std::string()) << ',' << num(tl.total_duration)
               << '\n';
            duration_err = std::max(duration_err, std::abs(tl.total_duration - (steps_total + tl.sweep_delay)));
        }
        f.close();
    }
    out.files.push_back(sweep_path);

    std::optional<double> first, last;
    for (const auto& e : timelines.front().entries)
        if (e.phi_sc && !first) first = e.phi_sc;
    for (const auto& e : timelines.back().entries)
        if (e.phi_sc && !last) last = e.phi_sc;
    log << "  total duration " << num(timelines.front().total_duration) << " s at zero delay\n";
    add_check(out, "zero validation errors", errors == 0, std::to_string(errors) + " errors");
    if (first && last) {
        const double span = *last - *first;
        add_check(out, "phase sweep spans 2 pi over one motional period",
                  std::abs(span - constants::two_pi) < 1e-12, "span - 2 pi = " + num(span - constants::two_pi));
    }
    add_check(out, "total duration equals step sum plus delay", duration_err <= 1e-12 * (steps_total + 1.0),
              num(duration_err));
    print_checks(out, log);
    return out;
}

} // namespace catspec::cli
