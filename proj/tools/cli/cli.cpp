#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "config_io.hpp"
#include "franson/clock_model.hpp"
#include "franson/coincidence.hpp"
#include "franson/csv.hpp"
#include "franson/errors.hpp"
#include "franson/fringe.hpp"
#include "franson/numerics.hpp"
#include "franson/peak_fit.hpp"
#include "franson/pipeline.hpp"
#include "franson/stream.hpp"
#include "franson/sweeps.hpp"

namespace franson::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_dir = ".";
};

/// Writes through a temporary sibling file and renames it into place.
void write_atomic(const fs::path& path, const std::function<void(std::ostream&)>& body,
                  bool binary = false) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
        if (!f) {
            throw FormatError("cannot write " + tmp.string());
        }
        body(f);
        f.flush();
        if (!f) {
            throw FormatError("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

class Command {
public:
    Command(CLI::App& app, const std::string& name, const std::string& description)
        : sub_(app.add_subcommand(name, description)) {
        sub_->add_option("--config", common_.config_path, "INI scenario file");
        sub_->add_option("--set", common_.overrides,
                         "Override a config value, e.g. --set signal_leg.length_km=25");
        sub_->add_option_function<std::uint64_t>(
            "--seed",
            [this](std::uint64_t s) {
                common_.seed = s;
                common_.seed_given = true;
            },
            "RNG seed (overrides scenario.seed)");
        sub_->add_option("--out", common_.out_dir, "Output directory")->capture_default_str();
    }

    CLI::App* app() const { return sub_; }
    bool selected() const { return sub_->parsed(); }

    ScenarioConfig config() const {
        std::vector<std::string> overrides = common_.overrides;
        if (common_.seed_given) {
            overrides.push_back("scenario.seed=" + std::to_string(common_.seed));
        }
        return load_config(fs::path(common_.config_path), overrides);
    }

    fs::path out_dir(const ScenarioConfig& config) const {
        fs::path dir(common_.out_dir);
        fs::create_directories(dir);
        write_atomic(dir / "config.ini", [&](std::ostream& o) { write_config(o, config); });
        return dir;
    }

private:
    CLI::App* sub_;
    Common common_;
};

std::vector<double> range(double first, double last, double step) {
    if (!(step > 0.0) || !(last >= first)) {
        throw ConfigError("empty range: need step > 0 and max >= min");
    }
    const auto n = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = first + step * static_cast<double>(i);
    }
    return v;
}

void report_line(std::ostream& out, const std::string& key, double value) {
    out << key << ": " << csv::format(value) << '\n';
}

void report_peak(std::ostream& out, const coinc::PeakFit& fit) {
    report_line(out, "mu_ps", fit.mu_ps);
    report_line(out, "sigma_ps", fit.sigma_ps);
    report_line(out, "amplitude", fit.amplitude);
    report_line(out, "residual_norm", fit.residual_norm);
    out << "iterations: " << fit.iterations << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Franson interference link simulator and timestamp analyzer", "franson-sim"};
    app.require_subcommand(1);

    Command sync_cmd(app, "sweep-sync", "Maximum visibility versus synchronization error");
    double sigma0 = 30.0;
    double brightness = 1e8;
    double sync_min = 0.0;
    double sync_max = 200.0;
    double sync_step = 5.0;
    sync_cmd.app()->add_option("--sigma0", sigma0, "Detector jitter budget sigma_0 (ps)")->capture_default_str();
    sync_cmd.app()->add_option("--b", brightness, "Pair rate B (cps)")->capture_default_str();
    sync_cmd.app()->add_option("--sync-min", sync_min, "First sigma_sync (ps)")->capture_default_str();
    sync_cmd.app()->add_option("--sync-max", sync_max, "Last sigma_sync (ps)")->capture_default_str();
    sync_cmd.app()->add_option("--sync-step", sync_step, "sigma_sync step (ps)")->capture_default_str();

    Command sprs_cmd(app, "sprs", "Raman noise count rate versus fiber length at 1575 and 1555 nm");
    double sprs_max = 100.0;
    double sprs_step = 0.5;
    sprs_cmd.app()->add_option("--l-max", sprs_max, "Longest fiber (km)")->capture_default_str();
    sprs_cmd.app()->add_option("--l-step", sprs_step, "Length step (km)")->capture_default_str();

    Command length_cmd(app, "sweep-length", "Visibility over signal/idler fiber-length allocations");
    double len_max = 100.0;
    double len_step = 10.0;
    double len_sync = 100.0;
    length_cmd.app()->add_option("--l-max", len_max, "Longest leg (km)")->capture_default_str();
    length_cmd.app()->add_option("--l-step", len_step, "Length step (km)")->capture_default_str();
    length_cmd.app()->add_option("--sigma-sync", len_sync, "Synchronization error (ps)")->capture_default_str();

    Command sim_cmd(app, "simulate", "Simulate both detector streams for one interferometer phase");
    double sim_phase = 0.0;
    bool sim_text = false;
    sim_cmd.app()->add_option("--phase", sim_phase, "Sum of interferometer phases (rad)")->capture_default_str();
    sim_cmd.app()->add_flag("--text", sim_text, "Write plain-text streams instead of binary");

    Command corr_cmd(app, "correlate", "Histogram and fit coincidences between two stream files");
    std::string stream_a;
    std::string stream_b;
    double corr_span = 2000.0;
    double corr_bin = 1.0;
    std::int64_t corr_offset = 0;
    double corr_window = 100.0;
    double corr_dt = 500.0;
    corr_cmd.app()->add_option("signal", stream_a, "Signal stream file")->required();
    corr_cmd.app()->add_option("idler", stream_b, "Idler stream file")->required();
    corr_cmd.app()->add_option("--span", corr_span, "Largest |t_a - t_b| kept (ps)")->capture_default_str();
    corr_cmd.app()->add_option("--bin", corr_bin, "Histogram bin width (ps)")->capture_default_str();
    corr_cmd.app()->add_option("--offset", corr_offset, "Expected t_a - t_b subtracted before binning (ps)")->capture_default_str();
    corr_cmd.app()->add_option("--window", corr_window, "Full width of the coincidence window (ps)")->capture_default_str();
    corr_cmd.app()->add_option("--dt", corr_dt, "Interferometer path imbalance (ps)")->capture_default_str();

    Command fringe_cmd(app, "fringe", "Phase scan of the central-peak coincidence rate with V and S");
    std::size_t fringe_points = 20;
    fringe_cmd.app()->add_option("--points", fringe_points, "Phase points over [0, 2 pi]")->capture_default_str();

    Command delay_cmd(app, "delay-trace", "Classical and quantum delay traces and their difference");
    double delay_length = 50.0;
    delay_cmd.app()->add_option("--length-km", delay_length, "Shared fiber length (km)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (sync_cmd.selected()) {
            const auto config = sync_cmd.config();
            link::SyncSweepParams params;
            params.brightness_cps = brightness;
            params.sigma0_ps = sigma0;
            params.window = config.window;
            const auto grid = range(sync_min, sync_max, sync_step);
            const auto points = link::sweep_visibility_vs_sync(grid, params);
            const auto dir = sync_cmd.out_dir(config);
            write_atomic(dir / "sweep_sync.csv", [&](std::ostream& o) { link::write_csv(o, points); });
            report_line(out, "V_first", points.front().visibility);
            report_line(out, "V_last", points.back().visibility);
            double lo = 1e300;
            double hi = 0.0;
            for (const auto& p : points) {
                const double r = p.tau_opt_ps / link::compose_jitter(sigma0, p.sigma_sync_ps);
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
            report_line(out, "tau_ratio_min", lo);
            report_line(out, "tau_ratio_max", hi);
        } else if (sprs_cmd.selected()) {
            const auto config = sprs_cmd.config();
            const auto grid = range(0.0, sprs_max, sprs_step);
            const auto dir = sprs_cmd.out_dir(config);
            struct Curve {
                const char* file;
                const char* label;
                double beta;
                double alpha_q;
            };
            const Curve curves[] = {
                {"sprs_1575.csv", "1575", link::kBeta1575, link::kAlpha1575DbPerKm},
                {"sprs_1555.csv", "1555", link::kBeta1555, link::kAlpha1555DbPerKm},
            };
            for (const auto& c : curves) {
                link::SpRSParams sprs = config.sprs;
                sprs.beta_per_km_hz = c.beta;
                const auto points = link::sweep_sprs(grid, c.alpha_q, config.signal_leg.alpha_c_db_per_km, sprs);
                write_atomic(dir / c.file, [&](std::ostream& o) { link::write_csv(o, points); });
                const auto peak = std::max_element(points.begin(), points.end(),
                    [](const auto& a, const auto& b) { return a.rate_cps < b.rate_cps; });
                report_line(out, std::string("argmax_km_") + c.label, peak->length_km);
                report_line(out, std::string("max_cps_") + c.label, peak->rate_cps);
            }
        } else if (length_cmd.selected()) {
            const auto config = length_cmd.config();
            auto params = link::LengthSweepParams::defaults();
            params.sigma_sync_ps = len_sync;
            params.window = config.window;
            const auto grid = range(0.0, len_max, len_step);
            const auto points = link::sweep_visibility_vs_length(grid, grid, params);
            const auto dir = length_cmd.out_dir(config);
            write_atomic(dir / "sweep_length.csv", [&](std::ostream& o) { link::write_csv(o, points); });
            report_line(out, "V_zero_length", link::visibility_for_lengths(0.0, 0.0, params));
        } else if (sim_cmd.selected()) {
            const auto config = sim_cmd.config();
            const auto run = simulate(config, sim_phase, config.seed);
            const auto dir = sim_cmd.out_dir(config);
            const auto save = [&](const std::string& name, const TimestampStream& s) {
                write_atomic(dir / name, [&](std::ostream& o) {
                    if (sim_text) {
                        write_stream_text(o, s);
                    } else {
                        write_stream_binary(o, s);
                    }
                }, !sim_text);
                write_atomic(dir / (name + ".tags"), [&](std::ostream& o) { write_truth_sidecar(o, s.truth); });
            };
            const std::string ext = sim_text ? ".txt" : ".fts";
            save("signal" + ext, run.signal);
            save("idler" + ext, run.idler);
            out << "offset_ps: " << run.offset_ps << '\n';
            report_line(out, "duration_s", config.duration_s);
            report_line(out, "signal_singles_cps", static_cast<double>(run.signal.size()) / config.duration_s);
            report_line(out, "idler_singles_cps", static_cast<double>(run.idler.size()) / config.duration_s);
            report_line(out, "signal_background_cps", config.signal_background_rate());
        } else if (corr_cmd.selected()) {
            const auto config = corr_cmd.config();
            const auto a = load_stream(stream_a);
            const auto b = load_stream(stream_b);
            if (!(corr_span > 0.0) || !(corr_bin > 0.0) || !(corr_window > 0.0)) {
                throw ConfigError("span, bin and window must be > 0");
            }
            const auto diffs = coinc::cross_correlate(a, b, static_cast<std::int64_t>(corr_span), corr_offset);
            const double half = std::floor(corr_span / corr_bin) * corr_bin;
            auto hist = coinc::build_histogram(diffs, corr_bin, -half, half);
            hist.duration_s = std::max(a.duration_s(), b.duration_s());
            const auto dir = corr_cmd.out_dir(config);
            write_atomic(dir / "histogram.csv", [&](std::ostream& o) { coinc::write_csv(o, hist); });

            std::string report;
            {
                std::ostringstream r;
                out << "coincidences: " << diffs.size() << '\n';
                int code = kOk;
                coinc::PeakFit fit;
                try {
                    fit = coinc::fit_gaussian(hist, -0.5 * corr_dt, 0.5 * corr_dt);
                } catch (const ConvergenceError& e) {
                    fit.mu_ps = e.fallback_mu();
                    fit.sigma_ps = e.fallback_sigma();
                    fit.amplitude = e.fallback_amplitude();
                    r << "converged: false\n";
                    code = kNonConvergence;
                }
                report_peak(r, fit);
                r << "window_count: " << coinc::count_in_window(diffs, fit.mu_ps, corr_window) << '\n';
                if (half >= 1.5 * corr_dt) {
                    const auto peaks = coinc::three_peak_decompose(hist, corr_dt, fit.mu_ps);
                    r << "left_total: " << peaks.left.total << '\n';
                    r << "center_total: " << peaks.center.total << '\n';
                    r << "right_total: " << peaks.right.total << '\n';
                }
                report = r.str();
                write_atomic(dir / "fit.txt", [&](std::ostream& o) { o << report; });
                out << report;
                if (code != kOk) {
                    err << "error: Gaussian fit did not converge; moment estimates reported\n";
                    return code;
                }
            }
        } else if (fringe_cmd.selected()) {
            const auto config = fringe_cmd.config();
            const auto scan = fringe_scan(config, full_period_phases(fringe_points));
            const auto chsh = link::chsh_s(scan.fit.visibility, scan.fit.sigma_visibility);
            const double sigmas = chsh.sigma_s > 0.0 ? link::violation_sigmas(chsh.s, chsh.sigma_s) : 0.0;
            const auto dir = fringe_cmd.out_dir(config);
            write_atomic(dir / "fringe.csv", [&](std::ostream& o) { write_csv(o, scan); });
            write_atomic(dir / "fringe_fit.csv", [&](std::ostream& o) { coinc::write_fit_csv(o, scan.fit); });
            const auto report = [&](std::ostream& o) {
                coinc::write_fit_report(o, scan.fit);
                report_line(o, "center_ps", scan.center_ps);
                report_line(o, "S", chsh.s);
                report_line(o, "sigma_S", chsh.sigma_s);
                report_line(o, "violation_sigmas", sigmas);
            };
            write_atomic(dir / "fringe_fit.txt", report);
            report(out);
        } else if (delay_cmd.selected()) {
            const auto config = delay_cmd.config();
            const auto traces = clock_traces(config, delay_length);
            const auto residual = clock::differential(traces.quantum, traces.classical);
            const auto stats = clock::differential_stats(traces.quantum, traces.classical);
            const auto dir = delay_cmd.out_dir(config);
            write_atomic(dir / "delay_classical.csv", [&](std::ostream& o) { clock::write_csv(o, traces.classical); });
            write_atomic(dir / "delay_quantum.csv", [&](std::ostream& o) { clock::write_csv(o, traces.quantum); });
            write_atomic(dir / "delay_differential.csv", [&](std::ostream& o) { clock::write_csv(o, residual); });
            write_atomic(dir / "differential_stats.txt", [&](std::ostream& o) { clock::write_stats(o, stats); });
            write_atomic(dir / "differential_stats.csv", [&](std::ostream& o) { clock::write_stats_csv(o, stats); });
            report_line(out, "mismatch_ps_per_km_k", traces.mismatch_ps_per_km_k);
            clock::write_stats(out, stats);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const ConvergenceError& e) {
        err << "no convergence: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const FormatError& e) {
        err << "format error: " << e.what() << '\n';
        return kIo;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIo;
    }
    return kOk;
}

}  // namespace franson::cli
