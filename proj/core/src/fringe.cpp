#include "franson/fringe.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "franson/coincidence.hpp"
#include "franson/csv.hpp"
#include "franson/errors.hpp"
#include "franson/numerics.hpp"

namespace franson {

namespace {

struct PointMatches {
    std::vector<coinc::Match> matches;
    std::vector<TruthTag> signal_truth;
    std::vector<TruthTag> idler_truth;
    std::uint64_t singles_signal = 0;
    std::uint64_t singles_idler = 0;
};

bool same_pair(const TruthTag& a, const TruthTag& b) {
    return a.origin == Origin::Pair && b.origin == Origin::Pair && a.pair_id == b.pair_id;
}

}  // namespace

std::vector<double> full_period_phases(std::size_t count) {
    if (count < 2) {
        throw DomainError("need at least two phase points");
    }
    return math::linspace(0.0, 2.0 * math::kPi, count);
}

FringeScan fringe_scan(const ScenarioConfig& config, const std::vector<double>& phases_rad) {
    config.validate();
    if (phases_rad.size() < 5) {
        throw DomainError("fringe scan needs at least 5 phase points");
    }
    const auto [lo, hi] = std::minmax_element(phases_rad.begin(), phases_rad.end());
    if (*hi - *lo < 2.0 * math::kPi - 1e-9) {
        throw DomainError("fringe scan phases must span a full period");
    }

    clock::DelayTrace residual;
    const clock::DelayTrace* residual_ptr = nullptr;
    if (config.rof_enabled) {
        residual = residual_trace(config);
        residual_ptr = &residual;
    }

    const double span = config.correlation_span_ps;
    const double dt = config.franson.path_imbalance_ps;
    std::vector<PointMatches> raw;
    raw.reserve(phases_rad.size());
    std::vector<std::int64_t> all_diffs;
    for (std::size_t k = 0; k < phases_rad.size(); ++k) {
        const auto run = simulate(config, phases_rad[k], math::derive_seed(config.seed, k),
                                  static_cast<double>(k) * config.duration_s, residual_ptr);
        PointMatches pm;
        pm.matches = coinc::cross_correlate_matches(run.signal, run.idler,
                                                       static_cast<std::int64_t>(span), run.offset_ps);
        pm.signal_truth = run.signal.truth;
        pm.idler_truth = run.idler.truth;
        pm.singles_signal = run.signal.timestamps.size();
        pm.singles_idler = run.idler.timestamps.size();
        for (const auto& m : pm.matches) {
            all_diffs.push_back(m.diff);
        }
        raw.push_back(std::move(pm));
    }

    FringeScan scan;
    const double half_span = std::floor(span / config.bin_width_ps) * config.bin_width_ps;
    const auto hist = coinc::build_histogram(all_diffs, config.bin_width_ps, -half_span, half_span);
    try {
        const auto peak = coinc::fit_gaussian(hist, -0.5 * dt, 0.5 * dt);
        if (std::abs(peak.mu_ps) < 0.5 * dt) {
            scan.center_ps = peak.mu_ps;
            scan.center_fitted = true;
        }
    } catch (const std::exception&) {
        // too few events to locate the peak; stay at the nominal offset
    }

    const double half_window = 0.5 * config.coincidence_window_ps;
    const auto in_window = [half_window](double d, double c) {
        return std::abs(d - c) <= half_window;
    };
    std::vector<coinc::FringePoint> points;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const auto& pm = raw[k];
        FringeSample s;
        s.phase_rad = phases_rad[k];
        s.duration_s = config.duration_s;
        s.singles_signal = pm.singles_signal;
        s.singles_idler = pm.singles_idler;
        const bool have_truth = pm.signal_truth.size() == pm.singles_signal &&
                                pm.idler_truth.size() == pm.singles_idler;
        for (const auto& m : pm.matches) {
            const double d = static_cast<double>(m.diff);
            if (in_window(d, scan.center_ps)) {
                ++s.central;
                if (have_truth && same_pair(pm.signal_truth[m.index_a], pm.idler_truth[m.index_b])) {
                    ++s.central_true;
                }
            } else if (in_window(d, scan.center_ps - dt)) {
                ++s.side_early;
            } else if (in_window(d, scan.center_ps + dt)) {
                ++s.side_late;
            }
        }
        points.push_back({s.phase_rad, s.central, s.duration_s});
        scan.samples.push_back(s);
    }
    scan.fit = coinc::fit_fringe(points);
    return scan;
}

void write_csv(std::ostream& out, const FringeScan& scan) {
    csv::Writer w(out);
    w.header({"phase_rad", "count", "duration_s"});
    for (const auto& s : scan.samples) {
        w.row(s.phase_rad, s.central, s.duration_s);
    }
}

}  // namespace franson
