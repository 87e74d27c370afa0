// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "franson/clock_model.hpp"
#include "franson/coincidence.hpp"
#include "franson/fringe.hpp"
#include "franson/link_model.hpp"
#include "franson/numerics.hpp"
#include "franson/peak_fit.hpp"
#include "franson/photon_sim.hpp"
#include "franson/pipeline.hpp"
#include "franson/sweeps.hpp"
#include "oracles.hpp"

using namespace franson;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[fail: " << what << "] ";
        }
    }
};

bool within(double x, double target, double tol) { return std::abs(x - target) <= tol; }

// ---- 1, 2: synchronization sweep -------------------------------------------

link::SyncSweepParams reference_sweep_params() {
    link::SyncSweepParams p;
    p.brightness_cps = 1e8;
    p.sigma0_ps = 30.0;
    return p;
}

void sweep_endpoints(Outcome& o) {
    const auto grid = math::linspace(0.0, 200.0, 201);
    const auto pts = link::sweep_visibility_vs_sync(grid, reference_sweep_params());
    const double v0 = pts.front().visibility;
    const double v200 = pts.back().visibility;
    o.detail << "V(0)=" << v0 << " V(200)=" << v200 << ' ';
    o.check(within(v0, 0.988, 0.005), "V(0) outside 98.8 +- 0.5 pp");
    o.check(within(v200, 0.927, 0.005), "V(200) outside 92.7 +- 0.5 pp");
}

void window_ratio(Outcome& o) {
    const auto grid = math::linspace(0.0, 200.0, 401);
    const auto params = reference_sweep_params();
    const auto pts = link::sweep_visibility_vs_sync(grid, params);
    double lo = 1e300;
    double hi = 0.0;
    for (const auto& p : pts) {
        const double r = p.tau_opt_ps / link::compose_jitter(params.sigma0_ps, p.sigma_sync_ps);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    o.detail << "tau/sigma_m in [" << lo << ", " << hi << "] ";
    o.check(lo >= 1.9 && hi <= 2.1, "ratio outside [1.9, 2.1]");
}

// ---- 3: jitter composition end to end ---------------------------------------

void jitter_composition(Outcome& o) {
    const double excess = link::excess_jitter(54.9, 46.4);
    o.detail << "excess=" << excess << ' ';
    o.check(within(excess, 29.3, 0.1), "excess jitter outside 29.3 +- 0.1");

    for (bool rof : {false, true}) {
        auto cfg = ScenarioConfig::desk_defaults();
        cfg.signal_leg.dispersion_jitter_ps = 35.4;
        cfg.signal_detector.efficiency = 0.8;
        cfg.idler_detector.efficiency = 0.8;
        cfg.sync.sigma_sync_ps = rof ? 29.3 : 0.0;
        const auto run = simulate(cfg, 0.0, 21);
        const auto diffs = coinc::cross_correlate(run.signal, run.idler, 2000, run.offset_ps);
        const auto hist = coinc::build_histogram(diffs, 1.0, -2000, 2000);
        const auto fit = coinc::fit_gaussian(hist, -250, 250);
        const auto central = coinc::count_in_window(diffs, fit.mu_ps, 500.0);
        const double target = rof ? 54.9 : 46.4;
        o.detail << (rof ? "sigma_rof=" : "sigma_base=") << fit.sigma_ps << " (n=" << central << ") ";
        o.check(central >= 100000, "fewer than 1e5 central coincidences");
        o.check(within(fit.sigma_ps, target, 0.02 * target), "fitted width outside 2%");
    }
}

// ---- 4: Raman noise shape ---------------------------------------------------

void sprs_shape(Outcome& o) {
    link::SpRSParams low;
    low.beta_per_km_hz = link::kBeta1575;
    link::SpRSParams high;
    high.beta_per_km_hz = link::kBeta1555;
    double best_l = 0.0;
    double best = -1.0;
    bool dominates = true;
    for (double l : math::linspace(0.0, 100.0, 1001)) {
        const double r1575 = link::sprs_rate(l, link::kAlpha1575DbPerKm, link::kAlpha1310DbPerKm, low);
        const double r1555 = link::sprs_rate(l, link::kAlpha1555DbPerKm, link::kAlpha1310DbPerKm, high);
        if (r1575 > best) {
            best = r1575;
            best_l = l;
        }
        if (l > 0.0 && !(r1555 > r1575)) {
            dominates = false;
        }
    }
    o.detail << "argmax=" << best_l << " km ";
    o.check(best_l >= 15.0 && best_l <= 25.0, "maximum outside [15, 25] km");
    o.check(dominates, "1555 nm curve does not dominate 1575 nm");
}

// ---- 5: CHSH arithmetic -----------------------------------------------------

void chsh_arithmetic(Outcome& o) {
    const auto r = link::chsh_s(0.8835, 0.0362);
    const double n = link::violation_sigmas(r.s, r.sigma_s);
    o.detail << "S=" << r.s << " +- " << r.sigma_s << " nsigma=" << n << ' ';
    o.check(within(r.s, 2.499, 0.001), "S outside 2.499 +- 0.001");
    o.check(within(r.sigma_s, 0.1024, 0.0005), "sigma_S outside 0.1024 +- 0.0005");
    o.check(within(n, 4.9, 0.1), "violation outside 4.9 +- 0.1");
}

// ---- 6: Monte Carlo vs closed form ------------------------------------------

bool same_pair(const TruthTag& a, const TruthTag& b) {
    return a.origin == Origin::Pair && b.origin == Origin::Pair && a.pair_id == b.pair_id;
}

void mc_vs_analytic(Outcome& o) {
    auto cfg = ScenarioConfig::desk_defaults();
    cfg.duration_s = 10.0;
    cfg.signal_detector.dark_count_cps = 100.0;
    cfg.idler_detector.dark_count_cps = 100.0;
    cfg.signal_background_cps = 1e3;

    const double sigma_m = link::compose_jitter(
        {cfg.signal_detector.jitter_sigma_ps, cfg.idler_detector.jitter_sigma_ps,
         cfg.signal_leg.dispersion_jitter_ps, cfg.idler_leg.dispersion_jitter_ps,
         cfg.sync.sigma_sync_ps});
    const double tau = link::optimize_window(sigma_m, cfg.window);
    const double width = link::gaussian_window_width(tau);
    const double half = 0.5 * width;
    // integer-ps differences: the window holds this many distinct values
    const double width_eff = 2.0 * std::floor(half) + 1.0;
    const double span = cfg.correlation_span_ps;
    const double dt = cfg.franson.path_imbalance_ps;

    // one monitored output per interferometer halves each photon's efficiency
    const double eta_s = cfg.signal_leg.transmission() * cfg.signal_detector.efficiency * 0.5;
    const double eta_i = cfg.idler_leg.transmission() * cfg.idler_detector.efficiency * 0.5;
    link::NoisyLinkInputs in;
    in.brightness_cps = cfg.source.brightness_cps;
    in.eta_s = eta_s;
    in.eta_i = eta_i;
    in.sprs_signal_cps = *cfg.signal_background_cps;
    in.dcr_signal_cps = cfg.signal_detector.dark_count_cps;
    in.dcr_idler_cps = cfg.idler_detector.dark_count_cps;
    in.sigma_m_ps = sigma_m;

    const int seeds = 20;
    double eff_obs = 0.0;
    double acc_window_obs = 0.0;
    double acc_span_obs = 0.0;
    int eff_seed_outliers = 0;
    const double eff_expected_one =
        link::effective_cc(in.brightness_cps, eta_s, eta_i, tau, sigma_m) * cfg.duration_s;
    for (int s = 0; s < seeds; ++s) {
        // quadrature phase: both photons reach a monitored output with probability 1/4
        const auto run = simulate(cfg, 0.5 * oracle::kPi, math::derive_seed(777, s));
        const auto matches = coinc::cross_correlate_matches(
            run.signal, run.idler, static_cast<std::int64_t>(span), run.offset_ps);
        double eff = 0.0;
        for (const auto& m : matches) {
            const double d = static_cast<double>(m.diff);
            const bool pair = same_pair(run.signal.truth[m.index_a], run.idler.truth[m.index_b]);
            const bool in_peak = std::abs(d) <= half || std::abs(d - dt) <= half ||
                                 std::abs(d + dt) <= half;
            if (pair) {
                eff += in_peak;
            } else {
                acc_span_obs += 1.0;
                acc_window_obs += std::abs(d) <= half;
            }
        }
        eff_obs += eff;
        eff_seed_outliers += std::abs(eff - eff_expected_one) > 3 * std::sqrt(eff_expected_one);
    }

    const double eff_expected = eff_expected_one * seeds;
    in.tau_ps = width_eff;
    const double acc_window_expected = link::accidental_cc_noisy(in) * cfg.duration_s * seeds;
    in.tau_ps = 2.0 * span + 1.0;
    const double acc_span_expected = link::accidental_cc_noisy(in) * cfg.duration_s * seeds;
    o.detail << "tau=" << tau << " W=" << width << " eff " << eff_obs << "/" << eff_expected
             << " acc(W) " << acc_window_obs << "/" << acc_window_expected << " acc(span) "
             << acc_span_obs << "/" << acc_span_expected << ' ';
    o.check(std::abs(eff_obs - eff_expected) <= 3 * std::sqrt(eff_expected),
            "effective coincidences off by more than 3 sigma");
    o.check(eff_seed_outliers <= 1, "more than one seed outside 3 sigma");
    o.check(std::abs(acc_window_obs - acc_window_expected) <= 3 * std::sqrt(acc_window_expected),
            "windowed accidentals off by more than 3 sigma");
    o.check(std::abs(acc_span_obs - acc_span_expected) <= 3 * std::sqrt(acc_span_expected),
            "accidental rate over the full span off by more than 3 sigma");
}

// ---- 7: fringe pipeline -----------------------------------------------------

void fringe_pipeline(Outcome& o) {
    auto ideal = ScenarioConfig::desk_defaults();
    ideal.signal_detector.dark_count_cps = 0.0;
    ideal.idler_detector.dark_count_cps = 0.0;
    const auto phases = full_period_phases(20);
    const auto clean = fringe_scan(ideal, phases);
    o.detail << "V_ideal=" << clean.fit.visibility << "+-" << clean.fit.sigma_visibility << ' ';
    o.check(std::abs(clean.fit.visibility - 1.0) <= 3 * clean.fit.sigma_visibility + 1e-12,
            "noise-free scan not consistent with V = 1");

    const auto on = fringe_scan(ScenarioConfig::link_50km(true), phases);
    const auto off = fringe_scan(ScenarioConfig::link_50km(false), phases);
    o.detail << "V_rof=" << on.fit.visibility << "+-" << on.fit.sigma_visibility
             << " V_plain=" << off.fit.visibility << "+-" << off.fit.sigma_visibility << ' ';
    o.check(on.fit.visibility >= 0.85 && on.fit.visibility <= 0.92, "RoF-on V outside [0.85, 0.92]");
    o.check(off.fit.visibility >= 0.90 && off.fit.visibility <= 0.96, "RoF-off V outside [0.90, 0.96]");
}

// ---- 8: joint table ---------------------------------------------------------

void joint_table(Outcome& o) {
    oracle::Gen gen(8);
    sim::Rng rng(88);
    const std::vector<double> p{0.25, 0.25, 0.5};
    double worst = 1.0;
    for (int trial = 0; trial < 10; ++trial) {
        const double phi = gen.uniform(0.0, 2.0 * oracle::kPi);
        const double v0 = gen.uniform(0.0, 1.0);
        std::vector<std::uint64_t> sig(3, 0);
        std::vector<std::uint64_t> idl(3, 0);
        for (int k = 0; k < 1'000'000; ++k) {
            const auto [a, b] = sim::sample_franson_outcome(phi, v0, rng);
            ++sig[static_cast<int>(a)];
            ++idl[static_cast<int>(b)];
        }
        worst = std::min({worst, oracle::chi2_sf_2dof(oracle::pearson(sig, p)),
                          oracle::chi2_sf_2dof(oracle::pearson(idl, p))});
    }
    o.detail << "min p=" << worst << ' ';
    o.check(worst > 0.01, "marginal chi-square p <= 0.01");

    const sim::JointTable dark(oracle::kPi, 1.0);
    const double center = dark(sim::PathOutcome::Short, sim::PathOutcome::Short) +
                          dark(sim::PathOutcome::Long, sim::PathOutcome::Long);
    std::uint64_t drawn = 0;
    for (int k = 0; k < 1'000'000; ++k) {
        const auto [a, b] = sim::sample_franson_outcome(oracle::kPi, 1.0, rng);
        drawn += a == b && a != sim::PathOutcome::Unmonitored;
    }
    o.detail << "P(center)=" << center << " drawn=" << drawn << ' ';
    o.check(center == 0.0 && drawn == 0, "destructive phase still produces central events");
}

// ---- 9: correlator oracle ---------------------------------------------------

void correlator_oracle(Outcome& o) {
    oracle::Gen gen(9);
    int mismatched = 0;
    std::size_t total_pairs = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto na = static_cast<std::size_t>(gen.integer(0, 10'000));
        const auto nb = static_cast<std::size_t>(gen.integer(0, 10'000));
        const std::int64_t range = gen.integer(1, 100'000'000);
        const auto a = gen.sorted_times(na, range);
        const auto b = gen.sorted_times(nb, range);
        const std::int64_t span = gen.integer(0, 100'000);
        const std::int64_t offset = gen.integer(-50'000, 50'000);
        TimestampStream sa{.channel_id = 0, .duration_ps = range, .timestamps = a, .truth = {}};
        TimestampStream sb{.channel_id = 1, .duration_ps = range, .timestamps = b, .truth = {}};
        const auto fast = coinc::cross_correlate_matches(sa, sb, span, offset);
        const auto slow = oracle::brute_force_correlate(a, b, span, offset);
        bool same = fast.size() == slow.size();
        for (std::size_t k = 0; same && k < fast.size(); ++k) {
            same = fast[k].diff == slow[k].diff && fast[k].index_a == slow[k].ia &&
                   fast[k].index_b == slow[k].ib;
        }
        mismatched += !same;
        total_pairs += slow.size();
    }
    o.detail << "pairs=" << total_pairs << " mismatched trials=" << mismatched << ' ';
    o.check(mismatched == 0, "correlator disagrees with brute force");
}

// ---- 10: clock model --------------------------------------------------------

void clock_model(Outcome& o) {
    const auto cfg = ScenarioConfig::link_50km(true);
    const auto traces = clock_traces(cfg, 50.0);
    const auto stats = clock::differential_stats(traces.quantum, traces.classical);
    o.detail << "std=" << stats.std_dev_ps << " p2p=" << stats.peak_to_peak_ps
             << " hours=" << stats.duration_s / 3600.0 << ' ';
    o.check(stats.duration_s >= 15 * 3600.0 - cfg.environment.sample_interval_s, "trace shorter than 15 h");
    o.check(within(stats.std_dev_ps, 8.2, 0.2 * 8.2), "std outside 8.2 +- 20%");
    o.check(stats.peak_to_peak_ps < 60.0, "peak-to-peak >= 60 ps");

    oracle::Gen gen(10);
    const auto base = clock::differential(traces.quantum, traces.classical);
    bool invariant = true;
    for (int trial = 0; trial < 10; ++trial) {
        auto q = traces.quantum;
        auto c = traces.classical;
        const double amp = gen.uniform(0.0, 1e9);
        for (std::size_t i = 0; i < q.size(); ++i) {
            const auto common = static_cast<std::int64_t>(gen.uniform(-amp, amp));
            q.delay_fs[i] += common;
            c.delay_fs[i] += common;
        }
        const auto s = clock::differential_stats(q, c);
        invariant = invariant && clock::differential(q, c).delay_fs == base.delay_fs &&
                    s.std_dev_ps == stats.std_dev_ps && s.peak_to_peak_ps == stats.peak_to_peak_ps;
    }
    o.check(invariant, "common-mode injection changed the differential");
}

struct Criterion {
    const char* id;
    const char* name;
    double budget_s;  // 0: no runtime limit
    std::function<void(Outcome&)> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"AC1", "sync sweep endpoints", 1.0, sweep_endpoints},
        {"AC2", "window to peak-width ratio", 1.0, window_ratio},
        {"AC3", "jitter composition end to end", 60.0, jitter_composition},
        {"AC4", "Raman noise shape", 0.0, sprs_shape},
        {"AC5", "CHSH arithmetic", 0.0, chsh_arithmetic},
        {"AC6", "Monte Carlo vs closed form", 120.0, mc_vs_analytic},
        {"AC7", "fringe pipeline", 300.0, fringe_pipeline},
        {"AC8", "joint table", 0.0, joint_table},
        {"AC9", "correlator oracle", 0.0, correlator_oracle},
        {"AC10", "clock model", 0.0, clock_model},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "[exception: " << e.what() << "] ";
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0.0 && elapsed > c.budget_s) {
            o.pass = false;
            o.detail << "[fail: runtime over " << c.budget_s << " s] ";
        }
        failed += !o.pass;
        std::printf("%s %-5s %-32s %8.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, elapsed,
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
