#include "franson/pipeline.hpp"

#include <cmath>

#include "franson/errors.hpp"
#include "franson/numerics.hpp"

namespace franson {

namespace {

enum SeedStream : std::uint64_t {
    kPairs = 1,
    kPaths,
    kSignalChannel,
    kIdlerChannel,
    kSignalDetector,
    kIdlerDetector,
    kBackground,
    kRetime,
    kEnvironment,
    kQuantumTrace,
    kClassicalTrace,
};

}  // namespace

void ScenarioConfig::validate() const {
    source.validate();
    signal_leg.validate();
    idler_leg.validate();
    signal_detector.validate();
    idler_detector.validate();
    sync.validate();
    sprs.validate();
    window.validate();
    environment.validate();
    if (!(franson.intrinsic_visibility >= 0.0 && franson.intrinsic_visibility <= 1.0)) {
        throw ConfigError("intrinsic visibility must lie in [0, 1]");
    }
    if (!(franson.path_imbalance_ps > 0.0)) {
        throw ConfigError("path imbalance must be > 0");
    }
    if (!(duration_s > 0.0)) {
        throw ConfigError("duration must be > 0");
    }
    if (signal_background_cps && !(*signal_background_cps >= 0.0)) {
        throw ConfigError("signal background must be >= 0");
    }
    if (!(coincidence_window_ps > 0.0) || !(correlation_span_ps > 0.0) || !(bin_width_ps > 0.0)) {
        throw ConfigError("window, span and bin width must be > 0");
    }
    if (correlation_span_ps < 1.5 * franson.path_imbalance_ps) {
        throw ConfigError("correlation span must cover the side peaks (>= 1.5 dT)");
    }
}

std::int64_t ScenarioConfig::duration_ps() const {
    return static_cast<std::int64_t>(std::llround(duration_s * 1e12));
}

double ScenarioConfig::signal_background_rate() const {
    if (signal_background_cps) {
        return *signal_background_cps;
    }
    if (!rof_enabled) {
        return 0.0;
    }
    return link::sprs_rate(signal_leg.length_km, signal_leg.alpha_q_db_per_km,
                           signal_leg.alpha_c_db_per_km, sprs);
}

double ScenarioConfig::nominal_offset_ps() const {
    double offset = signal_leg.propagation_delay_ps() - idler_leg.propagation_delay_ps();
    if (rof_enabled) {
        offset -= signal_leg.propagation_delay_ps();
    }
    return offset;
}

ScenarioConfig ScenarioConfig::desk_defaults() {
    ScenarioConfig c;
    c.source.brightness_cps = 1e5;
    c.signal_detector.efficiency = 0.5;
    c.idler_detector.efficiency = 0.5;
    c.sprs.beta_per_km_hz = link::kBeta1575;
    c.sprs.normalization = link::calibrated_sprs_normalization(
        1e5, 50.0, link::kAlpha1575DbPerKm, link::kAlpha1310DbPerKm, c.sprs);
    return c;
}

ScenarioConfig ScenarioConfig::link_50km(bool rof_enabled) {
    ScenarioConfig c = desk_defaults();
    c.source.brightness_cps = 1e6;
    c.franson.intrinsic_visibility = 0.93;
    c.signal_leg.length_km = 50.0;
    c.signal_leg.alpha_q_db_per_km = link::kAlpha1575DbPerKm;
    c.signal_leg.extra_loss_db = 18.0;
    c.signal_leg.dispersion_jitter_ps = 35.4;
    c.signal_detector.efficiency = 0.8;
    c.idler_detector.efficiency = 0.8;
    c.rof_enabled = rof_enabled;
    c.sync.sigma_sync_ps = 0.0;
    c.sync.rof_excess_jitter_ps = 29.3;
    c.coincidence_window_ps = 100.0;
    return c;
}

ClockTraces clock_traces(const ScenarioConfig& config, double length_km) {
    ClockTraces out;
    out.temperature =
        clock::synth_environment(config.environment, math::derive_seed(config.seed, kEnvironment));
    if (config.clock.mismatch_ps_per_km_k) {
        out.mismatch_ps_per_km_k = *config.clock.mismatch_ps_per_km_k;
    } else if (length_km > 0.0) {
        out.mismatch_ps_per_km_k = clock::calibrate_thermal_mismatch(
            out.temperature, length_km, config.clock.target_std_ps,
            config.clock.measurement_jitter_ps);
    }
    out.classical = clock::delay_trace(out.temperature, length_km, config.clock.coeff_ps_per_km_k,
                                       config.clock.classical_wavelength_nm,
                                       config.clock.measurement_jitter_ps,
                                       math::derive_seed(config.seed, kClassicalTrace));
    out.quantum = clock::delay_trace(
        out.temperature, length_km, config.clock.coeff_ps_per_km_k + out.mismatch_ps_per_km_k,
        config.source.lambda_s_nm, config.clock.measurement_jitter_ps,
        math::derive_seed(config.seed, kQuantumTrace));
    return out;
}

clock::DelayTrace residual_trace(const ScenarioConfig& config) {
    const auto traces = clock_traces(config, config.signal_leg.length_km);
    return clock::differential(traces.quantum, traces.classical);
}

SimulatedRun simulate(const ScenarioConfig& config, double phase_rad, std::uint64_t seed,
                      double epoch_offset_s, const clock::DelayTrace* residual) {
    config.validate();
    const std::int64_t duration = config.duration_ps();

    const auto births =
        sim::generate_pairs(config.source.brightness_cps, duration, math::derive_seed(seed, kPairs));
    sim::FransonParams franson = config.franson;
    franson.phase_rad = phase_rad;
    auto photons = sim::route_through_interferometers(births, franson, math::derive_seed(seed, kPaths));

    auto signal = sim::apply_channel(std::move(photons.signal), config.signal_leg,
                                     math::derive_seed(seed, kSignalChannel));
    auto idler = sim::apply_channel(std::move(photons.idler), config.idler_leg,
                                    math::derive_seed(seed, kIdlerChannel));

    SimulatedRun run;
    run.signal = sim::apply_detector(std::move(signal), config.signal_detector, duration,
                                     math::derive_seed(seed, kSignalDetector), 1);
    run.idler = sim::apply_detector(std::move(idler), config.idler_detector, duration,
                                    math::derive_seed(seed, kIdlerDetector), 0);

    const double background = config.signal_background_rate();
    if (background > 0.0) {
        run.signal = sim::inject_sprs(run.signal, background, math::derive_seed(seed, kBackground));
    }

    const double sync_jitter = config.rof_enabled
                                   ? link::compose_jitter(config.sync.sigma_sync_ps,
                                                          config.sync.rof_excess_jitter_ps)
                                   : config.sync.sigma_sync_ps;
    if (config.rof_enabled) {
        clock::DelayTrace owned;
        if (residual == nullptr) {
            owned = residual_trace(config);
            residual = &owned;
        }
        run.signal = clock::retime_remote(run.signal, *residual, sync_jitter,
                                          math::derive_seed(seed, kRetime), epoch_offset_s,
                                          config.signal_leg.propagation_delay_ps());
    } else if (sync_jitter > 0.0) {
        clock::DelayTrace flat;
        flat.t_s = {0.0, config.duration_s};
        flat.delay_fs = {0, 0};
        run.signal = clock::retime_remote(run.signal, flat, sync_jitter,
                                          math::derive_seed(seed, kRetime));
    }
    run.offset_ps = static_cast<std::int64_t>(std::llround(config.nominal_offset_ps()));
    return run;
}

}  // namespace franson
