#pragma once

// Environmental delay of co-propagating classical clock and quantum photons
// over a shared fiber, their common-mode cancellation, and re-timing of the
// remote detector stream against the recovered clock.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "franson/stream.hpp"

namespace franson::clock {

struct EnvironmentProfile {
    double duration_s = 15.0 * 3600.0;
    double sample_interval_s = 10.0;
    double amplitude_k = 0.5;
    double period_s = 24.0 * 3600.0;
    double phase_rad = 0.0;
    /// Standard deviation of each random-walk increment.
    double walk_step_k = 0.002;

    void validate() const;
    std::size_t sample_count() const;
};

/// Temperature deviation from the reference, sampled uniformly from t = 0.
struct TemperatureTrace {
    std::vector<double> t_s;
    std::vector<double> kelvin;
};

/// Sinusoid plus an integrated Gaussian random walk; deterministic per seed.
TemperatureTrace synth_environment(const EnvironmentProfile& profile, std::uint64_t seed);

/// Propagation-delay fluctuation for one wavelength. Delays are held as
/// integer femtoseconds so differences of traces are exact.
struct DelayTrace {
    std::vector<double> t_s;
    std::vector<std::int64_t> delay_fs;
    double wavelength_nm = 0.0;

    std::size_t size() const { return t_s.size(); }
    double delay_ps(std::size_t i) const { return static_cast<double>(delay_fs[i]) * 1e-3; }
    /// Linear interpolation; throws if `t` lies outside the sampled span.
    double delay_ps_at(double t) const;
    void validate() const;
};

/// delay(t) = coeff * L * T(t) + N(0, measurement_jitter).
DelayTrace delay_trace(const TemperatureTrace& temperature, double length_km,
                       double coeff_ps_per_km_k, double wavelength_nm,
                       double measurement_jitter_ps, std::uint64_t seed);

/// Pointwise q - c on shared sample times.
DelayTrace differential(const DelayTrace& quantum, const DelayTrace& classical);

struct DifferentialStats {
    double std_dev_ps = 0.0;
    double peak_to_peak_ps = 0.0;
    double duration_s = 0.0;
};

DifferentialStats differential_stats(const DelayTrace& quantum, const DelayTrace& classical);

/// Thermal-coefficient mismatch K_q - K_c that gives a differential standard
/// deviation of `target_std_ps` on this temperature trace, once both traces'
/// independent measurement jitter is included.
double calibrate_thermal_mismatch(const TemperatureTrace& temperature, double length_km,
                                  double target_std_ps, double measurement_jitter_ps);

/// Shifts each timestamp by the residual interpolated at its epoch
/// (epoch_offset_s + t), minus `clock_delay_ps`, plus N(0, rof_jitter).
/// Results are clamped to [0, duration] and re-sorted with their truth tags.
TimestampStream retime_remote(const TimestampStream& stream, const DelayTrace& residual,
                              double rof_jitter_ps, std::uint64_t seed,
                              double epoch_offset_s = 0.0, double clock_delay_ps = 0.0);

void write_csv(std::ostream& out, const DelayTrace& trace);
void write_stats(std::ostream& out, const DifferentialStats& stats);
void write_stats_csv(std::ostream& out, const DifferentialStats& stats);

}  // namespace franson::clock
