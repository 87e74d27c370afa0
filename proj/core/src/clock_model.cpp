#include "franson/clock_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "franson/csv.hpp"
#include "franson/errors.hpp"
#include "franson/numerics.hpp"

namespace franson::clock {

void EnvironmentProfile::validate() const {
    if (!(sample_interval_s > 0.0)) {
        throw DomainError("environment sample interval must be > 0");
    }
    if (!(duration_s >= 0.0)) {
        throw DomainError("environment duration must be >= 0");
    }
    if (!(walk_step_k >= 0.0) || !(period_s > 0.0)) {
        throw DomainError("environment walk step must be >= 0 and period > 0");
    }
}

std::size_t EnvironmentProfile::sample_count() const {
    return static_cast<std::size_t>(std::llround(std::floor(duration_s / sample_interval_s + 1e-9)));
}

TemperatureTrace synth_environment(const EnvironmentProfile& profile, std::uint64_t seed) {
    profile.validate();
    const std::size_t n = profile.sample_count();
    TemperatureTrace trace;
    trace.t_s.resize(n);
    trace.kelvin.resize(n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double walk = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * profile.sample_interval_s;
        if (i > 0 && profile.walk_step_k > 0.0) {
            walk += profile.walk_step_k * gauss(rng);
        }
        trace.t_s[i] = t;
        trace.kelvin[i] =
            profile.amplitude_k * std::sin(2.0 * math::kPi * t / profile.period_s + profile.phase_rad) +
            walk;
    }
    return trace;
}

void DelayTrace::validate() const {
    if (t_s.size() != delay_fs.size()) {
        throw FormatError("delay trace arrays differ in length");
    }
    for (std::size_t i = 1; i < t_s.size(); ++i) {
        if (!(t_s[i] > t_s[i - 1])) {
            throw FormatError("delay trace sample times must be strictly increasing");
        }
    }
}

double DelayTrace::delay_ps_at(double t) const {
    if (t_s.empty() || t < t_s.front() || t > t_s.back()) {
        throw DomainError("residual trace does not cover epoch " + std::to_string(t) + " s");
    }
    if (t_s.size() == 1) {
        return delay_ps(0);
    }
    auto it = std::upper_bound(t_s.begin(), t_s.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - t_s.begin());
    if (hi >= t_s.size()) {
        return delay_ps(t_s.size() - 1);
    }
    const std::size_t lo = hi - 1;
    const double w = (t - t_s[lo]) / (t_s[hi] - t_s[lo]);
    return delay_ps(lo) + w * (delay_ps(hi) - delay_ps(lo));
}

DelayTrace delay_trace(const TemperatureTrace& temperature, double length_km,
                       double coeff_ps_per_km_k, double wavelength_nm,
                       double measurement_jitter_ps, std::uint64_t seed) {
    if (!(length_km >= 0.0)) {
        throw DomainError("fiber length must be >= 0");
    }
    if (!(measurement_jitter_ps >= 0.0)) {
        throw DomainError("measurement jitter must be >= 0");
    }
    DelayTrace trace;
    trace.wavelength_nm = wavelength_nm;
    trace.t_s = temperature.t_s;
    trace.delay_fs.resize(temperature.kelvin.size());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < temperature.kelvin.size(); ++i) {
        double ps = coeff_ps_per_km_k * length_km * temperature.kelvin[i];
        if (measurement_jitter_ps > 0.0) {
            ps += measurement_jitter_ps * gauss(rng);
        }
        trace.delay_fs[i] = std::llround(ps * 1e3);
    }
    trace.validate();
    return trace;
}

DelayTrace differential(const DelayTrace& quantum, const DelayTrace& classical) {
    quantum.validate();
    classical.validate();
    if (quantum.t_s != classical.t_s) {
        throw DomainError("delay traces are sampled at different times");
    }
    DelayTrace out;
    out.t_s = quantum.t_s;
    out.wavelength_nm = 0.0;
    out.delay_fs.resize(quantum.size());
    for (std::size_t i = 0; i < quantum.size(); ++i) {
        out.delay_fs[i] = quantum.delay_fs[i] - classical.delay_fs[i];
    }
    return out;
}

DifferentialStats differential_stats(const DelayTrace& quantum, const DelayTrace& classical) {
    const DelayTrace diff = differential(quantum, classical);
    DifferentialStats stats;
    const std::size_t n = diff.size();
    if (n == 0) {
        return stats;
    }
    stats.duration_s = diff.t_s.back() - diff.t_s.front();
    const auto [lo, hi] = std::minmax_element(diff.delay_fs.begin(), diff.delay_fs.end());
    stats.peak_to_peak_ps = static_cast<double>(*hi - *lo) * 1e-3;
    // Integer sums are exact, so the statistic depends only on the differences.
    const long double sum = std::accumulate(diff.delay_fs.begin(), diff.delay_fs.end(), 0.0L);
    const long double mean = sum / static_cast<long double>(n);
    long double ss = 0.0L;
    for (std::int64_t d : diff.delay_fs) {
        const long double e = static_cast<long double>(d) - mean;
        ss += e * e;
    }
    stats.std_dev_ps = static_cast<double>(std::sqrt(ss / static_cast<long double>(n))) * 1e-3;
    return stats;
}

double calibrate_thermal_mismatch(const TemperatureTrace& temperature, double length_km,
                                  double target_std_ps, double measurement_jitter_ps) {
    const std::size_t n = temperature.kelvin.size();
    if (n < 2 || !(length_km > 0.0)) {
        throw DomainError("calibration needs at least two samples and a nonzero length");
    }
    const double mean = std::accumulate(temperature.kelvin.begin(), temperature.kelvin.end(), 0.0) /
                        static_cast<double>(n);
    double ss = 0.0;
    for (double k : temperature.kelvin) {
        ss += (k - mean) * (k - mean);
    }
    const double temp_std = std::sqrt(ss / static_cast<double>(n));
    const double drift_var = target_std_ps * target_std_ps -
                             2.0 * measurement_jitter_ps * measurement_jitter_ps;
    if (!(drift_var > 0.0) || !(temp_std > 0.0)) {
        throw DomainError("target differential std is below the measurement jitter floor");
    }
    return std::sqrt(drift_var) / (length_km * temp_std);
}

TimestampStream retime_remote(const TimestampStream& stream, const DelayTrace& residual,
                              double rof_jitter_ps, std::uint64_t seed, double epoch_offset_s,
                              double clock_delay_ps) {
    if (!(rof_jitter_ps >= 0.0)) {
        throw DomainError("RoF jitter must be >= 0");
    }
    residual.validate();
    const double start = epoch_offset_s;
    const double end = epoch_offset_s + stream.duration_s();
    if (residual.size() == 0 || start < residual.t_s.front() || end > residual.t_s.back()) {
        throw DomainError("residual trace does not cover the stream epoch range");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    struct Item {
        std::int64_t t;
        TruthTag tag;
    };
    std::vector<Item> items(stream.size());
    for (std::size_t k = 0; k < stream.size(); ++k) {
        const double t = static_cast<double>(stream.timestamps[k]);
        double shift = residual.delay_ps_at(epoch_offset_s + t * 1e-12) - clock_delay_ps;
        if (rof_jitter_ps > 0.0) {
            shift += rof_jitter_ps * gauss(rng);
        }
        const auto moved = static_cast<std::int64_t>(std::nearbyint(t + shift));
        items[k].t = std::clamp<std::int64_t>(moved, 0, stream.duration_ps);
        items[k].tag = stream.has_truth() ? stream.truth[k] : TruthTag{};
    }
    std::stable_sort(items.begin(), items.end(),
                     [](const Item& a, const Item& b) { return a.t < b.t; });

    TimestampStream out;
    out.channel_id = stream.channel_id;
    out.duration_ps = stream.duration_ps;
    out.timestamps.reserve(items.size());
    for (const auto& item : items) {
        out.timestamps.push_back(item.t);
    }
    if (stream.has_truth()) {
        out.truth.reserve(items.size());
        for (const auto& item : items) {
            out.truth.push_back(item.tag);
        }
    }
    return out;
}

void write_csv(std::ostream& out, const DelayTrace& trace) {
    csv::Writer w(out);
    w.header({"t_s", "delay_ps"});
    for (std::size_t i = 0; i < trace.size(); ++i) {
        w.row(trace.t_s[i], trace.delay_ps(i));
    }
}

void write_stats(std::ostream& out, const DifferentialStats& stats) {
    out << "std_dev_ps: " << csv::format(stats.std_dev_ps) << '\n'
        << "peak_to_peak_ps: " << csv::format(stats.peak_to_peak_ps) << '\n'
        << "duration_s: " << csv::format(stats.duration_s) << '\n';
}

void write_stats_csv(std::ostream& out, const DifferentialStats& stats) {
    csv::Writer w(out);
    w.header({"std_dev_ps", "peak_to_peak_ps", "duration_s"});
    w.row(stats.std_dev_ps, stats.peak_to_peak_ps, stats.duration_s);
}

}  // namespace franson::clock
