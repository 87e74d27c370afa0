#include "franson/photon_sim.hpp"

#include <algorithm>
#include <cmath>

#include "franson/errors.hpp"
#include "franson/numerics.hpp"

namespace franson::sim {

FransonCheck validate_franson_condition(const link::SourceParams& source,
                                        const FransonParams& franson) {
    FransonCheck check;
    const double dt = franson.path_imbalance_ps;
    if (!(dt > source.photon_coherence_ps)) {
        check.failed = FransonCheck::Bound::Lower;
        check.message = "path imbalance " + std::to_string(dt) +
                        " ps does not exceed the single-photon coherence time " +
                        std::to_string(source.photon_coherence_ps) +
                        " ps; single-photon interference is not suppressed";
    } else if (!(dt < source.pump_coherence_ps)) {
        check.failed = FransonCheck::Bound::Upper;
        check.message = "path imbalance " + std::to_string(dt) +
                        " ps is not shorter than the pump coherence time " +
                        std::to_string(source.pump_coherence_ps) +
                        " ps; short-short and long-long paths are distinguishable";
    }
    return check;
}

void PhotonTime::add(double ps) {
    const double sum = frac + ps;
    const double whole_part = std::floor(sum);
    whole += static_cast<std::int64_t>(whole_part);
    frac = sum - whole_part;
}

std::int64_t PhotonTime::rounded() const {
    if (frac > 0.5) {
        return whole + 1;
    }
    if (frac < 0.5) {
        return whole;
    }
    return (whole % 2 == 0) ? whole : whole + 1;
}

namespace {

/// Poisson arrival epochs in [0, duration_ps), as PhotonTime.
template <typename Emit>
void poisson_process(double rate_cps, std::int64_t duration_ps, std::uint64_t seed, Emit&& emit) {
    if (!(rate_cps >= 0.0)) {
        throw DomainError("Poisson rate must be >= 0");
    }
    if (duration_ps < 0) {
        throw DomainError("duration must be >= 0");
    }
    if (rate_cps == 0.0 || duration_ps == 0) {
        return;
    }
    Rng rng(seed);
    std::exponential_distribution<double> gap(rate_cps * 1e-12);
    PhotonTime t;
    while (true) {
        t.add(gap(rng));
        if (t.whole >= duration_ps) {
            break;
        }
        emit(t);
    }
}

}  // namespace

std::vector<std::int64_t> generate_pairs(double rate_cps, std::int64_t duration_ps,
                                         std::uint64_t seed) {
    std::vector<std::int64_t> births;
    if (rate_cps > 0.0 && duration_ps > 0) {
        births.reserve(static_cast<std::size_t>(rate_cps * static_cast<double>(duration_ps) * 1e-12 * 1.01) + 16);
    }
    poisson_process(rate_cps, duration_ps, seed, [&](const PhotonTime& t) {
        std::int64_t ps = t.rounded();
        // Emission epochs are distinct integers; a rounding collision moves up by 1 ps.
        if (!births.empty() && ps <= births.back()) {
            ps = births.back() + 1;
        }
        if (ps < duration_ps) {
            births.push_back(ps);
        }
    });
    return births;
}

JointTable::JointTable(double phase_rad, double intrinsic_visibility) {
    if (!(intrinsic_visibility >= 0.0 && intrinsic_visibility <= 1.0)) {
        throw DomainError("intrinsic visibility must lie in [0, 1], got " +
                          std::to_string(intrinsic_visibility));
    }
    const double c = (1.0 + intrinsic_visibility * std::cos(phase_rad)) / 16.0;
    const double side = 1.0 / 16.0;
    const double half = 3.0 / 16.0 - c;
    constexpr int S = 0, L = 1, U = 2;
    p_[3 * S + S] = c;
    p_[3 * L + L] = c;
    p_[3 * S + L] = side;
    p_[3 * L + S] = side;
    p_[3 * S + U] = half;
    p_[3 * L + U] = half;
    p_[3 * U + S] = half;
    p_[3 * U + L] = half;
    p_[3 * U + U] = 2.0 * c + 1.0 / 8.0;
    for (double p : p_) {
        if (p < 0.0) {
            throw DomainError("negative joint-table probability");
        }
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < p_.size(); ++k) {
        acc += p_[k];
        cdf_[k] = acc;
    }
    cdf_.back() = 1.0;
}

std::pair<PathOutcome, PathOutcome> JointTable::pick(double u) const {
    std::size_t k = 0;
    while (k + 1 < cdf_.size() && (u >= cdf_[k] || p_[k] == 0.0)) {
        ++k;
    }
    return {static_cast<PathOutcome>(k / 3), static_cast<PathOutcome>(k % 3)};
}

std::pair<PathOutcome, PathOutcome> sample_franson_outcome(double phase_rad,
                                                           double intrinsic_visibility, Rng& rng) {
    const JointTable table(phase_rad, intrinsic_visibility);
    return table.pick(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

std::pair<std::int64_t, std::int64_t> outcome_to_delays(PathOutcome signal, PathOutcome idler,
                                                        std::int64_t path_imbalance_ps) {
    if (signal == PathOutcome::Unmonitored || idler == PathOutcome::Unmonitored) {
        throw DomainError("unmonitored photons have no detection delay");
    }
    const auto delay = [&](PathOutcome o) { return o == PathOutcome::Long ? path_imbalance_ps : 0; };
    return {delay(signal), delay(idler)};
}

PairPhotons route_through_interferometers(const std::vector<std::int64_t>& births,
                                          const FransonParams& franson, std::uint64_t seed) {
    const JointTable table(franson.phase_rad, franson.intrinsic_visibility);
    const auto imbalance = static_cast<std::int64_t>(std::llround(franson.path_imbalance_ps));
    Rng rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    PairPhotons out;
    out.signal.reserve(births.size() / 2 + 16);
    out.idler.reserve(births.size() / 2 + 16);
    for (std::size_t id = 0; id < births.size(); ++id) {
        const auto [s, i] = table.pick(uniform(rng));
        const TruthTag tag{Origin::Pair, id};
        if (s != PathOutcome::Unmonitored) {
            out.signal.push_back({{births[id] + (s == PathOutcome::Long ? imbalance : 0), 0.0}, tag});
        }
        if (i != PathOutcome::Unmonitored) {
            out.idler.push_back({{births[id] + (i == PathOutcome::Long ? imbalance : 0), 0.0}, tag});
        }
    }
    return out;
}

std::vector<Photon> apply_channel(std::vector<Photon> photons, const link::FiberLeg& leg,
                                  std::uint64_t seed) {
    leg.validate();
    const double survival = leg.transmission();
    const double shift = leg.propagation_delay_ps();
    Rng rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::size_t kept = 0;
    for (auto& photon : photons) {
        if (survival < 1.0 && uniform(rng) >= survival) {
            continue;
        }
        Photon p = photon;
        p.time.add(shift);
        if (leg.dispersion_jitter_ps > 0.0) {
            p.time.add(leg.dispersion_jitter_ps * gauss(rng));
        }
        photons[kept++] = p;
    }
    photons.resize(kept);
    return photons;
}

namespace {

bool earlier(const Photon& a, const Photon& b) {
    return a.time.whole != b.time.whole ? a.time.whole < b.time.whole : a.time.frac < b.time.frac;
}

}  // namespace

TimestampStream apply_detector(std::vector<Photon> photons, const link::DetectorParams& detector,
                               std::int64_t duration_ps, std::uint64_t seed,
                               std::uint16_t channel_id) {
    detector.validate();
    Rng rng(math::derive_seed(seed, 1));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::size_t kept = 0;
    for (auto& photon : photons) {
        if (detector.efficiency < 1.0 && uniform(rng) >= detector.efficiency) {
            continue;
        }
        Photon p = photon;
        if (detector.jitter_sigma_ps > 0.0) {
            p.time.add(detector.jitter_sigma_ps * gauss(rng));
        }
        photons[kept++] = p;
    }
    photons.resize(kept);

    poisson_process(detector.dark_count_cps, duration_ps, math::derive_seed(seed, 2),
                    [&](const PhotonTime& t) { photons.push_back({t, {Origin::Dark, 0}}); });

    std::sort(photons.begin(), photons.end(), earlier);

    TimestampStream stream;
    stream.channel_id = channel_id;
    stream.duration_ps = duration_ps;
    stream.timestamps.reserve(photons.size());
    stream.truth.reserve(photons.size());
    const double dead = detector.dead_time_ps;
    bool have_last = false;
    double last_accepted = 0.0;
    for (const auto& p : photons) {
        const std::int64_t t = p.time.rounded();
        if (t < 0 || t > duration_ps) {
            continue;
        }
        const double exact = static_cast<double>(p.time.whole) + p.time.frac;
        if (dead > 0.0 && have_last && exact - last_accepted < dead) {
            continue;
        }
        have_last = true;
        last_accepted = exact;
        stream.timestamps.push_back(t);
        stream.truth.push_back(p.tag);
    }
    return stream;
}

TimestampStream inject_sprs(const TimestampStream& stream, double rate_cps, std::uint64_t seed) {
    if (!(rate_cps >= 0.0)) {
        throw DomainError("SpRS rate must be >= 0");
    }
    std::vector<std::int64_t> noise;
    poisson_process(rate_cps, stream.duration_ps, seed,
                    [&](const PhotonTime& t) { noise.push_back(t.rounded()); });
    if (noise.empty()) {
        return stream;
    }
    std::vector<TruthTag> source_truth = stream.truth;
    if (source_truth.empty()) {
        source_truth.assign(stream.size(), TruthTag{Origin::Unknown, 0});
    }

    TimestampStream out;
    out.channel_id = stream.channel_id;
    out.duration_ps = stream.duration_ps;
    out.timestamps.reserve(stream.size() + noise.size());
    out.truth.reserve(stream.size() + noise.size());
    std::size_t a = 0, b = 0;
    while (a < stream.size() || b < noise.size()) {
        const bool take_stream = b == noise.size() ||
                                 (a < stream.size() && stream.timestamps[a] <= noise[b]);
        if (take_stream) {
            out.timestamps.push_back(stream.timestamps[a]);
            out.truth.push_back(source_truth[a]);
            ++a;
        } else {
            out.timestamps.push_back(std::min(noise[b], out.duration_ps));
            out.truth.push_back({Origin::SpRS, 0});
            ++b;
        }
    }
    return out;
}

}  // namespace franson::sim
