#pragma once

// Monte Carlo generation of detector timestamp streams for energy-time
// entangled pairs: Poisson emission, Franson path outcomes, lossy fiber,
// jittered detectors with dark counts, and Raman background.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "franson/link_model.hpp"
#include "franson/stream.hpp"

namespace franson::sim {

using Rng = std::mt19937_64;

enum class PathOutcome : std::uint8_t { Short = 0, Long = 1, Unmonitored = 2 };

struct FransonParams {
    double path_imbalance_ps = 500.0;
    double phase_rad = 0.0;  ///< sum of both interferometer phases
    double intrinsic_visibility = 1.0;
};

struct FransonCheck {
    enum class Bound { None, Lower, Upper };

    Bound failed = Bound::None;
    std::string message;

    bool ok() const { return failed == Bound::None; }
};

/// Two-photon interference needs photon coherence < imbalance < pump coherence.
FransonCheck validate_franson_condition(const link::SourceParams& source,
                                        const FransonParams& franson);

/// Sorted, strictly increasing birth times (ps) of a homogeneous Poisson process.
std::vector<std::int64_t> generate_pairs(double rate_cps, std::int64_t duration_ps,
                                         std::uint64_t seed);

/// Joint probabilities of (signal, idler) path outcomes, indexed
/// [3 * signal + idler]. With c = (1 + V0 cos phi) / 16:
///   SS = LL = c, SL = LS = 1/16, SU = LU = US = UL = 3/16 - c, UU = 2c + 1/8,
/// so each photon's marginal over (Short, Long, Unmonitored) is (1/4, 1/4, 1/2).
class JointTable {
public:
    JointTable(double phase_rad, double intrinsic_visibility);

    double operator()(PathOutcome signal, PathOutcome idler) const {
        return p_[3 * static_cast<int>(signal) + static_cast<int>(idler)];
    }
    const std::array<double, 9>& probabilities() const { return p_; }

    /// Inverse-CDF draw from a uniform variate in [0, 1).
    std::pair<PathOutcome, PathOutcome> pick(double u) const;

private:
    std::array<double, 9> p_{};
    std::array<double, 9> cdf_{};
};

std::pair<PathOutcome, PathOutcome> sample_franson_outcome(double phase_rad,
                                                           double intrinsic_visibility, Rng& rng);

/// Short adds nothing, Long adds the imbalance. Both outcomes must be monitored.
std::pair<std::int64_t, std::int64_t> outcome_to_delays(PathOutcome signal, PathOutcome idler,
                                                        std::int64_t path_imbalance_ps);

/// Picosecond time with an integer part and a sub-ps remainder in [0, 1),
/// so long streams keep sub-ps resolution.
struct PhotonTime {
    std::int64_t whole = 0;
    double frac = 0.0;

    void add(double ps);
    /// Nearest integer ps, ties to even.
    std::int64_t rounded() const;
};

struct Photon {
    PhotonTime time;
    TruthTag tag;
};

struct PairPhotons {
    std::vector<Photon> signal;
    std::vector<Photon> idler;
};

/// Routes each pair through the two interferometers; unmonitored photons are
/// dropped, monitored ones get the short/long path delay.
PairPhotons route_through_interferometers(const std::vector<std::int64_t>& births,
                                          const FransonParams& franson, std::uint64_t seed);

/// Independent survival with the leg's transmission, deterministic propagation
/// shift, and optional residual-dispersion jitter.
std::vector<Photon> apply_channel(std::vector<Photon> photons, const link::FiberLeg& leg,
                                  std::uint64_t seed);

/// Efficiency thinning, Gaussian timing jitter, Poisson dark counts, dead time.
/// Events outside [0, duration] are discarded.
TimestampStream apply_detector(std::vector<Photon> photons, const link::DetectorParams& detector,
                               std::int64_t duration_ps, std::uint64_t seed,
                               std::uint16_t channel_id);

/// Merges an independent Poisson stream of Raman photons tagged Origin::SpRS.
TimestampStream inject_sprs(const TimestampStream& stream, double rate_cps, std::uint64_t seed);

}  // namespace franson::sim
