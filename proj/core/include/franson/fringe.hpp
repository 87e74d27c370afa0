#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "franson/peak_fit.hpp"
#include "franson/pipeline.hpp"

namespace franson {

struct FringeSample {
    double phase_rad = 0.0;
    double duration_s = 0.0;
    std::uint64_t central = 0;       ///< coincidences in the central window
    std::uint64_t side_early = 0;    ///< side peak at -dT (same window width)
    std::uint64_t side_late = 0;     ///< side peak at +dT
    std::uint64_t central_true = 0;  ///< central-window events from one pair (truth tags)
    std::uint64_t singles_signal = 0;
    std::uint64_t singles_idler = 0;
};

struct FringeScan {
    std::vector<FringeSample> samples;
    double center_ps = 0.0;  ///< fitted central-peak position (relative to the nominal offset)
    bool center_fitted = false;
    coinc::FringeFit fit;
};

/// Phase scan over `phases_rad` (at least 5 points spanning a full period).
/// Point k uses seed derive_seed(config.seed, k) and starts k * duration into
/// the residual clock trace. Coincidences are counted in a full-width window of
/// config.coincidence_window_ps around the fitted central peak.
FringeScan fringe_scan(const ScenarioConfig& config, const std::vector<double>& phases_rad);

/// `count` equally spaced phases over [0, 2 pi].
std::vector<double> full_period_phases(std::size_t count);

void write_csv(std::ostream& out, const FringeScan& scan);

}  // namespace franson
