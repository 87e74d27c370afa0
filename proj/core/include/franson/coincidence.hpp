#pragma once

// Two-channel coincidence analysis: sliding-window cross-correlation,
// histogramming, three-peak decomposition and windowed counting.
//
// Time differences are always t_a - t_b - offset, in integer ps.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "franson/errors.hpp"
#include "franson/stream.hpp"

namespace franson::coinc {

struct Match {
    std::int64_t diff = 0;
    std::size_t index_a = 0;
    std::size_t index_b = 0;
};

/// Calls `visit(diff, index_a, index_b)` for every pair with |diff| <= span,
/// in order of a, then ascending b. One forward pass; the start of the
/// candidate window in `b` never moves backwards.
template <typename Visit>
void for_each_match(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                    std::int64_t span_ps, std::int64_t offset_ps, Visit&& visit) {
    std::size_t start = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::int64_t center = a[i] - offset_ps;
        const std::int64_t lo = center - span_ps;
        const std::int64_t hi = center + span_ps;
        while (start < b.size() && b[start] < lo) {
            ++start;
        }
        for (std::size_t j = start; j < b.size() && b[j] <= hi; ++j) {
            visit(center - b[j], i, j);
        }
    }
}

std::vector<std::int64_t> cross_correlate(const TimestampStream& a, const TimestampStream& b,
                                          std::int64_t span_ps, std::int64_t offset_ps = 0);

std::vector<Match> cross_correlate_matches(const TimestampStream& a, const TimestampStream& b,
                                           std::int64_t span_ps, std::int64_t offset_ps = 0);

/// Half-open bins [lo, lo + width) covering [min_ps, max_ps).
struct CoincidenceHistogram {
    double bin_width_ps = 1.0;
    double min_ps = 0.0;
    double max_ps = 0.0;
    std::vector<std::uint64_t> counts;
    std::uint64_t total_examined = 0;
    std::uint64_t dropped = 0;
    double duration_s = 0.0;

    std::size_t bins() const { return counts.size(); }
    double bin_lo(std::size_t i) const { return min_ps + bin_width_ps * static_cast<double>(i); }
    double bin_center(std::size_t i) const { return bin_lo(i) + 0.5 * bin_width_ps; }
    std::uint64_t total() const;
};

/// Throws FormatError unless bin_width > 0 and (max - min) is a whole number of bins.
CoincidenceHistogram build_histogram(std::span<const std::int64_t> diffs, double bin_width_ps,
                                     double min_ps, double max_ps, double duration_s = 0.0);

/// Bins [lo_ps, hi_ps) of `hist` as a histogram of their own (edges snapped to bins).
CoincidenceHistogram sub_histogram(const CoincidenceHistogram& hist, double lo_ps, double hi_ps);

struct PeakRegion {
    double lo_ps = 0.0;
    double hi_ps = 0.0;
    std::uint64_t total = 0;
    CoincidenceHistogram histogram;
};

struct ThreePeaks {
    PeakRegion left;
    PeakRegion center;
    PeakRegion right;
};

/// Splits at center +- dT/2. The histogram must cover center +- 1.5 dT.
ThreePeaks three_peak_decompose(const CoincidenceHistogram& hist, double path_imbalance_ps,
                                double center_ps = 0.0);

/// Number of diffs with |d - center| <= tau/2 (tau is the full width).
std::uint64_t count_in_window(std::span<const std::int64_t> diffs, double center_ps,
                              double tau_ps);
/// Histogram variant: sums bins whose centers satisfy the same condition.
std::uint64_t count_in_window(const CoincidenceHistogram& hist, double center_ps, double tau_ps);

void write_csv(std::ostream& out, const CoincidenceHistogram& hist);

}  // namespace franson::coinc
