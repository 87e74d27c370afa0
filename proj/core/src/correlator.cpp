#include "franson/coincidence.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "franson/csv.hpp"

namespace franson::coinc {

namespace {

void require_sorted(const TimestampStream& s, const char* which) {
    if (!std::is_sorted(s.timestamps.begin(), s.timestamps.end())) {
        throw FormatError(std::string("cross-correlation input stream ") + which +
                          " is not sorted");
    }
}

void check_inputs(const TimestampStream& a, const TimestampStream& b, std::int64_t span_ps) {
    if (span_ps <= 0) {
        throw DomainError("correlation span must be > 0");
    }
    require_sorted(a, "a");
    require_sorted(b, "b");
}

}  // namespace

std::vector<std::int64_t> cross_correlate(const TimestampStream& a, const TimestampStream& b,
                                          std::int64_t span_ps, std::int64_t offset_ps) {
    check_inputs(a, b, span_ps);
    std::vector<std::int64_t> out;
    for_each_match(a.timestamps, b.timestamps, span_ps, offset_ps,
                   [&](std::int64_t d, std::size_t, std::size_t) { out.push_back(d); });
    return out;
}

std::vector<Match> cross_correlate_matches(const TimestampStream& a, const TimestampStream& b,
                                           std::int64_t span_ps, std::int64_t offset_ps) {
    check_inputs(a, b, span_ps);
    std::vector<Match> out;
    for_each_match(a.timestamps, b.timestamps, span_ps, offset_ps,
                   [&](std::int64_t d, std::size_t i, std::size_t j) { out.push_back({d, i, j}); });
    return out;
}

std::uint64_t CoincidenceHistogram::total() const {
    std::uint64_t sum = 0;
    for (auto c : counts) {
        sum += c;
    }
    return sum;
}

namespace {

std::size_t checked_bin_count(double bin_width_ps, double min_ps, double max_ps) {
    if (!(bin_width_ps > 0.0)) {
        throw FormatError("histogram bin width must be > 0");
    }
    if (!(max_ps > min_ps)) {
        throw FormatError("histogram range must have max > min");
    }
    const double n = (max_ps - min_ps) / bin_width_ps;
    const double rounded = std::round(n);
    if (std::fabs(n - rounded) > 1e-9 * std::max(1.0, rounded)) {
        throw FormatError("histogram range is not a whole number of bins");
    }
    return static_cast<std::size_t>(rounded);
}

}  // namespace

CoincidenceHistogram build_histogram(std::span<const std::int64_t> diffs, double bin_width_ps,
                                     double min_ps, double max_ps, double duration_s) {
    CoincidenceHistogram hist;
    hist.bin_width_ps = bin_width_ps;
    hist.min_ps = min_ps;
    hist.max_ps = max_ps;
    hist.duration_s = duration_s;
    hist.counts.assign(checked_bin_count(bin_width_ps, min_ps, max_ps), 0);
    hist.total_examined = diffs.size();
    for (std::int64_t d : diffs) {
        const double x = static_cast<double>(d);
        if (x < min_ps || x >= max_ps) {
            ++hist.dropped;
            continue;
        }
        auto idx = static_cast<std::size_t>(std::floor((x - min_ps) / bin_width_ps));
        idx = std::min(idx, hist.counts.size() - 1);
        ++hist.counts[idx];
    }
    return hist;
}

CoincidenceHistogram sub_histogram(const CoincidenceHistogram& hist, double lo_ps, double hi_ps) {
    const auto to_bin = [&](double x) {
        const double k = std::round((x - hist.min_ps) / hist.bin_width_ps);
        return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(hist.bins())));
    };
    const std::size_t first = to_bin(lo_ps);
    const std::size_t last = std::max(first, to_bin(hi_ps));
    CoincidenceHistogram sub;
    sub.bin_width_ps = hist.bin_width_ps;
    sub.min_ps = hist.bin_lo(first);
    sub.max_ps = hist.bin_lo(last);
    sub.duration_s = hist.duration_s;
    sub.counts.assign(hist.counts.begin() + static_cast<std::ptrdiff_t>(first),
                      hist.counts.begin() + static_cast<std::ptrdiff_t>(last));
    sub.total_examined = sub.total();
    return sub;
}

ThreePeaks three_peak_decompose(const CoincidenceHistogram& hist, double path_imbalance_ps,
                                double center_ps) {
    if (!(path_imbalance_ps > 0.0)) {
        throw DomainError("path imbalance must be > 0");
    }
    const double guard = 0.5 * path_imbalance_ps;
    if (hist.min_ps > center_ps - path_imbalance_ps - guard ||
        hist.max_ps < center_ps + path_imbalance_ps + guard) {
        throw FormatError("histogram range does not cover the side peaks at +-dT");
    }
    const double split_lo = center_ps - 0.5 * path_imbalance_ps;
    const double split_hi = center_ps + 0.5 * path_imbalance_ps;
    const auto region = [&](double lo, double hi) {
        PeakRegion r;
        r.histogram = sub_histogram(hist, lo, hi);
        r.lo_ps = r.histogram.min_ps;
        r.hi_ps = r.histogram.max_ps;
        r.total = r.histogram.total();
        return r;
    };
    return {region(hist.min_ps, split_lo), region(split_lo, split_hi),
            region(split_hi, hist.max_ps)};
}

std::uint64_t count_in_window(std::span<const std::int64_t> diffs, double center_ps,
                              double tau_ps) {
    if (!(tau_ps > 0.0)) {
        throw DomainError("coincidence window must be > 0");
    }
    const double half = 0.5 * tau_ps;
    std::uint64_t n = 0;
    for (std::int64_t d : diffs) {
        if (std::fabs(static_cast<double>(d) - center_ps) <= half) {
            ++n;
        }
    }
    return n;
}

std::uint64_t count_in_window(const CoincidenceHistogram& hist, double center_ps, double tau_ps) {
    if (!(tau_ps > 0.0)) {
        throw DomainError("coincidence window must be > 0");
    }
    const double half = 0.5 * tau_ps;
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        if (std::fabs(hist.bin_center(i) - center_ps) <= half) {
            n += hist.counts[i];
        }
    }
    return n;
}

void write_csv(std::ostream& out, const CoincidenceHistogram& hist) {
    csv::Writer w(out);
    w.header({"bin_center_ps", "count"});
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        w.row(hist.bin_center(i), static_cast<unsigned long long>(hist.counts[i]));
    }
}

}  // namespace franson::coinc
