#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>

#include "franson/coincidence.hpp"

namespace franson::coinc {

struct PeakFit {
    double mu_ps = 0.0;
    double sigma_ps = 0.0;
    double amplitude = 0.0;
    double residual_norm = 0.0;
    int iterations = 0;
};

/// Least-squares fit of A exp(-(x - mu)^2 / 2 sigma^2) to the bins of `hist`
/// whose centers lie in [lo_ps, hi_ps). Starts from the sample moments and
/// runs damped Gauss-Newton until the relative parameter step is below 1e-8.
/// Throws DomainError with fewer than 5 nonzero bins, ConvergenceError (with
/// the moment estimates) after 100 iterations.
PeakFit fit_gaussian(const CoincidenceHistogram& hist, double lo_ps, double hi_ps);

struct FringePoint {
    double phase_rad = 0.0;
    std::uint64_t count = 0;
    double duration_s = 0.0;
};

struct FringeFit {
    double visibility = 0.0;
    double sigma_visibility = 0.0;
    double phase_offset_rad = 0.0;
    double mean_rate_cps = 0.0;  ///< C0
    bool clipped = false;        ///< raw modulation depth fell outside [0, 1]
    double chi2 = 0.0;
};

/// Poisson-weighted fit of count_k = duration_k * C0 (1 + V cos(phi_k + phi0)).
/// Variances use max(count, 1).
FringeFit fit_fringe(std::span<const FringePoint> points);

void write_fit_report(std::ostream& out, const FringeFit& fit);
void write_fit_csv(std::ostream& out, const FringeFit& fit);

}  // namespace franson::coinc
