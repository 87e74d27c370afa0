#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "franson/coincidence.hpp"
#include "franson/errors.hpp"
#include "franson/link_model.hpp"
#include "franson/peak_fit.hpp"
#include "franson/pipeline.hpp"
#include "oracles.hpp"

using namespace franson;
using namespace franson::coinc;

namespace {

CoincidenceHistogram exact_gaussian(double amplitude, double mu, double sigma) {
    CoincidenceHistogram h;
    h.bin_width_ps = 1.0;
    h.min_ps = -300;
    h.max_ps = 300;
    h.counts.resize(600);
    for (std::size_t i = 0; i < h.bins(); ++i) {
        const double x = h.bin_center(i);
        h.counts[i] = static_cast<std::uint64_t>(
            std::llround(amplitude * std::exp(-0.5 * (x - mu) * (x - mu) / (sigma * sigma))));
    }
    return h;
}

CoincidenceHistogram sampled_gaussian(std::size_t n, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::int64_t> d(n);
    for (auto& x : d) {
        x = std::llround(sigma * g(rng));
    }
    return build_histogram(d, 1.0, -300, 300);
}

std::vector<FringePoint> cosine_points(double c0, double v, double phi0, int n, double duration) {
    std::vector<FringePoint> pts;
    for (int k = 0; k < n; ++k) {
        const double phi = 2 * oracle::kPi * k / n;
        const double rate = c0 * (1 + v * std::cos(phi + phi0));
        pts.push_back({phi, static_cast<std::uint64_t>(std::llround(rate * duration)), duration});
    }
    return pts;
}

}  // namespace

TEST(FitGaussian, RecoversExactBins) {
    const auto h = exact_gaussian(1e9, 3.7, 30.0);
    const auto fit = fit_gaussian(h, -250, 250);
    EXPECT_NEAR(fit.mu_ps, 3.7 + 0.0, 1e-6 * 30);
    EXPECT_NEAR(fit.sigma_ps, 30.0, 1e-6 * 30);
    EXPECT_NEAR(fit.amplitude, 1e9, 1e-6 * 1e9);
    EXPECT_GT(fit.iterations, 0);
    EXPECT_LE(fit.iterations, 100);
}

TEST(FitGaussian, NeedsFiveNonzeroBins) {
    CoincidenceHistogram h;
    h.min_ps = -10;
    h.max_ps = 10;
    h.counts.assign(20, 0);
    h.counts[9] = 5;
    h.counts[10] = 7;
    h.counts[11] = 3;
    EXPECT_THROW(fit_gaussian(h, -10, 10), DomainError);
}

TEST(FitGaussian, UnbiasedAcrossSeeds) {
    std::vector<double> sigmas;
    for (int seed = 0; seed < 100; ++seed) {
        const auto h = sampled_gaussian(10000, 30.0, 1000 + seed);
        sigmas.push_back(fit_gaussian(h, -250, 250).sigma_ps);
    }
    // rounding the samples to integer ps adds 1/12 ps^2
    const double truth = std::sqrt(900.0 + 1.0 / 12);
    const double se = oracle::sample_std(sigmas) / std::sqrt(100.0);
    EXPECT_NEAR(oracle::sample_mean(sigmas), truth, 3 * se);
}

TEST(FitGaussian, ConvergenceErrorCarriesMoments) {
    const ConvergenceError e("x", 1.0, 2.0, 3.0);
    EXPECT_EQ(e.fallback_mu(), 1.0);
    EXPECT_EQ(e.fallback_sigma(), 2.0);
    EXPECT_EQ(e.fallback_amplitude(), 3.0);
}

namespace {

double simulated_peak_width(bool rof_jitter) {
    auto cfg = ScenarioConfig::desk_defaults();
    cfg.signal_leg.dispersion_jitter_ps = 35.4;
    cfg.signal_detector.efficiency = 0.8;
    cfg.idler_detector.efficiency = 0.8;
    if (rof_jitter) {
        cfg.sync.sigma_sync_ps = 29.3;
    }
    const auto run = simulate(cfg, 0.0, 21);
    const auto diffs = cross_correlate(run.signal, run.idler, 2000, run.offset_ps);
    const auto h = build_histogram(diffs, 1.0, -2000, 2000);
    return fit_gaussian(h, -250, 250).sigma_ps;
}

}  // namespace

TEST(FitGaussian, EndToEndPeakWidths) {
    EXPECT_NEAR(simulated_peak_width(false), 46.4, 0.02 * 46.4);
    EXPECT_NEAR(simulated_peak_width(true), 54.9, 0.02 * 54.9);
}

TEST(FitFringe, ExactCosine) {
    const auto pts = cosine_points(1e8, 0.7, 0.3, 20, 1.0);
    const auto fit = fit_fringe(pts);
    EXPECT_NEAR(fit.visibility, 0.7, 1e-8);
    EXPECT_NEAR(fit.phase_offset_rad, 0.3, 1e-8);
    EXPECT_NEAR(fit.mean_rate_cps, 1e8, 1e-8 * 1e8);
    EXPECT_FALSE(fit.clipped);
}

TEST(FitFringe, PoissonSampledWithinThreeSigma) {
    std::mt19937_64 rng(5);
    std::vector<double> vs;
    std::vector<double> sig;
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<FringePoint> pts;
        for (int k = 0; k < 20; ++k) {
            const double phi = 2 * oracle::kPi * k / 20;
            std::poisson_distribution<std::uint64_t> p(1e4 * (1 + 0.9 * std::cos(phi)));
            pts.push_back({phi, p(rng), 1.0});
        }
        const auto fit = fit_fringe(pts);
        if (rep == 0) {
            EXPECT_LT(std::abs(fit.visibility - 0.9), 3 * fit.sigma_visibility);
        }
        vs.push_back(fit.visibility);
        sig.push_back(fit.sigma_visibility);
    }
    // the reported uncertainty matches the spread across repetitions
    EXPECT_NEAR(oracle::sample_std(vs) / oracle::sample_mean(sig), 1.0, 0.2);
    EXPECT_NEAR(oracle::sample_mean(vs), 0.9, 3 * oracle::sample_std(vs) / std::sqrt(200.0));
}

TEST(FitFringe, UnequalDurations) {
    auto pts = cosine_points(1e6, 0.5, -1.0, 12, 1.0);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double d = 1.0 + 0.1 * static_cast<double>(k);
        pts[k].count = static_cast<std::uint64_t>(std::llround(pts[k].count * d));
        pts[k].duration_s = d;
    }
    const auto fit = fit_fringe(pts);
    EXPECT_NEAR(fit.visibility, 0.5, 1e-5);
    EXPECT_NEAR(fit.mean_rate_cps, 1e6, 1.0);
}

TEST(FitFringe, ClipsAboveOne) {
    std::vector<FringePoint> pts;
    for (int k = 0; k < 20; ++k) {
        const double phi = 2 * oracle::kPi * k / 20;
        const double rate = std::max(0.0, 1000 * (1 + 1.6 * std::cos(phi)));
        pts.push_back({phi, static_cast<std::uint64_t>(rate), 1.0});
    }
    const auto fit = fit_fringe(pts);
    EXPECT_TRUE(fit.clipped);
    EXPECT_EQ(fit.visibility, 1.0);
}

TEST(FitFringe, DegenerateInputs) {
    std::vector<FringePoint> zeros;
    for (int k = 0; k < 10; ++k) {
        zeros.push_back({k * 0.7, 0, 1.0});
    }
    EXPECT_THROW(fit_fringe(zeros), DomainError);
    const auto few = cosine_points(100, 0.5, 0, 2, 1.0);
    EXPECT_THROW(fit_fringe(few), DomainError);
    auto bad = cosine_points(100, 0.5, 0, 10, 1.0);
    bad[3].duration_s = 0;
    EXPECT_THROW(fit_fringe(bad), DomainError);
}

TEST(FitFringe, ReportFormats) {
    FringeFit f;
    f.visibility = 0.8835;
    f.sigma_visibility = 0.0362;
    f.phase_offset_rad = 0.1;
    f.mean_rate_cps = 42;
    std::ostringstream txt, row;
    write_fit_report(txt, f);
    write_fit_csv(row, f);
    EXPECT_EQ(txt.str(), "V: 0.8835\nsigma_V: 0.0362\nphi0_rad: 0.1\nC0: 42\nclipped: false\n");
    EXPECT_EQ(row.str(), "V,sigma_V,phi0_rad,C0\n0.8835,0.0362,0.1,42\n");
}
