#pragma once

// Parameter sweeps over the analytic link model, plus their CSV layouts.

#include <ostream>
#include <span>
#include <vector>

#include "franson/link_model.hpp"

namespace franson::link {

struct SyncSweepParams {
    double brightness_cps = 1e8;
    double sigma0_ps = 30.0;
    WindowPolicy window;
};

struct SyncSweepPoint {
    double sigma_sync_ps = 0.0;
    double tau_opt_ps = 0.0;
    double visibility = 0.0;
};

/// Maximum visibility versus synchronization error (ideal source, no noise).
std::vector<SyncSweepPoint> sweep_visibility_vs_sync(std::span<const double> sigma_sync_ps,
                                                     const SyncSweepParams& params);

struct SprsSweepPoint {
    double length_km = 0.0;
    double rate_cps = 0.0;
};

std::vector<SprsSweepPoint> sweep_sprs(std::span<const double> lengths_km,
                                       double alpha_q_db_per_km, double alpha_c_db_per_km,
                                       const SpRSParams& sprs);

/// Defaults: signal at 1575 nm, idler at 1555 nm, B = 1e8, DCR = 100 Hz,
/// sigma_sync = 100 ps, Raman normalization calibrated to 1e5 cps at 50 km
/// on the 1575 nm leg.
struct LengthSweepParams {
    double brightness_cps = 1e8;
    double sigma0_ps = 30.0;
    double sigma_sync_ps = 100.0;
    double dcr_signal_cps = 100.0;
    double dcr_idler_cps = 100.0;
    double detector_efficiency = 1.0;
    double alpha_signal_db_per_km = kAlpha1575DbPerKm;
    double alpha_idler_db_per_km = kAlpha1555DbPerKm;
    double alpha_classical_db_per_km = kAlpha1310DbPerKm;
    SpRSParams sprs_signal;
    SpRSParams sprs_idler;
    WindowPolicy window;

    static LengthSweepParams defaults();
};

struct LengthSweepPoint {
    double signal_length_km = 0.0;
    double idler_length_km = 0.0;
    double visibility = 0.0;
};

double visibility_for_lengths(double signal_length_km, double idler_length_km,
                              const LengthSweepParams& params);

/// Full grid: every signal length paired with every idler length.
std::vector<LengthSweepPoint> sweep_visibility_vs_length(std::span<const double> signal_lengths_km,
                                                         std::span<const double> idler_lengths_km,
                                                         const LengthSweepParams& params);

void write_csv(std::ostream& out, std::span<const SyncSweepPoint> points);
void write_csv(std::ostream& out, std::span<const SprsSweepPoint> points);
void write_csv(std::ostream& out, std::span<const LengthSweepPoint> points);

}  // namespace franson::link
