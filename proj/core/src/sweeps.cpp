#include "franson/sweeps.hpp"

#include "franson/csv.hpp"
#include "franson/errors.hpp"

namespace franson::link {

std::vector<SyncSweepPoint> sweep_visibility_vs_sync(std::span<const double> sigma_sync_ps,
                                                     const SyncSweepParams& params) {
    if (sigma_sync_ps.empty()) {
        throw DomainError("synchronization sweep range is empty");
    }
    std::vector<SyncSweepPoint> out;
    out.reserve(sigma_sync_ps.size());
    for (double sync : sigma_sync_ps) {
        const double sigma_m = compose_jitter(params.sigma0_ps, sync);
        if (sigma_m == 0.0 && params.window.mode == WindowPolicy::Mode::CaptureConstrained) {
            // perfect timing: the optimal window shrinks to zero and CAR diverges
            out.push_back({sync, 0.0, 1.0});
            continue;
        }
        const double tau = optimize_window(sigma_m, params.window);
        const double car = car_ideal(params.brightness_cps, tau, sigma_m);
        out.push_back({sync, tau, visibility_from_car(car)});
    }
    return out;
}

std::vector<SprsSweepPoint> sweep_sprs(std::span<const double> lengths_km,
                                       double alpha_q_db_per_km, double alpha_c_db_per_km,
                                       const SpRSParams& sprs) {
    std::vector<SprsSweepPoint> out;
    out.reserve(lengths_km.size());
    for (double length : lengths_km) {
        out.push_back({length, sprs_rate(length, alpha_q_db_per_km, alpha_c_db_per_km, sprs)});
    }
    return out;
}

LengthSweepParams LengthSweepParams::defaults() {
    LengthSweepParams p;
    p.sprs_signal.beta_per_km_hz = kBeta1575;
    p.sprs_idler.beta_per_km_hz = kBeta1555;
    const double norm = calibrated_sprs_normalization(1e5, 50.0, kAlpha1575DbPerKm,
                                                      kAlpha1310DbPerKm, p.sprs_signal);
    p.sprs_signal.normalization = norm;
    p.sprs_idler.normalization = norm;
    return p;
}

double visibility_for_lengths(double signal_length_km, double idler_length_km,
                              const LengthSweepParams& params) {
    const double sigma_m = compose_jitter(params.sigma0_ps, params.sigma_sync_ps);
    NoisyLinkInputs in;
    in.brightness_cps = params.brightness_cps;
    FiberLeg signal{.length_km = signal_length_km, .alpha_q_db_per_km = params.alpha_signal_db_per_km};
    FiberLeg idler{.length_km = idler_length_km, .alpha_q_db_per_km = params.alpha_idler_db_per_km};
    in.eta_s = signal.transmission() * params.detector_efficiency;
    in.eta_i = idler.transmission() * params.detector_efficiency;
    in.sprs_signal_cps = sprs_rate(signal_length_km, params.alpha_signal_db_per_km,
                                   params.alpha_classical_db_per_km, params.sprs_signal);
    in.sprs_idler_cps = sprs_rate(idler_length_km, params.alpha_idler_db_per_km,
                                  params.alpha_classical_db_per_km, params.sprs_idler);
    in.dcr_signal_cps = params.dcr_signal_cps;
    in.dcr_idler_cps = params.dcr_idler_cps;
    in.tau_ps = optimize_window(sigma_m, params.window);
    in.sigma_m_ps = sigma_m;
    return visibility_from_car(car_noisy(in));
}

std::vector<LengthSweepPoint> sweep_visibility_vs_length(std::span<const double> signal_lengths_km,
                                                         std::span<const double> idler_lengths_km,
                                                         const LengthSweepParams& params) {
    std::vector<LengthSweepPoint> out;
    out.reserve(signal_lengths_km.size() * idler_lengths_km.size());
    for (double ls : signal_lengths_km) {
        for (double li : idler_lengths_km) {
            out.push_back({ls, li, visibility_for_lengths(ls, li, params)});
        }
    }
    return out;
}

void write_csv(std::ostream& out, std::span<const SyncSweepPoint> points) {
    csv::Writer w(out);
    w.header({"sigma_sync_ps", "tau_opt_ps", "visibility"});
    for (const auto& p : points) {
        w.row(p.sigma_sync_ps, p.tau_opt_ps, p.visibility);
    }
}

void write_csv(std::ostream& out, std::span<const SprsSweepPoint> points) {
    csv::Writer w(out);
    w.header({"L_km", "sprs_cps"});
    for (const auto& p : points) {
        w.row(p.length_km, p.rate_cps);
    }
}

void write_csv(std::ostream& out, std::span<const LengthSweepPoint> points) {
    csv::Writer w(out);
    w.header({"L_s_km", "L_i_km", "visibility"});
    for (const auto& p : points) {
        w.row(p.signal_length_km, p.idler_length_km, p.visibility);
    }
}

}  // namespace franson::link
