#include "franson/link_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "franson/errors.hpp"
#include "franson/numerics.hpp"

namespace franson::link {

namespace {

const double kSqrtLn2 = std::sqrt(std::log(2.0));

void require_nonnegative(double value, const char* name) {
    if (!(value >= 0.0)) {
        throw DomainError(std::string(name) + " must be >= 0, got " + std::to_string(value));
    }
}

void require_unit_interval(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
    }
}

}  // namespace

void SourceParams::validate() const {
    require_nonnegative(brightness_cps, "brightness");
    require_unit_interval(intrinsic_visibility, "intrinsic visibility");
    require_nonnegative(photon_coherence_ps, "photon coherence time");
    if (!(photon_coherence_ps < pump_coherence_ps)) {
        throw DomainError("photon coherence time must be shorter than pump coherence time");
    }
}

void DetectorParams::validate() const {
    require_nonnegative(jitter_sigma_ps, "detector jitter");
    require_unit_interval(efficiency, "detector efficiency");
    require_nonnegative(dark_count_cps, "dark count rate");
    require_nonnegative(dead_time_ps, "dead time");
}

void FiberLeg::validate() const {
    require_nonnegative(length_km, "fiber length");
    require_nonnegative(alpha_q_db_per_km, "quantum attenuation");
    require_nonnegative(alpha_c_db_per_km, "classical attenuation");
    require_nonnegative(extra_loss_db, "extra loss");
    require_nonnegative(group_delay_ps_per_km, "group delay");
    require_nonnegative(dispersion_jitter_ps, "dispersion jitter");
}

double FiberLeg::transmission() const {
    return std::pow(10.0, -(alpha_q_db_per_km * length_km + extra_loss_db) / 10.0);
}

void SpRSParams::validate() const {
    require_nonnegative(beta_per_km_hz, "beta");
    require_nonnegative(delta_lambda_nm, "classical bandwidth");
    require_nonnegative(p_in_photons_per_s, "classical photon flux");
    require_nonnegative(normalization, "SpRS normalization");
}

void SyncParams::validate() const {
    require_nonnegative(sigma_sync_ps, "sigma_sync");
    require_nonnegative(rof_excess_jitter_ps, "RoF excess jitter");
}

void WindowPolicy::validate() const {
    if (mode == Mode::Fixed) {
        if (!(tau_fixed_ps > 0.0)) {
            throw DomainError("fixed coincidence window must be > 0");
        }
    } else if (!(capture_fraction > 0.0 && capture_fraction < 1.0)) {
        throw DomainError("capture fraction must lie in (0, 1), got " +
                          std::to_string(capture_fraction));
    }
}

double db_to_nepers(double db_per_km) { return db_per_km * std::log(10.0) / 10.0; }

double compose_jitter(double sigma0_ps, double sigma_sync_ps) {
    require_nonnegative(sigma0_ps, "sigma0");
    require_nonnegative(sigma_sync_ps, "sigma_sync");
    return std::hypot(sigma0_ps, sigma_sync_ps);
}

double compose_jitter(std::initializer_list<double> sigmas_ps) {
    double sum = 0.0;
    for (double s : sigmas_ps) {
        require_nonnegative(s, "jitter term");
        sum += s * s;
    }
    return std::sqrt(sum);
}

double excess_jitter(double sigma_total_ps, double sigma_base_ps) {
    require_nonnegative(sigma_base_ps, "base jitter");
    if (sigma_total_ps < sigma_base_ps) {
        throw DomainError("non-physical jitter decomposition: total " +
                          std::to_string(sigma_total_ps) + " ps is below base " +
                          std::to_string(sigma_base_ps) + " ps");
    }
    // (a - b)(a + b) keeps precision when the two widths are close.
    return std::sqrt((sigma_total_ps - sigma_base_ps) * (sigma_total_ps + sigma_base_ps));
}

double capture_fraction(double tau_ps, double sigma_m_ps) {
    require_nonnegative(tau_ps, "tau");
    require_nonnegative(sigma_m_ps, "sigma_m");
    if (tau_ps == 0.0) {
        return 0.0;
    }
    if (sigma_m_ps == 0.0) {
        return 1.0;
    }
    return math::erf(kSqrtLn2 * tau_ps / sigma_m_ps);
}

double gaussian_window_width(double tau_ps) {
    require_nonnegative(tau_ps, "tau");
    return 2.0 * std::sqrt(2.0 * std::log(2.0)) * tau_ps;
}

double effective_cc(double brightness_cps, double eta_s, double eta_i, double tau_ps,
                    double sigma_m_ps) {
    require_nonnegative(brightness_cps, "brightness");
    require_nonnegative(eta_s, "eta_s");
    require_nonnegative(eta_i, "eta_i");
    return brightness_cps * eta_s * eta_i * capture_fraction(tau_ps, sigma_m_ps);
}

double accidental_cc(double brightness_cps, double eta_s, double eta_i, double tau_ps) {
    require_nonnegative(brightness_cps, "brightness");
    require_nonnegative(eta_s, "eta_s");
    require_nonnegative(eta_i, "eta_i");
    require_nonnegative(tau_ps, "tau");
    return brightness_cps * brightness_cps * eta_s * eta_i * tau_ps * 1e-12;
}

double car_ideal(double brightness_cps, double tau_ps, double sigma_m_ps) {
    if (!(brightness_cps > 0.0)) {
        throw DomainError("CAR requires brightness > 0");
    }
    require_nonnegative(tau_ps, "tau");
    if (tau_ps == 0.0) {
        throw DomainError(
            "CAR at tau = 0 is a limit; use car_ideal_small_tau_limit = "
            "2*sqrt(ln 2)/(sqrt(pi)*sigma_m*B)");
    }
    return capture_fraction(tau_ps, sigma_m_ps) / (brightness_cps * tau_ps * 1e-12);
}

double car_ideal_small_tau_limit(double brightness_cps, double sigma_m_ps) {
    if (!(brightness_cps > 0.0) || !(sigma_m_ps > 0.0)) {
        throw DomainError("small-tau CAR limit requires B > 0 and sigma_m > 0");
    }
    return 2.0 * kSqrtLn2 / (std::sqrt(math::kPi) * sigma_m_ps * 1e-12 * brightness_cps);
}

double visibility_from_car(double car) {
    require_nonnegative(car, "CAR");
    if (std::isinf(car)) {
        return 1.0;
    }
    return car / (2.0 + car);
}

double sprs_rate(double length_km, double alpha_q_db_per_km, double alpha_c_db_per_km,
                 const SpRSParams& sprs) {
    require_nonnegative(length_km, "fiber length");
    require_nonnegative(alpha_q_db_per_km, "quantum attenuation");
    require_nonnegative(alpha_c_db_per_km, "classical attenuation");
    sprs.validate();
    if (length_km == 0.0) {
        return 0.0;
    }
    const double aq = db_to_nepers(alpha_q_db_per_km);
    const double ac = db_to_nepers(alpha_c_db_per_km);
    const double gain = sprs.beta_per_km_hz * sprs.delta_lambda_nm * sprs.p_in_photons_per_s *
                        sprs.normalization;
    const double d = aq - ac;
    // (e^{-ac L} - e^{-aq L}) / (aq - ac) = L e^{-ac L} * (1 - e^{-d L}) / (d L);
    // the bracket is evaluated with expm1 so the aq == ac diagonal is continuous.
    const double x = d * length_km;
    const double ratio = (x == 0.0) ? 1.0 : -std::expm1(-x) / x;
    return length_km * std::exp(-ac * length_km) * ratio * gain;
}

double calibrated_sprs_normalization(double target_cps, double length_km,
                                     double alpha_q_db_per_km, double alpha_c_db_per_km,
                                     SpRSParams sprs) {
    require_nonnegative(target_cps, "target SpRS rate");
    sprs.normalization = 1.0;
    const double unit = sprs_rate(length_km, alpha_q_db_per_km, alpha_c_db_per_km, sprs);
    if (!(unit > 0.0)) {
        throw DomainError("cannot calibrate SpRS normalization at zero length or zero gain");
    }
    return target_cps / unit;
}

namespace {

void validate_noisy(const NoisyLinkInputs& in) {
    require_nonnegative(in.brightness_cps, "brightness");
    require_nonnegative(in.eta_s, "eta_s");
    require_nonnegative(in.eta_i, "eta_i");
    require_nonnegative(in.sprs_signal_cps, "signal SpRS rate");
    require_nonnegative(in.sprs_idler_cps, "idler SpRS rate");
    require_nonnegative(in.dcr_signal_cps, "signal DCR");
    require_nonnegative(in.dcr_idler_cps, "idler DCR");
    require_nonnegative(in.tau_ps, "tau");
    require_nonnegative(in.sigma_m_ps, "sigma_m");
}

}  // namespace

double accidental_cc_noisy(const NoisyLinkInputs& in) {
    validate_noisy(in);
    const double singles_s = in.brightness_cps * in.eta_s + in.sprs_signal_cps + in.dcr_signal_cps;
    const double singles_i = in.brightness_cps * in.eta_i + in.sprs_idler_cps + in.dcr_idler_cps;
    return singles_s * singles_i * in.tau_ps * 1e-12;
}

double car_noisy(const NoisyLinkInputs& in) {
    validate_noisy(in);
    if (!(in.tau_ps > 0.0)) {
        throw DomainError("noisy CAR requires tau > 0");
    }
    const double acc = accidental_cc_noisy(in);
    if (acc == 0.0) {
        throw DomainError("noisy CAR has zero accidental rate (no singles on one side)");
    }
    return effective_cc(in.brightness_cps, in.eta_s, in.eta_i, in.tau_ps, in.sigma_m_ps) / acc;
}

double optimize_window(double sigma_m_ps, const WindowPolicy& policy) {
    policy.validate();
    if (policy.mode == WindowPolicy::Mode::Fixed) {
        return policy.tau_fixed_ps;
    }
    if (!(sigma_m_ps > 0.0)) {
        throw DomainError("window optimization requires sigma_m > 0");
    }
    double lo = 0.0;
    double hi = sigma_m_ps;
    while (capture_fraction(hi, sigma_m_ps) < policy.capture_fraction) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 0.01) {
        const double mid = 0.5 * (lo + hi);
        if (capture_fraction(mid, sigma_m_ps) >= policy.capture_fraction) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

ChshResult chsh_s(double visibility, double sigma_visibility) {
    require_unit_interval(visibility, "visibility");
    require_nonnegative(sigma_visibility, "visibility uncertainty");
    const double k = 2.0 * std::sqrt(2.0);
    return {k * visibility, k * sigma_visibility};
}

double violation_sigmas(double s, double sigma_s) {
    if (!(sigma_s > 0.0)) {
        throw DomainError("violation significance needs sigma_S > 0");
    }
    return (s - 2.0) / sigma_s;
}

BudgetReport evaluate_budget(const LinkBudget& budget) {
    budget.source.validate();
    budget.signal_leg.validate();
    budget.idler_leg.validate();
    budget.signal_detector.validate();
    budget.idler_detector.validate();
    budget.sync.validate();

    BudgetReport report;
    report.sigma_m_ps = compose_jitter(budget.sigma0_ps, budget.sync.sigma_sync_ps);
    report.tau_ps = optimize_window(report.sigma_m_ps, budget.window);
    report.sprs_signal_cps = sprs_rate(budget.signal_leg.length_km, budget.signal_leg.alpha_q_db_per_km,
                                       budget.signal_leg.alpha_c_db_per_km, budget.sprs_signal);
    report.sprs_idler_cps = sprs_rate(budget.idler_leg.length_km, budget.idler_leg.alpha_q_db_per_km,
                                      budget.idler_leg.alpha_c_db_per_km, budget.sprs_idler);

    NoisyLinkInputs in;
    in.brightness_cps = budget.source.brightness_cps;
    in.eta_s = budget.signal_leg.transmission() * budget.signal_detector.efficiency;
    in.eta_i = budget.idler_leg.transmission() * budget.idler_detector.efficiency;
    in.sprs_signal_cps = report.sprs_signal_cps;
    in.sprs_idler_cps = report.sprs_idler_cps;
    in.dcr_signal_cps = budget.signal_detector.dark_count_cps;
    in.dcr_idler_cps = budget.idler_detector.dark_count_cps;
    in.tau_ps = report.tau_ps;
    in.sigma_m_ps = report.sigma_m_ps;

    report.effective_cc_cps =
        effective_cc(in.brightness_cps, in.eta_s, in.eta_i, in.tau_ps, in.sigma_m_ps);
    report.accidental_cc_cps = accidental_cc_noisy(in);
    report.car = report.accidental_cc_cps > 0.0
                     ? report.effective_cc_cps / report.accidental_cc_cps
                     : std::numeric_limits<double>::infinity();
    report.visibility = visibility_from_car(report.car);
    report.s_parameter = chsh_s(report.visibility, 0.0).s;
    return report;
}

}  // namespace franson::link
