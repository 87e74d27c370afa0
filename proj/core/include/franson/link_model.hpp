#pragma once

// Closed-form visibility and noise budget for a Franson link: jitter
// composition, windowed and accidental coincidence rates, CAR, Raman noise
// from a co-propagating classical channel, and the CHSH conversion.
//
// Units: times in picoseconds, rates in counts/s, lengths in km,
// attenuation in dB/km at the API (converted to Np/km internally).

#include <initializer_list>

namespace franson::link {

struct SourceParams {
    double brightness_cps = 1e8;
    double lambda_s_nm = 1575.0;
    double lambda_i_nm = 1545.3;
    double intrinsic_visibility = 1.0;
    double photon_coherence_ps = 2.0;
    double pump_coherence_ps = 1e6;

    void validate() const;
};

struct DetectorParams {
    double jitter_sigma_ps = 21.2132;  ///< per detector; two of them give 30 ps
    double efficiency = 1.0;
    double dark_count_cps = 100.0;
    double dead_time_ps = 0.0;

    void validate() const;
};

struct FiberLeg {
    double length_km = 0.0;
    double alpha_q_db_per_km = 0.20;
    double alpha_c_db_per_km = 0.33;
    double thermal_delay_coeff_ps_per_km_k = 40.0;
    /// Lumped insertion loss of interferometer, WDM and filters on this leg.
    double extra_loss_db = 0.0;
    double group_delay_ps_per_km = 4.9e6;
    /// Residual chromatic dispersion folded into one Gaussian jitter term.
    double dispersion_jitter_ps = 0.0;

    void validate() const;
    /// Photon survival probability over the leg, including extra_loss_db.
    double transmission() const;
    double propagation_delay_ps() const { return length_km * group_delay_ps_per_km; }
};

struct SpRSParams {
    double beta_per_km_hz = 0.065e-23;
    double delta_lambda_nm = 1.0;
    double p_in_photons_per_s = 6.58e14;
    /// Overall scale applied to the Raman formula; the absolute value of the
    /// formula in the stated units is not self-consistent, so it is a knob.
    double normalization = 1.0;

    void validate() const;
};

inline constexpr double kBeta1555 = 0.4e-23;
inline constexpr double kBeta1575 = 0.065e-23;

inline constexpr double kAlpha1310DbPerKm = 0.33;
inline constexpr double kAlpha1555DbPerKm = 0.19;
inline constexpr double kAlpha1575DbPerKm = 0.20;

struct SyncParams {
    double sigma_sync_ps = 0.0;
    double rof_excess_jitter_ps = 29.3;

    void validate() const;
};

struct WindowPolicy {
    enum class Mode { Fixed, CaptureConstrained };

    Mode mode = Mode::CaptureConstrained;
    double tau_fixed_ps = 100.0;
    double capture_fraction = 0.98;

    void validate() const;
};

struct BudgetReport {
    double sigma_m_ps = 0.0;
    double tau_ps = 0.0;
    double effective_cc_cps = 0.0;
    double accidental_cc_cps = 0.0;
    double car = 0.0;
    double visibility = 0.0;
    double sprs_signal_cps = 0.0;
    double sprs_idler_cps = 0.0;
    double s_parameter = 0.0;
};

/// Everything the analytic budget needs for one scenario. `sigma0_ps` is the
/// combined detection jitter of the coincidence peak (both detectors).
struct LinkBudget {
    SourceParams source;
    FiberLeg signal_leg;
    FiberLeg idler_leg;
    DetectorParams signal_detector;
    DetectorParams idler_detector;
    SyncParams sync;
    SpRSParams sprs_signal;
    SpRSParams sprs_idler;
    WindowPolicy window;
    double sigma0_ps = 30.0;
};

double db_to_nepers(double db_per_km);

double compose_jitter(double sigma0_ps, double sigma_sync_ps);
/// Quadrature sum of any number of independent Gaussian jitter terms.
double compose_jitter(std::initializer_list<double> sigmas_ps);
double excess_jitter(double sigma_total_ps, double sigma_base_ps);

/// erf(sqrt(ln 2) * tau / sigma_m): the windowed fraction of true coincidences.
double capture_fraction(double tau_ps, double sigma_m_ps);

/// Full width of a symmetric window that captures exactly capture_fraction(tau, sigma)
/// of a Gaussian with standard deviation sigma: 2*sqrt(2 ln 2)*tau.
double gaussian_window_width(double tau_ps);

double effective_cc(double brightness_cps, double eta_s, double eta_i, double tau_ps,
                    double sigma_m_ps);
double accidental_cc(double brightness_cps, double eta_s, double eta_i, double tau_ps);

/// Throws DomainError for tau = 0; see car_ideal_small_tau_limit.
double car_ideal(double brightness_cps, double tau_ps, double sigma_m_ps);
double car_ideal_small_tau_limit(double brightness_cps, double sigma_m_ps);

double visibility_from_car(double car);

double sprs_rate(double length_km, double alpha_q_db_per_km, double alpha_c_db_per_km,
                 const SpRSParams& sprs);

/// Normalization that makes sprs_rate hit `target_cps` at `length_km`.
double calibrated_sprs_normalization(double target_cps, double length_km,
                                     double alpha_q_db_per_km, double alpha_c_db_per_km,
                                     SpRSParams sprs);

struct NoisyLinkInputs {
    double brightness_cps = 0.0;
    double eta_s = 1.0;
    double eta_i = 1.0;
    double sprs_signal_cps = 0.0;
    double sprs_idler_cps = 0.0;
    double dcr_signal_cps = 0.0;
    double dcr_idler_cps = 0.0;
    double tau_ps = 0.0;
    double sigma_m_ps = 0.0;
};

double accidental_cc_noisy(const NoisyLinkInputs& in);
double car_noisy(const NoisyLinkInputs& in);

/// Coincidence window for the given peak width. Capture-constrained mode
/// returns the smallest tau (to 0.01 ps) whose capture fraction reaches the
/// policy's target.
double optimize_window(double sigma_m_ps, const WindowPolicy& policy);

struct ChshResult {
    double s = 0.0;
    double sigma_s = 0.0;
};

ChshResult chsh_s(double visibility, double sigma_visibility);
double violation_sigmas(double s, double sigma_s);

BudgetReport evaluate_budget(const LinkBudget& budget);

}  // namespace franson::link
