#include "franson/peak_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "franson/csv.hpp"
#include "franson/errors.hpp"

namespace franson::coinc {

namespace {

struct Samples {
    std::vector<double> x;
    std::vector<double> y;
};

double sse(const Samples& s, double a, double mu, double sigma) {
    double sum = 0.0;
    for (std::size_t k = 0; k < s.x.size(); ++k) {
        const double z = (s.x[k] - mu) / sigma;
        const double r = s.y[k] - a * std::exp(-0.5 * z * z);
        sum += r * r;
    }
    return sum;
}

}  // namespace

PeakFit fit_gaussian(const CoincidenceHistogram& hist, double lo_ps, double hi_ps) {
    Samples s;
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        const double c = hist.bin_center(i);
        if (c >= lo_ps && c < hi_ps) {
            s.x.push_back(c);
            s.y.push_back(static_cast<double>(hist.counts[i]));
            nonzero += hist.counts[i] > 0 ? 1 : 0;
        }
    }
    if (nonzero < 5) {
        throw DomainError("Gaussian fit needs at least 5 nonzero bins in the region");
    }

    double w = 0.0, m1 = 0.0;
    for (std::size_t k = 0; k < s.x.size(); ++k) {
        w += s.y[k];
        m1 += s.y[k] * s.x[k];
    }
    const double mean = m1 / w;
    double m2 = 0.0;
    for (std::size_t k = 0; k < s.x.size(); ++k) {
        m2 += s.y[k] * (s.x[k] - mean) * (s.x[k] - mean);
    }
    const double moment_sigma = std::sqrt(std::max(m2 / w, hist.bin_width_ps * hist.bin_width_ps / 12.0));
    const double moment_amp = w * hist.bin_width_ps / (moment_sigma * std::sqrt(2.0 * 3.14159265358979323846));

    Eigen::Vector3d p(moment_amp, mean, moment_sigma);
    double cost = sse(s, p[0], p[1], p[2]);
    double lambda = 1e-3;

    for (int iter = 1; iter <= 100; ++iter) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            const double dx = s.x[k] - p[1];
            const double e = std::exp(-0.5 * dx * dx / (p[2] * p[2]));
            const double f = p[0] * e;
            const Eigen::Vector3d j(e, f * dx / (p[2] * p[2]), f * dx * dx / (p[2] * p[2] * p[2]));
            jtj.noalias() += j * j.transpose();
            jtr.noalias() += j * (s.y[k] - f);
        }
        Eigen::Matrix3d damped = jtj;
        damped.diagonal() *= (1.0 + lambda);
        const Eigen::Vector3d step = damped.ldlt().solve(jtr);
        const double rel = (step.array().abs() / p.array().abs().max(1e-300)).maxCoeff();

        Eigen::Vector3d trial = p + step;
        trial[2] = std::fabs(trial[2]);
        const double trial_cost = trial[2] > 0.0 ? sse(s, trial[0], trial[1], trial[2]) : cost * 2 + 1;
        if (trial_cost <= cost) {
            p = trial;
            cost = trial_cost;
            lambda = std::max(lambda / 10.0, 1e-12);
        } else {
            lambda *= 10.0;
        }
        if (rel < 1e-8 || !std::isfinite(rel)) {
            if (!std::isfinite(rel) || !(p[2] > 0.0)) {
                break;
            }
            return {p[1], p[2], p[0], std::sqrt(cost), iter};
        }
    }
    throw ConvergenceError("Gaussian fit did not converge in 100 iterations", mean, moment_sigma,
                           moment_amp);
}

FringeFit fit_fringe(std::span<const FringePoint> points) {
    if (points.size() < 3) {
        throw DomainError("fringe fit needs at least 3 phase points");
    }
    bool any = false;
    for (const auto& pt : points) {
        if (!(pt.duration_s > 0.0)) {
            throw DomainError("fringe point durations must be > 0");
        }
        any = any || pt.count > 0;
    }
    if (!any) {
        throw DomainError("degenerate fringe scan: every count is zero");
    }

    // count = d (C0 + a cos phi + b sin phi) is linear in (C0, a, b).
    Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (const auto& pt : points) {
        const Eigen::Vector3d x(pt.duration_s, pt.duration_s * std::cos(pt.phase_rad),
                                pt.duration_s * std::sin(pt.phase_rad));
        const double y = static_cast<double>(pt.count);
        const double weight = 1.0 / std::max(y, 1.0);
        normal.noalias() += weight * x * x.transpose();
        rhs.noalias() += weight * y * x;
    }
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(normal);
    if (!lu.isInvertible()) {
        throw DomainError("degenerate fringe scan: phases do not constrain the cosine");
    }
    const Eigen::Vector3d beta = lu.solve(rhs);
    const Eigen::Matrix3d cov = lu.inverse();

    const double c0 = beta[0];
    if (!(c0 > 0.0)) {
        throw DomainError("degenerate fringe scan: fitted mean rate is not positive");
    }
    const double amp = std::hypot(beta[1], beta[2]);

    FringeFit fit;
    fit.mean_rate_cps = c0;
    fit.phase_offset_rad = std::atan2(-beta[2], beta[1]);
    double v = amp / c0;
    Eigen::Vector3d grad(-v / c0, 0.0, 0.0);
    if (amp > 0.0) {
        grad[1] = beta[1] / (c0 * amp);
        grad[2] = beta[2] / (c0 * amp);
    }
    fit.sigma_visibility = std::sqrt(std::max(0.0, grad.dot(cov * grad)));
    if (v > 1.0) {
        v = 1.0;
        fit.clipped = true;
    }
    fit.visibility = v;

    for (const auto& pt : points) {
        const double model =
            pt.duration_s * (c0 + beta[1] * std::cos(pt.phase_rad) + beta[2] * std::sin(pt.phase_rad));
        const double y = static_cast<double>(pt.count);
        fit.chi2 += (y - model) * (y - model) / std::max(y, 1.0);
    }
    return fit;
}

void write_fit_report(std::ostream& out, const FringeFit& fit) {
    out << "V: " << csv::format(fit.visibility) << '\n'
        << "sigma_V: " << csv::format(fit.sigma_visibility) << '\n'
        << "phi0_rad: " << csv::format(fit.phase_offset_rad) << '\n'
        << "C0: " << csv::format(fit.mean_rate_cps) << '\n'
        << "clipped: " << (fit.clipped ? "true" : "false") << '\n';
}

void write_fit_csv(std::ostream& out, const FringeFit& fit) {
    csv::Writer w(out);
    w.header({"V", "sigma_V", "phi0_rad", "C0"});
    w.row(fit.visibility, fit.sigma_visibility, fit.phase_offset_rad, fit.mean_rate_cps);
}

}  // namespace franson::coinc
