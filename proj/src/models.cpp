#include "regimetest/models.hpp"

#include <algorithm>
#include <cmath>

#include "regimetest/series_stats.hpp"

namespace regimetest::models {

namespace {

// Continued-fraction value H with Q(a,x) = exp(-x + a*ln x - lnGamma(a)) * H,
// valid for x >= a + 1 (modified Lentz).
double upper_gamma_cf(double a, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-15;
    constexpr int kMaxIter = 400;

    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

// Regularized lower incomplete gamma P(a,x) by series, for x < a + 1.
double lower_gamma_series(double a, double x) {
    constexpr double kEps = 1e-15;
    constexpr int kMaxIter = 400;

    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

SeriesSummary summarize(const VolTracks& tracks, double p, std::size_t n_points) {
    if (tracks.sigma_hat.empty()) {
        throw std::invalid_argument("summarize: empty volatility track");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("summarize: p must lie in (0,1)");
    }
    SeriesSummary s;
    double mu_sum = 0.0, sig_sum = 0.0;
    for (std::size_t k = 0; k < tracks.sigma_hat.size(); ++k) {
        mu_sum += tracks.mu_hat[k];
        sig_sum += tracks.sigma_hat[k];
    }
    const double m = static_cast<double>(tracks.sigma_hat.size());
    s.mu_bar = mu_sum / m;
    s.sigma_bar = sig_sum / m;
    s.sigma_p = stats::percentile(tracks.sigma_hat, p);
    s.p = p;
    s.n_points = n_points;
    s.dt = tracks.dt;
    return s;
}

GbmParams gbm_admissible(const SeriesSummary& summary) {
    if (!(summary.sigma_bar > 0.0)) {
        throw InferenceError("gbm_admissible: average volatility must be positive");
    }
    return GbmParams{summary.mu_bar, summary.sigma_bar};
}

namespace {

// Shared constraint solve for both modulated families.
MmgbmParams admissible_split(const SeriesSummary& summary, double mean_sojourn1) {
    if (!(mean_sojourn1 > 0.0)) {
        throw InferenceError("admissible: mean sojourn must be positive");
    }
    if (!(summary.p > 0.0 && summary.p < 1.0)) {
        throw InferenceError("admissible: p must lie in (0,1)");
    }
    if (!(summary.sigma_p < summary.sigma_bar)) {
        throw InferenceError(
            "admissible: sigma_p >= sigma_bar, no nonconstant volatility split exists");
    }
    if (!(summary.sigma_p > 0.0)) {
        throw InferenceError("admissible: percentile volatility must be positive");
    }
    const double p = summary.p;
    MmgbmParams out;
    out.mu1 = out.mu2 = summary.mu_bar;
    out.sigma1 = summary.sigma_p;
    out.sigma2 = (summary.sigma_bar - p * summary.sigma_p) / (1.0 - p);
    out.lambda1 = 1.0 / mean_sojourn1;
    out.lambda2 = out.lambda1 * p / (1.0 - p);
    return out;
}

}  // namespace

MmgbmParams mmgbm_admissible(const SeriesSummary& summary, double mean_sojourn1) {
    return admissible_split(summary, mean_sojourn1);
}

SmgbmParams smgbm_admissible(const SeriesSummary& summary, double shape,
                             double mean_sojourn1) {
    if (!(shape >= 1.0)) {
        throw InferenceError("smgbm_admissible: shape must be >= 1");
    }
    const MmgbmParams base = admissible_split(summary, mean_sojourn1);
    SmgbmParams out;
    out.mu1 = base.mu1;
    out.mu2 = base.mu2;
    out.sigma1 = base.sigma1;
    out.sigma2 = base.sigma2;
    out.shape1 = out.shape2 = shape;
    out.rate1 = shape / mean_sojourn1;
    out.rate2 = out.rate1 * summary.p / (1.0 - summary.p);
    return out;
}

double gamma_hazard(double shape, double rate, double y) {
    if (!(shape >= 1.0)) {
        throw std::invalid_argument("gamma_hazard: shape must be >= 1");
    }
    if (!(rate > 0.0)) {
        throw std::invalid_argument("gamma_hazard: rate must be positive");
    }
    if (y < 0.0) {
        throw std::invalid_argument("gamma_hazard: age must be nonnegative");
    }
    if (shape == 1.0) return rate;  // exponential: constant hazard, exactly
    if (y == 0.0) return 0.0;       // shape > 1: density vanishes at the origin

    const double x = rate * y;
    if (x >= shape + 1.0) {
        // pdf/survival collapses to 1 / (y * H); no exp or lgamma needed,
        // so the tail stays finite however deep it goes.
        return 1.0 / (y * upper_gamma_cf(shape, x));
    }
    const double pdf = std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(y) -
                                x - std::lgamma(shape));
    const double survival = 1.0 - lower_gamma_series(shape, x);
    return pdf / survival;
}

bool validate_step(double max_hazard, double dt, double cap) {
    if (!(dt > 0.0) || !(cap > 0.0) || max_hazard < 0.0) {
        throw std::invalid_argument("validate_step: arguments must be positive");
    }
    return max_hazard * dt <= cap;
}

double max_hazard(const ModelParams& params) {
    struct Visitor {
        double operator()(const GbmParams&) const { return 0.0; }
        double operator()(const MmgbmParams& m) const {
            return std::max(m.lambda1, m.lambda2);
        }
        double operator()(const SmgbmParams& m) const {
            return std::max(m.rate1, m.rate2);
        }
    };
    return std::visit(Visitor{}, params);
}

double stationary_p1(const ModelParams& params) {
    struct Visitor {
        double operator()(const GbmParams&) const { return 1.0; }
        double operator()(const MmgbmParams& m) const {
            const double s1 = 1.0 / m.lambda1;
            const double s2 = 1.0 / m.lambda2;
            return s1 / (s1 + s2);
        }
        double operator()(const SmgbmParams& m) const {
            const double s1 = m.shape1 / m.rate1;
            const double s2 = m.shape2 / m.rate2;
            return s1 / (s1 + s2);
        }
    };
    return std::visit(Visitor{}, params);
}

}  // namespace regimetest::models
