#pragma once

#include <cstddef>
#include <variant>

#include "regimetest/types.hpp"

namespace regimetest::models {

/// Constant-coefficient geometric Brownian motion.
struct GbmParams {
    double mu = 0.0;     // 1/year
    double sigma = 0.0;  // 1/sqrt(year)
};

/// Two-state Markov-modulated GBM. State 1 is the low-volatility regime
/// (sigma1 <= sigma2); lambda_i is the exponential exit rate of state i.
struct MmgbmParams {
    double mu1 = 0.0, mu2 = 0.0;
    double sigma1 = 0.0, sigma2 = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0;  // 1/year
};

/// Two-state semi-Markov-modulated GBM with gamma holding times
/// Gamma(shape_i, rate_i) in state i. Shapes >= 1 keep the hazard bounded
/// by the rate, which the Bernoulli step scheme requires.
struct SmgbmParams {
    double mu1 = 0.0, mu2 = 0.0;
    double sigma1 = 0.0, sigma2 = 0.0;
    double shape1 = 1.0, shape2 = 1.0;  // dimensionless
    double rate1 = 0.0, rate2 = 0.0;    // 1/year
};

using ModelParams = std::variant<GbmParams, MmgbmParams, SmgbmParams>;

/// Observable-side aggregates a candidate model must reproduce: time
/// averages of the drift/volatility tracks and the p-percentile of the
/// volatility track.
struct SeriesSummary {
    double mu_bar = 0.0;     // 1/year
    double sigma_bar = 0.0;  // 1/sqrt(year)
    double sigma_p = 0.0;    // 1/sqrt(year)
    double p = 0.0;
    std::size_t n_points = 0;
    double dt = 0.0;
};

/// Aggregate a volatility track into the summary the solvers consume.
SeriesSummary summarize(const VolTracks& tracks, double p, std::size_t n_points);

/// The admissible GBM is unique: drift and volatility equal the track
/// averages. @throws InferenceError if sigma_bar <= 0.
GbmParams gbm_admissible(const SeriesSummary& summary);

/**
 * @brief The admissible MMGBM with mu1 = mu2 and sigma1 pinned to the
 *        p-percentile, indexed by the mean sojourn of state 1 (years).
 *
 * Solves p*sigma1 + (1-p)*sigma2 = sigma_bar for sigma2 and pins the
 * occupancy of state 1 to p via lambda2 = lambda1 * p/(1-p).
 *
 * @throws InferenceError if sigma_p >= sigma_bar (no nonconstant volatility
 *         split exists) or mean_sojourn1 <= 0.
 */
MmgbmParams mmgbm_admissible(const SeriesSummary& summary, double mean_sojourn1);

/// Semi-Markov counterpart with equal gamma shapes in both states;
/// rate1 = shape/mean_sojourn1 and rate2 = rate1 * p/(1-p) keep the same
/// occupancy constraint. @throws InferenceError as above, or if shape < 1.
SmgbmParams smgbm_admissible(const SeriesSummary& summary, double shape,
                             double mean_sojourn1);

/**
 * @brief Hazard rate of Gamma(shape, rate) at age y (years).
 *
 * Evaluated through the survival function: a continued fraction for the
 * regularized upper incomplete gamma when rate*y is large, a series
 * otherwise. Subtracting the lower incomplete gamma from Gamma(shape)
 * directly would cancel to garbage well before rate*y reaches 50.
 *
 * Constant and equal to `rate` for shape = 1; zero at y = 0 and increasing
 * toward `rate` for shape > 1.
 *
 * @throws std::invalid_argument if shape < 1, rate <= 0, or y < 0.
 */
double gamma_hazard(double shape, double rate, double y);

/// Bernoulli step-size check: max_hazard * dt <= cap (boundary inclusive).
bool validate_step(double max_hazard, double dt, double cap);

/// Largest transition intensity the model can produce (0 for GBM; the
/// gamma hazard of a shape >= 1 state never exceeds its rate).
double max_hazard(const ModelParams& params);

/// Long-run fraction of time spent in state 1 (1 for GBM).
double stationary_p1(const ModelParams& params);

}  // namespace regimetest::models
