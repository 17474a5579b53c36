#pragma once

#include <span>

#include "regimetest/types.hpp"

namespace regimetest::stats {

/**
 * @brief Simple returns r_k = (S_{k+1} - S_k) / S_k.
 *
 * @throws std::invalid_argument on fewer than 2 prices or a nonpositive price.
 */
ReturnSeries simple_returns(const PricePath& path);

/**
 * @brief Rolling mean and sample standard deviation of the returns,
 *        annualized into drift/volatility tracks.
 *
 * Window k covers returns [k, k + window). mu_hat = mean / dt,
 * sigma_hat = std / sqrt(dt) with the Bessel (n-1) divisor. The variance is
 * accumulated in centered two-pass form; the algebraically equivalent
 * one-pass sum-of-squares form cancels catastrophically and is not used.
 *
 * @throws std::invalid_argument if window < 2 or window > returns length.
 */
VolTracks vol_tracks(const ReturnSeries& rets, int window);

/// Empirical CDF of `sample` evaluated at x: (1/m) * #{k : sample[k] <= x}.
/// @throws std::invalid_argument on an empty sample.
double ecdf_eval(std::span<const double> sample, double x);

/**
 * @brief Left-continuous inverse of the empirical CDF:
 *        inf{x : ecdf(x) >= p}, i.e. the ceil(p*m)-th smallest value.
 *
 * @throws std::invalid_argument if the sample is empty or p is outside (0,1).
 */
double percentile(std::span<const double> sample, double p);

/**
 * @brief Completed squeeze sojourns of a volatility track.
 *
 * The threshold is the p-percentile of sigma_hat. A step is in squeeze when
 * sigma_hat <= threshold (ties included); an exit requires a strict
 * exceedance. Durations are the gaps between alternating hitting offsets:
 * a squeeze segment counts only if an exceedance both precedes and follows
 * it, so a leading segment and a trailing unfinished one are dropped.
 *
 * An empty result (L = 0) is valid here; downstream consumers reject it.
 */
SqueezeDurations squeeze_durations(const VolTracks& tracks, double p);

/// Same extraction against an explicitly supplied threshold.
SqueezeDurations squeeze_durations_at(std::span<const double> sigma_hat,
                                      double threshold, double p);

/**
 * @brief First r descriptive moments of the durations.
 *
 * t1 = mean, t2 = sample std (divisor L-1), t3 = skewness and t4 = kurtosis
 * with the third/fourth central moments taken over divisor L. The mixed
 * divisors are part of the statistic's definition.
 *
 * @throws std::invalid_argument if r is outside {1..4}.
 * @throws DegenerateError if L < 1 (r = 1), L < 2 (r >= 2), or t2 = 0 (r >= 3).
 */
StatVector stat_vector(const SqueezeDurations& sq, int r);

/// Everything the squeeze pipeline produces for one series.
struct PipelineResult {
    VolTracks tracks;
    SqueezeDurations durations;
    StatVector stats;
};

/// prices -> returns -> tracks -> durations -> statistic, in one call.
/// Observed and surrogate series must go through this identical path.
PipelineResult run_pipeline(const PricePath& path, double p, int window, int r);

}  // namespace regimetest::stats
