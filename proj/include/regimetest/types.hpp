#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace regimetest {

// Error taxonomy. Each class maps to a distinct status/exit code at the
// C API and CLI boundaries; everything else (std::invalid_argument) is a
// violated precondition.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad files, bad rows, bad configuration values.
class InputError : public Error {
public:
    using Error::Error;
};

// Model construction or surrogate generation failed (inadmissible summary,
// redraw budget exhausted, step-size cap violated).
class InferenceError : public Error {
public:
    using Error::Error;
};

// The requested statistic is undefined on the data (no completed squeezes,
// zero variance where a higher moment needs it).
class DegenerateError : public Error {
public:
    using Error::Error;
};

// Failure writing an output artifact.
class IoError : public Error {
public:
    using Error::Error;
};

/// Equispaced positive price series; dt is the step length in years.
struct PricePath {
    std::vector<double> prices;
    double dt = 0.0;

    std::size_t size() const { return prices.size(); }
};

/// Simple (arithmetic) returns of a price series; one entry per step.
struct ReturnSeries {
    std::vector<double> returns;
    double dt = 0.0;
};

/// Rolling drift/volatility estimates, annualized. Entry k covers the
/// window of `window` consecutive returns ending at return k + window - 1.
struct VolTracks {
    std::vector<double> mu_hat;     // 1/year
    std::vector<double> sigma_hat;  // 1/sqrt(year), nonnegative
    int window = 0;
    double dt = 0.0;

    std::size_t size() const { return sigma_hat.size(); }
};

/// Completed low-volatility sojourns, measured in steps. `threshold` is the
/// p-percentile of the sigma_hat sample the durations were extracted from.
struct SqueezeDurations {
    std::vector<long> durations;  // each >= 1
    double threshold = 0.0;
    double p = 0.0;

    std::size_t count() const { return durations.size(); }
};

/// Descriptive-moment vector of the squeeze durations: t[0] mean (steps),
/// t[1] sample std (steps), t[2] skewness, t[3] kurtosis. Only the first
/// `r` components are populated.
struct StatVector {
    std::array<double, 4> t{};
    int r = 0;

    double operator[](int j) const { return t[static_cast<std::size_t>(j)]; }
};

}  // namespace regimetest
