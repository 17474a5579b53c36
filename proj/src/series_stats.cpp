#include "regimetest/series_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace regimetest::stats {

ReturnSeries simple_returns(const PricePath& path) {
    if (path.prices.size() < 2) {
        throw std::invalid_argument("simple_returns: need at least 2 prices");
    }
    if (!(path.dt > 0.0)) {
        throw std::invalid_argument("simple_returns: dt must be positive");
    }
    ReturnSeries out;
    out.dt = path.dt;
    out.returns.reserve(path.prices.size() - 1);
    for (std::size_t k = 0; k + 1 < path.prices.size(); ++k) {
        const double prev = path.prices[k];
        const double next = path.prices[k + 1];
        if (!(prev > 0.0) || !(next > 0.0)) {
            throw std::invalid_argument("simple_returns: nonpositive price at index " +
                                        std::to_string(prev > 0.0 ? k + 1 : k));
        }
        out.returns.push_back((next - prev) / prev);
    }
    return out;
}

VolTracks vol_tracks(const ReturnSeries& rets, int window) {
    if (window < 2) {
        throw std::invalid_argument("vol_tracks: window must be >= 2");
    }
    const std::size_t n = static_cast<std::size_t>(window);
    if (rets.returns.size() < n) {
        throw std::invalid_argument("vol_tracks: window longer than return series");
    }
    if (!(rets.dt > 0.0)) {
        throw std::invalid_argument("vol_tracks: dt must be positive");
    }

    VolTracks out;
    out.window = window;
    out.dt = rets.dt;
    const std::size_t m = rets.returns.size() - n + 1;
    out.mu_hat.reserve(m);
    out.sigma_hat.reserve(m);

    const double sqrt_dt = std::sqrt(rets.dt);
    for (std::size_t k = 0; k < m; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += rets.returns[k + i];
        const double mean = sum / static_cast<double>(n);

        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = rets.returns[k + i] - mean;
            ss += d * d;
        }
        double var = ss / static_cast<double>(n - 1);
        if (var < 0.0) var = 0.0;  // only reachable through rounding noise

        out.mu_hat.push_back(mean / rets.dt);
        out.sigma_hat.push_back(std::sqrt(var) / sqrt_dt);
    }
    return out;
}

double ecdf_eval(std::span<const double> sample, double x) {
    if (sample.empty()) {
        throw std::invalid_argument("ecdf_eval: empty sample");
    }
    std::size_t count = 0;
    for (double v : sample) {
        if (v <= x) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(sample.size());
}

double percentile(std::span<const double> sample, double p) {
    if (sample.empty()) {
        throw std::invalid_argument("percentile: empty sample");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("percentile: p must lie in (0,1)");
    }
    const std::size_t m = sample.size();
    // Smallest rank j with ecdf(x_(j)) = j/m >= p, with j/m rounded exactly
    // as ecdf_eval rounds it. Computing ceil(p*m) instead disagrees by one
    // rank whenever p*m straddles an integer by less than an ulp.
    const double md = static_cast<double>(m);
    std::size_t lo = 1, hi = m;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (static_cast<double>(mid) / md >= p) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    const std::size_t rank = lo;

    std::vector<double> work(sample.begin(), sample.end());
    auto nth = work.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(work.begin(), nth, work.end());
    return *nth;
}

SqueezeDurations squeeze_durations_at(std::span<const double> sigma_hat,
                                      double threshold, double p) {
    SqueezeDurations out;
    out.threshold = threshold;
    out.p = p;

    const std::size_t m = sigma_hat.size();
    // Alternating hitting offsets: b = first exceedance at or after a,
    // a' = first return to the squeeze at or after b. A duration is a
    // completed (a', b') pair; the scan starts at the first exceedance so the
    // leading segment never counts, and a final open segment has no b'.
    std::size_t k = 0;
    while (k < m && sigma_hat[k] <= threshold) ++k;  // b_0
    while (k < m) {
        while (k < m && sigma_hat[k] > threshold) ++k;  // a_i
        const std::size_t enter = k;
        while (k < m && sigma_hat[k] <= threshold) ++k;  // b_i
        if (k < m) {
            out.durations.push_back(static_cast<long>(k - enter));
        }
    }
    return out;
}

SqueezeDurations squeeze_durations(const VolTracks& tracks, double p) {
    if (tracks.sigma_hat.empty()) {
        throw std::invalid_argument("squeeze_durations: empty volatility track");
    }
    const double threshold = percentile(tracks.sigma_hat, p);
    return squeeze_durations_at(tracks.sigma_hat, threshold, p);
}

StatVector stat_vector(const SqueezeDurations& sq, int r) {
    if (r < 1 || r > 4) {
        throw std::invalid_argument("stat_vector: r must lie in {1,..,4}");
    }
    const std::size_t L = sq.durations.size();
    if (L < 1 || (r >= 2 && L < 2)) {
        throw DegenerateError("stat_vector: " + std::to_string(L) +
                              " squeeze durations, need " + (r >= 2 ? "2" : "1") +
                              " for r=" + std::to_string(r));
    }

    StatVector out;
    out.r = r;

    const double n = static_cast<double>(L);
    double sum = 0.0;
    for (long d : sq.durations) sum += static_cast<double>(d);
    const double mean = sum / n;
    out.t[0] = mean;
    if (r == 1) return out;

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (long d : sq.durations) {
        const double c = static_cast<double>(d) - mean;
        const double c2 = c * c;
        m2 += c2;
        m3 += c2 * c;
        m4 += c2 * c2;
    }
    const double sd = std::sqrt(m2 / (n - 1.0));
    out.t[1] = sd;
    if (r == 2) return out;

    if (!(sd > 0.0)) {
        throw DegenerateError("stat_vector: zero variance, skewness/kurtosis undefined");
    }
    out.t[2] = (m3 / n) / (sd * sd * sd);
    if (r == 3) return out;
    out.t[3] = (m4 / n) / (sd * sd * sd * sd);
    return out;
}

PipelineResult run_pipeline(const PricePath& path, double p, int window, int r) {
    PipelineResult out;
    const ReturnSeries rets = simple_returns(path);
    out.tracks = vol_tracks(rets, window);
    out.durations = squeeze_durations(out.tracks, p);
    out.stats = stat_vector(out.durations, r);
    return out;
}

}  // namespace regimetest::stats
