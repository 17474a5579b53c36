#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "regimetest/inference.hpp"
#include "regimetest/models.hpp"
#include "regimetest/types.hpp"

namespace regimetest::io {

/// Every knob of a run, with defaults for 5-minute bars on a 250-day,
/// 6-hour trading year. All fields are settable by key, from a flat
/// `key = value` config file or one at a time (CLI flags map onto set()).
struct RunConfig {
    double dt = 5.0 / (250.0 * 360.0);  // years per step
    double p = 0.15;
    int window = 20;
    int r = 4;
    int B = 200;
    std::uint64_t seed = 42;
    int redraw_limit = 20;
    double step_cap = 0.1;
    double unit_scale = 1.0 / 250.0;          // years per sojourn-grid unit
    std::vector<double> sojourn_grid;          // default 5:15:0.5
    std::vector<double> shape_grid;            // default 1,2,3
    std::string gap_policy = "none";           // none | exclude
    std::string out_dir = ".";

    RunConfig();

    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;
    void load_file(const std::string& path);
    void validate() const;
    static std::vector<std::string> keys();

    infer::TestConfig test_config() const;
    infer::ThetaGrid theta_grid(infer::Hypothesis h) const;
};

/// Parse "lo:hi:step" or a comma list into grid values.
std::vector<double> parse_grid(const std::string& text);

/// A loaded price series plus everything worth telling the user about it.
struct LoadedSeries {
    PricePath path;
    std::vector<std::string> warnings;
    std::size_t gap_count = 0;  // off-spacing steps seen in the raw file
};

/**
 * @brief Read a delimited series file (comma or tab, header must name
 *        `timestamp` and `price` columns) into an equispaced price path.
 *
 * Timestamps may be ISO-8601 or plain integers. The modal row spacing must
 * cover at least 99% of the gaps; rows that break it are reported as
 * warnings (and skipped, sessions re-stitched, under gap_policy=exclude).
 * The configured dt always wins over inferred spacing, with a warning on
 * mismatch.
 *
 * @throws InputError on unreadable files, malformed rows (with the line
 *         number), nonpositive prices, non-equispaced data, or fewer than
 *         window+3 usable rows.
 */
LoadedSeries load_series(const std::string& file, const RunConfig& config);

/// Write `timestamp,price` rows at full round-trip precision; loading the
/// result reproduces the prices bit for bit.
void dump_series(const PricePath& path, const std::string& file);

/// Observed-side record behind the stats command.
struct StatsRecord {
    long occurrences = 0;    // number of completed squeezes
    StatVector t;            // r = number of components that exist for the data
    double threshold = 0.0;  // p-percentile of the volatility track
    models::SeriesSummary summary;
};

/// Compute the observed statistic row. Components beyond what the data
/// supports are left out of `t` (markers, not numbers, when formatted).
/// @throws DegenerateError when not a single completed squeeze exists.
StatsRecord cmd_stats(const PricePath& path, const RunConfig& config);

/// One aligned row, two decimals, "--" for absent components.
std::string format_stats_row(const StatsRecord& rec, const std::string& id);
std::string stats_header();

/// Write the stats row to <out_dir>/<id>_stats.txt.
void write_stats(const StatsRecord& rec, const std::string& id,
                 const std::string& out_dir);

/// Full surrogate test of the series under one hypothesis.
infer::TestReport cmd_test(const PricePath& path, const RunConfig& config,
                           infer::Hypothesis hypothesis);

/// Composite row, three decimals.
std::string format_composite_row(const infer::TestReport& report,
                                 const std::string& id);

/// Write <id>_<hyp>_alpha.txt (per-theta table + composite row) and
/// <id>_<hyp>_report.json (full-precision machine dump).
void write_report(const infer::TestReport& report, const std::string& id,
                  const std::string& out_dir);

/// Emit, per grid point, the B x r surrogate statistic matrix plus the
/// observed point and percentile-based five-number summaries:
/// <id>_<hyp>_theta###_surrogates.csv, <id>_<hyp>_observed.csv,
/// <id>_<hyp>_summary.csv.
void cmd_plotdata(const PricePath& path, const RunConfig& config,
                  infer::Hypothesis hypothesis, const std::string& id,
                  const std::string& out_dir);

/// Grid objective and argmin.
infer::ObjectiveReport cmd_estimate(const PricePath& path, const RunConfig& config,
                                    infer::Hypothesis hypothesis);

/// Write <id>_<hyp>_objective.csv (full precision) with the argmin row last.
void write_estimate(const infer::ObjectiveReport& report, const std::string& id,
                    const std::string& out_dir);

/**
 * @brief Dump one surrogate path for the admissible model the test would
 *        use at (sojourn, shape), seeded by (seed, replication).
 *
 * Columns: timestamp,price plus state and age where the scheme has them.
 * The file loads back through load_series.
 */
void cmd_simulate_dump(const PricePath& observed, const RunConfig& config,
                       infer::Hypothesis hypothesis, double sojourn, double shape,
                       std::uint64_t replication, const std::string& out_file);

/// min / q1 / median / q3 / max under the same percentile convention as the
/// squeeze threshold (median of an even sample is the lower middle value).
std::array<double, 5> five_number_summary(std::span<const double> sample);

}  // namespace regimetest::io
