#include "regimetest/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "regimetest/series_stats.hpp"
#include "regimetest/simulate.hpp"

namespace regimetest::io {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream iss(line);
    while (std::getline(iss, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
        throw InputError(what + ": not a number: '" + text + "'");
    }
    return v;
}

long long parse_int(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    char* end = nullptr;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size()) {
        throw InputError(what + ": not an integer: '" + text + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    char* end = nullptr;
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size()) {
        throw InputError(what + ": not an unsigned integer: '" + text + "'");
    }
    return static_cast<std::uint64_t>(v);
}

std::string full_precision(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string grid_to_string(const std::vector<double>& grid) {
    std::string out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) out += ',';
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%g", grid[i]);
        out += buf;
    }
    return out;
}

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's algorithm).
long long days_from_civil(long long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

struct Timestamp {
    bool is_iso = false;
    long long value = 0;  // epoch seconds for ISO, raw value for integers
};

bool try_parse_timestamp(const std::string& raw, Timestamp& out) {
    const std::string t = trim(raw);
    if (t.empty()) return false;

    char* end = nullptr;
    const long long plain = std::strtoll(t.c_str(), &end, 10);
    if (end == t.c_str() + t.size()) {
        out = Timestamp{false, plain};
        return true;
    }

    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
    int consumed = 0;
    if (std::sscanf(t.c_str(), "%d-%u-%u%n", &y, &mo, &d, &consumed) != 3) return false;
    if (mo < 1 || mo > 12 || d < 1 || d > 31) return false;
    const char* rest = t.c_str() + consumed;
    if (*rest == 'T' || *rest == ' ') {
        ++rest;
        int used = 0;
        if (std::sscanf(rest, "%u:%u%n", &h, &mi, &used) != 2) return false;
        rest += used;
        if (*rest == ':') {
            ++rest;
            if (std::sscanf(rest, "%u%n", &s, &used) != 1) return false;
            rest += used;
        }
        if (h > 23 || mi > 59 || s > 60) return false;
    }
    if (*rest != '\0') return false;
    out = Timestamp{true,
                    days_from_civil(y, mo, d) * 86400LL + h * 3600LL + mi * 60LL + s};
    return true;
}

std::ofstream open_output(const fs::path& file) {
    if (file.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(file.parent_path(), ec);
    }
    std::ofstream out(file);
    if (!out) {
        throw IoError("cannot open '" + file.string() + "' for writing");
    }
    return out;
}

void finish_output(std::ofstream& out, const fs::path& file) {
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + file.string() + "'");
    }
}

std::string alpha_cell(double v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%8.3f", v);
    return buf;
}

}  // namespace

RunConfig::RunConfig() {
    sojourn_grid = parse_grid("5:15:0.5");
    shape_grid = parse_grid("1,2,3");
}

std::vector<double> parse_grid(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw InputError("grid: empty specification");

    std::vector<double> out;
    if (t.find(':') != std::string::npos) {
        const std::vector<std::string> parts = split(t, ':');
        if (parts.size() != 3) {
            throw InputError("grid: expected lo:hi:step, got '" + text + "'");
        }
        const double lo = parse_double(parts[0], "grid lo");
        const double hi = parse_double(parts[1], "grid hi");
        const double step = parse_double(parts[2], "grid step");
        if (!(step > 0.0) || hi < lo) {
            throw InputError("grid: need lo <= hi and step > 0 in '" + text + "'");
        }
        const std::size_t count =
            static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(lo + static_cast<double>(i) * step);
        }
        return out;
    }
    for (const std::string& item : split(t, ',')) {
        out.push_back(parse_double(item, "grid value"));
    }
    return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    const std::string k = lower(trim(key));
    if (k == "dt") dt = parse_double(value, "dt");
    else if (k == "p") p = parse_double(value, "p");
    else if (k == "window") window = static_cast<int>(parse_int(value, "window"));
    else if (k == "r") r = static_cast<int>(parse_int(value, "r"));
    else if (k == "b") B = static_cast<int>(parse_int(value, "B"));
    else if (k == "seed") seed = parse_u64(value, "seed");
    else if (k == "redraw_limit") redraw_limit = static_cast<int>(parse_int(value, "redraw_limit"));
    else if (k == "step_cap") step_cap = parse_double(value, "step_cap");
    else if (k == "unit_scale") unit_scale = parse_double(value, "unit_scale");
    else if (k == "grid") sojourn_grid = parse_grid(value);
    else if (k == "shape_grid") shape_grid = parse_grid(value);
    else if (k == "gap_policy") gap_policy = lower(trim(value));
    else if (k == "out_dir") out_dir = trim(value);
    else throw InputError("config: unknown key '" + key + "'");
}

std::string RunConfig::get(const std::string& key) const {
    const std::string k = lower(trim(key));
    if (k == "dt") return full_precision(dt);
    if (k == "p") return full_precision(p);
    if (k == "window") return std::to_string(window);
    if (k == "r") return std::to_string(r);
    if (k == "b") return std::to_string(B);
    if (k == "seed") return std::to_string(seed);
    if (k == "redraw_limit") return std::to_string(redraw_limit);
    if (k == "step_cap") return full_precision(step_cap);
    if (k == "unit_scale") return full_precision(unit_scale);
    if (k == "grid") return grid_to_string(sojourn_grid);
    if (k == "shape_grid") return grid_to_string(shape_grid);
    if (k == "gap_policy") return gap_policy;
    if (k == "out_dir") return out_dir;
    throw InputError("config: unknown key '" + key + "'");
}

std::vector<std::string> RunConfig::keys() {
    return {"dt",         "p",         "window",     "r",
            "b",          "seed",      "redraw_limit", "step_cap",
            "unit_scale", "grid",      "shape_grid", "gap_policy",
            "out_dir"};
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("config: cannot read '" + path + "'");
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw InputError("config: line " + std::to_string(lineno) +
                             ": expected key = value");
        }
        set(t.substr(0, eq), t.substr(eq + 1));
    }
}

void RunConfig::validate() const {
    if (!(dt > 0.0)) throw InputError("config: dt must be positive");
    if (!(unit_scale > 0.0)) throw InputError("config: unit_scale must be positive");
    if (gap_policy != "none" && gap_policy != "exclude") {
        throw InputError("config: gap_policy must be none or exclude");
    }
    infer::validate(test_config());
}

infer::TestConfig RunConfig::test_config() const {
    infer::TestConfig c;
    c.p = p;
    c.window = window;
    c.r = r;
    c.B = B;
    c.master_seed = seed;
    c.redraw_limit = redraw_limit;
    c.step_cap = step_cap;
    return c;
}

infer::ThetaGrid RunConfig::theta_grid(infer::Hypothesis h) const {
    infer::ThetaGrid g;
    g.hypothesis = h;
    g.sojourn_grid = sojourn_grid;
    g.shape_grid = shape_grid;
    g.unit_scale = unit_scale;
    return g;
}

LoadedSeries load_series(const std::string& file, const RunConfig& config) {
    config.validate();
    std::ifstream in(file);
    if (!in) {
        throw InputError("cannot read '" + file + "'");
    }

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    std::size_t first = 0;
    while (first < lines.size() && trim(lines[first]).empty()) ++first;
    if (first >= lines.size()) {
        throw InputError(file + ": empty file");
    }

    const char delim = lines[first].find('\t') != std::string::npos ? '\t' : ',';
    const std::vector<std::string> header = split(lines[first], delim);
    std::ptrdiff_t ts_col = -1, price_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string name = lower(trim(header[c]));
        if (name == "timestamp") ts_col = static_cast<std::ptrdiff_t>(c);
        else if (name == "price") price_col = static_cast<std::ptrdiff_t>(c);
    }
    if (ts_col < 0 || price_col < 0) {
        throw InputError(file + ": header must name 'timestamp' and 'price' columns");
    }

    struct Row {
        Timestamp ts;
        double price;
        std::string ts_raw;
        std::size_t lineno;
    };
    std::vector<Row> rows;
    for (std::size_t i = first + 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const std::size_t lineno = i + 1;
        const std::vector<std::string> fields = split(lines[i], delim);
        const std::size_t need =
            static_cast<std::size_t>(std::max(ts_col, price_col)) + 1;
        if (fields.size() < need) {
            throw InputError(file + ": line " + std::to_string(lineno) +
                             ": expected at least " + std::to_string(need) + " columns");
        }
        Row row;
        row.ts_raw = trim(fields[static_cast<std::size_t>(ts_col)]);
        if (!try_parse_timestamp(row.ts_raw, row.ts)) {
            throw InputError(file + ": line " + std::to_string(lineno) +
                             ": bad timestamp '" + row.ts_raw + "'");
        }
        row.price = parse_double(fields[static_cast<std::size_t>(price_col)],
                                 file + ": line " + std::to_string(lineno) + ": price");
        if (!(row.price > 0.0)) {
            throw InputError(file + ": line " + std::to_string(lineno) +
                             ": nonpositive price " + full_precision(row.price));
        }
        row.lineno = lineno;
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) {
        throw InputError(file + ": need at least 2 data rows");
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].ts.is_iso != rows[0].ts.is_iso) {
            throw InputError(file + ": line " + std::to_string(rows[i].lineno) +
                             ": mixed timestamp styles");
        }
    }

    // Spacing scan: the modal gap is the step; everything else is flagged.
    std::vector<long long> diffs(rows.size() - 1);
    std::map<long long, std::size_t> histogram;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const long long d = rows[i + 1].ts.value - rows[i].ts.value;
        if (d <= 0) {
            throw InputError(file + ": line " + std::to_string(rows[i + 1].lineno) +
                             ": timestamps not strictly increasing");
        }
        diffs[i] = d;
        ++histogram[d];
    }
    long long modal = diffs[0];
    std::size_t modal_count = 0;
    for (const auto& [gap, count] : histogram) {
        if (count > modal_count) {
            modal = gap;
            modal_count = count;
        }
    }

    LoadedSeries out;
    std::vector<std::size_t> gap_rows;  // index of the row after each gap
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (diffs[i] != modal) gap_rows.push_back(i + 1);
    }
    out.gap_count = gap_rows.size();
    if (static_cast<double>(modal_count) <
        0.99 * static_cast<double>(diffs.size())) {
        throw InputError(file + ": not equispaced: modal spacing " +
                         std::to_string(modal) + " covers only " +
                         std::to_string(modal_count) + "/" +
                         std::to_string(diffs.size()) + " gaps");
    }
    constexpr std::size_t kMaxListed = 50;
    for (std::size_t n = 0; n < gap_rows.size() && n < kMaxListed; ++n) {
        const Row& row = rows[gap_rows[n]];
        out.warnings.push_back("gap of " + std::to_string(diffs[gap_rows[n] - 1]) +
                               " (modal " + std::to_string(modal) + ") before line " +
                               std::to_string(row.lineno) + " (timestamp " +
                               row.ts_raw + ")");
    }
    if (gap_rows.size() > kMaxListed) {
        out.warnings.push_back("..." + std::to_string(gap_rows.size() - kMaxListed) +
                               " more gaps not listed");
    }

    if (rows[0].ts.is_iso) {
        // Configured dt counts trading time: 250 days x 360 minutes.
        const double config_seconds = config.dt * 250.0 * 360.0 * 60.0;
        if (std::fabs(static_cast<double>(modal) - config_seconds) > 0.5) {
            out.warnings.push_back(
                "file spacing " + std::to_string(modal) + " s differs from configured dt (" +
                full_precision(config_seconds) + " s of trading time); using configured dt");
        }
    }

    out.path.dt = config.dt;
    if (config.gap_policy == "exclude" && !gap_rows.empty()) {
        // Drop each session-opening row and splice the sessions so that the
        // surviving steps carry intra-session returns only.
        std::vector<bool> drop(rows.size(), false);
        for (std::size_t idx : gap_rows) drop[idx] = true;
        double scale = 1.0;
        double last_kept_raw = 0.0;
        bool have_kept = false;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (drop[i] && have_kept) {
                scale = (last_kept_raw * scale) / rows[i].price;
                last_kept_raw = rows[i].price;
                continue;
            }
            out.path.prices.push_back(rows[i].price * scale);
            last_kept_raw = rows[i].price;
            have_kept = true;
        }
        out.warnings.push_back("gap_policy=exclude dropped " +
                               std::to_string(gap_rows.size()) + " session-boundary rows");
    } else {
        out.path.prices.reserve(rows.size());
        for (const Row& row : rows) out.path.prices.push_back(row.price);
    }

    const std::size_t min_rows = static_cast<std::size_t>(config.window) + 3;
    if (out.path.prices.size() < min_rows) {
        throw InputError(file + ": " + std::to_string(out.path.prices.size()) +
                         " usable rows, need at least " + std::to_string(min_rows) +
                         " for window " + std::to_string(config.window));
    }
    return out;
}

void dump_series(const PricePath& path, const std::string& file) {
    const fs::path target(file);
    std::ofstream out = open_output(target);
    out << "timestamp,price\n";
    for (std::size_t i = 0; i < path.prices.size(); ++i) {
        out << i << ',' << full_precision(path.prices[i]) << '\n';
    }
    finish_output(out, target);
}

StatsRecord cmd_stats(const PricePath& path, const RunConfig& config) {
    config.validate();
    const ReturnSeries rets = stats::simple_returns(path);
    const VolTracks tracks = stats::vol_tracks(rets, config.window);
    const SqueezeDurations durations = stats::squeeze_durations(tracks, config.p);

    StatsRecord rec;
    rec.summary = models::summarize(tracks, config.p, path.prices.size());
    rec.threshold = durations.threshold;
    rec.occurrences = static_cast<long>(durations.count());
    if (durations.count() == 0) {
        throw DegenerateError(
            "no completed squeeze episodes; the statistic is undefined on this series");
    }
    if (durations.count() == 1) {
        rec.t = stats::stat_vector(durations, 1);
        return rec;
    }
    try {
        rec.t = stats::stat_vector(durations, 4);
    } catch (const DegenerateError&) {
        rec.t = stats::stat_vector(durations, 2);  // zero spread: moments 3,4 undefined
    }
    return rec;
}

std::string stats_header() {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-12s %11s %9s %9s %9s %9s", "id", "occurrences",
                  "t1", "t2", "t3", "t4");
    return buf;
}

std::string format_stats_row(const StatsRecord& rec, const std::string& id) {
    char buf[160];
    int n = std::snprintf(buf, sizeof(buf), "%-12s %11ld", id.c_str(), rec.occurrences);
    for (int j = 0; j < 4; ++j) {
        if (j < rec.t.r) {
            n += std::snprintf(buf + n, sizeof(buf) - static_cast<std::size_t>(n),
                               " %9.2f", rec.t[j]);
        } else {
            n += std::snprintf(buf + n, sizeof(buf) - static_cast<std::size_t>(n),
                               " %9s", "--");
        }
    }
    return buf;
}

void write_stats(const StatsRecord& rec, const std::string& id,
                 const std::string& out_dir) {
    const fs::path target = fs::path(out_dir) / (id + "_stats.txt");
    std::ofstream out = open_output(target);
    out << stats_header() << '\n' << format_stats_row(rec, id) << '\n';
    finish_output(out, target);
}

infer::TestReport cmd_test(const PricePath& path, const RunConfig& config,
                           infer::Hypothesis hypothesis) {
    config.validate();
    const stats::PipelineResult observed =
        stats::run_pipeline(path, config.p, config.window, config.r);
    const models::SeriesSummary summary =
        models::summarize(observed.tracks, config.p, path.prices.size());
    return infer::composite_test(observed.stats, summary,
                                 config.theta_grid(hypothesis), path.prices.size(),
                                 config.test_config());
}

std::string format_composite_row(const infer::TestReport& report,
                                 const std::string& id) {
    std::string row;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-12s %-10s", id.c_str(),
                  infer::hypothesis_name(report.hypothesis));
    row = buf;
    for (double a : report.composite) row += alpha_cell(a);
    return row;
}

namespace {

ordered_json report_json(const infer::TestReport& report, const std::string& id) {
    ordered_json j;
    j["schema"] = "regimetest.report.v1";
    j["id"] = id;
    j["hypothesis"] = infer::hypothesis_name(report.hypothesis);

    ordered_json cfg;
    cfg["p"] = report.config.p;
    cfg["window"] = report.config.window;
    cfg["r"] = report.config.r;
    cfg["B"] = report.config.B;
    cfg["seed"] = report.config.master_seed;
    cfg["redraw_limit"] = report.config.redraw_limit;
    cfg["step_cap"] = report.config.step_cap;
    cfg["unit_scale"] = report.grid.unit_scale;
    cfg["n_steps"] = report.n_steps;
    j["config"] = cfg;

    ordered_json sum;
    sum["mu_bar"] = report.summary.mu_bar;
    sum["sigma_bar"] = report.summary.sigma_bar;
    sum["sigma_p"] = report.summary.sigma_p;
    sum["p"] = report.summary.p;
    sum["n_points"] = report.summary.n_points;
    sum["dt"] = report.summary.dt;
    j["summary"] = sum;

    ordered_json observed;
    std::vector<double> t(report.observed.t.begin(),
                          report.observed.t.begin() + report.observed.r);
    observed["t"] = t;
    j["observed"] = observed;

    ordered_json rows = ordered_json::array();
    for (const infer::ThetaRow& row : report.per_theta) {
        ordered_json r;
        r["label"] = row.label;
        if (report.hypothesis != infer::Hypothesis::Gbm) {
            r["sojourn"] = row.sojourn_units;
        }
        if (report.hypothesis == infer::Hypothesis::Smgbm) {
            r["shape"] = row.shape;
        }
        r["alpha"] = row.alpha;
        r["degenerate_redraws"] = row.degenerate_count;
        rows.push_back(std::move(r));
    }
    j["per_theta"] = rows;
    j["composite"] = report.composite;
    return j;
}

}  // namespace

void write_report(const infer::TestReport& report, const std::string& id,
                  const std::string& out_dir) {
    const std::string hyp = infer::hypothesis_name(report.hypothesis);
    const fs::path table = fs::path(out_dir) / (id + "_" + hyp + "_alpha.txt");
    {
        std::ofstream out = open_output(table);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%-12s %-10s", "id", "hypothesis");
        out << "composite\n" << buf;
        for (int j = 1; j <= report.config.r; ++j) {
            std::snprintf(buf, sizeof(buf), "%8s", ("alpha" + std::to_string(j)).c_str());
            out << buf;
        }
        out << '\n' << format_composite_row(report, id) << "\n\nper-theta\n";
        std::snprintf(buf, sizeof(buf), "%-24s", "theta");
        out << buf;
        for (int j = 1; j <= report.config.r; ++j) {
            std::snprintf(buf, sizeof(buf), "%8s", ("alpha" + std::to_string(j)).c_str());
            out << buf;
        }
        out << "  redraws\n";
        for (const infer::ThetaRow& row : report.per_theta) {
            std::snprintf(buf, sizeof(buf), "%-24s", row.label.c_str());
            out << buf;
            for (double a : row.alpha) out << alpha_cell(a);
            std::snprintf(buf, sizeof(buf), " %8d", row.degenerate_count);
            out << buf << '\n';
        }
        finish_output(out, table);
    }
    const fs::path json_file = fs::path(out_dir) / (id + "_" + hyp + "_report.json");
    std::ofstream out = open_output(json_file);
    out << report_json(report, id).dump(2) << '\n';
    finish_output(out, json_file);
}

std::array<double, 5> five_number_summary(std::span<const double> sample) {
    if (sample.empty()) {
        throw std::invalid_argument("five_number_summary: empty sample");
    }
    std::array<double, 5> out{};
    out[0] = *std::min_element(sample.begin(), sample.end());
    out[1] = stats::percentile(sample, 0.25);
    out[2] = stats::percentile(sample, 0.5);
    out[3] = stats::percentile(sample, 0.75);
    out[4] = *std::max_element(sample.begin(), sample.end());
    return out;
}

void cmd_plotdata(const PricePath& path, const RunConfig& config,
                  infer::Hypothesis hypothesis, const std::string& id,
                  const std::string& out_dir) {
    config.validate();
    const stats::PipelineResult observed =
        stats::run_pipeline(path, config.p, config.window, config.r);
    const models::SeriesSummary summary =
        models::summarize(observed.tracks, config.p, path.prices.size());
    const infer::TestConfig tc = config.test_config();
    const std::vector<infer::Theta> thetas =
        infer::materialize_grid(summary, config.theta_grid(hypothesis));

    const std::string hyp = infer::hypothesis_name(hypothesis);
    const int r = config.r;

    {
        const fs::path file = fs::path(out_dir) / (id + "_" + hyp + "_observed.csv");
        std::ofstream out = open_output(file);
        for (int j = 1; j <= r; ++j) out << (j > 1 ? "," : "") << "t" << j;
        out << '\n';
        for (int j = 0; j < r; ++j) {
            out << (j > 0 ? "," : "") << full_precision(observed.stats[j]);
        }
        out << '\n';
        finish_output(out, file);
    }

    const fs::path summary_file = fs::path(out_dir) / (id + "_" + hyp + "_summary.csv");
    std::ofstream summary_out = open_output(summary_file);
    summary_out << "theta,component,min,q1,median,q3,max\n";

    for (std::size_t idx = 0; idx < thetas.size(); ++idx) {
        const infer::Ensemble ensemble = infer::build_ensemble(
            summary, thetas[idx].params, path.prices.size(), tc, idx, thetas[idx].label);

        char name[64];
        std::snprintf(name, sizeof(name), "%s_%s_theta%03zu_surrogates.csv", id.c_str(),
                      hyp.c_str(), idx);
        const fs::path file = fs::path(out_dir) / name;
        std::ofstream out = open_output(file);
        for (int j = 1; j <= r; ++j) out << (j > 1 ? "," : "") << "t" << j;
        out << '\n';
        for (const StatVector& row : ensemble.stat_rows) {
            for (int j = 0; j < r; ++j) {
                out << (j > 0 ? "," : "") << full_precision(row[j]);
            }
            out << '\n';
        }
        finish_output(out, file);

        std::vector<double> column(ensemble.stat_rows.size());
        for (int j = 0; j < r; ++j) {
            for (std::size_t i = 0; i < ensemble.stat_rows.size(); ++i) {
                column[i] = ensemble.stat_rows[i][j];
            }
            const std::array<double, 5> fns = five_number_summary(column);
            summary_out << thetas[idx].label << ",t" << (j + 1);
            for (double v : fns) summary_out << ',' << full_precision(v);
            summary_out << '\n';
        }
    }
    finish_output(summary_out, summary_file);
}

infer::ObjectiveReport cmd_estimate(const PricePath& path, const RunConfig& config,
                                    infer::Hypothesis hypothesis) {
    config.validate();
    if (config.r != 4) {
        throw InputError("estimate: the grid objective needs r = 4");
    }
    const stats::PipelineResult observed =
        stats::run_pipeline(path, config.p, config.window, config.r);
    const models::SeriesSummary summary =
        models::summarize(observed.tracks, config.p, path.prices.size());
    return infer::objective_grid(observed.stats, summary,
                                 config.theta_grid(hypothesis), path.prices.size(),
                                 config.test_config());
}

void write_estimate(const infer::ObjectiveReport& report, const std::string& id,
                    const std::string& out_dir) {
    const std::string hyp = infer::hypothesis_name(report.hypothesis);
    const fs::path file = fs::path(out_dir) / (id + "_" + hyp + "_objective.csv");
    std::ofstream out = open_output(file);
    out << "theta,objective\n";
    for (const infer::ObjectiveRow& row : report.rows) {
        out << row.label << ',' << full_precision(row.value) << '\n';
    }
    out << "argmin," << report.rows[report.argmin].label << '\n';
    finish_output(out, file);
}

void cmd_simulate_dump(const PricePath& observed, const RunConfig& config,
                       infer::Hypothesis hypothesis, double sojourn, double shape,
                       std::uint64_t replication, const std::string& out_file) {
    config.validate();
    const ReturnSeries rets = stats::simple_returns(observed);
    const VolTracks tracks = stats::vol_tracks(rets, config.window);
    const models::SeriesSummary summary =
        models::summarize(tracks, config.p, observed.prices.size());

    models::ModelParams params;
    switch (hypothesis) {
        case infer::Hypothesis::Gbm:
            params = models::gbm_admissible(summary);
            break;
        case infer::Hypothesis::Mmgbm:
            params = models::mmgbm_admissible(summary, sojourn * config.unit_scale);
            break;
        case infer::Hypothesis::Smgbm:
            params = models::smgbm_admissible(summary, shape, sojourn * config.unit_scale);
            break;
    }

    sim::SimRequest req;
    req.model = params;
    req.n_steps = observed.prices.size();
    req.dt = config.dt;
    req.s0 = observed.prices.front();
    req.step_cap = config.step_cap;
    req.seed = sim::derive_seed(config.seed, 0, replication);
    const sim::SimResult result = sim::simulate(req);

    const fs::path target(out_file);
    std::ofstream out = open_output(target);
    const bool with_states = !result.states.empty();
    const bool with_ages = !result.ages.empty();
    out << "timestamp,price";
    if (with_states) out << ",state";
    if (with_ages) out << ",age";
    out << '\n';
    for (std::size_t i = 0; i < result.path.prices.size(); ++i) {
        out << i << ',' << full_precision(result.path.prices[i]);
        if (with_states) out << ',' << static_cast<int>(result.states[i]);
        if (with_ages) out << ',' << full_precision(result.ages[i]);
        out << '\n';
    }
    finish_output(out, target);
}

}  // namespace regimetest::io
