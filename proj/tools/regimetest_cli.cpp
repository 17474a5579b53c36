// Command-line front end. Everything substantive happens behind the C API
// of the shared library; this file only maps flags onto config keys and
// status codes onto exit codes.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regimetest.h"

namespace {

struct ConfigDeleter {
    void operator()(rt_config* c) const { rt_config_free(c); }
};
struct SeriesDeleter {
    void operator()(rt_series* s) const { rt_series_free(s); }
};

using ConfigPtr = std::unique_ptr<rt_config, ConfigDeleter>;
using SeriesPtr = std::unique_ptr<rt_series, SeriesDeleter>;

// Flags shared by the data-driven subcommands. String storage so that CLI11
// values pass straight through to rt_config_set.
struct CommonOpts {
    std::string input;
    std::string id;
    std::string config_file;
    std::vector<std::pair<CLI::Option*, std::pair<std::string, std::string*>>> keyed;

    std::string p, window, r, B, seed, dt, unit_scale, step_cap, redraw_limit,
        gap_policy, out_dir, grid, shape_grid;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_grid) {
    cmd->add_option("--input,-i", opts.input, "series file (timestamp,price)")
        ->required();
    cmd->add_option("--id", opts.id, "series id used in outputs (default: file stem)");
    cmd->add_option("--config,-c", opts.config_file, "flat key = value config file");

    auto keyed = [&](const char* flag, const char* key, std::string& slot,
                     const char* help) {
        CLI::Option* opt = cmd->add_option(flag, slot, help);
        opts.keyed.emplace_back(opt, std::make_pair(std::string(key), &slot));
    };
    keyed("--p", "p", opts.p, "squeeze percentile in (0,1)");
    keyed("--window", "window", opts.window, "rolling window in returns");
    keyed("--r", "r", opts.r, "statistic dimension 1..4");
    keyed("--B", "b", opts.B, "surrogate replications per theta");
    keyed("--seed", "seed", opts.seed, "master seed");
    keyed("--dt", "dt", opts.dt, "years per step");
    keyed("--unit-scale", "unit_scale", opts.unit_scale, "years per sojourn grid unit");
    keyed("--step-cap", "step_cap", opts.step_cap, "bound on hazard*dt");
    keyed("--redraw-limit", "redraw_limit", opts.redraw_limit,
          "redraws per surrogate slot");
    keyed("--gap-policy", "gap_policy", opts.gap_policy, "none | exclude");
    keyed("--out-dir", "out_dir", opts.out_dir, "output directory");
    if (with_grid) {
        keyed("--grid", "grid", opts.grid, "sojourn grid, lo:hi:step or comma list");
        keyed("--shape-grid", "shape_grid", opts.shape_grid,
              "gamma shape grid (smgbm only)");
    }
}

int fail(rt_status status, const char* during) {
    std::cerr << "error (" << rt_status_name(status) << ") during " << during << ": "
              << rt_last_error() << '\n';
    return static_cast<int>(status);
}

// defaults -> config file -> explicit flags, later wins
int build_config(const CommonOpts& opts, ConfigPtr& config) {
    config.reset(rt_config_new());
    if (!opts.config_file.empty()) {
        const rt_status st = rt_config_load(config.get(), opts.config_file.c_str());
        if (st != RT_OK) return fail(st, "config load");
    }
    for (const auto& [opt, kv] : opts.keyed) {
        if (opt->count() > 0) {
            const rt_status st =
                rt_config_set(config.get(), kv.first.c_str(), kv.second->c_str());
            if (st != RT_OK) return fail(st, "config");
        }
    }
    return 0;
}

int load_input(const CommonOpts& opts, const ConfigPtr& config, SeriesPtr& series) {
    rt_series* raw = nullptr;
    const rt_status st = rt_series_load(config.get(), opts.input.c_str(), &raw);
    if (st != RT_OK) return fail(st, "series load");
    series.reset(raw);
    for (size_t i = 0; i < rt_series_warning_count(series.get()); ++i) {
        std::cerr << "warning: " << rt_series_warning(series.get(), i) << '\n';
    }
    return 0;
}

std::string series_id(const CommonOpts& opts) {
    if (!opts.id.empty()) return opts.id;
    return std::filesystem::path(opts.input).stem().string();
}

std::string out_dir_of(const ConfigPtr& config) {
    char buf[512];
    if (rt_config_get(config.get(), "out_dir", buf, sizeof(buf)) != RT_OK) return ".";
    return buf;
}

int run_stats(const CommonOpts& opts) {
    ConfigPtr config;
    SeriesPtr series;
    if (int rc = build_config(opts, config)) return rc;
    if (int rc = load_input(opts, config, series)) return rc;

    rt_stats* stats = nullptr;
    rt_status st = rt_stats_run(series.get(), config.get(), &stats);
    if (st != RT_OK) return fail(st, "stats");
    char text[512];
    rt_stats_format(stats, series_id(opts).c_str(), text, sizeof(text));
    std::cout << text << '\n';
    st = rt_stats_write(stats, series_id(opts).c_str(), out_dir_of(config).c_str());
    rt_stats_free(stats);
    if (st != RT_OK) return fail(st, "stats write");
    return 0;
}

int run_test(const CommonOpts& opts, rt_hypothesis hyp) {
    ConfigPtr config;
    SeriesPtr series;
    if (int rc = build_config(opts, config)) return rc;
    if (int rc = load_input(opts, config, series)) return rc;

    rt_report* report = nullptr;
    rt_status st = rt_test_run(series.get(), config.get(), hyp, &report);
    if (st != RT_OK) return fail(st, "test");
    char text[512];
    rt_report_format(report, series_id(opts).c_str(), text, sizeof(text));
    std::cout << text << '\n';
    st = rt_report_write(report, series_id(opts).c_str(), out_dir_of(config).c_str());
    rt_report_free(report);
    if (st != RT_OK) return fail(st, "report write");
    return 0;
}

int run_plotdata(const CommonOpts& opts, rt_hypothesis hyp) {
    ConfigPtr config;
    SeriesPtr series;
    if (int rc = build_config(opts, config)) return rc;
    if (int rc = load_input(opts, config, series)) return rc;

    const rt_status st = rt_plotdata_write(series.get(), config.get(), hyp,
                                           series_id(opts).c_str(),
                                           out_dir_of(config).c_str());
    if (st != RT_OK) return fail(st, "plotdata");
    std::cout << "plot data written to " << out_dir_of(config) << '\n';
    return 0;
}

int run_estimate(const CommonOpts& opts, rt_hypothesis hyp) {
    ConfigPtr config;
    SeriesPtr series;
    if (int rc = build_config(opts, config)) return rc;
    if (int rc = load_input(opts, config, series)) return rc;

    rt_estimate* estimate = nullptr;
    rt_status st = rt_estimate_run(series.get(), config.get(), hyp, &estimate);
    if (st != RT_OK) return fail(st, "estimate");
    const int best = rt_estimate_argmin(estimate);
    std::cout << "argmin: " << rt_estimate_label(estimate, best) << " (objective "
              << rt_estimate_objective(estimate, best) << ")\n";
    st = rt_estimate_write(estimate, series_id(opts).c_str(),
                           out_dir_of(config).c_str());
    rt_estimate_free(estimate);
    if (st != RT_OK) return fail(st, "estimate write");
    return 0;
}

int run_simulate_dump(const CommonOpts& opts, rt_hypothesis hyp, double sojourn,
                      double shape, std::uint64_t replication,
                      const std::string& out_file) {
    ConfigPtr config;
    SeriesPtr series;
    if (int rc = build_config(opts, config)) return rc;
    if (int rc = load_input(opts, config, series)) return rc;

    const rt_status st = rt_surrogate_dump(series.get(), config.get(), hyp, sojourn,
                                           shape, replication, out_file.c_str());
    if (st != RT_OK) return fail(st, "simulate-dump");
    std::cout << "surrogate path written to " << out_file << '\n';
    return 0;
}

bool parse_hypothesis(const std::string& name, rt_hypothesis& out) {
    if (name == "gbm") out = RT_HYP_GBM;
    else if (name == "mmgbm") out = RT_HYP_MMGBM;
    else if (name == "smgbm") out = RT_HYP_SMGBM;
    else return false;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"squeeze-duration surrogate tests for GBM and regime-switching GBM"};
    app.require_subcommand(1);

    CommonOpts stats_opts, test_opts, plot_opts, est_opts, dump_opts;
    std::string test_hyp, plot_hyp, est_hyp, dump_hyp = "mmgbm";
    double dump_sojourn = 10.0, dump_shape = 1.0;
    std::uint64_t dump_rep = 0;
    std::string dump_out;

    CLI::App* stats_cmd =
        app.add_subcommand("stats", "observed squeeze-duration statistics");
    add_common(stats_cmd, stats_opts, false);

    CLI::App* test_cmd =
        app.add_subcommand("test", "composite surrogate test of a hypothesis");
    add_common(test_cmd, test_opts, true);
    test_cmd->add_option("--hypothesis", test_hyp, "gbm | mmgbm | smgbm")->required();

    CLI::App* plot_cmd =
        app.add_subcommand("plotdata", "surrogate statistic matrices and box-plot data");
    add_common(plot_cmd, plot_opts, true);
    plot_cmd->add_option("--hypothesis", plot_hyp, "gbm | mmgbm | smgbm")->required();

    CLI::App* est_cmd =
        app.add_subcommand("estimate", "least-squares grid objective and argmin");
    add_common(est_cmd, est_opts, true);
    est_cmd->add_option("--hypothesis", est_hyp, "gbm | mmgbm | smgbm")->required();

    CLI::App* dump_cmd =
        app.add_subcommand("simulate-dump", "write one admissible surrogate path");
    add_common(dump_cmd, dump_opts, true);
    dump_cmd->add_option("--hypothesis", dump_hyp, "gbm | mmgbm | smgbm");
    dump_cmd->add_option("--sojourn", dump_sojourn, "state-1 mean sojourn, grid units");
    dump_cmd->add_option("--shape", dump_shape, "gamma shape (smgbm)");
    dump_cmd->add_option("--rep", dump_rep, "replication index for the seed");
    dump_cmd->add_option("--out", dump_out, "output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    auto with_hypothesis = [&](const std::string& name, auto&& fn) -> int {
        rt_hypothesis hyp;
        if (!parse_hypothesis(name, hyp)) {
            std::cerr << "error: unknown hypothesis '" << name
                      << "' (expected gbm|mmgbm|smgbm)\n";
            return static_cast<int>(RT_ERR_INPUT);
        }
        return fn(hyp);
    };

    if (stats_cmd->parsed()) return run_stats(stats_opts);
    if (test_cmd->parsed()) {
        return with_hypothesis(test_hyp,
                               [&](rt_hypothesis h) { return run_test(test_opts, h); });
    }
    if (plot_cmd->parsed()) {
        return with_hypothesis(
            plot_hyp, [&](rt_hypothesis h) { return run_plotdata(plot_opts, h); });
    }
    if (est_cmd->parsed()) {
        return with_hypothesis(
            est_hyp, [&](rt_hypothesis h) { return run_estimate(est_opts, h); });
    }
    if (dump_cmd->parsed()) {
        return with_hypothesis(dump_hyp, [&](rt_hypothesis h) {
            return run_simulate_dump(dump_opts, h, dump_sojourn, dump_shape, dump_rep,
                                     dump_out);
        });
    }
    return 1;
}
