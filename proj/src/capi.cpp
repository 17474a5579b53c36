#include "regimetest.h"

#include <cmath>
#include <cstring>
#include <string>

#include "regimetest/inference.hpp"
#include "regimetest/io.hpp"
#include "regimetest/models.hpp"
#include "regimetest/series_stats.hpp"
#include "regimetest/simulate.hpp"
#include "regimetest/types.hpp"

using namespace regimetest;

struct rt_config {
    io::RunConfig cfg;
};

struct rt_series {
    PricePath path;
    std::vector<std::string> warnings;
    std::size_t gap_count = 0;
};

struct rt_stats {
    io::StatsRecord rec;
};

struct rt_report {
    infer::TestReport rep;
};

struct rt_estimate {
    infer::ObjectiveReport rep;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what != nullptr ? what : ""; }

template <class Fn>
rt_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return RT_OK;
    } catch (const InputError& e) {
        set_error(e.what());
        return RT_ERR_INPUT;
    } catch (const DegenerateError& e) {
        set_error(e.what());
        return RT_ERR_DEGENERATE;
    } catch (const InferenceError& e) {
        set_error(e.what());
        return RT_ERR_INFERENCE;
    } catch (const IoError& e) {
        set_error(e.what());
        return RT_ERR_IO;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return RT_ERR_ARG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return RT_ERR_INTERNAL;
    }
}

rt_status arg_error(const char* what) {
    set_error(what);
    return RT_ERR_ARG;
}

infer::Hypothesis to_hypothesis(rt_hypothesis h) {
    switch (h) {
        case RT_HYP_GBM: return infer::Hypothesis::Gbm;
        case RT_HYP_MMGBM: return infer::Hypothesis::Mmgbm;
        case RT_HYP_SMGBM: return infer::Hypothesis::Smgbm;
    }
    throw std::invalid_argument("unknown hypothesis id");
}

sim::InitState to_init_state(int x0) {
    if (x0 == 0) return sim::InitState::Stationary;
    if (x0 == 1) return sim::InitState::State1;
    if (x0 == 2) return sim::InitState::State2;
    throw std::invalid_argument("x0 must be 0 (stationary), 1, or 2");
}

}  // namespace

extern "C" {

const char* rt_version(void) { return "0.1.0"; }

const char* rt_status_name(rt_status status) {
    switch (status) {
        case RT_OK: return "ok";
        case RT_ERR_ARG: return "invalid-argument";
        case RT_ERR_INPUT: return "input-error";
        case RT_ERR_INFERENCE: return "inference-error";
        case RT_ERR_DEGENERATE: return "degenerate-statistics";
        case RT_ERR_IO: return "io-error";
        case RT_ERR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

const char* rt_last_error(void) { return g_last_error.c_str(); }

/* ---- configuration ----------------------------------------------------- */

rt_config* rt_config_new(void) { return new rt_config{}; }

void rt_config_free(rt_config* config) { delete config; }

rt_status rt_config_set(rt_config* config, const char* key, const char* value) {
    if (config == nullptr || key == nullptr || value == nullptr) {
        return arg_error("rt_config_set: null argument");
    }
    return guarded([&] { config->cfg.set(key, value); });
}

rt_status rt_config_get(const rt_config* config, const char* key, char* buffer,
                        size_t length) {
    if (config == nullptr || key == nullptr || buffer == nullptr || length == 0) {
        return arg_error("rt_config_get: null argument");
    }
    return guarded([&] {
        const std::string v = config->cfg.get(key);
        if (v.size() + 1 > length) {
            throw std::invalid_argument("rt_config_get: buffer too small");
        }
        std::memcpy(buffer, v.c_str(), v.size() + 1);
    });
}

rt_status rt_config_load(rt_config* config, const char* path) {
    if (config == nullptr || path == nullptr) {
        return arg_error("rt_config_load: null argument");
    }
    return guarded([&] { config->cfg.load_file(path); });
}

/* ---- series ------------------------------------------------------------ */

rt_status rt_series_load(const rt_config* config, const char* path, rt_series** out) {
    if (config == nullptr || path == nullptr || out == nullptr) {
        return arg_error("rt_series_load: null argument");
    }
    return guarded([&] {
        io::LoadedSeries loaded = io::load_series(path, config->cfg);
        *out = new rt_series{std::move(loaded.path), std::move(loaded.warnings),
                             loaded.gap_count};
    });
}

rt_status rt_series_from_prices(const double* prices, size_t count, double dt,
                                rt_series** out) {
    if (prices == nullptr || out == nullptr) {
        return arg_error("rt_series_from_prices: null argument");
    }
    return guarded([&] {
        PricePath path;
        path.dt = dt;
        path.prices.assign(prices, prices + count);
        if (path.prices.size() < 2) {
            throw std::invalid_argument("rt_series_from_prices: need at least 2 prices");
        }
        if (!(dt > 0.0)) {
            throw std::invalid_argument("rt_series_from_prices: dt must be positive");
        }
        for (std::size_t i = 0; i < path.prices.size(); ++i) {
            if (!(path.prices[i] > 0.0)) {
                throw std::invalid_argument("rt_series_from_prices: nonpositive price at " +
                                            std::to_string(i));
            }
        }
        *out = new rt_series{std::move(path), {}, 0};
    });
}

void rt_series_free(rt_series* series) { delete series; }

size_t rt_series_length(const rt_series* series) {
    return series != nullptr ? series->path.prices.size() : 0;
}

double rt_series_dt(const rt_series* series) {
    return series != nullptr ? series->path.dt : 0.0;
}

double rt_series_price(const rt_series* series, size_t index) {
    if (series == nullptr || index >= series->path.prices.size()) return NAN;
    return series->path.prices[index];
}

size_t rt_series_gap_count(const rt_series* series) {
    return series != nullptr ? series->gap_count : 0;
}

size_t rt_series_warning_count(const rt_series* series) {
    return series != nullptr ? series->warnings.size() : 0;
}

const char* rt_series_warning(const rt_series* series, size_t index) {
    if (series == nullptr || index >= series->warnings.size()) return nullptr;
    return series->warnings[index].c_str();
}

rt_status rt_series_dump(const rt_series* series, const char* path) {
    if (series == nullptr || path == nullptr) {
        return arg_error("rt_series_dump: null argument");
    }
    return guarded([&] { io::dump_series(series->path, path); });
}

/* ---- simulators -------------------------------------------------------- */

rt_status rt_simulate_gbm(double mu, double sigma, size_t n_steps, double dt,
                          double s0, uint64_t seed, rt_series** out) {
    if (out == nullptr) return arg_error("rt_simulate_gbm: null output");
    return guarded([&] {
        sim::SimRequest req;
        req.model = models::GbmParams{mu, sigma};
        req.n_steps = n_steps;
        req.dt = dt;
        req.s0 = s0;
        req.seed = seed;
        *out = new rt_series{sim::simulate_gbm(req).path, {}, 0};
    });
}

rt_status rt_simulate_mmgbm(double mu1, double sigma1, double lambda1, double mu2,
                            double sigma2, double lambda2, int x0, size_t n_steps,
                            double dt, double s0, uint64_t seed, rt_series** out) {
    if (out == nullptr) return arg_error("rt_simulate_mmgbm: null output");
    return guarded([&] {
        sim::SimRequest req;
        req.model = models::MmgbmParams{mu1, mu2, sigma1, sigma2, lambda1, lambda2};
        req.n_steps = n_steps;
        req.dt = dt;
        req.s0 = s0;
        req.seed = seed;
        *out = new rt_series{sim::simulate_mmgbm(req, to_init_state(x0)).path, {}, 0};
    });
}

rt_status rt_simulate_smgbm(double mu1, double sigma1, double shape1, double rate1,
                            double mu2, double sigma2, double shape2, double rate2,
                            int x0, size_t n_steps, double dt, double s0,
                            uint64_t seed, rt_series** out) {
    if (out == nullptr) return arg_error("rt_simulate_smgbm: null output");
    return guarded([&] {
        sim::SimRequest req;
        req.model =
            models::SmgbmParams{mu1, mu2, sigma1, sigma2, shape1, shape2, rate1, rate2};
        req.n_steps = n_steps;
        req.dt = dt;
        req.s0 = s0;
        req.seed = seed;
        *out = new rt_series{sim::simulate_smgbm(req, to_init_state(x0)).path, {}, 0};
    });
}

/* ---- observed statistics ------------------------------------------------ */

rt_status rt_stats_run(const rt_series* series, const rt_config* config,
                       rt_stats** out) {
    if (series == nullptr || config == nullptr || out == nullptr) {
        return arg_error("rt_stats_run: null argument");
    }
    return guarded([&] { *out = new rt_stats{io::cmd_stats(series->path, config->cfg)}; });
}

void rt_stats_free(rt_stats* stats) { delete stats; }

long long rt_stats_count(const rt_stats* stats) {
    return stats != nullptr ? stats->rec.occurrences : 0;
}

int rt_stats_dim(const rt_stats* stats) { return stats != nullptr ? stats->rec.t.r : 0; }

double rt_stats_t(const rt_stats* stats, int j) {
    if (stats == nullptr || j < 1 || j > stats->rec.t.r) return NAN;
    return stats->rec.t[j - 1];
}

double rt_stats_threshold(const rt_stats* stats) {
    return stats != nullptr ? stats->rec.threshold : NAN;
}

rt_status rt_stats_format(const rt_stats* stats, const char* id, char* buffer,
                          size_t length) {
    if (stats == nullptr || id == nullptr || buffer == nullptr || length == 0) {
        return arg_error("rt_stats_format: null argument");
    }
    return guarded([&] {
        const std::string text =
            io::stats_header() + "\n" + io::format_stats_row(stats->rec, id);
        if (text.size() + 1 > length) {
            throw std::invalid_argument("rt_stats_format: buffer too small");
        }
        std::memcpy(buffer, text.c_str(), text.size() + 1);
    });
}

rt_status rt_stats_write(const rt_stats* stats, const char* id, const char* out_dir) {
    if (stats == nullptr || id == nullptr || out_dir == nullptr) {
        return arg_error("rt_stats_write: null argument");
    }
    return guarded([&] { io::write_stats(stats->rec, id, out_dir); });
}

/* ---- composite surrogate test ------------------------------------------ */

rt_status rt_test_run(const rt_series* series, const rt_config* config,
                      rt_hypothesis hypothesis, rt_report** out) {
    if (series == nullptr || config == nullptr || out == nullptr) {
        return arg_error("rt_test_run: null argument");
    }
    return guarded([&] {
        *out = new rt_report{
            io::cmd_test(series->path, config->cfg, to_hypothesis(hypothesis))};
    });
}

void rt_report_free(rt_report* report) { delete report; }

int rt_report_rows(const rt_report* report) {
    return report != nullptr ? static_cast<int>(report->rep.per_theta.size()) : 0;
}

int rt_report_dim(const rt_report* report) {
    return report != nullptr ? report->rep.config.r : 0;
}

const char* rt_report_label(const rt_report* report, int row) {
    if (report == nullptr || row < 0 ||
        row >= static_cast<int>(report->rep.per_theta.size())) {
        return nullptr;
    }
    return report->rep.per_theta[static_cast<std::size_t>(row)].label.c_str();
}

double rt_report_alpha(const rt_report* report, int row, int j) {
    if (report == nullptr || row < 0 ||
        row >= static_cast<int>(report->rep.per_theta.size())) {
        return NAN;
    }
    const auto& alpha = report->rep.per_theta[static_cast<std::size_t>(row)].alpha;
    if (j < 1 || j > static_cast<int>(alpha.size())) return NAN;
    return alpha[static_cast<std::size_t>(j - 1)];
}

double rt_report_composite(const rt_report* report, int j) {
    if (report == nullptr || j < 1 ||
        j > static_cast<int>(report->rep.composite.size())) {
        return NAN;
    }
    return report->rep.composite[static_cast<std::size_t>(j - 1)];
}

double rt_report_observed_t(const rt_report* report, int j) {
    if (report == nullptr || j < 1 || j > report->rep.observed.r) return NAN;
    return report->rep.observed[j - 1];
}

rt_status rt_report_format(const rt_report* report, const char* id, char* buffer,
                           size_t length) {
    if (report == nullptr || id == nullptr || buffer == nullptr || length == 0) {
        return arg_error("rt_report_format: null argument");
    }
    return guarded([&] {
        const std::string text = io::format_composite_row(report->rep, id);
        if (text.size() + 1 > length) {
            throw std::invalid_argument("rt_report_format: buffer too small");
        }
        std::memcpy(buffer, text.c_str(), text.size() + 1);
    });
}

rt_status rt_report_write(const rt_report* report, const char* id,
                          const char* out_dir) {
    if (report == nullptr || id == nullptr || out_dir == nullptr) {
        return arg_error("rt_report_write: null argument");
    }
    return guarded([&] { io::write_report(report->rep, id, out_dir); });
}

/* ---- plot data, grid objective, path dump ------------------------------- */

rt_status rt_plotdata_write(const rt_series* series, const rt_config* config,
                            rt_hypothesis hypothesis, const char* id,
                            const char* out_dir) {
    if (series == nullptr || config == nullptr || id == nullptr || out_dir == nullptr) {
        return arg_error("rt_plotdata_write: null argument");
    }
    return guarded([&] {
        io::cmd_plotdata(series->path, config->cfg, to_hypothesis(hypothesis), id,
                         out_dir);
    });
}

rt_status rt_estimate_run(const rt_series* series, const rt_config* config,
                          rt_hypothesis hypothesis, rt_estimate** out) {
    if (series == nullptr || config == nullptr || out == nullptr) {
        return arg_error("rt_estimate_run: null argument");
    }
    return guarded([&] {
        *out = new rt_estimate{
            io::cmd_estimate(series->path, config->cfg, to_hypothesis(hypothesis))};
    });
}

void rt_estimate_free(rt_estimate* estimate) { delete estimate; }

int rt_estimate_rows(const rt_estimate* estimate) {
    return estimate != nullptr ? static_cast<int>(estimate->rep.rows.size()) : 0;
}

const char* rt_estimate_label(const rt_estimate* estimate, int row) {
    if (estimate == nullptr || row < 0 ||
        row >= static_cast<int>(estimate->rep.rows.size())) {
        return nullptr;
    }
    return estimate->rep.rows[static_cast<std::size_t>(row)].label.c_str();
}

double rt_estimate_objective(const rt_estimate* estimate, int row) {
    if (estimate == nullptr || row < 0 ||
        row >= static_cast<int>(estimate->rep.rows.size())) {
        return NAN;
    }
    return estimate->rep.rows[static_cast<std::size_t>(row)].value;
}

int rt_estimate_argmin(const rt_estimate* estimate) {
    return estimate != nullptr ? static_cast<int>(estimate->rep.argmin) : -1;
}

rt_status rt_estimate_write(const rt_estimate* estimate, const char* id,
                            const char* out_dir) {
    if (estimate == nullptr || id == nullptr || out_dir == nullptr) {
        return arg_error("rt_estimate_write: null argument");
    }
    return guarded([&] { io::write_estimate(estimate->rep, id, out_dir); });
}

rt_status rt_surrogate_dump(const rt_series* series, const rt_config* config,
                            rt_hypothesis hypothesis, double sojourn, double shape,
                            uint64_t replication, const char* out_path) {
    if (series == nullptr || config == nullptr || out_path == nullptr) {
        return arg_error("rt_surrogate_dump: null argument");
    }
    return guarded([&] {
        io::cmd_simulate_dump(series->path, config->cfg, to_hypothesis(hypothesis),
                              sojourn, shape, replication, out_path);
    });
}

}  // extern "C"
