#include "regimetest/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "regimetest/parallel.hpp"
#include "regimetest/series_stats.hpp"
#include "regimetest/simulate.hpp"

namespace regimetest::infer {

namespace {

// Surrogate paths all start at the same nominal price; the statistic is a
// function of returns only, so the level never enters.
constexpr double kSurrogateS0 = 100.0;

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

const char* hypothesis_name(Hypothesis h) {
    switch (h) {
        case Hypothesis::Gbm: return "gbm";
        case Hypothesis::Mmgbm: return "mmgbm";
        case Hypothesis::Smgbm: return "smgbm";
    }
    return "?";
}

Hypothesis hypothesis_from_name(const std::string& name) {
    if (name == "gbm") return Hypothesis::Gbm;
    if (name == "mmgbm") return Hypothesis::Mmgbm;
    if (name == "smgbm") return Hypothesis::Smgbm;
    throw InputError("unknown hypothesis '" + name + "' (expected gbm|mmgbm|smgbm)");
}

void validate(const TestConfig& config) {
    if (!(config.p > 0.0 && config.p < 1.0)) {
        throw InputError("config: p must lie in (0,1)");
    }
    if (config.window < 2) throw InputError("config: window must be >= 2");
    if (config.r < 1 || config.r > 4) throw InputError("config: r must lie in {1,..,4}");
    if (config.B < 2) throw InputError("config: B must be >= 2");
    if (config.redraw_limit < 0) throw InputError("config: redraw_limit must be >= 0");
    if (!(config.step_cap > 0.0)) throw InputError("config: step_cap must be positive");
}

std::vector<Theta> materialize_grid(const models::SeriesSummary& summary,
                                    const ThetaGrid& grid) {
    if (!(grid.unit_scale > 0.0)) {
        throw InputError("grid: unit_scale must be positive");
    }
    std::vector<Theta> out;
    switch (grid.hypothesis) {
        case Hypothesis::Gbm:
            out.push_back(Theta{"gbm", models::gbm_admissible(summary), 0.0, 0.0});
            break;
        case Hypothesis::Mmgbm: {
            if (grid.sojourn_grid.empty()) {
                throw InputError("grid: sojourn grid must be nonempty");
            }
            for (double g : grid.sojourn_grid) {
                out.push_back(Theta{"sojourn=" + format_value(g),
                                    models::mmgbm_admissible(summary, g * grid.unit_scale),
                                    g, 0.0});
            }
            break;
        }
        case Hypothesis::Smgbm: {
            if (grid.sojourn_grid.empty() || grid.shape_grid.empty()) {
                throw InputError("grid: sojourn and shape grids must be nonempty");
            }
            for (double g : grid.sojourn_grid) {
                for (double k : grid.shape_grid) {
                    out.push_back(
                        Theta{"sojourn=" + format_value(g) + " shape=" + format_value(k),
                              models::smgbm_admissible(summary, k, g * grid.unit_scale),
                              g, k});
                }
            }
            break;
        }
    }
    return out;
}

double g_fn(long x, int B) {
    if (x < 0 || x > B) {
        throw std::invalid_argument("g_fn: count out of [0, B]");
    }
    return static_cast<double>(std::min(x, static_cast<long>(B) - x)) /
           static_cast<double>(B);
}

std::vector<double> alpha_theta(const StatVector& t_star, const Ensemble& ensemble,
                                int r) {
    if (r < 1 || r > t_star.r) {
        throw std::invalid_argument("alpha_theta: r exceeds the observed statistic");
    }
    const int B = static_cast<int>(ensemble.stat_rows.size());
    std::vector<double> alpha(static_cast<std::size_t>(r));
    double running = 1.0;
    for (int j = 0; j < r; ++j) {
        long count = 0;
        for (const StatVector& row : ensemble.stat_rows) {
            if (row.r < r) {
                throw std::invalid_argument("alpha_theta: surrogate row is narrower than r");
            }
            if (t_star.t[static_cast<std::size_t>(j)] >=
                row.t[static_cast<std::size_t>(j)]) {
                ++count;
            }
        }
        running = std::min(running, g_fn(count, B));
        alpha[static_cast<std::size_t>(j)] = 2.0 * running;
    }
    return alpha;
}

Ensemble build_ensemble(const models::SeriesSummary& summary,
                        const models::ModelParams& params, std::size_t n_steps,
                        const TestConfig& config, std::size_t theta_index,
                        const std::string& label) {
    validate(config);
    const std::string who = label.empty() ? "theta" : label;
    if (n_steps < static_cast<std::size_t>(config.window) + 3) {
        throw InputError("build_ensemble: series too short for window " +
                         std::to_string(config.window));
    }
    if (!models::validate_step(models::max_hazard(params), summary.dt, config.step_cap)) {
        throw InferenceError("build_ensemble [" + who +
                             "]: max hazard * dt exceeds step cap " +
                             format_value(config.step_cap));
    }

    const std::size_t B = static_cast<std::size_t>(config.B);
    std::vector<std::optional<StatVector>> rows(B);
    std::vector<int> redraws(B, 0);

    parallel_for(B, [&](std::size_t slot) {
        for (int attempt = 0; attempt <= config.redraw_limit; ++attempt) {
            sim::SimRequest req;
            req.model = params;
            req.n_steps = n_steps;
            req.dt = summary.dt;
            req.s0 = kSurrogateS0;
            req.step_cap = config.step_cap;
            req.seed = sim::derive_seed(
                config.master_seed, theta_index,
                static_cast<std::uint64_t>(attempt) * B + slot);
            const sim::SimResult sim_result = sim::simulate(req);
            try {
                rows[slot] = stats::run_pipeline(sim_result.path, config.p,
                                                 config.window, config.r)
                                 .stats;
                redraws[slot] = attempt;
                return;
            } catch (const DegenerateError&) {
                continue;  // fresh seed for this slot
            }
        }
        throw InferenceError("build_ensemble [" + who + "]: slot " +
                             std::to_string(slot) + " exhausted " +
                             std::to_string(config.redraw_limit) +
                             " redraws; theta is incompatible with the statistic");
    });

    Ensemble out;
    out.theta_label = who;
    out.stat_rows.reserve(B);
    for (std::size_t slot = 0; slot < B; ++slot) {
        out.stat_rows.push_back(*rows[slot]);
        out.degenerate_count += redraws[slot];
    }
    return out;
}

TestReport composite_test(const StatVector& t_star,
                          const models::SeriesSummary& summary, const ThetaGrid& grid,
                          std::size_t n_steps, const TestConfig& config) {
    validate(config);
    if (t_star.r < config.r) {
        throw std::invalid_argument("composite_test: observed statistic narrower than r");
    }

    TestReport report;
    report.hypothesis = grid.hypothesis;
    report.observed = t_star;
    report.config = config;
    report.grid = grid;
    report.summary = summary;
    report.n_steps = n_steps;
    report.composite.assign(static_cast<std::size_t>(config.r), 0.0);

    const std::vector<Theta> thetas = materialize_grid(summary, grid);
    for (std::size_t idx = 0; idx < thetas.size(); ++idx) {
        const Theta& theta = thetas[idx];
        const Ensemble ensemble =
            build_ensemble(summary, theta.params, n_steps, config, idx, theta.label);
        ThetaRow row;
        row.label = theta.label;
        row.sojourn_units = theta.sojourn_units;
        row.shape = theta.shape;
        row.alpha = alpha_theta(t_star, ensemble, config.r);
        row.degenerate_count = ensemble.degenerate_count;
        for (std::size_t j = 0; j < row.alpha.size(); ++j) {
            report.composite[j] = std::max(report.composite[j], row.alpha[j]);
        }
        report.per_theta.push_back(std::move(row));
    }
    return report;
}

ObjectiveReport objective_grid(const StatVector& t_star,
                               const models::SeriesSummary& summary,
                               const ThetaGrid& grid, std::size_t n_steps,
                               const TestConfig& config) {
    validate(config);
    if (config.r != 4 || t_star.r < 4) {
        throw std::invalid_argument("objective_grid: the objective needs all four moments");
    }

    ObjectiveReport report;
    report.hypothesis = grid.hypothesis;
    report.config = config;

    const std::vector<Theta> thetas = materialize_grid(summary, grid);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < thetas.size(); ++idx) {
        const Theta& theta = thetas[idx];
        const Ensemble ensemble =
            build_ensemble(summary, theta.params, n_steps, config, idx, theta.label);
        double total = 0.0;
        for (const StatVector& row : ensemble.stat_rows) {
            for (int j = 0; j < 4; ++j) {
                const double d = row.t[static_cast<std::size_t>(j)] -
                                 t_star.t[static_cast<std::size_t>(j)];
                total += d * d;
            }
        }
        const double value = total / static_cast<double>(config.B);
        if (value < best) {
            best = value;
            report.argmin = idx;
        }
        report.rows.push_back(
            ObjectiveRow{theta.label, theta.sojourn_units, theta.shape, value});
    }
    return report;
}

}  // namespace regimetest::infer
