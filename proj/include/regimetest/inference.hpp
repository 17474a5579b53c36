#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regimetest/models.hpp"
#include "regimetest/types.hpp"

namespace regimetest::infer {

enum class Hypothesis { Gbm, Mmgbm, Smgbm };

const char* hypothesis_name(Hypothesis h);
Hypothesis hypothesis_from_name(const std::string& name);  // throws InputError

/// Knobs of the surrogate test.
struct TestConfig {
    double p = 0.15;                 // squeeze percentile
    int window = 20;                 // rolling window, in returns
    int r = 4;                       // statistic dimension, 1..4
    int B = 200;                     // surrogate replications per theta
    std::uint64_t master_seed = 42;
    int redraw_limit = 20;           // extra draws allowed per replication slot
    double step_cap = 0.1;           // Bernoulli step bound on hazard * dt
};

void validate(const TestConfig& config);

/// Finite search slice of the admissible class. Sojourn values are the mean
/// state-1 sojourn in grid units (unit_scale years each, days by default);
/// shapes apply to the semi-Markov hypothesis only.
struct ThetaGrid {
    Hypothesis hypothesis = Hypothesis::Gbm;
    std::vector<double> sojourn_grid;
    std::vector<double> shape_grid;
    double unit_scale = 1.0 / 250.0;  // years per grid unit
};

/// One fully parameterized grid point.
struct Theta {
    std::string label;
    models::ModelParams params;
    double sojourn_units = 0.0;  // 0 for GBM
    double shape = 0.0;          // 0 unless semi-Markov
};

/// Expand the grid against a summary. GBM yields the single admissible
/// point; the modulated hypotheses enumerate sojourns (outer) and shapes
/// (inner), which fixes both the seed indexing and objective tie-breaks.
std::vector<Theta> materialize_grid(const models::SeriesSummary& summary,
                                    const ThetaGrid& grid);

/// Surrogate statistic rows for one theta.
struct Ensemble {
    std::string theta_label;
    std::vector<StatVector> stat_rows;  // exactly B entries
    int degenerate_count = 0;           // redraws consumed across all slots
};

/// Folded tail count: min(x, B-x)/B.
double g_fn(long x, int B);

/**
 * @brief Two-sided Monte Carlo significance vector against one ensemble.
 *
 * c_j counts surrogate rows with t*_j >= t^i_j (ties count). The j-th entry
 * is twice the running minimum of g_fn(c_1..c_j), so one ensemble yields
 * alpha_1..alpha_r at once and the vector is nonincreasing by construction.
 */
std::vector<double> alpha_theta(const StatVector& t_star, const Ensemble& ensemble,
                                int r);

/**
 * @brief Simulate B surrogate paths under `params` and push each through the
 *        identical statistics pipeline as the observed series.
 *
 * Every path gets its own seed from (master_seed, theta_index, slot), with
 * degenerate draws (too few squeezes, or zero spread when r >= 3) retried on
 * fresh seeds up to redraw_limit per slot. Results do not depend on thread
 * scheduling.
 *
 * @throws InferenceError if a slot exhausts its redraw budget, which signals
 *         a theta incompatible with the statistic.
 */
Ensemble build_ensemble(const models::SeriesSummary& summary,
                        const models::ModelParams& params, std::size_t n_steps,
                        const TestConfig& config, std::size_t theta_index = 0,
                        const std::string& label = "");

struct ThetaRow {
    std::string label;
    double sojourn_units = 0.0;
    double shape = 0.0;
    std::vector<double> alpha;
    int degenerate_count = 0;
};

struct TestReport {
    Hypothesis hypothesis = Hypothesis::Gbm;
    StatVector observed;
    std::vector<ThetaRow> per_theta;
    std::vector<double> composite;  // componentwise max over the rows
    TestConfig config;
    ThetaGrid grid;
    models::SeriesSummary summary;
    std::size_t n_steps = 0;
};

/// Full composite test: per-theta alpha rows over the grid plus their
/// componentwise max. Deterministic in all inputs including master_seed.
TestReport composite_test(const StatVector& t_star,
                          const models::SeriesSummary& summary, const ThetaGrid& grid,
                          std::size_t n_steps, const TestConfig& config);

struct ObjectiveRow {
    std::string label;
    double sojourn_units = 0.0;
    double shape = 0.0;
    double value = 0.0;
};

struct ObjectiveReport {
    Hypothesis hypothesis = Hypothesis::Gbm;
    std::vector<ObjectiveRow> rows;
    std::size_t argmin = 0;
    TestConfig config;
};

/// Mean squared four-component distance between surrogate rows and t*,
/// per grid point; ties break toward the earlier grid point (smaller
/// sojourn, then smaller shape). Requires r = 4.
ObjectiveReport objective_grid(const StatVector& t_star,
                               const models::SeriesSummary& summary,
                               const ThetaGrid& grid, std::size_t n_steps,
                               const TestConfig& config);

}  // namespace regimetest::infer
