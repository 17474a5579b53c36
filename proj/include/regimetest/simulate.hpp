#pragma once

#include <cstdint>

#include "regimetest/models.hpp"
#include "regimetest/types.hpp"

namespace regimetest::sim {

/**
 * @brief Deterministic per-path seed from (master, grid index, replication).
 *
 * The pair is packed into 64 bits (32 each) before a splitmix64 finalizer,
 * so for a fixed master every (theta_index, replication) pair below 2^32
 * maps to a distinct seed regardless of evaluation order.
 */
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t theta_index,
                          std::uint64_t replication);

/// Initial regime convention for the modulated schemes.
enum class InitState : int {
    Stationary = 0,  // drawn from the long-run law (p1, 1-p1) off the P-stream
    State1 = 1,
    State2 = 2,
};

struct SimRequest {
    models::ModelParams model;
    std::size_t n_steps = 0;  // number of price points, >= 2
    double dt = 0.0;          // years per step
    double s0 = 0.0;
    std::uint64_t seed = 0;
    double step_cap = 0.1;    // reject if max hazard * dt exceeds this
};

/// A generated path. `states` (per point, values 1/2) is empty for GBM;
/// `ages` (years since the last regime change, per point) is kept for the
/// semi-Markov scheme only. States change exactly where a transition fired
/// and ages reset to zero exactly there.
struct SimResult {
    PricePath path;
    std::vector<std::uint8_t> states;
    std::vector<double> ages;
};

// Each path consumes two independent substreams derived from its seed: one
// for the Gaussian log-increments (Z), one for the Bernoulli transition
// draws and the optional initial-state draw (P). Per step the schemes take
// one normal off Z, then one uniform off P; GBM takes only the normal.
// Regimes with equal coefficients therefore reproduce the GBM path bit for
// bit under the same seed.

SimResult simulate_gbm(const SimRequest& req);
SimResult simulate_mmgbm(const SimRequest& req, InitState x0 = InitState::Stationary);
SimResult simulate_smgbm(const SimRequest& req, InitState x0 = InitState::Stationary);

/// Dispatch on the model alternative held by the request.
SimResult simulate(const SimRequest& req, InitState x0 = InitState::Stationary);

}  // namespace regimetest::sim
