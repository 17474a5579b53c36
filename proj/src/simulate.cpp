#include "regimetest/simulate.hpp"

#include <cmath>
#include <random>

namespace regimetest::sim {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix_fin(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t splitmix_next(std::uint64_t& state) {
    state += kGolden;
    return splitmix_fin(state);
}

struct Streams {
    std::mt19937_64 z;  // Gaussian increments
    std::mt19937_64 p;  // transition draws + initial state
};

Streams make_streams(std::uint64_t path_seed) {
    std::uint64_t s = path_seed;
    const std::uint64_t z_seed = splitmix_next(s);
    const std::uint64_t p_seed = splitmix_next(s);
    return Streams{std::mt19937_64(z_seed), std::mt19937_64(p_seed)};
}

void check_request(const SimRequest& req) {
    if (req.n_steps < 2) {
        throw std::invalid_argument("simulate: need at least 2 points");
    }
    if (!(req.dt > 0.0)) {
        throw std::invalid_argument("simulate: dt must be positive");
    }
    if (!(req.s0 > 0.0)) {
        throw std::invalid_argument("simulate: initial price must be positive");
    }
    if (!models::validate_step(models::max_hazard(req.model), req.dt, req.step_cap)) {
        throw InferenceError(
            "simulate: max hazard * dt exceeds the step cap; refusing to clamp "
            "transition probabilities");
    }
}

int initial_state(const SimRequest& req, InitState x0, std::mt19937_64& p_stream) {
    if (x0 == InitState::State1) return 1;
    if (x0 == InitState::State2) return 2;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double p1 = models::stationary_p1(req.model);
    return unif(p_stream) < p1 ? 1 : 2;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t theta_index,
                          std::uint64_t replication) {
    const std::uint64_t packed = (theta_index << 32) | (replication & 0xFFFFFFFFULL);
    return splitmix_fin(master + kGolden * (packed + 1));
}

SimResult simulate_gbm(const SimRequest& req) {
    const auto& m = std::get<models::GbmParams>(req.model);
    if (m.sigma < 0.0) {
        throw std::invalid_argument("simulate_gbm: sigma must be nonnegative");
    }
    check_request(req);

    Streams rng = make_streams(req.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const double drift = (m.mu - 0.5 * m.sigma * m.sigma) * req.dt;
    const double vol = m.sigma * std::sqrt(req.dt);

    SimResult out;
    out.path.dt = req.dt;
    out.path.prices.reserve(req.n_steps);
    out.path.prices.push_back(req.s0);
    double s = req.s0;
    for (std::size_t i = 1; i < req.n_steps; ++i) {
        s *= std::exp(drift + vol * normal(rng.z));
        out.path.prices.push_back(s);
    }
    return out;
}

SimResult simulate_mmgbm(const SimRequest& req, InitState x0) {
    const auto& m = std::get<models::MmgbmParams>(req.model);
    if (!(m.sigma1 > 0.0) || !(m.sigma2 > 0.0) || m.sigma1 > m.sigma2) {
        throw std::invalid_argument("simulate_mmgbm: need 0 < sigma1 <= sigma2");
    }
    if (!(m.lambda1 > 0.0) || !(m.lambda2 > 0.0)) {
        throw std::invalid_argument("simulate_mmgbm: rates must be positive");
    }
    check_request(req);

    Streams rng = make_streams(req.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const double sqrt_dt = std::sqrt(req.dt);
    // index by state-1: [0] = state 1, [1] = state 2
    const double drift[2] = {(m.mu1 - 0.5 * m.sigma1 * m.sigma1) * req.dt,
                             (m.mu2 - 0.5 * m.sigma2 * m.sigma2) * req.dt};
    const double vol[2] = {m.sigma1 * sqrt_dt, m.sigma2 * sqrt_dt};
    const double flip[2] = {m.lambda1 * req.dt, m.lambda2 * req.dt};

    SimResult out;
    out.path.dt = req.dt;
    out.path.prices.reserve(req.n_steps);
    out.states.reserve(req.n_steps);

    int x = initial_state(req, x0, rng.p);
    double s = req.s0;
    out.path.prices.push_back(s);
    out.states.push_back(static_cast<std::uint8_t>(x));
    for (std::size_t i = 1; i < req.n_steps; ++i) {
        const double z = normal(rng.z);
        s *= std::exp(drift[x - 1] + vol[x - 1] * z);
        if (unif(rng.p) < flip[x - 1]) x = 3 - x;
        out.path.prices.push_back(s);
        out.states.push_back(static_cast<std::uint8_t>(x));
    }
    return out;
}

SimResult simulate_smgbm(const SimRequest& req, InitState x0) {
    const auto& m = std::get<models::SmgbmParams>(req.model);
    if (!(m.sigma1 > 0.0) || !(m.sigma2 > 0.0) || m.sigma1 > m.sigma2) {
        throw std::invalid_argument("simulate_smgbm: need 0 < sigma1 <= sigma2");
    }
    if (!(m.shape1 >= 1.0) || !(m.shape2 >= 1.0)) {
        throw std::invalid_argument("simulate_smgbm: shapes must be >= 1");
    }
    if (!(m.rate1 > 0.0) || !(m.rate2 > 0.0)) {
        throw std::invalid_argument("simulate_smgbm: rates must be positive");
    }
    check_request(req);

    Streams rng = make_streams(req.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const double sqrt_dt = std::sqrt(req.dt);
    const double drift[2] = {(m.mu1 - 0.5 * m.sigma1 * m.sigma1) * req.dt,
                             (m.mu2 - 0.5 * m.sigma2 * m.sigma2) * req.dt};
    const double vol[2] = {m.sigma1 * sqrt_dt, m.sigma2 * sqrt_dt};
    const double shape[2] = {m.shape1, m.shape2};
    const double rate[2] = {m.rate1, m.rate2};

    // The age within a sojourn is always an exact step multiple, so the
    // hazard only ever gets evaluated on the grid {0, dt, 2dt, ...} and the
    // values can be memoized per state.
    std::vector<double> flip_cache[2];
    auto flip_prob = [&](int state, std::size_t age_steps) {
        auto& cache = flip_cache[state - 1];
        while (cache.size() <= age_steps) {
            const double age = static_cast<double>(cache.size()) * req.dt;
            cache.push_back(models::gamma_hazard(shape[state - 1], rate[state - 1], age) *
                            req.dt);
        }
        return cache[age_steps];
    };

    SimResult out;
    out.path.dt = req.dt;
    out.path.prices.reserve(req.n_steps);
    out.states.reserve(req.n_steps);
    out.ages.reserve(req.n_steps);

    int x = initial_state(req, x0, rng.p);
    std::size_t age_steps = 0;
    double s = req.s0;
    out.path.prices.push_back(s);
    out.states.push_back(static_cast<std::uint8_t>(x));
    out.ages.push_back(0.0);
    for (std::size_t i = 1; i < req.n_steps; ++i) {
        const double z = normal(rng.z);
        s *= std::exp(drift[x - 1] + vol[x - 1] * z);
        if (unif(rng.p) < flip_prob(x, age_steps)) {
            x = 3 - x;
            age_steps = 0;
        } else {
            ++age_steps;
        }
        out.path.prices.push_back(s);
        out.states.push_back(static_cast<std::uint8_t>(x));
        out.ages.push_back(static_cast<double>(age_steps) * req.dt);
    }
    return out;
}

SimResult simulate(const SimRequest& req, InitState x0) {
    struct Visitor {
        const SimRequest& req;
        InitState x0;
        SimResult operator()(const models::GbmParams&) const { return simulate_gbm(req); }
        SimResult operator()(const models::MmgbmParams&) const {
            return simulate_mmgbm(req, x0);
        }
        SimResult operator()(const models::SmgbmParams&) const {
            return simulate_smgbm(req, x0);
        }
    };
    return std::visit(Visitor{req, x0}, req.model);
}

}  // namespace regimetest::sim
