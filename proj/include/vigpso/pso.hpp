#pragma once

#include "vigpso/core.hpp"

#include <chrono>
#include <cstdint>
#include <string>

namespace vigpso {

/// Hyperparameters of the gbest PSO baseline.
struct PsoConfig {
    double omega = 0.6;
    double c1 = 1.5;
    double c2 = 1.5;
    std::size_t swarm_size = 50;
    std::size_t max_iterations = 300;
    double v_clamp = 5.0;
    VelocityInit velocity_init = VelocityInit::uniform;

    void validate() const
    {
        if (!(omega > 0.0 && omega <= 1.0)) throw ConfigError("omega must lie in (0, 1]");
        if (!(c1 > 0.0)) throw ConfigError("c1 must be > 0");
        if (!(c2 > 0.0)) throw ConfigError("c2 must be > 0");
        if (swarm_size < 2) throw ConfigError("swarm_size must be >= 2");
        if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
        if (!(v_clamp > 0.0)) throw ConfigError("v_clamp must be > 0");
    }

    friend bool operator==(const PsoConfig&, const PsoConfig&) = default;
};

/// One PSO iteration with an explicit inertia weight.
///
/// Per particle, per dimension: draw r1 then r2, apply the velocity
/// equation, clip to [-v_clamp, v_clamp], move, clamp to the box. The
/// particle is then evaluated and pbest/gbest are updated before the next
/// particle moves.
inline void pso_step_with_inertia(SwarmState& state, const PsoConfig& config, double omega,
                                  const Objective& objective, RngStream& rng)
{
    const auto& space = objective.space();
    const std::size_t d = state.dim();
    for (std::size_t i = 0; i < state.swarm_size(); ++i) {
        auto x = state.positions.row(i);
        auto v = state.velocities.row(i);
        auto pb = state.pbest_pos.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double r1 = rng.unit();
            const double r2 = rng.unit();
            double vj = standard_velocity(v[j], x[j], pb[j], state.gbest_pos[j], omega, config.c1,
                                          config.c2, r1, r2);
            vj = std::clamp(vj, -config.v_clamp, config.v_clamp);
            v[j] = vj;
            x[j] = space.clamp(j, x[j] + vj);
        }
        update_bests(state, i, objective);
    }
    ++state.iteration;
}

/// One iteration of the baseline with the fixed configured inertia.
inline void pso_step(SwarmState& state, const PsoConfig& config, const Objective& objective,
                     RngStream& rng)
{
    if (state.iteration >= config.max_iterations)
        throw std::logic_error("pso_step: iteration budget exhausted");
    pso_step_with_inertia(state, config, config.omega, objective, rng);
}

/// Full baseline run from a fresh seeded swarm.
inline RunResult pso_run(const PsoConfig& config, const Objective& objective, std::uint64_t seed)
{
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    RngStream rng(seed);
    SwarmState state = init_swarm(objective.space(), config.swarm_size, rng, objective,
                                  config.v_clamp, config.velocity_init);

    RunResult out;
    out.algorithm = "pso";
    out.function = objective.name();
    out.dim = objective.dim();
    out.seed = seed;
    out.trace.reserve(config.max_iterations + 1);
    out.trace.push_back(state.gbest_val);
    while (state.iteration < config.max_iterations) {
        pso_step(state, config, objective, rng);
        out.trace.push_back(state.gbest_val);
    }
    out.final_value = state.gbest_val;
    out.final_position = state.gbest_pos;
    out.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace vigpso
