#pragma once

#include "vigpso/core.hpp"
#include "vigpso/graph.hpp"
#include "vigpso/pso.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace vigpso {

/// VIGPSO hyperparameters: the baseline's, the graph learning thresholds,
/// and the blend/inertia schedule constants.
struct VigpsoConfig {
    PsoConfig base;
    VigLearnConfig learn;
    double alpha_cap = 0.3;
    double alpha_rate = 2.0;
    double inertia_decay = 0.6;

    void validate() const
    {
        base.validate();
        learn.validate();
        if (!(alpha_cap > 0.0 && alpha_cap < 1.0)) throw ConfigError("alpha_cap must lie in (0, 1)");
        if (!(alpha_rate > 0.0)) throw ConfigError("alpha_rate must be > 0");
        if (!(inertia_decay >= 0.0 && inertia_decay < 1.0))
            throw ConfigError("inertia_decay must lie in [0, 1)");
    }

    friend bool operator==(const VigpsoConfig&, const VigpsoConfig&) = default;
};

/// Blend weight: cap * (1 - exp(-rate * t / t_max)).
inline double alpha_schedule(std::size_t t, std::size_t t_max, double cap, double rate)
{
    const double prog = static_cast<double>(t) / static_cast<double>(t_max);
    return cap * (1.0 - std::exp(-rate * prog));
}

/// Linearly decaying inertia: omega * (1 - decay * t / t_max).
inline double inertia_schedule(double omega, std::size_t t, std::size_t t_max, double decay)
{
    return omega * (1.0 - decay * static_cast<double>(t) / static_cast<double>(t_max));
}

/// Mixes each dimension's standard velocity with the weighted mean of its
/// graph neighbors' standard velocities, then clips. v_std is read only, so
/// the result does not depend on dimension order.
inline void blend_velocity(std::span<const double> v_std, const NeighborTable& table, double alpha,
                           double v_clamp, std::span<double> out)
{
    for (std::size_t d = 0; d < v_std.size(); ++d) {
        double v = v_std[d];
        if (!table.empty(d)) v = (1.0 - alpha) * v + alpha * table.mix(d, v_std);
        out[d] = std::clamp(v, -v_clamp, v_clamp);
    }
}

inline std::vector<double> blend_velocity(std::span<const double> v_std, const InteractionGraph& graph,
                                          double alpha, double v_clamp)
{
    if (v_std.size() != graph.dim())
        throw std::invalid_argument("blend_velocity: velocity length does not match graph dim");
    std::vector<double> out(v_std.size());
    blend_velocity(v_std, NeighborTable(graph), alpha, v_clamp, out);
    return out;
}

/// Mutable per-run VIGPSO state beyond the swarm itself.
struct VigpsoWorkspace {
    InteractionGraph graph;
    NeighborTable table;
    Matrix x_old;
    std::vector<double> v_std;

    explicit VigpsoWorkspace(std::size_t dim) : graph(dim), table(graph), v_std(dim) {}

    /// Replaces the graph and rebuilds the neighbor table.
    void reset_graph(InteractionGraph g)
    {
        graph = std::move(g);
        table = NeighborTable(graph);
    }
};

/// One VIGPSO iteration.
///
/// Uses the iteration counter t at entry for both schedules. Per particle:
/// standard velocities for every dimension (r1 then r2 per dimension, same
/// draw order as the baseline), blend, clip, move, clamp, then pbest/gbest.
/// When the incremented counter is a multiple of update_interval the graph
/// is relearned from this iteration's displacements.
///
/// Returns true when the graph was updated.
inline bool vigpso_step(SwarmState& state, VigpsoWorkspace& ws, const VigpsoConfig& config,
                        const Objective& objective, RngStream& rng)
{
    const auto& base = config.base;
    if (state.iteration >= base.max_iterations)
        throw std::logic_error("vigpso_step: iteration budget exhausted");

    const std::size_t t = state.iteration;
    const std::size_t d = state.dim();
    const double omega = inertia_schedule(base.omega, t, base.max_iterations, config.inertia_decay);
    const double alpha = alpha_schedule(t, base.max_iterations, config.alpha_cap, config.alpha_rate);
    const auto& space = objective.space();

    ws.x_old = state.positions;

    for (std::size_t i = 0; i < state.swarm_size(); ++i) {
        auto x = state.positions.row(i);
        auto v = state.velocities.row(i);
        auto pb = state.pbest_pos.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double r1 = rng.unit();
            const double r2 = rng.unit();
            ws.v_std[j] = standard_velocity(v[j], x[j], pb[j], state.gbest_pos[j], omega, base.c1,
                                            base.c2, r1, r2);
        }
        blend_velocity(ws.v_std, ws.table, alpha, base.v_clamp, v);
        for (std::size_t j = 0; j < d; ++j) x[j] = space.clamp(j, x[j] + v[j]);
        update_bests(state, i, objective);
    }
    ++state.iteration;

    if (state.iteration % config.learn.update_interval != 0) return false;

    Matrix delta(state.swarm_size(), d);
    for (std::size_t i = 0; i < state.swarm_size(); ++i) {
        auto now = state.positions.row(i);
        auto before = ws.x_old.row(i);
        auto out = delta.row(i);
        for (std::size_t j = 0; j < d; ++j) out[j] = now[j] - before[j];
    }
    update_graph(ws.graph, delta, config.learn);
    ws.table = NeighborTable(ws.graph);
    return true;
}

struct VigpsoRunOptions {
    bool keep_graph = false;
};

/// Full VIGPSO run from a fresh seeded swarm with an empty graph.
inline RunResult vigpso_run(const VigpsoConfig& config, const Objective& objective, std::uint64_t seed,
                            VigpsoRunOptions options = {})
{
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto& base = config.base;

    RngStream rng(seed);
    SwarmState state = init_swarm(objective.space(), base.swarm_size, rng, objective, base.v_clamp,
                                  base.velocity_init);
    VigpsoWorkspace ws(objective.dim());

    RunResult out;
    out.algorithm = "vigpso";
    out.function = objective.name();
    out.dim = objective.dim();
    out.seed = seed;
    out.trace.reserve(base.max_iterations + 1);
    out.trace.push_back(state.gbest_val);
    while (state.iteration < base.max_iterations) {
        vigpso_step(state, ws, config, objective, rng);
        out.trace.push_back(state.gbest_val);
    }
    out.final_value = state.gbest_val;
    out.final_position = state.gbest_pos;
    if (options.keep_graph) {
        const auto w = ws.graph.weights();
        out.graph_weights.assign(w.begin(), w.end());
    }
    out.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace vigpso
