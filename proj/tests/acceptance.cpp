// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 1 3 7      run a subset
//
// Exit status is non-zero when any selected criterion fails.

#include "vigpso/benchmarks.hpp"
#include "vigpso/harness.hpp"
#include "vigpso/io.hpp"
#include "vigpso/pso.hpp"
#include "vigpso/stats.hpp"
#include "vigpso/vigpso.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace vigpso;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Tuned configurations shared between criteria 4 and 5.
struct Tuned {
    PsoConfig pso;
    VigpsoConfig vigpso;
};
std::map<Cell, Tuned> g_tuned;

constexpr std::uint64_t kTuneSeed = 10'000;
constexpr std::uint64_t kEvalSeed = 1;

const Tuned& tuned_for(const std::string& fn, std::size_t dim)
{
    const Cell cell{fn, dim};
    if (auto it = g_tuned.find(cell); it != g_tuned.end()) return it->second;
    const TuningGrid grid;
    VigpsoConfig base;  // S = 50, T = 300, v_clamp = 5
    Tuned t;
    t.pso = tune(grid, Algorithm::pso, fn, dim, kTuneSeed, base).best.base;
    t.vigpso = tune(grid, Algorithm::vigpso, fn, dim, kTuneSeed, base).best;
    return g_tuned.emplace(cell, t).first->second;
}

// ---- 1 ----------------------------------------------------------------------

Outcome reduction_oracle()
{
    std::size_t checked = 0;
    double worst = 0.0;
    RngStream seeds(20250101);
    for (const char* fn : {"sphere", "rosenbrock"}) {
        for (std::size_t d : {5u, 20u}) {
            const auto obj = bench::make_objective(fn, d);
            for (int k = 0; k < 10; ++k) {
                const std::uint64_t seed = seeds.next_u64();
                VigpsoConfig cfg;
                cfg.base.max_iterations = 50;
                cfg.learn = {1.01, 0.3, 5};

                RngStream ref_rng(seed);
                auto ref = init_swarm(obj.space(), cfg.base.swarm_size, ref_rng, obj, cfg.base.v_clamp);
                RngStream rng(seed);
                auto s = init_swarm(obj.space(), cfg.base.swarm_size, rng, obj, cfg.base.v_clamp);
                VigpsoWorkspace ws(d);

                const double T = static_cast<double>(cfg.base.max_iterations);
                while (s.iteration < cfg.base.max_iterations) {
                    const double w = cfg.base.omega * (1.0 - 0.6 * static_cast<double>(ref.iteration) / T);
                    pso_step_with_inertia(ref, cfg.base, w, obj, ref_rng);
                    vigpso_step(s, ws, cfg, obj, rng);
                    auto cmp = [&](std::span<const double> a, std::span<const double> b) {
                        for (std::size_t i = 0; i < a.size(); ++i)
                            worst = std::max(worst, std::abs(a[i] - b[i]));
                    };
                    cmp(s.positions.data(), ref.positions.data());
                    cmp(s.velocities.data(), ref.velocities.data());
                    cmp(s.pbest_pos.data(), ref.pbest_pos.data());
                    cmp(s.pbest_val, ref.pbest_val);
                    cmp(s.gbest_pos, ref.gbest_pos);
                    worst = std::max(worst, std::abs(s.gbest_val - ref.gbest_val));
                }
                ++checked;
            }
        }
    }
    std::ostringstream os;
    os << checked << " trajectories (sphere/rosenbrock, d in {5,20}, T=50), max |diff| = " << worst;
    return {worst <= 1e-12, os.str()};
}

// ---- 2 ----------------------------------------------------------------------

Outcome benchmark_correctness()
{
    std::size_t failures = 0;
    double worst = 0.0;
    for (const auto& spec : bench::kRegistry) {
        for (std::size_t d : {1u, 2u, 5u, 10u, 30u, 50u, 1000u}) {
            const double v = bench::evaluate(spec.name, bench::optimum_point(spec.name, d));
            worst = std::max(worst, std::abs(v));
            if (std::abs(v) > 1e-12) ++failures;
        }
    }
    struct Example {
        const char* fn;
        std::vector<double> x;
        double expected;
    };
    const std::vector<Example> examples{
        {"sphere", {1, 2, 3}, 14},
        {"sum_squares", {1, 2, 3}, 36},
        {"schwefel_2_22", {1, -2, 3}, 12},
        {"dixon_price", {1, 1}, 2},
        {"rastrigin", {0, 0, 0}, 0},
        {"rosenbrock", {1, 1, 1, 1}, 0},
        {"griewank", std::vector<double>(10, 0.0), 0},
        {"alpine", std::vector<double>(5, 0.0), 0},
    };
    std::size_t exact = 0;
    for (const auto& e : examples)
        if (bench::evaluate(e.fn, e.x) == e.expected) ++exact;
        else ++failures;
    std::ostringstream os;
    os << "max |f(x*)| = " << worst << " over 8 functions x 7 dims; " << exact
       << "/8 worked examples exact";
    return {failures == 0, os.str()};
}

// ---- 3 ----------------------------------------------------------------------

Outcome mann_whitney_oracle()
{
    double worst_exact = 0.0;
    double worst_approx = 0.0;
    std::size_t pairs = 0;
    for (std::size_t n = 2; n <= 8; ++n) {
        const std::size_t total = 2 * n;
        // Enumerate every assignment of ranks 1..2n to the first sample.
        std::vector<std::uint32_t> masks;
        std::vector<std::size_t> us;
        for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) != n) continue;
            std::size_t u = 0, b_seen = 0;
            for (std::size_t r = 0; r < total; ++r) {
                if (mask & (1u << r)) u += b_seen;
                else ++b_seen;
            }
            masks.push_back(mask);
            us.push_back(u);
        }
        std::vector<std::size_t> hist(n * n + 1, 0);
        for (auto u : us) ++hist[u];
        const double count = static_cast<double>(masks.size());

        for (std::size_t k = 0; k < masks.size(); ++k) {
            std::vector<double> a, b;
            for (std::size_t r = 0; r < total; ++r)
                ((masks[k] & (1u << r)) ? a : b).push_back(static_cast<double>(r + 1));
            std::size_t lo = 0, hi = 0;
            for (std::size_t u = 0; u < hist.size(); ++u) {
                if (u <= us[k]) lo += hist[u];
                if (u >= us[k]) hi += hist[u];
            }
            const double oracle = std::min(1.0, 2.0 * static_cast<double>(std::min(lo, hi)) / count);
            const auto got = stats::mann_whitney_u(a, b);
            worst_exact = std::max(worst_exact, std::abs(got.p_value - oracle));
            if (!got.exact || got.u_statistic != static_cast<double>(us[k])) worst_exact = 1.0;
            if (n == 8) {
                const auto approx = stats::mann_whitney_u(a, b, stats::UMethod::normal);
                worst_approx = std::max(worst_approx, std::abs(approx.p_value - oracle));
            }
            ++pairs;
        }
    }
    std::ostringstream os;
    os << pairs << " tie-free sample pairs (n_a = n_b = 2..8); exact max err " << worst_exact
       << " (tol 1e-12), normal approx at n=8 max err " << worst_approx << " (tol 0.02)";
    return {worst_exact <= 1e-12 && worst_approx <= 0.02, os.str()};
}

// ---- 4 ----------------------------------------------------------------------

Outcome table_reproduction()
{
    const std::vector<std::string> fns{"sphere", "sum_squares", "schwefel_2_22", "dixon_price",
                                       "rosenbrock"};
    const std::vector<std::size_t> dims{10, 30, 50};

    ExperimentPlan plan;
    plan.functions = fns;
    plan.dimensions = dims;
    plan.runs = 30;
    plan.base_seed = kEvalSeed;
    for (const auto& f : fns)
        for (auto d : dims) {
            const auto& t = tuned_for(f, d);
            plan.pso_overrides[{f, d}] = t.pso;
            plan.vigpso_overrides[{f, d}] = t.vigpso;
        }
    const auto report = compare(run_batch(plan));
    std::cout << io::format_report(report);

    std::size_t wins = 0;
    for (const auto& c : report.cells)
        if (c.winner == Winner::vigpso && c.test.p_value < 0.05 &&
            c.vigpso_summary.median < c.pso_summary.median)
            ++wins;
    std::ostringstream os;
    os << "VIGPSO significantly better in " << wins << "/" << report.cells.size()
       << " cells (need >= 12; S=50, T=300, 30 runs, per-cell tuned)";
    return {report.cells.size() == 15 && wins >= 12, os.str()};
}

// ---- 5 ----------------------------------------------------------------------

Outcome high_dimension_spot_check()
{
    // d = 1000 reuses the Sphere d = 50 tuned configurations.
    const auto& t = tuned_for("sphere", 50);
    ExperimentPlan plan;
    plan.functions = {"sphere"};
    plan.dimensions = {1000};
    plan.runs = 10;
    plan.base_seed = kEvalSeed;
    plan.pso_config = t.pso;
    plan.vigpso_config = t.vigpso;
    plan.pso_config.max_iterations = 300;
    plan.vigpso_config.base.max_iterations = 300;
    const auto results = run_batch(plan);
    const auto report = compare(results);
    const auto& c = report.cells.at(0);
    std::ostringstream os;
    os << "sphere d=1000, 10 runs: PSO median " << c.pso_summary.median << ", VIGPSO median "
       << c.vigpso_summary.median << ", p = " << c.test.p_value;
    return {c.vigpso_summary.median < c.pso_summary.median, os.str()};
}

// ---- 6 ----------------------------------------------------------------------

struct StepTimes {
    double tick_mean = 0.0;
    double all_mean = 0.0;
};

StepTimes time_vigpso(std::size_t d, std::size_t reps)
{
    VigpsoConfig cfg;
    cfg.base.swarm_size = 50;
    cfg.base.max_iterations = 100;
    cfg.learn = {0.5, 0.3, 5};
    const auto obj = bench::make_objective("sphere", d);
    double tick_total = 0.0, all_total = 0.0;
    std::size_t ticks = 0, steps = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        RngStream rng(500 + r);
        auto s = init_swarm(obj.space(), cfg.base.swarm_size, rng, obj, cfg.base.v_clamp);
        VigpsoWorkspace ws(d);
        while (s.iteration < cfg.base.max_iterations) {
            const auto t0 = Clock::now();
            const bool tick = vigpso_step(s, ws, cfg, obj, rng);
            const double dt = seconds_since(t0);
            all_total += dt;
            ++steps;
            if (tick) {
                tick_total += dt;
                ++ticks;
            }
        }
    }
    return {tick_total / static_cast<double>(ticks), all_total / static_cast<double>(steps)};
}

double time_pso(std::size_t d, std::size_t reps)
{
    PsoConfig cfg;
    cfg.swarm_size = 50;
    cfg.max_iterations = 100;
    const auto obj = bench::make_objective("sphere", d);
    double total = 0.0;
    std::size_t steps = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        RngStream rng(700 + r);
        auto s = init_swarm(obj.space(), cfg.swarm_size, rng, obj, cfg.v_clamp);
        const auto t0 = Clock::now();
        while (s.iteration < cfg.max_iterations) pso_step(s, cfg, obj, rng);
        total += seconds_since(t0);
        steps += cfg.max_iterations;
    }
    return total / static_cast<double>(steps);
}

Outcome complexity_signature()
{
    time_vigpso(100, 2);  // warm caches and the allocator
    time_pso(100, 5);
    const auto v100 = time_vigpso(100, 20);
    const auto v200 = time_vigpso(200, 20);
    const double p100 = time_pso(100, 100);
    const double p200 = time_pso(200, 100);
    const double vr = v200.tick_mean / v100.tick_mean;
    const double pr = p200 / p100;
    std::ostringstream os;
    os.precision(3);
    os << "VIGPSO tick-iteration ratio d=200/d=100: " << vr << " (" << v100.tick_mean * 1e3 << " ms -> "
       << v200.tick_mean * 1e3 << " ms, need [3,5]); PSO iteration ratio: " << pr << " ("
       << p100 * 1e3 << " ms -> " << p200 * 1e3 << " ms, need [1.5,3])";
    return {vr >= 3.0 && vr <= 5.0 && pr >= 1.5 && pr <= 3.0, os.str()};
}

// ---- 7 ----------------------------------------------------------------------

Outcome invariant_suite()
{
    const char* names[] = {"sphere",     "sum_squares", "schwefel_2_22", "dixon_price",
                           "rastrigin",  "rosenbrock",  "griewank",      "alpine"};
    RngStream gen(777);
    std::map<std::string, std::size_t> violations;
    const std::size_t cases = 1000;

    for (std::size_t c = 0; c < cases; ++c) {
        // Swarm run with per-step checks.
        VigpsoConfig cfg;
        cfg.base.omega = gen.uniform(0.1, 1.0);
        cfg.base.c1 = gen.uniform(0.3, 3.0);
        cfg.base.c2 = gen.uniform(0.3, 3.0);
        cfg.base.v_clamp = gen.uniform(0.2, 6.0);
        cfg.base.swarm_size = 2 + gen.next_u64() % 20;
        cfg.base.max_iterations = 10 + gen.next_u64() % 15;
        cfg.learn.tau2 = gen.uniform(0.01, 0.8);
        cfg.learn.tau1 = gen.uniform(cfg.learn.tau2, 0.99);
        cfg.learn.update_interval = 1 + gen.next_u64() % 5;
        const std::size_t d = 1 + gen.next_u64() % 12;
        const auto obj = bench::make_objective(names[c % 8], d);
        const std::uint64_t seed = gen.next_u64();

        RngStream rng(seed);
        auto s = init_swarm(obj.space(), cfg.base.swarm_size, rng, obj, cfg.base.v_clamp);
        VigpsoWorkspace ws(d);
        double prev = s.gbest_val;
        std::vector<double> trace{s.gbest_val};
        while (s.iteration < cfg.base.max_iterations) {
            vigpso_step(s, ws, cfg, obj, rng);
            trace.push_back(s.gbest_val);
            if (s.gbest_val > prev) ++violations["gbest monotone"];
            prev = s.gbest_val;
            double min_pbest = INFINITY;
            for (std::size_t i = 0; i < s.swarm_size(); ++i) {
                if (!obj.space().contains(s.positions.row(i))) ++violations["positions in bounds"];
                for (double v : s.velocities.row(i))
                    if (std::abs(v) > cfg.base.v_clamp) ++violations["velocity clamp"];
                min_pbest = std::min(min_pbest, s.pbest_val[i]);
            }
            if (min_pbest != s.gbest_val || obj(s.gbest_pos) != s.gbest_val)
                ++violations["gbest = min pbest"];
            for (std::size_t i = 0; i < d; ++i) {
                if (ws.graph.weight(i, i) != 0.0) ++violations["graph zero diagonal"];
                for (std::size_t j = 0; j < d; ++j) {
                    const double w = ws.graph.weight(i, j);
                    if (w != ws.graph.weight(j, i)) ++violations["graph symmetric"];
                    if (w < 0.0 || w > 1.0) ++violations["graph weight range"];
                }
            }
        }
        // Seed determinism.
        if (vigpso_run(cfg, obj, seed).trace != trace) ++violations["seed determinism"];

        // Standalone update_graph on random movements.
        {
            const std::size_t gd = 2 + gen.next_u64() % 10;
            const std::size_t gs = 2 + gen.next_u64() % 30;
            Matrix dx(gs, gd);
            for (std::size_t p = 0; p < gs; ++p) {
                const double z = gen.uniform(-1.0, 1.0);
                for (std::size_t j = 0; j < gd; ++j)
                    dx(p, j) = (j % 2 ? z : 0.0) + gen.uniform(-1.0, 1.0);
            }
            InteractionGraph g(gd);
            for (std::size_t i = 0; i < gd; ++i)
                for (std::size_t j = i + 1; j < gd; ++j)
                    if (gen.unit() < 0.3) g.set_edge(i, j, gen.unit());
            update_graph(g, dx, cfg.learn);
            for (std::size_t i = 0; i < gd; ++i) {
                if (g.weight(i, i) != 0.0) ++violations["graph zero diagonal"];
                for (std::size_t j = 0; j < gd; ++j) {
                    if (g.weight(i, j) != g.weight(j, i)) ++violations["graph symmetric"];
                    if (g.weight(i, j) < 0.0 || g.weight(i, j) > 1.0) ++violations["graph weight range"];
                }
            }
        }

        // Alpha schedule.
        {
            const std::size_t tmax = 1 + gen.next_u64() % 500;
            const double cap = gen.uniform(0.01, 0.99);
            const double rate = gen.uniform(0.1, 5.0);
            double pa = -1.0;
            for (std::size_t t = 0; t <= tmax; ++t) {
                const double a = alpha_schedule(t, tmax, cap, rate);
                if (!(a > pa)) ++violations["alpha monotone"];
                if (a > cap) ++violations["alpha cap"];
                pa = a;
            }
        }

        // Blend convexity before clipping.
        {
            const std::size_t bd = 2 + gen.next_u64() % 10;
            InteractionGraph g(bd);
            for (std::size_t i = 0; i < bd; ++i)
                for (std::size_t j = i + 1; j < bd; ++j)
                    if (gen.unit() < 0.5) g.set_edge(i, j, gen.uniform(0.01, 1.0));
            std::vector<double> v(bd);
            for (double& x : v) x = gen.uniform(-4.0, 4.0);
            const double alpha = gen.uniform(0.0, 0.99);
            const auto out = blend_velocity(v, g, alpha, 1e300);
            for (std::size_t k = 0; k < bd; ++k) {
                const auto nb = neighbors(g, k);
                if (nb.empty()) continue;
                double num = 0.0, den = 0.0;
                for (auto [j, w] : nb) {
                    num += w * v[j];
                    den += w;
                }
                const double vig = num / den;
                if (out[k] < std::min(v[k], vig) - 1e-12 || out[k] > std::max(v[k], vig) + 1e-12)
                    ++violations["blend convexity"];
            }
        }

        // U complement identity.
        {
            const std::size_t na = 2 + gen.next_u64() % 20;
            const std::size_t nb = 2 + gen.next_u64() % 20;
            std::vector<double> a(na), b(nb);
            for (double& x : a) x = std::round(gen.uniform(0.0, 20.0));
            for (double& x : b) x = std::round(gen.uniform(0.0, 20.0));
            const double sum = stats::mann_whitney_u(a, b).u_statistic +
                               stats::mann_whitney_u(b, a).u_statistic;
            if (sum != static_cast<double>(na * nb)) ++violations["U complement"];
        }
    }

    std::size_t total = 0;
    std::ostringstream os;
    for (const auto& [k, v] : violations) {
        total += v;
        os << k << ": " << v << " violations; ";
    }
    os << cases << " randomized cases, " << total << " violations";
    return {total == 0, os.str()};
}

// ---- 8 ----------------------------------------------------------------------

Outcome grid_search_contract()
{
    const TuningGrid grid;
    bool ok = true;
    std::ostringstream os;
    for (auto algo : {Algorithm::pso, Algorithm::vigpso}) {
        const auto a = tune(grid, algo, "sphere", 10, kTuneSeed);
        const auto b = tune(grid, algo, "sphere", 10, kTuneSeed);
        const double best = a.table[a.best_index].mean_final;
        bool argmin = true;
        for (std::size_t i = 0; i < a.table.size(); ++i) {
            if (a.table[i].mean_final < best) argmin = false;
            if (a.table[i].mean_final == best && i < a.best_index) argmin = false;
            if (i > 0 && !(a.table[i - 1].key() < a.table[i].key())) argmin = false;
        }
        const std::size_t expected = algo == Algorithm::pso ? 64 : 64 * 6 * 3;
        const bool same = a.best_index == b.best_index && a.best == b.best;
        ok = ok && argmin && same && a.table.size() == expected;
        const auto& e = a.table[a.best_index];
        os << to_string(algo) << ": " << a.table.size() << " combos, best (w=" << e.omega
           << ", c1=" << e.c1 << ", c2=" << e.c2;
        if (algo == Algorithm::vigpso)
            os << ", tau1=" << e.tau1 << ", tau2=" << e.tau2 << ", k=" << e.update_interval;
        os << ") mean " << best << (argmin ? "" : " NOT ARGMIN") << (same ? "" : " NOT REPRODUCIBLE")
           << "; ";
    }
    return {ok, os.str()};
}

}  // namespace

int main(int argc, char** argv)
{
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {1, "Reduction oracle", reduction_oracle},
        {2, "Benchmark correctness", benchmark_correctness},
        {3, "Mann-Whitney oracle", mann_whitney_oracle},
        {7, "Invariant suite", invariant_suite},
        {8, "Grid-search contract", grid_search_contract},
        {6, "Complexity signature", complexity_signature},
        {4, "Desk-scale comparison table", table_reproduction},
        {5, "High-dimension spot check", high_dimension_spot_check},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : all) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %d. %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
