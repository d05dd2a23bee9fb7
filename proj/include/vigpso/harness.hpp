#pragma once

#include "vigpso/benchmarks.hpp"
#include "vigpso/pso.hpp"
#include "vigpso/stats.hpp"
#include "vigpso/vigpso.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

namespace vigpso {

enum class Algorithm { pso, vigpso };

inline std::string_view to_string(Algorithm a) { return a == Algorithm::pso ? "pso" : "vigpso"; }

inline Algorithm parse_algorithm(std::string_view s)
{
    if (s == "pso") return Algorithm::pso;
    if (s == "vigpso") return Algorithm::vigpso;
    throw ConfigError("unknown algorithm '" + std::string(s) + "' (expected pso or vigpso)");
}

/// Worker count from VIGPSO_WORKERS, else the number of hardware threads.
inline std::size_t default_workers()
{
    if (const char* env = std::getenv("VIGPSO_WORKERS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
        throw ConfigError(std::string("VIGPSO_WORKERS must be a positive integer, got '") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(0..n-1) on up to `workers` threads. Each index is processed
/// exactly once; the first exception is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn)
{
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

using Cell = std::pair<std::string, std::size_t>;  // (function, dim)

struct ExperimentPlan {
    std::vector<std::string> functions;
    std::vector<std::size_t> dimensions;
    std::size_t runs = 30;
    std::uint64_t base_seed = 1;
    PsoConfig pso_config;
    VigpsoConfig vigpso_config;
    /// 0 selects 1 for d <= 50 and 10 above.
    std::size_t trace_stride = 0;
    /// Run count cap at or above high_dim_threshold unless full_fidelity.
    std::size_t high_dim_runs = 20;
    std::size_t high_dim_threshold = 1000;
    bool full_fidelity = false;
    bool keep_graphs = false;
    std::vector<Algorithm> algorithms{Algorithm::pso, Algorithm::vigpso};
    /// Per-cell configurations, e.g. from tuning.
    std::map<Cell, PsoConfig> pso_overrides;
    std::map<Cell, VigpsoConfig> vigpso_overrides;
    std::size_t workers = 0;  // 0 = default_workers()

    std::size_t runs_for(std::size_t dim) const
    {
        if (!full_fidelity && dim >= high_dim_threshold) return std::min(runs, high_dim_runs);
        return runs;
    }

    std::size_t stride_for(std::size_t dim) const
    {
        if (trace_stride > 0) return trace_stride;
        return dim <= 50 ? 1 : 10;
    }

    const PsoConfig& pso_for(const Cell& c) const
    {
        auto it = pso_overrides.find(c);
        return it == pso_overrides.end() ? pso_config : it->second;
    }

    const VigpsoConfig& vigpso_for(const Cell& c) const
    {
        auto it = vigpso_overrides.find(c);
        return it == vigpso_overrides.end() ? vigpso_config : it->second;
    }
};

/// Keeps trace entries 0, k, 2k, ... (floor(T/k) + 1 of them).
inline void subsample_trace(RunResult& r, std::size_t stride)
{
    if (stride <= 1) return;
    std::vector<double> kept;
    kept.reserve(r.trace.size() / stride + 1);
    for (std::size_t i = 0; i < r.trace.size(); i += stride) kept.push_back(r.trace[i]);
    r.trace = std::move(kept);
    r.trace_stride = stride;
}

inline bool result_less(const RunResult& l, const RunResult& r)
{
    return std::tie(l.algorithm, l.function, l.dim, l.seed) <
           std::tie(r.algorithm, r.function, r.dim, r.seed);
}

/// Executes every (algorithm, function, dim, run) of the plan. Run r uses
/// seed base_seed + r for both algorithms. The result is sorted by
/// (algorithm, function, dim, seed) and does not depend on the worker count.
inline std::vector<RunResult> run_batch(const ExperimentPlan& plan)
{
    if (plan.functions.empty()) throw ConfigError("run_batch: no functions in plan");
    if (plan.dimensions.empty()) throw ConfigError("run_batch: no dimensions in plan");
    if (plan.runs < 1) throw ConfigError("run_batch: runs must be >= 1");
    for (const auto& f : plan.functions) bench::lookup(f);
    for (auto d : plan.dimensions)
        if (d == 0) throw ConfigError("run_batch: dimensions must be >= 1");

    struct Job {
        Algorithm algo;
        Cell cell;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (auto algo : plan.algorithms) {
        for (const auto& f : plan.functions) {
            for (auto d : plan.dimensions) {
                Cell cell{f, d};
                if (algo == Algorithm::pso)
                    plan.pso_for(cell).validate();
                else
                    plan.vigpso_for(cell).validate();
                for (std::size_t r = 0; r < plan.runs_for(d); ++r)
                    jobs.push_back({algo, cell, plan.base_seed + r});
            }
        }
    }

    std::map<Cell, Objective> objectives;
    for (const auto& f : plan.functions)
        for (auto d : plan.dimensions) objectives.emplace(Cell{f, d}, bench::make_objective(f, d));

    std::vector<RunResult> results(jobs.size());
    parallel_for(jobs.size(), plan.workers ? plan.workers : default_workers(), [&](std::size_t k) {
        const Job& job = jobs[k];
        const Objective& obj = objectives.at(job.cell);
        RunResult r = job.algo == Algorithm::pso
                          ? pso_run(plan.pso_for(job.cell), obj, job.seed)
                          : vigpso_run(plan.vigpso_for(job.cell), obj, job.seed, {plan.keep_graphs});
        subsample_trace(r, plan.stride_for(job.cell.second));
        results[k] = std::move(r);
    });
    std::sort(results.begin(), results.end(), result_less);
    return results;
}

enum class Winner { pso, vigpso, none };

inline std::string_view to_string(Winner w)
{
    switch (w) {
    case Winner::pso: return "PSO";
    case Winner::vigpso: return "VIGPSO";
    case Winner::none: return "--";
    }
    return "?";
}

struct ComparisonCell {
    std::string function;
    std::size_t dim = 0;
    stats::SampleSummary pso_summary;
    stats::SampleSummary vigpso_summary;
    /// First sample is PSO, second is VIGPSO.
    stats::MannWhitneyResult test;
    Winner winner = Winner::none;
};

struct ComparisonReport {
    std::vector<ComparisonCell> cells;
};

namespace detail {

inline std::size_t registry_rank(std::string_view name)
{
    for (std::size_t i = 0; i < bench::kRegistry.size(); ++i)
        if (bench::kRegistry[i].name == name) return i;
    return bench::kRegistry.size();
}

}  // namespace detail

/// Groups finals by (function, dim) and tests PSO against VIGPSO in each
/// cell. Cells are ordered by registry position, then name, then dim.
inline ComparisonReport compare(const std::vector<RunResult>& results)
{
    std::map<Cell, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const auto& r : results) {
        auto& g = groups[{r.function, r.dim}];
        if (r.algorithm == "pso")
            g.first.push_back(r.final_value);
        else if (r.algorithm == "vigpso")
            g.second.push_back(r.final_value);
        else
            throw std::invalid_argument("compare: unknown algorithm '" + r.algorithm + "'");
    }
    if (groups.empty()) throw std::invalid_argument("compare: no results");

    std::string missing;
    for (const auto& [cell, g] : groups) {
        if (g.first.size() < 2 || g.second.size() < 2) {
            if (!missing.empty()) missing += ", ";
            missing += cell.first + " d=" + std::to_string(cell.second) +
                       " (pso runs=" + std::to_string(g.first.size()) +
                       ", vigpso runs=" + std::to_string(g.second.size()) + ")";
        }
    }
    if (!missing.empty())
        throw std::invalid_argument("compare: need >= 2 runs per algorithm; incomplete cells: " +
                                    missing);

    std::vector<Cell> order;
    for (const auto& [cell, _] : groups) order.push_back(cell);
    std::sort(order.begin(), order.end(), [](const Cell& l, const Cell& r) {
        return std::tuple(detail::registry_rank(l.first), l.first, l.second) <
               std::tuple(detail::registry_rank(r.first), r.first, r.second);
    });

    ComparisonReport report;
    for (const auto& cell : order) {
        const auto& [pso, vig] = groups.at(cell);
        ComparisonCell c;
        c.function = cell.first;
        c.dim = cell.second;
        c.pso_summary = stats::summarize(pso);
        c.vigpso_summary = stats::summarize(vig);
        c.test = stats::mann_whitney_u(pso, vig);
        c.winner = c.test.lower_objective == stats::Lower::first    ? Winner::pso
                   : c.test.lower_objective == stats::Lower::second ? Winner::vigpso
                                                                    : Winner::none;
        report.cells.push_back(std::move(c));
    }
    return report;
}

struct TuningGrid {
    std::vector<double> omega_values{0.4, 0.5, 0.6, 0.8};
    std::vector<double> c_values{1.0, 1.5, 2.0, 2.5};
    std::vector<double> tau1_values{0.3, 0.5, 0.7};
    std::vector<double> tau2_values{0.3, 0.5, 0.7};
    std::vector<std::size_t> interval_values{5, 10, 15};
    std::size_t tuning_iterations = 100;
    std::size_t tuning_runs = 5;

    void validate(Algorithm algo) const
    {
        if (omega_values.empty() || c_values.empty())
            throw ConfigError("tuning grid: omega and c axes must be non-empty");
        if (algo == Algorithm::vigpso &&
            (tau1_values.empty() || tau2_values.empty() || interval_values.empty()))
            throw ConfigError("tuning grid: tau1, tau2 and interval axes must be non-empty");
        if (tuning_iterations < 1) throw ConfigError("tuning grid: tuning_iterations must be >= 1");
        if (tuning_runs < 1) throw ConfigError("tuning grid: tuning_runs must be >= 1");
    }
};

struct TuningEntry {
    double omega = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;
    std::size_t update_interval = 0;
    double mean_final = 0.0;

    auto key() const { return std::tie(omega, c1, c2, tau1, tau2, update_interval); }
};

struct TuneResult {
    Algorithm algorithm = Algorithm::pso;
    /// For PSO only `best.base` is meaningful.
    VigpsoConfig best;
    std::size_t best_index = 0;
    /// Every admissible combination in ascending (omega, c1, c2, tau1, tau2, k) order.
    std::vector<TuningEntry> table;
};

/// Enumerates the admissible combinations in ascending lexicographic order.
/// The PSO grid spans (omega, c1, c2) only; tau2 > tau1 is skipped.
inline std::vector<TuningEntry> grid_combinations(const TuningGrid& grid, Algorithm algo)
{
    auto sorted = [](auto v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    const auto om = sorted(grid.omega_values);
    const auto cs = sorted(grid.c_values);
    const auto t1 = sorted(grid.tau1_values);
    const auto t2 = sorted(grid.tau2_values);
    const auto ks = sorted(grid.interval_values);

    std::vector<TuningEntry> out;
    for (double w : om)
        for (double c1 : cs)
            for (double c2 : cs) {
                if (algo == Algorithm::pso) {
                    out.push_back({w, c1, c2, 0.0, 0.0, 0, 0.0});
                    continue;
                }
                for (double a : t1)
                    for (double b : t2) {
                        if (b > a) continue;
                        for (auto k : ks) out.push_back({w, c1, c2, a, b, k, 0.0});
                    }
            }
    return out;
}

inline VigpsoConfig apply_entry(VigpsoConfig cfg, const TuningEntry& e, Algorithm algo)
{
    cfg.base.omega = e.omega;
    cfg.base.c1 = e.c1;
    cfg.base.c2 = e.c2;
    if (algo == Algorithm::vigpso) {
        cfg.learn.tau1 = e.tau1;
        cfg.learn.tau2 = e.tau2;
        cfg.learn.update_interval = e.update_interval;
    }
    return cfg;
}

/// Grid search: every admissible combination is scored by the mean final
/// value over tuning_runs runs (seeds seed .. seed + tuning_runs - 1) of
/// tuning_iterations iterations. The lowest mean wins; exact ties go to the
/// lexicographically smallest (omega, c1, c2, tau1, tau2, k). The returned
/// config keeps base's max_iterations and other fields.
inline TuneResult tune(const TuningGrid& grid, Algorithm algo, const Objective& obj,
                       std::uint64_t seed, const VigpsoConfig& base = {}, std::size_t workers = 0)
{
    grid.validate(algo);

    TuneResult res;
    res.algorithm = algo;
    res.table = grid_combinations(grid, algo);

    VigpsoConfig probe = base;
    probe.base.max_iterations = grid.tuning_iterations;
    for (const auto& e : res.table) apply_entry(probe, e, algo).validate();

    const std::size_t runs = grid.tuning_runs;
    std::vector<double> finals(res.table.size() * runs);
    parallel_for(finals.size(), workers ? workers : default_workers(), [&](std::size_t k) {
        const auto& e = res.table[k / runs];
        const std::uint64_t s = seed + k % runs;
        const VigpsoConfig cfg = apply_entry(probe, e, algo);
        finals[k] = algo == Algorithm::pso ? pso_run(cfg.base, obj, s).final_value
                                           : vigpso_run(cfg, obj, s).final_value;
    });

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < res.table.size(); ++i) {
        double sum = 0.0;
        for (std::size_t r = 0; r < runs; ++r) sum += finals[i * runs + r];
        res.table[i].mean_final = sum / static_cast<double>(runs);
        if (res.table[i].mean_final < best || i == 0) {
            best = res.table[i].mean_final;
            res.best_index = i;
        }
    }
    res.best = apply_entry(base, res.table[res.best_index], algo);
    return res;
}

inline TuneResult tune(const TuningGrid& grid, Algorithm algo, std::string_view function,
                       std::size_t dim, std::uint64_t seed, const VigpsoConfig& base = {},
                       std::size_t workers = 0)
{
    return tune(grid, algo, bench::make_objective(function, dim), seed, base, workers);
}

}  // namespace vigpso
