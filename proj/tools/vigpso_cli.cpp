// Command line front end: bench, run, compare, tune.

#include "vigpso/benchmarks.hpp"
#include "vigpso/harness.hpp"
#include "vigpso/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

using namespace vigpso;
namespace fs = std::filesystem;

namespace {

// foo/bar.csv + "_finals" -> foo/bar_finals.csv
std::string sibling(const std::string& path, const std::string& suffix, const std::string& ext)
{
    fs::path p(path);
    return (p.parent_path() / (p.stem().string() + suffix + ext)).string();
}

// Fail before any runs if an output directory is missing.
void check_dir(const std::string& path)
{
    if (path.empty()) return;
    const auto dir = fs::path(path).parent_path();
    if (!dir.empty() && !fs::is_directory(dir))
        throw io::IoError("cannot write '" + path + "': directory does not exist");
}

io::Format format_for(const std::string& flag, const std::string& out)
{
    if (!flag.empty()) return io::parse_format(flag);
    return fs::path(out).extension() == ".json" ? io::Format::json : io::Format::csv;
}

void print_summary(const std::vector<RunResult>& results)
{
    std::vector<double> finals;
    for (const auto& r : results) finals.push_back(r.final_value);
    const auto s = stats::summarize(finals);
    std::printf("%zu runs  mean %.6e  std %.6e  median %.6e  min %.6e  max %.6e\n", s.n, s.mean,
                s.std_dev, s.median, s.min, s.max);
}

int cmd_bench()
{
    std::printf("%-15s %-15s %-20s %-9s %s\n", "name", "display", "class", "bounds", "formula");
    for (const auto& b : bench::kRegistry) {
        const std::string bounds = "[" + io::fmt_double(b.lower) + ", " + io::fmt_double(b.upper) + "]";
        std::printf("%-15s %-15s %-20s %-9s %s\n", std::string(b.name).c_str(),
                    std::string(b.display_name).c_str(), std::string(to_string(b.separability)).c_str(),
                    bounds.c_str(), std::string(b.formula).c_str());
    }
    return 0;
}

struct RunArgs {
    std::string algo;
    std::string function;
    std::size_t dim = 0;
    std::size_t runs = 1;
    std::uint64_t seed = 1;
    std::string config;
    std::string out;
    std::string format;
    std::size_t trace_stride = 0;
    bool export_graph = false;
    bool full_fidelity = false;
};

int cmd_run(const RunArgs& a)
{
    const Algorithm algo = parse_algorithm(a.algo);
    if (a.export_graph && algo != Algorithm::vigpso)
        throw ConfigError("--export-graph requires --algo vigpso");
    if (a.export_graph && a.out.empty()) throw ConfigError("--export-graph requires --out");

    check_dir(a.out);
    const VigpsoConfig cfg = a.config.empty() ? VigpsoConfig{} : io::load_config(a.config);
    ExperimentPlan plan;
    plan.functions = {a.function};
    plan.dimensions = {a.dim};
    plan.runs = a.runs;
    plan.base_seed = a.seed;
    plan.pso_config = cfg.base;
    plan.vigpso_config = cfg;
    plan.trace_stride = a.trace_stride;
    plan.full_fidelity = a.full_fidelity;
    plan.keep_graphs = a.export_graph;
    plan.algorithms = {algo};
    const auto results = run_batch(plan);

    print_summary(results);
    if (a.out.empty()) return 0;

    if (format_for(a.format, a.out) == io::Format::json) {
        io::write_results_json(results, a.out);
    } else {
        io::write_traces_csv(results, a.out);
        io::write_finals_csv(results, sibling(a.out, "_finals", ".csv"));
    }
    if (a.export_graph)
        for (const auto& r : results)
            io::write_graph_csv(r.graph_weights, r.dim,
                                sibling(a.out, "_graph_seed" + std::to_string(r.seed), ".csv"));
    return 0;
}

struct CompareArgs {
    std::vector<std::string> functions;
    std::vector<std::size_t> dims;
    std::size_t runs = 30;
    std::uint64_t seed = 1;
    std::string pso_config;
    std::string vigpso_config;
    std::string out;
    std::string format;
    std::string results;
    bool tune = false;
    std::uint64_t tune_seed = 10000;
    std::string grid;
    bool full_fidelity = false;
};

int cmd_compare(const CompareArgs& a)
{
    check_dir(a.out);
    check_dir(a.results);
    ExperimentPlan plan;
    plan.functions = a.functions;
    plan.dimensions = a.dims;
    plan.runs = a.runs;
    plan.base_seed = a.seed;
    plan.full_fidelity = a.full_fidelity;
    if (!a.pso_config.empty()) plan.pso_config = io::load_config(a.pso_config).base;
    if (!a.vigpso_config.empty()) plan.vigpso_config = io::load_config(a.vigpso_config);
    // Validate names before any tuning work.
    for (const auto& f : plan.functions) bench::lookup(f);

    if (a.tune) {
        const TuningGrid grid = a.grid.empty() ? TuningGrid{} : io::load_grid(a.grid);
        for (const auto& f : plan.functions)
            for (auto d : plan.dimensions) {
                VigpsoConfig pbase = plan.vigpso_config;
                pbase.base = plan.pso_config;
                const auto tp = tune(grid, Algorithm::pso, f, d, a.tune_seed, pbase);
                const auto tv = tune(grid, Algorithm::vigpso, f, d, a.tune_seed, plan.vigpso_config);
                plan.pso_overrides[{f, d}] = tp.best.base;
                plan.vigpso_overrides[{f, d}] = tv.best;
                std::fprintf(stderr, "tuned %s d=%zu\n", f.c_str(), d);
            }
    }

    const auto results = run_batch(plan);
    const auto report = compare(results);
    std::cout << io::format_report(report);
    if (format_for(a.format, a.out) == io::Format::json)
        io::write_report_json(report, a.out);
    else
        io::write_report_csv(report, a.out);
    if (!a.results.empty()) {
        if (format_for("", a.results) == io::Format::json)
            io::write_results_json(results, a.results);
        else
            io::write_finals_csv(results, a.results);
    }
    return 0;
}

struct TuneArgs {
    std::string algo;
    std::string function;
    std::size_t dim = 0;
    std::string grid;
    std::string config;
    std::string out;
    std::string scores;
    std::uint64_t seed = 10000;
};

int cmd_tune(const TuneArgs& a)
{
    check_dir(a.out);
    check_dir(a.scores);
    const Algorithm algo = parse_algorithm(a.algo);
    const TuningGrid grid = a.grid.empty() ? TuningGrid{} : io::load_grid(a.grid);
    const VigpsoConfig base = a.config.empty() ? VigpsoConfig{} : io::load_config(a.config);
    const auto res = tune(grid, algo, a.function, a.dim, a.seed, base);
    io::save_config(res.best, algo, a.out);
    if (!a.scores.empty()) io::write_tuning_csv(res, a.scores);
    const auto& e = res.table[res.best_index];
    std::printf("%zu combinations, best mean final %.6e\n", res.table.size(), e.mean_final);
    std::cout << io::format_config(res.best, algo);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Particle swarm optimization with variable interaction graphs"};
    app.require_subcommand(1);

    app.add_subcommand("bench", "List benchmark functions");

    RunArgs ra;
    auto* run = app.add_subcommand("run", "Run one algorithm on one function");
    run->add_option("--algo", ra.algo, "pso or vigpso")->required()->check(CLI::IsMember({"pso", "vigpso"}));
    run->add_option("--function", ra.function, "Benchmark name")->required();
    run->add_option("--dim", ra.dim, "Dimension")->required()->check(CLI::PositiveNumber);
    run->add_option("--runs", ra.runs, "Number of runs")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--seed", ra.seed, "Base seed; run r uses seed + r")->capture_default_str();
    run->add_option("--config", ra.config, "Parameter file")->check(CLI::ExistingFile);
    run->add_option("--out", ra.out, "Output path");
    run->add_option("--format", ra.format, "csv or json (default from --out extension)")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--trace-stride", ra.trace_stride, "Keep every K-th trace entry (0 = auto)");
    run->add_flag("--export-graph", ra.export_graph, "Write each run's final interaction graph");
    run->add_flag("--full-fidelity", ra.full_fidelity, "Do not cap run counts at d >= 1000");

    CompareArgs ca;
    auto* cmp = app.add_subcommand("compare", "Run both algorithms and test the difference");
    cmp->add_option("--functions", ca.functions, "Comma separated names")->required()->delimiter(',');
    cmp->add_option("--dims", ca.dims, "Comma separated dimensions")->required()->delimiter(',');
    cmp->add_option("--runs", ca.runs, "Runs per algorithm and cell")->capture_default_str()->check(CLI::Range(2, 1 << 30));
    cmp->add_option("--seed", ca.seed, "Base seed")->capture_default_str();
    cmp->add_option("--pso-config", ca.pso_config, "PSO parameter file")->check(CLI::ExistingFile);
    cmp->add_option("--vigpso-config", ca.vigpso_config, "VIGPSO parameter file")->check(CLI::ExistingFile);
    cmp->add_option("--out", ca.out, "Report path")->required();
    cmp->add_option("--format", ca.format, "csv or json (default from --out extension)")
        ->check(CLI::IsMember({"csv", "json"}));
    cmp->add_option("--results", ca.results, "Also write per-run final values (.csv or .json)");
    cmp->add_flag("--tune", ca.tune, "Grid-search parameters per cell before comparing");
    cmp->add_option("--tune-seed", ca.tune_seed, "Base seed for tuning runs")->capture_default_str();
    cmp->add_option("--grid", ca.grid, "Grid file for --tune")->check(CLI::ExistingFile);
    cmp->add_flag("--full-fidelity", ca.full_fidelity, "Do not cap run counts at d >= 1000");

    TuneArgs ta;
    auto* tn = app.add_subcommand("tune", "Grid-search parameters");
    tn->add_option("--algo", ta.algo, "pso or vigpso")->required()->check(CLI::IsMember({"pso", "vigpso"}));
    tn->add_option("--function", ta.function, "Benchmark name")->required();
    tn->add_option("--dim", ta.dim, "Dimension")->required()->check(CLI::PositiveNumber);
    tn->add_option("--grid", ta.grid, "Grid file")->check(CLI::ExistingFile);
    tn->add_option("--config", ta.config, "Fixed parameters (swarm size, budget, ...)")->check(CLI::ExistingFile);
    tn->add_option("--out", ta.out, "Where to write the selected parameters")->required();
    tn->add_option("--scores", ta.scores, "Write the score of every combination as CSV");
    tn->add_option("--seed", ta.seed, "Base seed for tuning runs")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("bench")) return cmd_bench();
        if (run->parsed()) return cmd_run(ra);
        if (cmp->parsed()) return cmd_compare(ca);
        if (tn->parsed()) return cmd_tune(ta);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
