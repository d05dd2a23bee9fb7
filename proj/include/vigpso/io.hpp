#pragma once

#include "vigpso/harness.hpp"

#include <json.hpp>

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vigpso::io {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

inline Format parse_format(std::string_view s)
{
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ConfigError("unknown format '" + std::string(s) + "' (expected csv or json)");
}

/// Shortest text that parses back to the same double.
inline std::string fmt_double(double x)
{
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw std::logic_error("fmt_double: to_chars failed");
    return std::string(buf, end);
}

inline double parse_double(const std::string& s)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw IoError("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw IoError("trailing characters in number: '" + s + "'");
    return v;
}

inline std::uint64_t parse_u64(const std::string& s)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw IoError("not an unsigned integer: '" + s + "'");
    return v;
}

inline std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
    return out;
}

inline std::ifstream open_in(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading: " + std::strerror(errno));
    return in;
}

inline void finish(std::ofstream& out, const std::string& path)
{
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline std::vector<std::string> split(const std::string& line, char sep = ',')
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

inline std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// ---- results ---------------------------------------------------------------

inline constexpr const char* kTraceHeader = "algorithm,function,dim,seed,iteration,gbest";
inline constexpr const char* kFinalsHeader =
    "algorithm,function,dim,seed,final_value,wall_time_seconds";
inline constexpr const char* kReportHeader =
    "function,dim,pso_mean,pso_std,vigpso_mean,vigpso_std,u_statistic,p_value,winner";

inline void write_traces_csv(const std::vector<RunResult>& results, const std::string& path)
{
    auto out = open_out(path);
    out << kTraceHeader << '\n';
    for (const auto& r : results)
        for (std::size_t k = 0; k < r.trace.size(); ++k)
            out << r.algorithm << ',' << r.function << ',' << r.dim << ',' << r.seed << ','
                << k * r.trace_stride << ',' << fmt_double(r.trace[k]) << '\n';
    finish(out, path);
}

inline void write_finals_csv(const std::vector<RunResult>& results, const std::string& path)
{
    auto out = open_out(path);
    out << kFinalsHeader << '\n';
    for (const auto& r : results)
        out << r.algorithm << ',' << r.function << ',' << r.dim << ',' << r.seed << ','
            << fmt_double(r.final_value) << ',' << fmt_double(r.wall_time_seconds) << '\n';
    finish(out, path);
}

inline nlohmann::json to_json(const RunResult& r)
{
    return {{"algorithm", r.algorithm},
            {"function", r.function},
            {"dim", r.dim},
            {"seed", r.seed},
            {"trace_stride", r.trace_stride},
            {"trace", r.trace},
            {"final_value", r.final_value},
            {"final_position", r.final_position},
            {"wall_time_seconds", r.wall_time_seconds}};
}

inline void write_results_json(const std::vector<RunResult>& results, const std::string& path)
{
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : results) runs.push_back(to_json(r));
    auto out = open_out(path);
    // nlohmann serializes doubles with round-trip precision
    out << nlohmann::json{{"runs", runs}}.dump(1) << '\n';
    finish(out, path);
}

inline void check_header(std::istream& in, const char* expected, const std::string& path)
{
    std::string header;
    std::getline(in, header);
    if (trim(header) != expected)
        throw IoError("'" + path + "': unexpected header '" + trim(header) + "'");
}

/// Reads a finals CSV back into RunResults (trace left empty).
inline std::vector<RunResult> read_finals_csv(const std::string& path)
{
    auto in = open_in(path);
    check_header(in, kFinalsHeader, path);
    std::vector<RunResult> out;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto f = split(trim(line));
        if (f.size() != 6) throw IoError("'" + path + "': bad row '" + line + "'");
        RunResult r;
        r.algorithm = f[0];
        r.function = f[1];
        r.dim = parse_u64(f[2]);
        r.seed = parse_u64(f[3]);
        r.final_value = parse_double(f[4]);
        r.wall_time_seconds = parse_double(f[5]);
        out.push_back(std::move(r));
    }
    return out;
}

/// Reads a traces CSV; rows are grouped into RunResults by
/// (algorithm, function, dim, seed) in file order.
inline std::vector<RunResult> read_traces_csv(const std::string& path)
{
    auto in = open_in(path);
    check_header(in, kTraceHeader, path);
    std::vector<RunResult> out;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto f = split(trim(line));
        if (f.size() != 6) throw IoError("'" + path + "': bad row '" + line + "'");
        const auto dim = parse_u64(f[2]);
        const auto seed = parse_u64(f[3]);
        const auto iter = parse_u64(f[4]);
        if (out.empty() || out.back().algorithm != f[0] || out.back().function != f[1] ||
            out.back().dim != dim || out.back().seed != seed) {
            RunResult r;
            r.algorithm = f[0];
            r.function = f[1];
            r.dim = dim;
            r.seed = seed;
            out.push_back(std::move(r));
        } else if (out.back().trace.size() == 1) {
            out.back().trace_stride = iter;
        }
        out.back().trace.push_back(parse_double(f[5]));
        out.back().final_value = out.back().trace.back();
    }
    return out;
}

inline std::vector<RunResult> read_results_json(const std::string& path)
{
    auto in = open_in(path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("'" + path + "': " + e.what());
    }
    std::vector<RunResult> out;
    for (const auto& j : doc.at("runs")) {
        RunResult r;
        r.algorithm = j.at("algorithm").get<std::string>();
        r.function = j.at("function").get<std::string>();
        r.dim = j.at("dim").get<std::size_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.trace_stride = j.value("trace_stride", std::size_t{1});
        r.trace = j.at("trace").get<std::vector<double>>();
        r.final_value = j.at("final_value").get<double>();
        r.final_position = j.value("final_position", std::vector<double>{});
        r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
        out.push_back(std::move(r));
    }
    return out;
}

// ---- comparison report ------------------------------------------------------

inline void write_report_csv(const ComparisonReport& report, const std::string& path)
{
    auto out = open_out(path);
    out << kReportHeader << '\n';
    for (const auto& c : report.cells)
        out << c.function << ',' << c.dim << ',' << fmt_double(c.pso_summary.mean) << ','
            << fmt_double(c.pso_summary.std_dev) << ',' << fmt_double(c.vigpso_summary.mean) << ','
            << fmt_double(c.vigpso_summary.std_dev) << ',' << fmt_double(c.test.u_statistic) << ','
            << fmt_double(c.test.p_value) << ',' << to_string(c.winner) << '\n';
    finish(out, path);
}

inline nlohmann::json summary_json(const stats::SampleSummary& s)
{
    return {{"n", s.n},           {"mean", s.mean}, {"std_dev", s.std_dev}, {"median", s.median},
            {"q1", s.q1},         {"q3", s.q3},     {"min", s.min},         {"max", s.max}};
}

inline void write_report_json(const ComparisonReport& report, const std::string& path)
{
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : report.cells)
        cells.push_back({{"function", c.function},
                         {"dim", c.dim},
                         {"pso_mean", c.pso_summary.mean},
                         {"pso_std", c.pso_summary.std_dev},
                         {"vigpso_mean", c.vigpso_summary.mean},
                         {"vigpso_std", c.vigpso_summary.std_dev},
                         {"u_statistic", c.test.u_statistic},
                         {"p_value", c.test.p_value},
                         {"winner", std::string(to_string(c.winner))},
                         {"pso_summary", summary_json(c.pso_summary)},
                         {"vigpso_summary", summary_json(c.vigpso_summary)}});
    auto out = open_out(path);
    out << nlohmann::json{{"cells", cells}}.dump(1) << '\n';
    finish(out, path);
}

struct ReportRow {
    std::string function;
    std::size_t dim = 0;
    double pso_mean = 0, pso_std = 0, vigpso_mean = 0, vigpso_std = 0, u_statistic = 0, p_value = 0;
    std::string winner;
};

inline std::vector<ReportRow> read_report_csv(const std::string& path)
{
    auto in = open_in(path);
    check_header(in, kReportHeader, path);
    std::vector<ReportRow> out;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto f = split(trim(line));
        if (f.size() != 9) throw IoError("'" + path + "': bad row '" + line + "'");
        out.push_back({f[0], parse_u64(f[1]), parse_double(f[2]), parse_double(f[3]),
                       parse_double(f[4]), parse_double(f[5]), parse_double(f[6]),
                       parse_double(f[7]), f[8]});
    }
    return out;
}

/// Table-1 style text: p-values shown to 5 decimals.
inline std::string format_report(const ComparisonReport& report)
{
    std::ostringstream os;
    os << std::left << std::setw(16) << "Function" << std::right << std::setw(6) << "Dim"
       << std::setw(14) << "PSO median" << std::setw(14) << "VIGPSO median" << std::setw(10)
       << "p-value" << "  Lower Obj.\n";
    for (const auto& c : report.cells) {
        const auto* spec = bench::find(c.function);
        os << std::left << std::setw(16) << (spec ? std::string(spec->display_name) : c.function)
           << std::right << std::setw(6) << c.dim << std::setw(14) << std::setprecision(4)
           << std::scientific << c.pso_summary.median << std::setw(14) << c.vigpso_summary.median
           << std::fixed << std::setprecision(5) << std::setw(10) << c.test.p_value << "  "
           << to_string(c.winner) << '\n';
        os.unsetf(std::ios::floatfield);
    }
    return os.str();
}

// ---- interaction graph ------------------------------------------------------

/// (i, j, weight) for i < j and weight > 0; weights are dense row-major d*d.
inline void write_graph_csv(std::span<const double> weights, std::size_t dim, const std::string& path)
{
    if (weights.size() != dim * dim) throw std::invalid_argument("write_graph_csv: size mismatch");
    auto out = open_out(path);
    out << "i,j,weight\n";
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j)
            if (weights[i * dim + j] > 0.0)
                out << i << ',' << j << ',' << fmt_double(weights[i * dim + j]) << '\n';
    finish(out, path);
}

// ---- config files -----------------------------------------------------------

/// `key = value` lines; `#` starts a comment. Duplicate keys are an error.
inline std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& origin)
{
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
        if (!kv.emplace(key, value).second)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    return kv;
}

namespace detail {

inline double num(const std::string& key, const std::string& v, const std::string& origin)
{
    try {
        return parse_double(v);
    } catch (const IoError&) {
        throw ConfigError(origin + ": key '" + key + "' expects a number, got '" + v + "'");
    }
}

inline std::size_t count(const std::string& key, const std::string& v, const std::string& origin)
{
    try {
        return parse_u64(v);
    } catch (const IoError&) {
        throw ConfigError(origin + ": key '" + key + "' expects a non-negative integer, got '" + v +
                          "'");
    }
}

}  // namespace detail

/// Applies a config file's keys on top of `cfg`. Unknown keys are an error.
inline VigpsoConfig apply_config(VigpsoConfig cfg, const std::map<std::string, std::string>& kv,
                                 const std::string& origin)
{
    for (const auto& [k, v] : kv) {
        if (k == "omega") cfg.base.omega = detail::num(k, v, origin);
        else if (k == "c1") cfg.base.c1 = detail::num(k, v, origin);
        else if (k == "c2") cfg.base.c2 = detail::num(k, v, origin);
        else if (k == "swarm_size") cfg.base.swarm_size = detail::count(k, v, origin);
        else if (k == "max_iterations") cfg.base.max_iterations = detail::count(k, v, origin);
        else if (k == "v_clamp") cfg.base.v_clamp = detail::num(k, v, origin);
        else if (k == "tau1") cfg.learn.tau1 = detail::num(k, v, origin);
        else if (k == "tau2") cfg.learn.tau2 = detail::num(k, v, origin);
        else if (k == "update_interval") cfg.learn.update_interval = detail::count(k, v, origin);
        else if (k == "alpha_cap") cfg.alpha_cap = detail::num(k, v, origin);
        else if (k == "alpha_rate") cfg.alpha_rate = detail::num(k, v, origin);
        else if (k == "inertia_decay") cfg.inertia_decay = detail::num(k, v, origin);
        else throw ConfigError(origin + ": unknown key '" + k + "'");
    }
    return cfg;
}

inline VigpsoConfig load_config(const std::string& path, VigpsoConfig defaults = {})
{
    auto in = open_in(path);
    return apply_config(std::move(defaults), parse_key_values(in, path), path);
}

inline std::string format_config(const VigpsoConfig& c, Algorithm algo)
{
    std::ostringstream os;
    os << "omega = " << fmt_double(c.base.omega) << '\n'
       << "c1 = " << fmt_double(c.base.c1) << '\n'
       << "c2 = " << fmt_double(c.base.c2) << '\n'
       << "swarm_size = " << c.base.swarm_size << '\n'
       << "max_iterations = " << c.base.max_iterations << '\n'
       << "v_clamp = " << fmt_double(c.base.v_clamp) << '\n';
    if (algo == Algorithm::vigpso)
        os << "tau1 = " << fmt_double(c.learn.tau1) << '\n'
           << "tau2 = " << fmt_double(c.learn.tau2) << '\n'
           << "update_interval = " << c.learn.update_interval << '\n'
           << "alpha_cap = " << fmt_double(c.alpha_cap) << '\n'
           << "alpha_rate = " << fmt_double(c.alpha_rate) << '\n'
           << "inertia_decay = " << fmt_double(c.inertia_decay) << '\n';
    return os.str();
}

inline void save_config(const VigpsoConfig& c, Algorithm algo, const std::string& path)
{
    auto out = open_out(path);
    out << format_config(c, algo);
    finish(out, path);
}

/// Grid file: comma-separated lists under keys omega, c, tau1, tau2,
/// update_interval; scalars tuning_iterations and tuning_runs.
inline TuningGrid load_grid(const std::string& path)
{
    auto in = open_in(path);
    const auto kv = parse_key_values(in, path);
    TuningGrid g;
    auto reals = [&](const std::string& k, const std::string& v) {
        std::vector<double> out;
        for (const auto& p : split(v)) out.push_back(detail::num(k, trim(p), path));
        return out;
    };
    for (const auto& [k, v] : kv) {
        if (k == "omega") g.omega_values = reals(k, v);
        else if (k == "c") g.c_values = reals(k, v);
        else if (k == "tau1") g.tau1_values = reals(k, v);
        else if (k == "tau2") g.tau2_values = reals(k, v);
        else if (k == "update_interval") {
            g.interval_values.clear();
            for (const auto& p : split(v)) g.interval_values.push_back(detail::count(k, trim(p), path));
        } else if (k == "tuning_iterations") g.tuning_iterations = detail::count(k, v, path);
        else if (k == "tuning_runs") g.tuning_runs = detail::count(k, v, path);
        else throw ConfigError(path + ": unknown key '" + k + "'");
    }
    return g;
}

inline void write_tuning_csv(const TuneResult& res, const std::string& path)
{
    auto out = open_out(path);
    out << "omega,c1,c2,tau1,tau2,update_interval,mean_final,best\n";
    for (std::size_t i = 0; i < res.table.size(); ++i) {
        const auto& e = res.table[i];
        out << fmt_double(e.omega) << ',' << fmt_double(e.c1) << ',' << fmt_double(e.c2) << ',';
        if (res.algorithm == Algorithm::vigpso)
            out << fmt_double(e.tau1) << ',' << fmt_double(e.tau2) << ',' << e.update_interval;
        else
            out << ",,";
        out << ',' << fmt_double(e.mean_final) << ',' << (i == res.best_index ? 1 : 0) << '\n';
    }
    finish(out, path);
}

}  // namespace vigpso::io
