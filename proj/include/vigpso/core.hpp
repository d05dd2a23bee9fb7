#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vigpso {

/// Raised when an optimizer or experiment configuration is invalid.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Box-constrained continuous domain.
class SearchSpace {
public:
    SearchSpace(std::vector<double> lower, std::vector<double> upper)
        : lower_(std::move(lower)), upper_(std::move(upper))
    {
        if (lower_.empty())
            throw std::invalid_argument("SearchSpace: dim must be >= 1");
        if (lower_.size() != upper_.size())
            throw std::invalid_argument("SearchSpace: bound vectors differ in length");
        for (std::size_t j = 0; j < lower_.size(); ++j) {
            if (!(lower_[j] < upper_[j]))
                throw std::invalid_argument("SearchSpace: lower must be < upper in dimension " +
                                            std::to_string(j));
        }
    }

    /// Same [lo, hi] interval in every dimension.
    static SearchSpace uniform_box(std::size_t dim, double lo, double hi)
    {
        return SearchSpace(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
    }

    std::size_t dim() const noexcept { return lower_.size(); }
    double lower(std::size_t j) const { return lower_[j]; }
    double upper(std::size_t j) const { return upper_[j]; }
    double clamp(std::size_t j, double x) const { return std::clamp(x, lower_[j], upper_[j]); }

    bool contains(std::span<const double> x) const
    {
        if (x.size() != dim()) return false;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!(x[j] >= lower_[j] && x[j] <= upper_[j])) return false;
        return true;
    }

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// A named minimization target over a SearchSpace.
///
/// The wrapped function must be pure: it is shared read-only between
/// concurrently executing runs.
class Objective {
public:
    using Function = std::function<double(std::span<const double>)>;

    Objective(std::string name, SearchSpace space, Function fn)
        : name_(std::move(name)), space_(std::move(space)), fn_(std::move(fn))
    {
        if (!fn_) throw std::invalid_argument("Objective: empty function");
    }

    const std::string& name() const noexcept { return name_; }
    const SearchSpace& space() const noexcept { return space_; }
    std::size_t dim() const noexcept { return space_.dim(); }

    double operator()(std::span<const double> x) const { return fn_(x); }

private:
    std::string name_;
    SearchSpace space_;
    Function fn_;
};

/// Seeded uniform stream.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the
/// standard. Real draws use the top 53 bits so that the sequence of doubles
/// does not depend on the standard library's distribution classes, which
/// are implementation-defined.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// Uniform double in [0, 1).
    double unit()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [a, b).
    double uniform(double a, double b)
    {
        if (!(a < b))
            throw std::invalid_argument("uniform: requires a < b");
        double x = a + (b - a) * unit();
        // a + (b-a)*u can round up to b when |a| >> (b-a)
        if (x >= b) x = std::nextafter(b, a);
        return x;
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

inline double uniform(RngStream& rng, double a, double b) { return rng.uniform(a, b); }

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Full state of one swarm run.
struct SwarmState {
    Matrix positions;
    Matrix velocities;
    Matrix pbest_pos;
    std::vector<double> pbest_val;
    std::vector<double> gbest_pos;
    double gbest_val = std::numeric_limits<double>::infinity();
    std::size_t iteration = 0;

    std::size_t swarm_size() const noexcept { return positions.rows(); }
    std::size_t dim() const noexcept { return positions.cols(); }

    friend bool operator==(const SwarmState&, const SwarmState&) = default;
};

enum class VelocityInit { uniform, zero };

/// Random initial swarm.
///
/// Draw order, per particle: every position coordinate (dimension order),
/// then every velocity coordinate. Velocities are uniform in
/// [-v_clamp, v_clamp] or zero.
inline SwarmState init_swarm(const SearchSpace& space, std::size_t swarm_size, RngStream& rng,
                             const Objective& objective, double v_clamp,
                             VelocityInit vinit = VelocityInit::uniform)
{
    if (swarm_size < 2) throw ConfigError("init_swarm: swarm_size must be >= 2");
    if (!(v_clamp > 0.0)) throw ConfigError("init_swarm: v_clamp must be > 0");
    if (objective.dim() != space.dim())
        throw ConfigError("init_swarm: objective dimension does not match search space");

    const std::size_t d = space.dim();
    SwarmState s;
    s.positions = Matrix(swarm_size, d);
    s.velocities = Matrix(swarm_size, d);
    s.pbest_val.resize(swarm_size);

    for (std::size_t i = 0; i < swarm_size; ++i) {
        for (std::size_t j = 0; j < d; ++j)
            s.positions(i, j) = rng.uniform(space.lower(j), space.upper(j));
        if (vinit == VelocityInit::uniform)
            for (std::size_t j = 0; j < d; ++j)
                s.velocities(i, j) = rng.uniform(-v_clamp, v_clamp);
    }
    s.pbest_pos = s.positions;

    std::size_t best = 0;
    for (std::size_t i = 0; i < swarm_size; ++i) {
        s.pbest_val[i] = objective(s.positions.row(i));
        if (s.pbest_val[i] < s.pbest_val[best]) best = i;
    }
    s.gbest_val = s.pbest_val[best];
    auto row = s.pbest_pos.row(best);
    s.gbest_pos.assign(row.begin(), row.end());
    s.iteration = 0;
    return s;
}

/// Evaluates particle i at its current position and applies the
/// strict-improvement pbest update followed by the gbest update.
inline void update_bests(SwarmState& s, std::size_t i, const Objective& objective)
{
    auto x = s.positions.row(i);
    const double val = objective(x);
    if (val < s.pbest_val[i]) {
        s.pbest_val[i] = val;
        std::copy(x.begin(), x.end(), s.pbest_pos.row(i).begin());
        if (val < s.gbest_val) {
            s.gbest_val = val;
            s.gbest_pos.assign(x.begin(), x.end());
        }
    }
}

/// The classic gbest velocity equation for one coordinate, unclipped.
inline double standard_velocity(double v, double x, double pbest, double gbest, double omega,
                                double c1, double c2, double r1, double r2)
{
    return omega * v + c1 * r1 * (pbest - x) + c2 * r2 * (gbest - x);
}

/// Result of one optimizer run.
struct RunResult {
    std::string algorithm;
    std::string function;
    std::size_t dim = 0;
    std::uint64_t seed = 0;
    /// gbest value after init (index 0) and after every iteration, or every
    /// trace_stride iterations once subsampled by the harness.
    std::vector<double> trace;
    std::size_t trace_stride = 1;
    std::vector<double> final_position;
    double final_value = 0.0;
    double wall_time_seconds = 0.0;
    /// Final learned graph as dense row-major d*d weights (VIGPSO only, when requested).
    std::vector<double> graph_weights;
};

}  // namespace vigpso
