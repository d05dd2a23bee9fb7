#pragma once

#include "vigpso/core.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vigpso {

/// Thresholds and cadence for learning the interaction graph.
///
/// An edge is set when |rho| > tau1 and removed when |rho| < tau2; values in
/// between leave the current weight alone. tau1 >= 1 is accepted and means
/// no edge can ever form.
struct VigLearnConfig {
    double tau1 = 0.5;
    double tau2 = 0.3;
    std::size_t update_interval = 10;

    void validate() const
    {
        if (!(tau2 > 0.0 && tau2 < 1.0)) throw ConfigError("tau2 must lie in (0, 1)");
        if (!(tau2 <= tau1)) throw ConfigError("tau2 must be <= tau1");
        if (update_interval < 1) throw ConfigError("update_interval must be >= 1");
    }

    friend bool operator==(const VigLearnConfig&, const VigLearnConfig&) = default;
};

namespace detail {

/// Centered copy of a sample plus its sum of squared deviations. A sample
/// whose entries are all equal is reported with ss = 0 exactly.
struct Centered {
    std::vector<double> values;
    double ss = 0.0;
};

template <typename Range>
Centered center(const Range& xs, std::size_t n)
{
    Centered c;
    c.values.resize(n);
    bool constant = true;
    double mean = 0.0;
    std::size_t k = 0;
    for (double x : xs) {
        mean += x;
        c.values[k] = x;
        if (x != c.values[0]) constant = false;
        ++k;
    }
    if (constant) {
        std::fill(c.values.begin(), c.values.end(), 0.0);
        return c;
    }
    mean /= static_cast<double>(n);
    for (double& x : c.values) {
        x -= mean;
        c.ss += x * x;
    }
    return c;
}

inline double correlate(const Centered& a, const Centered& b)
{
    if (a.ss == 0.0 || b.ss == 0.0) return 0.0;
    double num = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) num += a.values[k] * b.values[k];
    const double r = num / std::sqrt(a.ss * b.ss);
    return std::clamp(r, -1.0, 1.0);
}

}  // namespace detail

/// Pearson correlation of two equal-length samples. Returns 0 when either
/// sample has zero variance.
inline double pearson(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw std::invalid_argument("pearson: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("pearson: need at least 2 samples");
    return detail::correlate(detail::center(a, a.size()), detail::center(b, b.size()));
}

/// Symmetric weighted graph over decision variables, zero diagonal,
/// weights in [0, 1]. Stored dense.
class InteractionGraph {
public:
    explicit InteractionGraph(std::size_t dim) : dim_(dim), w_(dim * dim, 0.0)
    {
        if (dim == 0) throw std::invalid_argument("InteractionGraph: dim must be >= 1");
    }

    std::size_t dim() const noexcept { return dim_; }

    double weight(std::size_t i, std::size_t j) const
    {
        check(i);
        check(j);
        return w_[i * dim_ + j];
    }

    /// Sets both (i, j) and (j, i).
    void set_edge(std::size_t i, std::size_t j, double w)
    {
        check(i);
        check(j);
        if (i == j) throw std::invalid_argument("InteractionGraph: self edges are not allowed");
        if (!(w >= 0.0 && w <= 1.0))
            throw std::invalid_argument("InteractionGraph: weight must lie in [0, 1]");
        w_[i * dim_ + j] = w;
        w_[j * dim_ + i] = w;
    }

    std::span<const double> row(std::size_t i) const
    {
        check(i);
        return {w_.data() + i * dim_, dim_};
    }

    std::span<const double> weights() const noexcept { return w_; }

    std::size_t edge_count() const noexcept
    {
        std::size_t n = 0;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = i + 1; j < dim_; ++j)
                if (w_[i * dim_ + j] > 0.0) ++n;
        return n;
    }

    friend bool operator==(const InteractionGraph&, const InteractionGraph&) = default;

private:
    void check(std::size_t i) const
    {
        if (i >= dim_)
            throw std::out_of_range("InteractionGraph: index " + std::to_string(i) +
                                    " out of range for dim " + std::to_string(dim_));
    }

    std::size_t dim_;
    std::vector<double> w_;
};

/// Every j with G[d][j] > 0, with its weight, in ascending index order.
inline std::vector<std::pair<std::size_t, double>> neighbors(const InteractionGraph& graph,
                                                             std::size_t d)
{
    std::vector<std::pair<std::size_t, double>> out;
    const auto r = graph.row(d);
    for (std::size_t j = 0; j < r.size(); ++j)
        if (r[j] > 0.0) out.emplace_back(j, r[j]);
    return out;
}

/// Relearns every pairwise weight from one batch of particle movements.
///
/// delta_x is S x d: row p holds particle p's displacement. Each pair of
/// columns is correlated across particles; |rho| > tau1 sets the edge to
/// |rho|, |rho| < tau2 clears it, anything in between is left untouched.
inline void update_graph(InteractionGraph& graph, const Matrix& delta_x, const VigLearnConfig& config)
{
    const std::size_t d = graph.dim();
    const std::size_t s = delta_x.rows();
    if (delta_x.cols() != d)
        throw std::invalid_argument("update_graph: delta_x has " + std::to_string(delta_x.cols()) +
                                    " columns, graph has dim " + std::to_string(d));
    if (s < 2) throw std::invalid_argument("update_graph: need at least 2 particles");

    std::vector<detail::Centered> cols;
    cols.reserve(d);
    std::vector<double> column(s);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t p = 0; p < s; ++p) column[p] = delta_x(p, j);
        cols.push_back(detail::center(column, s));
    }

    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            const double r = std::abs(detail::correlate(cols[i], cols[j]));
            if (r > config.tau1)
                graph.set_edge(i, j, r);
            else if (r < config.tau2)
                graph.set_edge(i, j, 0.0);
        }
    }
}

/// Row-normalized adjacency lists, rebuilt after each graph update so the
/// per-particle blend does not rescan dense rows.
class NeighborTable {
public:
    NeighborTable() = default;

    explicit NeighborTable(const InteractionGraph& graph)
    {
        const std::size_t d = graph.dim();
        offsets_.assign(d + 1, 0);
        for (std::size_t i = 0; i < d; ++i) {
            const auto r = graph.row(i);
            double total = 0.0;
            const std::size_t begin = index_.size();
            for (std::size_t j = 0; j < d; ++j) {
                if (r[j] > 0.0) {
                    index_.push_back(j);
                    weight_.push_back(r[j]);
                    total += r[j];
                }
            }
            for (std::size_t k = begin; k < weight_.size(); ++k) weight_[k] /= total;
            offsets_[i + 1] = index_.size();
        }
    }

    bool empty(std::size_t d) const { return offsets_[d] == offsets_[d + 1]; }

    /// Weight-normalized mean of v over d's neighbors.
    double mix(std::size_t d, std::span<const double> v) const
    {
        double acc = 0.0;
        for (std::size_t k = offsets_[d]; k < offsets_[d + 1]; ++k) acc += weight_[k] * v[index_[k]];
        return acc;
    }

    std::size_t dim() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }

private:
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> index_;
    std::vector<double> weight_;
};

}  // namespace vigpso
