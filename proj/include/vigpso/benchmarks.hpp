#pragma once

#include "vigpso/core.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vigpso::bench {

enum class Separability { separable, partially_separable, non_separable };

inline std::string_view to_string(Separability s)
{
    switch (s) {
    case Separability::separable: return "separable";
    case Separability::partially_separable: return "partially_separable";
    case Separability::non_separable: return "non_separable";
    }
    return "?";
}

// Indices written as i below are 1-based, matching the usual closed forms.

inline double sphere(std::span<const double> x)
{
    double s = 0.0;
    for (double xi : x) s += xi * xi;
    return s;
}

inline double sum_squares(std::span<const double> x)
{
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += static_cast<double>(k + 1) * x[k] * x[k];
    return s;
}

inline double schwefel_2_22(std::span<const double> x)
{
    double sum = 0.0;
    double prod = 1.0;
    for (double xi : x) {
        sum += std::abs(xi);
        prod *= std::abs(xi);
    }
    return sum + prod;
}

inline double dixon_price(std::span<const double> x)
{
    double s = (x[0] - 1.0) * (x[0] - 1.0);
    for (std::size_t k = 1; k < x.size(); ++k) {
        const double t = 2.0 * x[k] * x[k] - x[k - 1];
        s += static_cast<double>(k + 1) * t * t;
    }
    return s;
}

inline double rastrigin(std::span<const double> x)
{
    double s = 10.0 * static_cast<double>(x.size());
    for (double xi : x) s += xi * xi - 10.0 * std::cos(2.0 * std::numbers::pi * xi);
    return s;
}

inline double rosenbrock(std::span<const double> x)
{
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        const double a = x[k + 1] - x[k] * x[k];
        const double b = 1.0 - x[k];
        s += 100.0 * a * a + b * b;
    }
    return s;
}

inline double griewank(std::span<const double> x)
{
    double sum = 0.0;
    double prod = 1.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sum += x[k] * x[k] / 4000.0;
        prod *= std::cos(x[k] / std::sqrt(static_cast<double>(k + 1)));
    }
    return 1.0 + sum - prod;
}

inline double alpine(std::span<const double> x)
{
    double s = 0.0;
    for (double xi : x) s += std::abs(xi * std::sin(xi) + 0.1 * xi);
    return s;
}

using RawFunction = double (*)(std::span<const double>);

struct BenchmarkSpec {
    std::string_view name;
    std::string_view display_name;
    Separability separability;
    std::string_view formula;
    RawFunction fn;
    double known_optimum_value = 0.0;
    double lower = -5.0;
    double upper = 5.0;
};

inline constexpr std::array<BenchmarkSpec, 8> kRegistry{{
    {"sphere", "Sphere", Separability::separable, "sum x_i^2", &sphere},
    {"sum_squares", "Sum Squares", Separability::separable, "sum i*x_i^2", &sum_squares},
    {"schwefel_2_22", "Schwefel 2.22", Separability::separable, "sum |x_i| + prod |x_i|",
     &schwefel_2_22},
    {"dixon_price", "Dixon-Price", Separability::partially_separable,
     "(x_1-1)^2 + sum_{i>=2} i*(2x_i^2 - x_{i-1})^2", &dixon_price},
    {"rastrigin", "Rastrigin", Separability::partially_separable,
     "10n + sum [x_i^2 - 10cos(2 pi x_i)]", &rastrigin},
    {"rosenbrock", "Rosenbrock", Separability::non_separable,
     "sum_{i<n} [100(x_{i+1} - x_i^2)^2 + (1-x_i)^2]", &rosenbrock},
    {"griewank", "Griewank", Separability::non_separable,
     "1 + sum x_i^2/4000 - prod cos(x_i/sqrt(i))", &griewank},
    {"alpine", "Alpine", Separability::non_separable, "sum |x_i sin(x_i) + 0.1 x_i|", &alpine},
}};

inline const BenchmarkSpec* find(std::string_view name)
{
    for (const auto& b : kRegistry)
        if (b.name == name) return &b;
    return nullptr;
}

inline const BenchmarkSpec& lookup(std::string_view name)
{
    if (const auto* b = find(name)) return *b;
    throw ConfigError("unknown benchmark function '" + std::string(name) + "'");
}

/// Checked evaluation: rejects empty and NaN-containing inputs.
inline double evaluate(std::string_view name, std::span<const double> x)
{
    const auto& spec = lookup(name);
    if (x.empty()) throw std::invalid_argument("evaluate: empty input vector");
    for (double xi : x)
        if (std::isnan(xi)) throw std::invalid_argument("evaluate: NaN in input vector");
    return spec.fn(x);
}

/// Location of the global minimum in dimension dim.
inline std::vector<double> optimum_point(std::string_view name, std::size_t dim)
{
    const auto& spec = lookup(name);
    std::vector<double> x(dim, 0.0);
    if (spec.name == "rosenbrock") {
        std::fill(x.begin(), x.end(), 1.0);
    } else if (spec.name == "dixon_price") {
        // x_i = 2^{-(2^i - 2) / 2^i} = 2^{-1 + 2^{1-i}}
        for (std::size_t k = 0; k < dim; ++k)
            x[k] = std::pow(2.0, -1.0 + std::ldexp(1.0, -static_cast<int>(k)));
    }
    return x;
}

/// Objective over the [-5, 5]^dim box. The hot path skips the NaN scan;
/// positions produced by the engines are always finite.
inline Objective make_objective(std::string_view name, std::size_t dim)
{
    const auto& spec = lookup(name);
    if (dim == 0) throw ConfigError("make_objective: dim must be >= 1");
    return Objective(std::string(spec.name), SearchSpace::uniform_box(dim, spec.lower, spec.upper),
                     spec.fn);
}

}  // namespace vigpso::bench
