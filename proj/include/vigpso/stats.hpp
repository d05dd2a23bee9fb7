#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace vigpso::stats {

struct SampleSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double std_dev = 0.0;  // n-1 denominator; 0 for n == 1
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Quantile of sorted data by linear interpolation between order
/// statistics (the h = (n-1)p rule).
inline double quantile_sorted(std::span<const double> sorted, double p)
{
    if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double median(std::span<const double> sample)
{
    std::vector<double> s(sample.begin(), sample.end());
    std::sort(s.begin(), s.end());
    return quantile_sorted(s, 0.5);
}

inline SampleSummary summarize(std::span<const double> sample)
{
    if (sample.empty()) throw std::invalid_argument("summarize: empty sample");
    std::vector<double> s(sample.begin(), sample.end());
    std::sort(s.begin(), s.end());

    SampleSummary out;
    out.n = s.size();
    out.mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(out.n);
    if (out.n > 1) {
        double ss = 0.0;
        for (double x : s) ss += (x - out.mean) * (x - out.mean);
        out.std_dev = std::sqrt(ss / static_cast<double>(out.n - 1));
    }
    out.min = s.front();
    out.max = s.back();
    out.q1 = quantile_sorted(s, 0.25);
    out.median = quantile_sorted(s, 0.5);
    out.q3 = quantile_sorted(s, 0.75);
    return out;
}

enum class Lower { first, second, none };

inline std::string_view to_string(Lower l)
{
    switch (l) {
    case Lower::first: return "first";
    case Lower::second: return "second";
    case Lower::none: return "none";
    }
    return "?";
}

enum class UMethod { automatic, exact, normal };

struct MannWhitneyResult {
    double u_statistic = 0.0;  // U of the first sample: #(a > b) + 0.5 #(a == b)
    double p_value = 1.0;      // two-sided
    bool significant = false;  // p < alpha
    Lower lower_objective = Lower::none;
    bool exact = false;
};

/// Number of arrangements of n_a + n_b distinct values with U_a = u, for
/// every u in [0, n_a * n_b].
inline std::vector<double> u_distribution(std::size_t n_a, std::size_t n_b)
{
    // count[m][u] for the current number of second-sample elements m,
    // built up over first-sample size with the recurrence
    // N(a, b, u) = N(a-1, b, u-b) + N(a, b-1, u).
    const std::size_t umax = n_a * n_b;
    std::vector<std::vector<double>> prev(n_b + 1, std::vector<double>(umax + 1, 0.0));
    for (std::size_t m = 0; m <= n_b; ++m) prev[m][0] = 1.0;  // a = 0
    for (std::size_t a = 1; a <= n_a; ++a) {
        std::vector<std::vector<double>> cur(n_b + 1, std::vector<double>(umax + 1, 0.0));
        cur[0][0] = 1.0;
        for (std::size_t m = 1; m <= n_b; ++m) {
            for (std::size_t u = 0; u <= a * m; ++u) {
                double c = cur[m - 1][u];
                if (u >= m) c += prev[m][u - m];
                cur[m][u] = c;
            }
        }
        prev = std::move(cur);
    }
    return prev[n_b];
}

namespace detail {

inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace detail

/// Two-sided Mann-Whitney U test.
///
/// The automatic method uses the exact null distribution when
/// n_a + n_b <= 16 and there are no ties, and otherwise the normal
/// approximation with tie-corrected variance and a 0.5 continuity
/// correction.
inline MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                                        UMethod method = UMethod::automatic,
                                        double alpha = 0.05)
{
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    if (na < 2 || nb < 2) throw std::invalid_argument("mann_whitney_u: each sample needs n >= 2");
    for (double x : a)
        if (std::isnan(x)) throw std::invalid_argument("mann_whitney_u: NaN in first sample");
    for (double x : b)
        if (std::isnan(x)) throw std::invalid_argument("mann_whitney_u: NaN in second sample");

    const std::size_t n = na + nb;
    struct Item {
        double value;
        bool first;
    };
    std::vector<Item> all;
    all.reserve(n);
    for (double x : a) all.push_back({x, true});
    for (double x : b) all.push_back({x, false});
    std::sort(all.begin(), all.end(), [](const Item& l, const Item& r) { return l.value < r.value; });

    // Average ranks over tie groups.
    double rank_sum_a = 0.0;
    double tie_term = 0.0;  // sum of t^3 - t over tie groups
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && all[j + 1].value == all[i].value) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        for (std::size_t k = i; k <= j; ++k)
            if (all[k].first) rank_sum_a += avg_rank;
        i = j + 1;
    }
    const bool ties = tie_term > 0.0;

    MannWhitneyResult res;
    const double dna = static_cast<double>(na);
    const double dnb = static_cast<double>(nb);
    res.u_statistic = rank_sum_a - dna * (dna + 1.0) / 2.0;

    bool use_exact = false;
    switch (method) {
    case UMethod::automatic: use_exact = n <= 16 && !ties; break;
    case UMethod::exact:
        if (ties) throw std::invalid_argument("mann_whitney_u: exact method requires tie-free samples");
        use_exact = true;
        break;
    case UMethod::normal: use_exact = false; break;
    }

    const double mu = dna * dnb / 2.0;
    if (use_exact) {
        const auto dist = u_distribution(na, nb);
        const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
        const auto u = static_cast<std::size_t>(std::llround(res.u_statistic));
        double lo = 0.0;
        double hi = 0.0;
        for (std::size_t k = 0; k < dist.size(); ++k) {
            if (k <= u) lo += dist[k];
            if (k >= u) hi += dist[k];
        }
        res.p_value = std::min(1.0, 2.0 * std::min(lo, hi) / total);
        res.exact = true;
    } else {
        const double dn = static_cast<double>(n);
        const double var = dna * dnb / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
        if (var <= 0.0) {
            res.p_value = 1.0;
        } else {
            const double z = std::max(0.0, std::abs(res.u_statistic - mu) - 0.5) / std::sqrt(var);
            res.p_value = std::min(1.0, 2.0 * detail::normal_sf(z));
        }
    }

    res.significant = res.p_value < alpha;
    if (res.significant) {
        const double ma = median(a);
        const double mb = median(b);
        if (ma < mb)
            res.lower_objective = Lower::first;
        else if (mb < ma)
            res.lower_objective = Lower::second;
        else
            res.lower_objective = res.u_statistic < mu ? Lower::first : Lower::second;
    }
    return res;
}

}  // namespace vigpso::stats
