#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "extgini/binom.hpp"
#include "extgini/errors.hpp"
#include "extgini/theory.hpp"

namespace extgini {

/// A validated collection of non-negative, finite observations.
class Sample {
  public:
    explicit Sample(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) {
            throw invalid_input("Sample: needs at least one observation");
        }
        for (double v : values_) {
            if (!std::isfinite(v) || v < 0.0) {
                throw invalid_input("Sample: observations must be finite and non-negative");
            }
        }
    }

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    double sum() const {
        double s = 0.0, comp = 0.0;
        for (double v : values_) {
            const double y = v - comp;
            const double t = s + y;
            comp = (t - s) - y;
            s = t;
        }
        return s;
    }

    double mean() const { return sum() / static_cast<double>(values_.size()); }

    std::vector<double> sorted() const {
        std::vector<double> out = values_;
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    std::vector<double> values_;
};

enum class EstimateMethod { fast, naive };

struct EstimateResult {
    double value;
    IndexSpec spec;
    std::size_t n;
    EstimateMethod method;
};

struct HeatmapRow {
    int m;
    int j;
    int k;
    double estimate;
};

struct HeatmapGrid {
    std::vector<HeatmapRow> rows;
};

namespace detail {

// Switch point between exact big-integer weights and log-space ratios.
// C(60,30) still converts to double with sub-ulp relative error.
inline constexpr std::size_t kExactWeightLimit = 60;

inline void check_estimate_inputs(const Sample& sample, const IndexSpec& spec) {
    if (sample.size() < static_cast<std::size_t>(spec.m)) {
        throw insufficient_sample_error("estimator: sample size " +
                                        std::to_string(sample.size()) +
                                        " is below subset size m = " + std::to_string(spec.m));
    }
    if (!(sample.sum() > 0.0)) {
        throw degenerate_sample_error("estimator: sample sum must be positive");
    }
}

// sum over sorted positions t of x_(t) * C(t-1, a-1) * C(n-t, m-a) / C(n, m),
// the relative weight with which position t appears as the a-th order
// statistic of a random m-subset. Exact integer weights, updated along t by
// the multiply-then-divide recurrence (every division is exact).
inline double order_weighted_sum_exact(const std::vector<double>& sorted, int m, int a) {
    const long long n = static_cast<long long>(sorted.size());
    const double total = binomial_exact(n, m).convert_to<double>();
    BigInt weight = binomial_exact(n - a, m - a);
    double sum = 0.0, comp = 0.0;
    for (long long t = a; t <= n - (m - a); ++t) {
        const double term =
            sorted[static_cast<std::size_t>(t - 1)] * (weight.convert_to<double>() / total);
        const double y = term - comp;
        const double tt = sum + y;
        comp = (tt - sum) - y;
        sum = tt;
        if (t < n - (m - a)) {
            weight *= t;
            weight *= n - t - (m - a);
            weight /= t - a + 1;
            weight /= n - t;
        }
    }
    return sum;
}

// Same sum with weight ratios in log-space; used when n is large enough that
// exact weights stop being cheap to convert.
inline double order_weighted_sum_logspace(const std::vector<double>& sorted, int m, int a) {
    const long long n = static_cast<long long>(sorted.size());
    const double log_total = log_binomial(n, m);
    double sum = 0.0, comp = 0.0;
    for (long long t = a; t <= n - (m - a); ++t) {
        const double log_weight = log_binomial(t - 1, a - 1) + log_binomial(n - t, m - a);
        const double term =
            sorted[static_cast<std::size_t>(t - 1)] * std::exp(log_weight - log_total);
        const double y = term - comp;
        const double tt = sum + y;
        comp = (tt - sum) - y;
        sum = tt;
    }
    return sum;
}

inline double order_weighted_sum(const std::vector<double>& sorted, int m, int a) {
    return sorted.size() <= kExactWeightLimit ? order_weighted_sum_exact(sorted, m, a)
                                              : order_weighted_sum_logspace(sorted, m, a);
}

// Fast-path body shared with heatmap_grid, which pre-sorts once.
inline double estimate_from_sorted(const std::vector<double>& sorted, double sum,
                                   const IndexSpec& spec) {
    if (spec.j == spec.k) {
        return 0.0;
    }
    const double upper = order_weighted_sum(sorted, spec.m, spec.k);
    const double lower = order_weighted_sum(sorted, spec.m, spec.j);
    const double n = static_cast<double>(sorted.size());
    const double value = n * (upper - lower) / (spec.m * sum);
    return value < 0.0 ? 0.0 : value;  // guard against rounding below the exact zero
}

// (m-1)! / ((n-1)(n-2)...(n-m+1)), the normalizer written out in the
// estimator definition; extended precision keeps long products honest.
inline double naive_normalizer(std::size_t n, int m) {
    long double num = 1.0L, den = 1.0L;
    for (int i = 1; i <= m - 1; ++i) {
        num *= static_cast<long double>(i);
        den *= static_cast<long double>(n - static_cast<std::size_t>(i));
    }
    return static_cast<double>(num / den);
}

}  // namespace detail

/// Sample extended Gini index estimator
///   (m-1)!/((n-1)...(n-m+1)) * sum_{subsets} [X_{k:subset} - X_{j:subset}] / sum X_i,
/// computed in O(n log n) by sorting once and weighting each position by the
/// exact count of m-subsets in which it lands at a given rank.
inline EstimateResult extended_gini_estimate(const Sample& sample, const IndexSpec& spec) {
    detail::check_estimate_inputs(sample, spec);
    const double value = detail::estimate_from_sorted(sample.sorted(), sample.sum(), spec);
    return {value, spec, sample.size(), EstimateMethod::fast};
}

/// Ground-truth oracle: the literal enumeration of all m-subsets. Guarded to
/// C(n, m) <= 10^7 so a stray call fails loudly instead of hanging.
inline EstimateResult extended_gini_estimate_naive(const Sample& sample, const IndexSpec& spec) {
    detail::check_estimate_inputs(sample, spec);
    const std::size_t n = sample.size();
    const int m = spec.m;
    if (binomial_exact(static_cast<long long>(n), m) > BigInt(10'000'000)) {
        throw capacity_error("naive estimator: C(n, m) exceeds the 10^7 subset guard");
    }
    if (spec.j == spec.k) {
        return {0.0, spec, n, EstimateMethod::naive};
    }

    const auto& values = sample.values();
    std::vector<std::size_t> idx(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = i;
    }
    std::vector<double> subset(static_cast<std::size_t>(m));
    double sum = 0.0, comp = 0.0;
    while (true) {
        for (std::size_t i = 0; i < idx.size(); ++i) {
            subset[i] = values[idx[i]];
        }
        std::sort(subset.begin(), subset.end());
        const double gap = subset[static_cast<std::size_t>(spec.k - 1)] -
                           subset[static_cast<std::size_t>(spec.j - 1)];
        const double y = gap - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;

        // advance to the next combination in lexicographic order
        int pos = m - 1;
        while (pos >= 0 &&
               idx[static_cast<std::size_t>(pos)] == n - static_cast<std::size_t>(m - pos)) {
            --pos;
        }
        if (pos < 0) {
            break;
        }
        ++idx[static_cast<std::size_t>(pos)];
        for (std::size_t i = static_cast<std::size_t>(pos) + 1; i < idx.size(); ++i) {
            idx[i] = idx[i - 1] + 1;
        }
    }
    double value = detail::naive_normalizer(n, m) * sum / sample.sum();
    if (value < 0.0) {
        value = 0.0;
    }
    return {value, spec, n, EstimateMethod::naive};
}

/// Standard Gini coefficient: the (2, 1, 2) special case.
inline EstimateResult gini_estimate(const Sample& sample) {
    return extended_gini_estimate(sample, IndexSpec(2, 1, 2));
}

/// m-th Gini index estimator: the (m, 1, m) special case, i.e. the mean
/// subset range over m times the sample mean.
inline EstimateResult mth_gini_estimate(const Sample& sample, int m) {
    return extended_gini_estimate(sample, IndexSpec(m, 1, m));
}

/// All estimates for 2 <= m <= m_max, 1 <= j <= k <= m, in lexicographic
/// (m, j, k) order. Rows with j = k are exactly zero.
inline HeatmapGrid heatmap_grid(const Sample& sample, int m_max) {
    if (m_max < 2 || static_cast<std::size_t>(m_max) > sample.size()) {
        throw invalid_input("heatmap_grid: need 2 <= m_max <= n");
    }
    if (!(sample.sum() > 0.0)) {
        throw degenerate_sample_error("heatmap_grid: sample sum must be positive");
    }
    const std::vector<double> sorted = sample.sorted();
    const double sum = sample.sum();
    HeatmapGrid grid;
    for (int m = 2; m <= m_max; ++m) {
        for (int j = 1; j <= m; ++j) {
            for (int k = j; k <= m; ++k) {
                const IndexSpec spec(m, j, k);
                grid.rows.push_back({m, j, k, detail::estimate_from_sorted(sorted, sum, spec)});
            }
        }
    }
    return grid;
}

}  // namespace extgini
