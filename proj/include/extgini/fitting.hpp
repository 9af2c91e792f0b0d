#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "extgini/errors.hpp"
#include "extgini/estimator.hpp"
#include "extgini/rng.hpp"
#include "extgini/special.hpp"
#include "extgini/theory.hpp"

namespace extgini {

struct FitResult {
    GammaParams params;
    double log_likelihood;
    int iterations;
    bool converged;
};

struct GofResult {
    double ks_stat;
    double ks_p;
    double cvm_stat;
    double cvm_p;
    int bootstrap_reps;
    std::uint64_t seed;
};

namespace detail {

// Sufficient statistics of the gamma likelihood.
struct GammaSuffStats {
    double mean;
    double mean_log;
    std::size_t n;
};

inline GammaSuffStats gamma_suff_stats(const std::vector<double>& values) {
    double sum = 0.0, sum_comp = 0.0;
    double log_sum = 0.0, log_comp = 0.0;
    for (double v : values) {
        if (v <= 0.0) {
            throw invalid_input("gamma fit: all observations must be strictly positive");
        }
        double y = v - sum_comp;
        double t = sum + y;
        sum_comp = (t - sum) - y;
        sum = t;

        y = std::log(v) - log_comp;
        t = log_sum + y;
        log_comp = (t - log_sum) - y;
        log_sum = t;
    }
    const double n = static_cast<double>(values.size());
    return {sum / n, log_sum / n, values.size()};
}

// Sorted fitted-CDF values F(x_(i)), shared by both statistics.
inline std::vector<double> sorted_model_probs(const Sample& sample, const GammaParams& params) {
    std::vector<double> probs;
    probs.reserve(sample.size());
    for (double x : sample.sorted()) {
        probs.push_back(reg_inc_gamma_P(params.shape, params.rate * x));
    }
    return probs;
}

// Sup distance between the empirical step function and sorted probabilities.
inline double ks_from_probs(const std::vector<double>& probs) {
    const double n = static_cast<double>(probs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double hi = (static_cast<double>(i) + 1.0) / n - probs[i];
        const double lo = probs[i] - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    return d;
}

inline double cvm_from_probs(const std::vector<double>& probs) {
    const double n = static_cast<double>(probs.size());
    double w2 = 1.0 / (12.0 * n);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double diff = probs[i] - (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n);
        w2 += diff * diff;
    }
    return w2;
}

}  // namespace detail

/// Maximum-likelihood gamma fit. The shape solves
///   ln(alpha) - psi(alpha) = ln(xbar) - mean(ln x)
/// by safeguarded Newton iteration (the left side is strictly decreasing, so
/// a sign bracket is maintained and Newton steps that leave it bisect
/// instead); the rate is then alpha / xbar.
inline FitResult fit_gamma_mle(const Sample& sample) {
    if (sample.size() < 2) {
        throw invalid_input("fit_gamma_mle: needs at least two observations");
    }
    const auto stats = detail::gamma_suff_stats(sample.values());
    const double s = std::log(stats.mean) - stats.mean_log;
    if (!(s > 0.0)) {
        throw degenerate_sample_error("fit_gamma_mle: sample has no dispersion");
    }

    // Closed-form starting point, typically within a few Newton steps.
    double alpha = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);

    auto score = [s](double a) { return std::log(a) - digamma(a) - s; };

    double lo = alpha, hi = alpha;
    while (score(lo) < 0.0) {
        lo *= 0.5;
    }
    while (score(hi) > 0.0) {
        hi *= 2.0;
    }

    int iterations = 0;
    double residual = score(alpha);
    for (; iterations < 100 && std::fabs(residual) > 1e-12; ++iterations) {
        const double slope = 1.0 / alpha - trigamma(alpha);
        double next = alpha - residual / slope;
        if (!(next > lo) || !(next < hi)) {
            next = 0.5 * (lo + hi);
        }
        alpha = next;
        residual = score(alpha);
        if (residual > 0.0) {
            lo = alpha;
        } else {
            hi = alpha;
        }
    }

    const GammaParams params(alpha, alpha / stats.mean);
    const double n = static_cast<double>(stats.n);
    const double log_likelihood = n * (alpha * std::log(params.rate) - std::lgamma(alpha) +
                                       (alpha - 1.0) * stats.mean_log - params.rate * stats.mean);
    return {params, log_likelihood, iterations, std::fabs(residual) <= 1e-10};
}

/// Kolmogorov-Smirnov statistic against a fitted gamma CDF:
///   D_n = max_i max( i/n - F(x_(i)), F(x_(i)) - (i-1)/n ).
inline double ks_statistic(const Sample& sample, const GammaParams& params) {
    return detail::ks_from_probs(detail::sorted_model_probs(sample, params));
}

/// Cramer-von Mises statistic:
///   W^2 = 1/(12n) + sum_i ( F(x_(i)) - (2i-1)/(2n) )^2.
inline double cvm_statistic(const Sample& sample, const GammaParams& params) {
    return detail::cvm_from_probs(detail::sorted_model_probs(sample, params));
}

/// Parametric bootstrap p-values for both statistics. Each round draws a
/// fresh sample at the fitted parameters and refits before recomputing the
/// statistics, which is what makes the p-values valid with estimated
/// parameters. Rounds whose refit fails are skipped and counted; more than
/// 5% skips aborts.
inline GofResult gof_bootstrap(const Sample& sample, int reps, std::uint64_t seed) {
    if (reps < 100) {
        throw invalid_input("gof_bootstrap: reps must be >= 100");
    }
    const FitResult fit = fit_gamma_mle(sample);
    const auto probs = detail::sorted_model_probs(sample, fit.params);
    const double ks_obs = detail::ks_from_probs(probs);
    const double cvm_obs = detail::cvm_from_probs(probs);

    const int n = static_cast<int>(sample.size());
    int ks_ge = 0, cvm_ge = 0, skips = 0;
    for (int b = 0; b < reps; ++b) {
        SplitMix64 rng(substream_seed(seed, static_cast<std::uint64_t>(b)));
        const Sample boot = gamma_sample(fit.params, n, rng);
        FitResult refit{GammaParams(1.0, 1.0), 0.0, 0, false};
        try {
            refit = fit_gamma_mle(boot);
        } catch (const invalid_input&) {
            ++skips;
            continue;
        }
        const auto boot_probs = detail::sorted_model_probs(boot, refit.params);
        if (detail::ks_from_probs(boot_probs) >= ks_obs) {
            ++ks_ge;
        }
        if (detail::cvm_from_probs(boot_probs) >= cvm_obs) {
            ++cvm_ge;
        }
    }
    if (skips * 20 > reps) {
        throw capacity_error("gof_bootstrap: more than 5% of bootstrap refits failed");
    }
    const double denom = static_cast<double>(reps) + 1.0;
    return {ks_obs,  (1.0 + ks_ge) / denom, cvm_obs, (1.0 + cvm_ge) / denom,
            reps,    seed};
}

}  // namespace extgini
