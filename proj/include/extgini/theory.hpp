#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "extgini/binom.hpp"
#include "extgini/errors.hpp"
#include "extgini/quadrature.hpp"
#include "extgini/special.hpp"

namespace extgini {

/// Selects which ordered gap of an m-subset is measured: the expected
/// difference between the k-th and j-th order statistics, over m times the
/// population mean.
struct IndexSpec {
    int m;
    int j;
    int k;

    IndexSpec(int m_, int j_, int k_) : m(m_), j(j_), k(k_) {
        if (m < 2) {
            throw invalid_input("IndexSpec: m must be >= 2");
        }
        if (j < 1 || j > k || k > m) {
            throw invalid_input("IndexSpec: need 1 <= j <= k <= m");
        }
    }
};

struct GammaParams {
    double shape;
    double rate;

    GammaParams(double shape_, double rate_) : shape(shape_), rate(rate_) {
        if (!std::isfinite(shape) || shape <= 0.0) {
            throw invalid_input("GammaParams: shape must be positive and finite");
        }
        if (!std::isfinite(rate) || rate <= 0.0) {
            throw invalid_input("GammaParams: rate must be positive and finite");
        }
    }

    double mean() const { return shape / rate; }
};

/// A distribution given by its CDF and mean; the CDF must be non-decreasing
/// with limit 1. Values returned by `cdf` are clamped to [0, 1] before use.
struct CdfModel {
    std::function<double(double)> cdf;
    double mean = 0.0;
};

enum class Route {
    automatic,            ///< alternating sums for m <= 8, order-statistic CDF above
    alternating_sum,      ///< alternating binomial sums of CDF-power integrals
    order_statistic_cdf,  ///< incomplete-beta order-statistic CDF integrand
};

namespace detail {

// Stable 1 - p^r given the complement q = 1 - p:  q * (1 + p + ... + p^{r-1}).
inline double one_minus_pow(double p, double q, int r) {
    double geom = 1.0;
    double pw = 1.0;
    for (int i = 1; i < r; ++i) {
        pw *= p;
        geom += pw;
    }
    return q * geom;
}

// Absolute tolerance for one integral term of an alternating sum, sized so
// the weighted total stays near abs_tol after multiplication by the binomial
// coefficients (floored where double precision cannot follow).
inline QuadratureConfig term_config(const QuadratureConfig& cfg, int m) {
    const double weight_sum =
        std::ldexp(1.0, m) * binomial_exact(m, (m + 1) / 2).convert_to<double>();
    QuadratureConfig term = cfg;
    term.abs_tol = std::max(cfg.abs_tol / weight_sum, 1e-14);
    term.rel_tol = std::max(cfg.rel_tol / weight_sum, 1e-14);
    return term;
}

// B_r = integral over [0, inf) of 1 - P^r(alpha, t) dt, for the rate-1 gamma
// CDF P. Truncated at the 1 - tail_mass/r quantile; the dropped tail is
// restored through the bound 1 - P^r <= r (1 - P), whose integral is exact:
//   r * int_T^inf Q(alpha, t) dt = r * [alpha Q(alpha+1, T) - T Q(alpha, T)].
inline double gamma_cdf_power_integral(double alpha, int r, const QuadratureConfig& cfg) {
    const double cut = gamma_quantile(alpha, 1.0 - cfg.tail_mass / r);
    auto integrand = [alpha, r](double t) {
        const double q = reg_inc_gamma_Q(alpha, t);
        return one_minus_pow(1.0 - q, q, r);
    };
    const double body = integrate_adaptive(integrand, 0.0, cut, cfg).value;
    const double tail = r * (alpha * reg_inc_gamma_Q(alpha + 1.0, cut) -
                             cut * reg_inc_gamma_Q(alpha, cut));
    return body + tail;
}

// Signed alternating sum over r = lead..m of C(r-1, lead-1) C(m, r) values[r].
// Coefficients are exact integers, converted to double only for the multiply.
inline double alternating_sum(int m, int lead, const std::vector<double>& values) {
    double sum = 0.0;
    double comp = 0.0;
    for (int r = lead; r <= m; ++r) {
        const BigInt coeff = binomial_exact(r - 1, lead - 1) * binomial_exact(m, r);
        double term = coeff.convert_to<double>() * values[static_cast<std::size_t>(r)];
        if ((r - lead) % 2 != 0) {
            term = -term;
        }
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

// Truncation point for a general CDF: doubles from the mean until the
// survival mass drops below tail_mass. The region beyond is integrated
// through the (0,1] tail transform, so this only has to be "far enough".
inline double find_tail_cut(const std::function<double(double)>& cdf, double mean,
                            double tail_mass) {
    double cut = std::max(mean, 1.0);
    for (int i = 0; i < 200 && 1.0 - cdf(cut) > tail_mass; ++i) {
        cut *= 2.0;
    }
    return cut;
}

inline double clamp01(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

}  // namespace detail

/// Closed-form standard Gini coefficient of a Gamma(shape, rate) population:
/// Gamma(shape + 1/2) / (sqrt(pi) * shape * Gamma(shape)). Rate-free.
inline double gini_gamma_closed(double shape) {
    if (!std::isfinite(shape) || shape <= 0.0) {
        throw invalid_input("gini_gamma_closed: shape must be positive and finite");
    }
    constexpr double half_log_pi = 0.572364942924700087071713675676529;
    return std::exp(std::lgamma(shape + 0.5) - std::lgamma(shape) - half_log_pi) / shape;
}

/// Extended Gini index IG_m(j,k) for an arbitrary distribution model.
///
/// Two evaluation routes are kept deliberately distinct:
///  - alternating_sum follows the CDF-power representation
///      [ sum_r (-1)^{r-k} C(r-1,k-1) C(m,r) int(1-F^r)
///        - sum_s (-1)^{s-j} C(s-1,j-1) C(m,s) int(1-F^s) ] / (m mu),
///  - order_statistic_cdf integrates the difference of order-statistic CDFs
///      int [ I_F(j, m-j+1) - I_F(k, m-k+1) ] dt / (m mu),
/// which is free of sign cancellation and is the default for m > 8.
inline double index_general(const IndexSpec& spec, const CdfModel& model,
                            const QuadratureConfig& cfg = {}, Route route = Route::automatic) {
    cfg.validate();
    if (!std::isfinite(model.mean) || model.mean <= 0.0) {
        throw invalid_input("index_general: model mean must be positive and finite");
    }
    if (!model.cdf) {
        throw invalid_input("index_general: model cdf is empty");
    }
    if (spec.j == spec.k) {
        return 0.0;  // the two sums cancel term by term
    }
    const int m = spec.m;
    if (route == Route::automatic) {
        route = m <= 8 ? Route::alternating_sum : Route::order_statistic_cdf;
    }
    const auto& cdf = model.cdf;
    const double cut = detail::find_tail_cut(cdf, model.mean, cfg.tail_mass);

    // Survival values 1 - F(t) come from subtraction here, so the integrands
    // carry absolute rounding noise near machine epsilon; tolerances below
    // ~1e-12 would chase that noise instead of converging.
    constexpr double noise_floor = 1e-12;

    if (route == Route::alternating_sum) {
        QuadratureConfig term = detail::term_config(cfg, m);
        term.abs_tol = std::max(term.abs_tol, noise_floor);
        term.rel_tol = std::max(term.rel_tol, noise_floor);
        std::vector<double> integrals(static_cast<std::size_t>(m) + 1, 0.0);
        for (int r = spec.j; r <= m; ++r) {
            auto integrand = [&cdf, r](double t) {
                const double p = detail::clamp01(cdf(t));
                return detail::one_minus_pow(p, 1.0 - p, r);
            };
            integrals[static_cast<std::size_t>(r)] =
                integrate_adaptive(integrand, 0.0, cut, term).value +
                integrate_upper_tail(integrand, cut, term).value;
        }
        const double upper = detail::alternating_sum(m, spec.k, integrals);
        const double lower = detail::alternating_sum(m, spec.j, integrals);
        return (upper - lower) / (m * model.mean);
    }

    QuadratureConfig beta_cfg = cfg;
    beta_cfg.abs_tol = std::max(cfg.abs_tol, noise_floor);
    beta_cfg.rel_tol = std::max(cfg.rel_tol, noise_floor);
    auto integrand = [&cdf, &spec, m](double t) {
        const double p = detail::clamp01(cdf(t));
        return reg_inc_beta_I(p, spec.j, m - spec.j + 1) -
               reg_inc_beta_I(p, spec.k, m - spec.k + 1);
    };
    const double gap = integrate_adaptive(integrand, 0.0, cut, beta_cfg).value +
                       integrate_upper_tail(integrand, cut, beta_cfg).value;
    return gap / (m * model.mean);
}

/// Extended Gini index of a Gamma(shape, rate) population,
///   IG_m(j,k) = (1/(alpha m)) [ sum_r (-1)^{r-k} C(r-1,k-1) C(m,r) B_r
///                             - sum_s (-1)^{s-j} C(s-1,j-1) C(m,s) B_s ],
/// with B_r the integral of 1 - P^r(alpha, t) over [0, inf). The index is
/// scale invariant, so the rate is normalized to 1 before quadrature.
inline double index_gamma(const IndexSpec& spec, const GammaParams& params,
                          const QuadratureConfig& cfg = {}, Route route = Route::automatic) {
    cfg.validate();
    if (spec.j == spec.k) {
        return 0.0;
    }
    const int m = spec.m;
    const double alpha = params.shape;
    if (route == Route::automatic) {
        route = m <= 8 ? Route::alternating_sum : Route::order_statistic_cdf;
    }

    if (route == Route::alternating_sum) {
        const QuadratureConfig term = detail::term_config(cfg, m);
        std::vector<double> integrals(static_cast<std::size_t>(m) + 1, 0.0);
        for (int r = spec.j; r <= m; ++r) {
            integrals[static_cast<std::size_t>(r)] =
                detail::gamma_cdf_power_integral(alpha, r, term);
        }
        const double upper = detail::alternating_sum(m, spec.k, integrals);
        const double lower = detail::alternating_sum(m, spec.j, integrals);
        return (upper - lower) / (alpha * m);
    }

    CdfModel model{[alpha](double t) { return reg_inc_gamma_P(alpha, t); }, alpha};
    return index_general(spec, model, cfg, Route::order_statistic_cdf);
}

/// The m-th Gini index IG_m = IG_m(1, m) of a gamma population, through the
/// binomial-collapsed form
///   (1/(alpha m)) [ int (1 - P^m) dt - int (1 - P)^m dt ].
inline double mth_gini_gamma(int m, double shape, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (m < 2) {
        throw invalid_input("mth_gini_gamma: m must be >= 2");
    }
    if (!std::isfinite(shape) || shape <= 0.0) {
        throw invalid_input("mth_gini_gamma: shape must be positive and finite");
    }
    QuadratureConfig term = cfg;
    term.abs_tol = std::max(cfg.abs_tol / 4.0, 1e-14);
    term.rel_tol = std::max(cfg.rel_tol / 4.0, 1e-14);

    const double max_part = detail::gamma_cdf_power_integral(shape, m, term);

    // int (1 - P)^m = int Q^m; beyond the 1 - tail_mass quantile the
    // remainder is below tail_mass^{m-1} times the Q tail, restored here.
    const double cut = gamma_quantile(shape, 1.0 - cfg.tail_mass);
    auto integrand = [shape, m](double t) {
        return std::pow(reg_inc_gamma_Q(shape, t), m);
    };
    const double q_tail =
        shape * reg_inc_gamma_Q(shape + 1.0, cut) - cut * reg_inc_gamma_Q(shape, cut);
    const double min_part = integrate_adaptive(integrand, 0.0, cut, term).value +
                            std::pow(cfg.tail_mass, m - 1) * q_tail;

    return (max_part - min_part) / (shape * m);
}

/// Expectation of the sample index estimator under a gamma population,
/// evaluated as the double integral
///   (n lam^{alpha n}/m) sum_r +- C(r-1,.) C(m,r)
///     int_0^inf int_0^inf {1 - P^r(alpha, (z+lam) t)} dt (z+lam)^{-alpha n} dz
/// with no analytic collapse of the inner integral. Equality with
/// index_gamma(spec, params) is the executable unbiasedness witness.
///
/// The outer variable is mapped by u = lam / (z + lam) onto (0, 1], which
/// folds the lam^{alpha n} prefactor into u^{alpha n - 2} and leaves the
/// overall factor n lam / m.
inline double expected_estimator_gamma_numeric(const IndexSpec& spec, const GammaParams& params,
                                               int n, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (n < spec.m) {
        throw invalid_input("expected_estimator_gamma_numeric: need n >= m");
    }
    if (spec.j == spec.k) {
        return 0.0;
    }
    const int m = spec.m;
    const double alpha = params.shape;
    const double lam = params.rate;
    const double an = alpha * static_cast<double>(n);

    QuadratureConfig inner_cfg = cfg;
    inner_cfg.abs_tol = std::max(cfg.abs_tol / 100.0, 1e-13);
    inner_cfg.rel_tol = std::max(cfg.rel_tol / 100.0, 1e-13);
    QuadratureConfig outer_cfg = detail::term_config(cfg, m);
    outer_cfg.abs_tol = std::max(outer_cfg.abs_tol, 1e-11);
    outer_cfg.rel_tol = std::max(outer_cfg.rel_tol, 1e-11);

    std::vector<double> outer(static_cast<std::size_t>(m) + 1, 0.0);
    for (int r = spec.j; r <= m; ++r) {
        // The t-truncation point scaled back from the v = (z+lam) t axis.
        const double v_cut = gamma_quantile(alpha, 1.0 - cfg.tail_mass / r);
        auto inner = [&](double z) {
            const double scale = z + lam;
            auto integrand = [alpha, r, scale](double t) {
                const double q = reg_inc_gamma_Q(alpha, scale * t);
                return detail::one_minus_pow(1.0 - q, q, r);
            };
            const double body =
                integrate_adaptive(integrand, 0.0, v_cut / scale, inner_cfg).value;
            const double tail = r / scale *
                                (alpha * reg_inc_gamma_Q(alpha + 1.0, v_cut) -
                                 v_cut * reg_inc_gamma_Q(alpha, v_cut));
            return body + tail;
        };
        auto outer_integrand = [&](double u) {
            const double z = lam * (1.0 - u) / u;
            return inner(z) * std::pow(u, an - 2.0);
        };
        outer[static_cast<std::size_t>(r)] =
            integrate_adaptive(outer_integrand, 0.0, 1.0, outer_cfg).value;
    }

    const double upper = detail::alternating_sum(m, spec.k, outer);
    const double lower = detail::alternating_sum(m, spec.j, outer);
    return (static_cast<double>(n) * lam / m) * (upper - lower);
}

}  // namespace extgini
