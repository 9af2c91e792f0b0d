#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "extgini/errors.hpp"

namespace extgini {

/// Tolerances and truncation policy for the improper integrals.
struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    /// Probability mass allowed beyond the truncation point of a tail.
    double tail_mass = 1e-12;
    int max_subdivisions = 400;

    void validate() const {
        if (!(abs_tol > 0.0) || abs_tol >= 1.0 || !(rel_tol > 0.0) || rel_tol >= 1.0) {
            throw invalid_input("QuadratureConfig: abs_tol and rel_tol must lie in (0, 1)");
        }
        if (!(tail_mass > 0.0) || tail_mass > 1e-6) {
            throw invalid_input("QuadratureConfig: tail_mass must lie in (0, 1e-6]");
        }
        if (max_subdivisions < 1) {
            throw invalid_input("QuadratureConfig: max_subdivisions must be >= 1");
        }
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // sum of per-panel |K15 - G7| estimates
    int panels = 1;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (abscissae > 0;
// the rule is symmetric and all nodes are interior).
inline constexpr std::array<double, 8> kGkNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// One Gauss-Kronrod pass over [a, b]: returns the K15 value and |K15 - G7|.
template <class F>
std::pair<double, double> gauss_kronrod_15(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_center = f(center);
    double kronrod = kKronrodWeights[7] * f_center;
    double gauss = kGaussWeights[3] * f_center;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGkNodes[i];
        const double pair_sum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[i] * pair_sum;
        if (i % 2 == 1) {  // odd Kronrod indices are the embedded Gauss nodes
            gauss += kGaussWeights[i / 2] * pair_sum;
        }
    }
    kronrod *= half;
    gauss *= half;
    return {kronrod, std::fabs(kronrod - gauss)};
}

struct Panel {
    double a, b, value, error;
};

}  // namespace detail

/// Adaptive quadrature on a finite interval: Gauss-Kronrod 15/7 per panel,
/// bisecting the panel with the largest error estimate until the summed
/// estimates meet max(abs_tol, rel_tol * |integral|).
/// Throws quadrature_error (carrying the partial estimate) when the
/// subdivision budget runs out first.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureConfig& cfg) {
    cfg.validate();
    if (a == b) {
        return {0.0, 0.0, 0};
    }

    std::vector<detail::Panel> panels;
    auto [v0, e0] = detail::gauss_kronrod_15(f, a, b);
    panels.push_back({a, b, v0, e0});

    auto worse = [](const detail::Panel& lhs, const detail::Panel& rhs) {
        return lhs.error < rhs.error;
    };

    int splits = 0;
    while (true) {
        double total = 0.0;
        double err = 0.0;
        for (const auto& p : panels) {
            total += p.value;
            err += p.error;
        }
        const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total));
        if (err <= target) {
            break;
        }
        if (splits >= cfg.max_subdivisions) {
            throw quadrature_error("adaptive quadrature did not converge within " +
                                       std::to_string(cfg.max_subdivisions) + " subdivisions",
                                   total, err);
        }
        auto worst = std::max_element(panels.begin(), panels.end(), worse);
        const double pa = worst->a;
        const double pb = worst->b;
        const double mid = 0.5 * (pa + pb);
        if (mid <= pa || mid >= pb) {
            // Interval no longer splittable in double precision; accept as-is.
            worst->error = 0.0;
            continue;
        }
        auto [vl, el] = detail::gauss_kronrod_15(f, pa, mid);
        auto [vr, er] = detail::gauss_kronrod_15(f, mid, pb);
        *worst = {pa, mid, vl, el};
        panels.push_back({mid, pb, vr, er});
        ++splits;
    }

    // Sum in left-to-right order so the result does not depend on the
    // subdivision history.
    std::sort(panels.begin(), panels.end(),
              [](const detail::Panel& lhs, const detail::Panel& rhs) { return lhs.a < rhs.a; });
    QuadratureResult out;
    out.panels = static_cast<int>(panels.size());
    double comp = 0.0;
    for (const auto& p : panels) {
        const double y = p.value - comp;
        const double t = out.value + y;
        comp = (t - out.value) - y;
        out.value = t;
        out.error += p.error;
    }
    return out;
}

/// Integral of f over [cut, infinity) via the substitution t = cut + (1-u)/u,
/// which maps (0, 1] onto [cut, infinity). The Kronrod nodes are interior,
/// so f is never evaluated at u = 0 (t = infinity).
template <class F>
QuadratureResult integrate_upper_tail(F&& f, double cut, const QuadratureConfig& cfg) {
    auto transformed = [&f, cut](double u) {
        const double t = cut + (1.0 - u) / u;
        const double val = f(t);
        return val == 0.0 ? 0.0 : val / (u * u);
    };
    return integrate_adaptive(transformed, 0.0, 1.0, cfg);
}

}  // namespace extgini
