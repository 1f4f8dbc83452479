#pragma once

// =============================================================================
// omflow - adaptive vector-valued Gauss-Kronrod quadrature
// =============================================================================
// 15-point Kronrod / 7-point Gauss panels, globally adaptive (split the panel
// with the largest error estimate).  The integrand is vector valued and the
// error is measured in a weighted max-norm so that components feeding hot
// baths can be resolved more tightly than cold ones.  Deterministic: panel
// selection breaks ties by position and the final sum is accumulated in
// position order.
// =============================================================================

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <vector>

#include "omflow/errors.hpp"

namespace omflow {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_panels = 40000;
    /// Optional per-component weights for the error norm (empty = unweighted).
    Eigen::VectorXd error_weights;
};

struct QuadratureResult {
    Eigen::VectorXd value;
    double error = 0.0;     ///< weighted max-norm error estimate
    int panels = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights (QUADPACK dqk15 constants).
inline constexpr double gk15_x[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double gk15_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double gk15_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double err = 0.0;
    Eigen::VectorXd value;
};

struct PanelWorse {
    bool operator()(const Panel& lhs, const Panel& rhs) const {
        if (lhs.err != rhs.err) return lhs.err < rhs.err;
        return lhs.a > rhs.a;  // ties: prefer the leftmost panel
    }
};

}  // namespace detail

/// Integrates f over the union of panels defined by consecutive breakpoints.
/// Throws numerical_error if the integrand returns non-finite values.
inline QuadratureResult integrate_adaptive(
    const std::function<Eigen::VectorXd(double)>& f,
    std::vector<double> breakpoints, const QuadratureOptions& opts = {}) {
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                      breakpoints.end());
    if (breakpoints.size() < 2) {
        throw numerical_error("integrate_adaptive: need at least two "
                              "distinct breakpoints");
    }

    const auto wnorm = [&](const Eigen::VectorXd& v) {
        if (opts.error_weights.size() == 0) return v.cwiseAbs().maxCoeff();
        return (v.cwiseAbs().cwiseProduct(opts.error_weights)).maxCoeff();
    };

    const auto evaluate = [&](double a, double b) {
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        Eigen::VectorXd kronrod;
        Eigen::VectorXd gauss;
        for (int i = 0; i < 8; ++i) {
            const double dx = h * detail::gk15_x[i];
            Eigen::VectorXd fsum = f(c - dx);
            if (i < 7) fsum += f(c + dx);
            if (!fsum.allFinite()) {
                throw numerical_error(
                    "integrate_adaptive: integrand not finite near x = " +
                    std::to_string(c - dx));
            }
            if (kronrod.size() == 0) {
                kronrod = Eigen::VectorXd::Zero(fsum.size());
                gauss = Eigen::VectorXd::Zero(fsum.size());
            }
            kronrod += detail::gk15_wk[i] * fsum;
            // Gauss nodes are the odd Kronrod abscissae plus the centre (i=7).
            if (i % 2 == 1) gauss += detail::gk15_wg[i / 2] * fsum;
        }
        detail::Panel p;
        p.a = a;
        p.b = b;
        p.value = h * kronrod;
        p.err = wnorm(h * (kronrod - gauss));
        return p;
    };

    std::priority_queue<detail::Panel, std::vector<detail::Panel>,
                        detail::PanelWorse>
        queue;
    Eigen::VectorXd total;
    double total_err = 0.0;
    int n_panels = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        detail::Panel p = evaluate(breakpoints[i], breakpoints[i + 1]);
        if (total.size() == 0) total = Eigen::VectorXd::Zero(p.value.size());
        total += p.value;
        total_err += p.err;
        queue.push(std::move(p));
        ++n_panels;
    }

    const auto tolerance = [&] {
        return std::max(opts.abs_tol, opts.rel_tol * wnorm(total));
    };

    while (total_err > tolerance() && n_panels < opts.max_panels &&
           !queue.empty()) {
        detail::Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval no longer splittable in double precision
            queue.push(std::move(worst));
            break;
        }
        detail::Panel left = evaluate(worst.a, mid);
        detail::Panel right = evaluate(mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        queue.push(std::move(left));
        queue.push(std::move(right));
        ++n_panels;
    }

    // Re-accumulate both sums in position order: deterministic and free of
    // the drift the incremental updates can accumulate.
    std::vector<detail::Panel> panels;
    panels.reserve(queue.size());
    while (!queue.empty()) {
        panels.push_back(queue.top());
        queue.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const detail::Panel& x, const detail::Panel& y) {
                  return x.a < y.a;
              });
    total.setZero();
    total_err = 0.0;
    for (const auto& p : panels) {
        total += p.value;
        total_err += p.err;
    }

    QuadratureResult result;
    result.value = total;
    result.error = total_err;
    result.panels = n_panels;
    result.converged = total_err <= tolerance();
    return result;
}

}  // namespace omflow
