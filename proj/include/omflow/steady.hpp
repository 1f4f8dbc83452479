#pragma once

// =============================================================================
// omflow - steady-state occupations and noise-flow bookkeeping
// =============================================================================
// Two independent routes to the same numbers:
//
//  * occupations_lyapunov: solve M C + C M^dag + D = 0 with the normal-ordered
//    input feed D = Gamma * diag(occupations); n_k is the mechanical diagonal
//    of C.  Per-channel integrated transmissions come from unit-occupation
//    solves (linearity).
//
//  * occupations_spectral: integrate the transmission rows of the mechanical
//    modes over frequency with adaptive quadrature,
//    Tint_{l->k} = (1/2pi) Int T_{k,l}(omega) d omega, and assemble
//    n_k = sum_l Tint_{l->k} mbar_l + ((sum_l Tint_{l->k}) - 1)/2.
//    The trailing bracket vanishes identically (passivity: every integrated
//    row sums to one), so it only carries quadrature error - keeping it makes
//    the two routes' definitions, not just their limits, agree.
//
// Their agreement is the central numerical cross-check of the library.
//
// Flow decomposition per mechanical mode k:
//    delta_n_k = n_k - mbar_k,
//    N_out_k   = mbar_k (Tint_{k->k} - 1)          (flow out to the network)
//    N_in_k    = sum_{l != k} mbar_l Tint_{l->k}   (flow in from other baths)
// and delta_n = N_out + N_in exactly.
// =============================================================================

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "omflow/csv.hpp"
#include "omflow/dynamics.hpp"
#include "omflow/errors.hpp"
#include "omflow/grid.hpp"
#include "omflow/lyapunov.hpp"
#include "omflow/quadrature.hpp"
#include "omflow/spectral.hpp"

namespace omflow {

enum class SteadyMethod { spectral, lyapunov };

struct SpectralOptions {
    /// Absolute quadrature tolerance per unit of (mbar_max + 1).
    double abs_tol_per_quantum = 1e-13;
    double rel_tol = 1e-11;
    int max_panels = 40000;
};

struct FlowReport {
    std::vector<std::string> mechanical_labels;
    std::vector<std::string> channels;   ///< input-channel names, row order
    Eigen::VectorXd occupations;         ///< n_k
    Eigen::VectorXd bath_occupations;    ///< mbar_k
    Eigen::MatrixXd integrated_T;        ///< (channel l) x (mech k)
    Eigen::VectorXd net_flow;            ///< delta_n_k
    Eigen::VectorXd outflow;             ///< N_out_k
    Eigen::VectorXd inflow;              ///< N_in_k
    SteadyMethod method = SteadyMethod::lyapunov;
    double integration_error = 0.0;      ///< spectral route diagnostics
    int integration_panels = 0;
};

namespace detail {

/// Fills occupations/flows from the integrated-T matrix plus the input
/// occupations; shared by both routes.
inline FlowReport assemble_flow_report(const DynamicalSystem& sys,
                                       const Eigen::MatrixXd& integrated_T,
                                       SteadyMethod method) {
    const auto mech = sys.mechanical_rows();
    const auto n_mech = static_cast<Eigen::Index>(mech.size());
    const Eigen::Index n = sys.matrix.rows();

    FlowReport report;
    report.method = method;
    report.integrated_T = integrated_T;
    for (Eigen::Index l = 0; l < n; ++l) {
        report.channels.push_back(
            channel_name(sys, static_cast<std::size_t>(l)));
    }
    report.occupations = Eigen::VectorXd::Zero(n_mech);
    report.bath_occupations = Eigen::VectorXd::Zero(n_mech);
    report.net_flow = Eigen::VectorXd::Zero(n_mech);
    report.outflow = Eigen::VectorXd::Zero(n_mech);
    report.inflow = Eigen::VectorXd::Zero(n_mech);

    for (Eigen::Index k = 0; k < n_mech; ++k) {
        const auto row = static_cast<Eigen::Index>(mech[static_cast<std::size_t>(k)]);
        report.mechanical_labels.push_back(sys.labels[mech[static_cast<std::size_t>(k)]]);
        const double mbar = sys.input_occupations(row);
        report.bath_occupations(k) = mbar;

        double nbar = 0.0;
        double row_sum = 0.0;
        double inflow = 0.0;
        for (Eigen::Index l = 0; l < n; ++l) {
            const double t = integrated_T(l, k);
            nbar += t * sys.input_occupations(l);
            row_sum += t;
            if (l != row) inflow += t * sys.input_occupations(l);
        }
        // Exact passivity makes row_sum = 1; keep the defect so the spectral
        // route's "integral of s minus one half" definition is honoured.
        nbar += 0.5 * (row_sum - 1.0);
        report.occupations(k) = std::max(0.0, nbar);
        report.net_flow(k) = report.occupations(k) - mbar;
        report.outflow(k) = mbar * (integrated_T(row, k) - 1.0);
        report.inflow(k) = inflow;
    }
    return report;
}

}  // namespace detail

/// Steady state via per-channel Lyapunov solves (exact route).
[[nodiscard]] inline FlowReport occupations_lyapunov(const DynamicalSystem& sys) {
    require_stable(sys);
    const Eigen::Index n = sys.matrix.rows();
    const auto mech = sys.mechanical_rows();
    const auto n_mech = static_cast<Eigen::Index>(mech.size());

    Eigen::MatrixXd integrated_T(n, n_mech);
    for (Eigen::Index l = 0; l < n; ++l) {
        Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
        D(l, l) = sys.damping(l);
        const Eigen::MatrixXcd C = solve_lyapunov(sys.matrix, D);
        for (Eigen::Index k = 0; k < n_mech; ++k) {
            const auto row =
                static_cast<Eigen::Index>(mech[static_cast<std::size_t>(k)]);
            integrated_T(l, k) = std::max(0.0, C(row, row).real());
        }
    }
    return detail::assemble_flow_report(sys, integrated_T,
                                        SteadyMethod::lyapunov);
}

namespace detail {

/// Quadrature breakpoints on [-W, W]: resonance centres +- a few widths.
inline std::vector<double> spectral_breakpoints(const DynamicalSystem& sys,
                                                double window) {
    const Eigen::VectorXcd lambda = eigenvalues(sys);
    std::vector<double> pts{-window, 0.0, window};
    const double scales[] = {0.0, 1.0, 3.0, 10.0, 30.0, 100.0};
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        const double center = -lambda(i).imag();
        const double width = std::abs(lambda(i).real());
        for (double s : scales) {
            for (double sign : {-1.0, 1.0}) {
                const double x = center + sign * s * width;
                if (x > -window && x < window) pts.push_back(x);
            }
        }
    }
    return pts;
}

}  // namespace detail

/// Steady state via adaptive spectral integration.  The grid supplies the
/// window (its extreme points); resonance structure is re-derived from the
/// drift spectrum.  Non-convergence raises numerical_error with diagnostics.
[[nodiscard]] inline FlowReport occupations_spectral(
    const DynamicalSystem& sys, const FrequencyGrid& grid,
    const SpectralOptions& opts = {}) {
    require_stable(sys);
    validate_grid(grid.points);
    const Eigen::Index n = sys.matrix.rows();
    const auto mech = sys.mechanical_rows();
    const auto n_mech = static_cast<Eigen::Index>(mech.size());
    const double window =
        std::max(std::abs(grid.points.front()), std::abs(grid.points.back()));

    // Flattened integrand: component (l * n_mech + k) is T_{k,l}(omega)/2pi.
    const auto transmissions = [&](double omega) {
        const Eigen::MatrixXd T = transmission(sys, omega);
        Eigen::VectorXd f(n * n_mech);
        for (Eigen::Index l = 0; l < n; ++l) {
            for (Eigen::Index k = 0; k < n_mech; ++k) {
                const auto row =
                    static_cast<Eigen::Index>(mech[static_cast<std::size_t>(k)]);
                f(l * n_mech + k) = T(row, l) / two_pi;
            }
        }
        return f;
    };

    QuadratureOptions qopts;
    const double mbar_max = sys.input_occupations.maxCoeff();
    qopts.abs_tol = opts.abs_tol_per_quantum * (mbar_max + 1.0);
    qopts.rel_tol = opts.rel_tol;
    qopts.max_panels = opts.max_panels;
    qopts.error_weights = Eigen::VectorXd(n * n_mech);
    for (Eigen::Index l = 0; l < n; ++l) {
        for (Eigen::Index k = 0; k < n_mech; ++k) {
            qopts.error_weights(l * n_mech + k) =
                sys.input_occupations(l) + 1.0;
        }
    }

    const QuadratureResult core = integrate_adaptive(
        transmissions, detail::spectral_breakpoints(sys, window), qopts);

    // Tails |omega| > W via omega = 1/u: the integrand decays like
    // Gamma_k/omega^2 into its own channel, which the substitution renders
    // smooth on (0, 1/W].
    const auto tail = [&](double u) {
        return Eigen::VectorXd((transmissions(1.0 / u) + transmissions(-1.0 / u)) /
                               (u * u));
    };
    const QuadratureResult tails =
        integrate_adaptive(tail, {0.0, 1.0 / window}, qopts);

    if (!core.converged || !tails.converged) {
        throw numerical_error(
            "occupations_spectral: quadrature did not converge "
            "(error estimate " +
            std::to_string(core.error + tails.error) + ", tolerance " +
            std::to_string(qopts.abs_tol) + ", panels " +
            std::to_string(core.panels + tails.panels) + ")");
    }

    const Eigen::VectorXd flat = core.value + tails.value;
    Eigen::MatrixXd integrated_T(n, n_mech);
    for (Eigen::Index l = 0; l < n; ++l) {
        for (Eigen::Index k = 0; k < n_mech; ++k) {
            integrated_T(l, k) = std::max(0.0, flat(l * n_mech + k));
        }
    }
    FlowReport report = detail::assemble_flow_report(sys, integrated_T,
                                                     SteadyMethod::spectral);
    report.integration_error = core.error + tails.error;
    report.integration_panels = core.panels + tails.panels;
    return report;
}

/// Optimal cooling reference: one resonator damped by two independent
/// cavities (couplings G1, G2; decay rates kappa1, kappa2), computed through
/// the Lyapunov route on the reduced three-mode network.
[[nodiscard]] inline double dual_cavity_limit(const Mode& mech, double G1,
                                              double kappa1, double G2,
                                              double kappa2) {
    NetworkModel model;
    Mode c1;
    c1.kind = ModeKind::optical;
    c1.label = "c1";
    c1.damping = kappa1;
    Mode c2 = c1;
    c2.label = "c2";
    c2.damping = kappa2;
    Mode b = mech;
    b.kind = ModeKind::mechanical;
    if (b.label.empty()) b.label = "b";
    model.modes = {c1, c2, b};
    model.couplings = {{"c1", b.label, G1, 0.0}, {"c2", b.label, G2, 0.0}};
    const FlowReport report = occupations_lyapunov(build_dynamics(model));
    return report.occupations(0);
}

/// Worst per-mode relative deviation between two routes' occupations.
/// Occupations below 1e-3 phonons are compared on that scale instead, so
/// vacuum-limited values do not divide by ~0.
[[nodiscard]] inline double flow_disagreement(const FlowReport& a,
                                              const FlowReport& b) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < a.occupations.size(); ++k) {
        const double scale = std::max(
            {std::abs(a.occupations(k)), std::abs(b.occupations(k)), 1e-3});
        worst = std::max(worst,
                         std::abs(a.occupations(k) - b.occupations(k)) / scale);
    }
    return worst;
}

inline void write_flow_header(std::ostream& os) {
    os << "mode,n_bar,m_bar,delta_n,N_out,N_in,method\n";
}

inline void write_flow_rows(std::ostream& os, const FlowReport& report) {
    const char* method =
        report.method == SteadyMethod::spectral ? "spectral" : "lyapunov";
    for (std::size_t k = 0; k < report.mechanical_labels.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        os << csv_escape(report.mechanical_labels[k]) << ','
           << format_number(report.occupations(i)) << ','
           << format_number(report.bath_occupations(i)) << ','
           << format_number(report.net_flow(i)) << ','
           << format_number(report.outflow(i)) << ','
           << format_number(report.inflow(i)) << ',' << method << '\n';
    }
}

/// CSV rows `mode,n_bar,m_bar,delta_n,N_out,N_in,method`.
inline void write_flow_csv(std::ostream& os, const FlowReport& report) {
    write_flow_header(os);
    write_flow_rows(os, report);
}

/// Labeled CSV of the integrated transmissions: one row per input channel.
inline void write_integrated_T_csv(std::ostream& os, const FlowReport& report) {
    os << "channel";
    for (const auto& label : report.mechanical_labels) {
        os << ',' << csv_escape("Tint_to_" + label);
    }
    os << '\n';
    for (std::size_t l = 0; l < report.channels.size(); ++l) {
        os << csv_escape(report.channels[l]);
        for (Eigen::Index k = 0; k < report.integrated_T.cols(); ++k) {
            os << ','
               << format_number(report.integrated_T(static_cast<Eigen::Index>(l), k));
        }
        os << '\n';
    }
}

}  // namespace omflow
