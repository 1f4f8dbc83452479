#pragma once

// =============================================================================
// omflow - analytic condition evaluators
// =============================================================================
// Closed-form checks on a plaquette's parameters:
//
//  * interference:   the destructive-interference condition for the cross
//                    transmission through the two cavity paths,
//                    G11 G12 chi_a1(w) + e^{i Phi} G21 G22 chi_a2(w) = 0;
//  * impedance:      the flat-band matching rule G11 G12 kappa2 = G21 G22 kappa1
//                    (approximate - valid well inside the cavity bandwidth);
//  * dark-mode line: the comparison locus G22/G11 = G21/G12;
//  * supermodes:     the +/- cavity combinations seen by each resonator at the
//                    interference point;
//  * nonreciprocity: the directional-blocking conditions for laddered
//                    detuned networks, with the second cavity adiabatically
//                    eliminated.
//
// Every residual is normalized into [0, 1], 0 meaning exactly satisfied, so a
// single scale-free tolerance applies: 1e-9 for exact conditions, 1e-2 for the
// approximate impedance rule.
// =============================================================================

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "omflow/constants.hpp"
#include "omflow/errors.hpp"
#include "omflow/model.hpp"

namespace omflow {

enum class Condition {
    interference_exact,
    impedance_kappa,
    dark_mode_breaking,
    nonreciprocal_block_12,
    nonreciprocal_block_21,
};

[[nodiscard]] inline const char* condition_name(Condition c) {
    switch (c) {
        case Condition::interference_exact: return "InterferenceExact";
        case Condition::impedance_kappa: return "ImpedanceKappa";
        case Condition::dark_mode_breaking: return "DarkModeBreaking";
        case Condition::nonreciprocal_block_12: return "NonreciprocalBlock12";
        case Condition::nonreciprocal_block_21: return "NonreciprocalBlock21";
    }
    return "?";
}

constexpr double exact_condition_tolerance = 1e-9;
constexpr double approximate_condition_tolerance = 1e-2;

struct ConditionReport {
    Condition condition;
    double residual = 0.0;     ///< in [0, 1]; 0 = exactly satisfied
    double tolerance = exact_condition_tolerance;
    bool satisfied = false;    ///< residual <= tolerance
    bool has_required_phase = false;
    double required_phase = 0.0;   ///< loop phase that would zero the residual
    double bandwidth_ratio = 0.0;  ///< impedance check: linewidth / bandwidth
    std::string warning;           ///< regime caveats, empty if none
};

/// Normalized cavity combinations coupled to (+) and decoupled from (-) each
/// resonator at loop phase pi, expressed over (a1, a2).
struct SupermodeBasis {
    Eigen::Vector2d alpha1_plus;
    Eigen::Vector2d alpha1_minus;
    Eigen::Vector2d alpha2_plus;
    Eigen::Vector2d alpha2_minus;
    double strength1 = 0.0;  ///< sqrt(G11^2 + G21^2)
    double strength2 = 0.0;  ///< sqrt(G12^2 + G22^2)
    bool parallel = false;   ///< alpha2 basis parallel to alpha1 basis
    double parallel_residual = 0.0;
};

namespace detail {

[[nodiscard]] inline double normalized_mismatch(double x, double y) {
    const double denom = std::abs(x) + std::abs(y);
    return denom > 0.0 ? std::abs(x - y) / denom : 0.0;
}

[[nodiscard]] inline double circle_distance(double a, double b) {
    const double w = wrap_angle(a - b);
    return std::min(w, two_pi - w);
}

}  // namespace detail

/// Destructive interference of the two cavity-mediated paths at frequency
/// omega.  Residual 0 means the cross transmission between the resonators
/// vanishes; residual 1 means the paths add fully constructively.
[[nodiscard]] inline ConditionReport interference_residual(
    const NetworkModel& model, double omega = 0.0,
    double tolerance = exact_condition_tolerance) {
    const PlaquetteView v = plaquette_view(model);
    if (model.convention != Convention::H1) {
        throw model_error(
            "interference_residual: requires the resonant-cavity convention");
    }
    using cplx = std::complex<double>;
    const cplx i(0.0, 1.0);
    const auto chi = [&](const Mode& m) {
        return 1.0 / (m.damping / 2.0 + i * (m.detuning - omega));
    };
    const cplx t1 =
        v.strength[0][0] * v.strength[0][1] * chi(model.modes[v.optical[0]]);
    const cplx t2 =
        v.strength[1][0] * v.strength[1][1] * chi(model.modes[v.optical[1]]);
    const double phi = loop_phase(model);

    ConditionReport report;
    report.condition = Condition::interference_exact;
    report.tolerance = tolerance;
    const double denom = std::abs(t1) + std::abs(t2);
    report.residual =
        denom > 0.0 ? std::abs(t1 + std::polar(1.0, phi) * t2) / denom : 0.0;
    report.satisfied = report.residual <= report.tolerance;
    if (std::abs(t1) > 0.0 && std::abs(t2) > 0.0) {
        report.has_required_phase = true;
        report.required_phase =
            wrap_angle(pi + std::arg(t1) - std::arg(t2));
    }
    return report;
}

/// Impedance-matched damping of both cavity paths:
/// G11 G12 kappa2 = G21 G22 kappa1.  Approximate - it ignores frequency
/// structure, so the report carries the ratio of the effective mechanical
/// linewidth to the smaller cavity bandwidth as a validity estimate.
[[nodiscard]] inline ConditionReport impedance_kappa_check(
    const NetworkModel& model,
    double tolerance = approximate_condition_tolerance) {
    const PlaquetteView v = plaquette_view(model);
    const double kappa1 = model.modes[v.optical[0]].damping;
    const double kappa2 = model.modes[v.optical[1]].damping;

    ConditionReport report;
    report.condition = Condition::impedance_kappa;
    report.tolerance = tolerance;
    report.residual = detail::normalized_mismatch(
        v.strength[0][0] * v.strength[0][1] * kappa2,
        v.strength[1][0] * v.strength[1][1] * kappa1);
    report.satisfied = report.residual <= report.tolerance;

    double effective_linewidth = 0.0;
    for (int k = 0; k < 2; ++k) {
        double width = model.modes[v.mechanical[k]].damping;
        width += 4.0 * v.strength[0][k] * v.strength[0][k] / kappa1;
        width += 4.0 * v.strength[1][k] * v.strength[1][k] / kappa2;
        effective_linewidth = std::max(effective_linewidth, width);
    }
    report.bandwidth_ratio = effective_linewidth / std::min(kappa1, kappa2);
    if (report.bandwidth_ratio > 0.1) {
        report.warning =
            "matching rule assumes the optically broadened resonator "
            "linewidth stays well inside the cavity bandwidth "
            "(ratio " +
            std::to_string(report.bandwidth_ratio) + ")";
    }
    return report;
}

/// Comparison locus G22/G11 = G21/G12 along which the cooperativity ratio of
/// the two paths is balanced without matching their damping rates.
[[nodiscard]] inline ConditionReport dark_mode_line_check(
    const NetworkModel& model,
    double tolerance = exact_condition_tolerance) {
    const PlaquetteView v = plaquette_view(model);
    ConditionReport report;
    report.condition = Condition::dark_mode_breaking;
    report.tolerance = tolerance;
    report.residual = detail::normalized_mismatch(
        v.strength[0][0] * v.strength[1][0],
        v.strength[0][1] * v.strength[1][1]);
    report.satisfied = report.residual <= report.tolerance;
    return report;
}

/// Cavity supermode decomposition at the interference point (loop phase pi).
/// alpha_{k,+} couples to resonator k with strength sqrt(G_{1k}^2 + G_{2k}^2);
/// alpha_{k,-} is decoupled from it.
[[nodiscard]] inline SupermodeBasis supermodes(const NetworkModel& model) {
    const PlaquetteView v = plaquette_view(model);
    const double phi = loop_phase(model);
    if (detail::circle_distance(phi, pi) > exact_condition_tolerance) {
        throw model_error(
            "supermodes: basis is defined at loop phase pi (got " +
            std::to_string(phi) + ")");
    }
    const double G11 = v.strength[0][0], G21 = v.strength[1][0];
    const double G12 = v.strength[0][1], G22 = v.strength[1][1];

    SupermodeBasis basis;
    basis.strength1 = std::hypot(G11, G21);
    basis.strength2 = std::hypot(G12, G22);
    if (basis.strength1 == 0.0 || basis.strength2 == 0.0) {
        throw model_error("supermodes: a resonator is fully decoupled");
    }
    basis.alpha1_plus = Eigen::Vector2d(G21, G11) / basis.strength1;
    basis.alpha1_minus = Eigen::Vector2d(G11, -G21) / basis.strength1;
    basis.alpha2_plus = Eigen::Vector2d(G12, G22) / basis.strength2;
    basis.alpha2_minus = Eigen::Vector2d(G22, -G12) / basis.strength2;
    basis.parallel_residual = detail::normalized_mismatch(G11 * G12, G21 * G22);
    basis.parallel = basis.parallel_residual <= exact_condition_tolerance;
    return basis;
}

/// Directional-blocking conditions for detuned networks: first report blocks
/// transfer 2 -> 1, second blocks 1 -> 2.  The second cavity is treated
/// adiabatically (its detuning dominates its decay); a warning is attached
/// when that regime is marginal.
[[nodiscard]] inline std::pair<ConditionReport, ConditionReport>
nonreciprocity_residuals(const NetworkModel& model, double omega = 0.0,
                         double tolerance = exact_condition_tolerance) {
    const PlaquetteView v = plaquette_view(model);
    if (model.convention != Convention::H2) {
        throw model_error(
            "nonreciprocity_residuals: requires the detuned-cavity convention");
    }
    const Mode& a1 = model.modes[v.optical[0]];
    const Mode& a2 = model.modes[v.optical[1]];
    if (a2.detuning == omega) {
        throw std::domain_error(
            "nonreciprocity_residuals: singular at omega equal to the "
            "second cavity detuning");
    }
    using cplx = std::complex<double>;
    const cplx i(0.0, 1.0);
    const cplx t1 = v.strength[0][0] * v.strength[0][1] /
                    (a1.damping / 2.0 + i * (a1.detuning - omega));
    const cplx t2 =
        v.strength[1][0] * v.strength[1][1] / (i * (a2.detuning - omega));
    const double phi = loop_phase(model);
    const double denom = std::abs(t1) + std::abs(t2);

    std::string warning;
    const double scale =
        std::max({a2.damping, v.strength[1][0], v.strength[1][1]});
    if (a2.detuning < 10.0 * scale) {
        warning =
            "second cavity detuning is not large against its decay and "
            "couplings; the adiabatic blocking condition is approximate";
    }

    ConditionReport block21;
    block21.condition = Condition::nonreciprocal_block_21;
    block21.tolerance = tolerance;
    block21.residual =
        denom > 0.0
            ? std::abs(t1 + std::polar(1.0, -phi) * t2) / denom
            : 0.0;
    block21.satisfied = block21.residual <= block21.tolerance;
    block21.warning = warning;

    ConditionReport block12;
    block12.condition = Condition::nonreciprocal_block_12;
    block12.tolerance = tolerance;
    block12.residual =
        denom > 0.0
            ? std::abs(t1 + std::polar(1.0, phi) * t2) / denom
            : 0.0;
    block12.satisfied = block12.residual <= block12.tolerance;
    block12.warning = warning;

    if (std::abs(t1) > 0.0 && std::abs(t2) > 0.0) {
        block21.has_required_phase = true;
        block21.required_phase = wrap_angle(std::arg(t2) - std::arg(t1) - pi);
        block12.has_required_phase = true;
        block12.required_phase = wrap_angle(pi + std::arg(t1) - std::arg(t2));
    }
    return {block21, block12};
}

}  // namespace omflow
