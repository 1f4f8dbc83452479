#pragma once

// =============================================================================
// omflow - closed-form chain amplitudes
// =============================================================================
// For the plaquette and its degenerate chains the response of a mechanical
// mode to any input channel can be written as nested compositions of
// single-mode susceptibilities and loop-closure factors F(x) = 1/(1-x),
// without ever forming the 4x4 system.  These forms make the interference
// mechanism explicit (every path between two modes appears as one term) and
// serve as an independent cross-check of the matrix solver.
//
// Building blocks at frequency omega, with complex couplings
// c_jk = -i G_jk e^{+i phi_jk}:
//
//   chi_a[j] = 1/(kappa_j/2 + i Delta_j - i omega)   cavity susceptibility
//   chi_b[k] = 1/(gamma_k/2 + i Delta_k - i omega)   mechanical susceptibility
//   A[j][k]  = c_jk chi_a[j]        response of a_j to b_k
//   B[j][k]  = conj-phase c_jk chi_b[k]              response of b_k to a_j
//   K[j]     = chi_a[j] sqrt(kappa_j)                cavity input weight
//   Gam[k]   = chi_b[k] sqrt(gamma_k)                mechanical input weight
//
// Products A[j][k]*B[j][k] are phase-free; the loop phase enters only through
// the closed plaquette combinations, so the amplitudes below are valid in any
// gauge and agree with the matrix transfer function entry for entry.
// =============================================================================

#include <array>
#include <complex>
#include <string>

#include "omflow/constants.hpp"
#include "omflow/errors.hpp"
#include "omflow/model.hpp"

namespace omflow {

enum class ChainSetup { two_mode, series_aba, series_bab, plaquette };

/// Two cavities + two resonators with any subset of the four links declared;
/// missing links count as zero-strength couplings.
struct ChainView {
    std::array<std::size_t, 2> optical{};
    std::array<std::size_t, 2> mechanical{};
    double strength[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    double phase[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

[[nodiscard]] inline ChainView chain_view(const NetworkModel& model) {
    model.validate();
    ChainView view;
    std::size_t n_opt = 0;
    std::size_t n_mech = 0;
    for (std::size_t i = 0; i < model.modes.size(); ++i) {
        if (model.modes[i].kind == ModeKind::optical) {
            if (n_opt < 2) view.optical[n_opt] = i;
            ++n_opt;
        } else {
            if (n_mech < 2) view.mechanical[n_mech] = i;
            ++n_mech;
        }
    }
    if (n_opt != 2 || n_mech != 2) {
        throw model_error("chain amplitudes require exactly 2 optical and "
                          "2 mechanical modes");
    }
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            const auto idx = model.coupling_index(
                model.modes[view.optical[j]].label,
                model.modes[view.mechanical[k]].label);
            if (idx) {
                view.strength[j][k] = model.couplings[*idx].strength;
                view.phase[j][k] = model.couplings[*idx].phase;
            }
        }
    }
    return view;
}

/// The susceptibility/coupling building blocks at one frequency.
struct ChainSusceptibilities {
    std::complex<double> chi_a[2];
    std::complex<double> chi_b[2];
    std::complex<double> A[2][2];
    std::complex<double> B[2][2];
    std::complex<double> K[2];
    std::complex<double> Gam[2];

    /// Loop-closure factor F(x) = 1/(1-x).
    [[nodiscard]] static std::complex<double> F(std::complex<double> x) {
        return 1.0 / (1.0 - x);
    }

    /// Phase-free single-loop weight A[j][k]*B[j][k].
    [[nodiscard]] std::complex<double> loop(int j, int k) const {
        return A[j][k] * B[j][k];
    }
};

[[nodiscard]] inline ChainSusceptibilities chain_susceptibilities(
    const NetworkModel& model, double omega) {
    const ChainView view = chain_view(model);
    ChainSusceptibilities s;
    const std::complex<double> i_unit(0.0, 1.0);
    for (int j = 0; j < 2; ++j) {
        const Mode& a = model.modes[view.optical[j]];
        s.chi_a[j] = 1.0 / std::complex<double>(0.5 * a.damping,
                                                a.detuning - omega);
        s.K[j] = s.chi_a[j] * std::sqrt(a.damping);
    }
    for (int k = 0; k < 2; ++k) {
        const Mode& b = model.modes[view.mechanical[k]];
        s.chi_b[k] = 1.0 / std::complex<double>(0.5 * b.damping,
                                                b.detuning - omega);
        s.Gam[k] = s.chi_b[k] * std::sqrt(b.damping);
    }
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            const std::complex<double> c =
                -i_unit * view.strength[j][k] *
                std::polar(1.0, view.phase[j][k]);
            s.A[j][k] = c * s.chi_a[j];
            // b-side coefficient is -i G e^{-i phi} = -conj(c)
            s.B[j][k] = -std::conj(c) * s.chi_b[k];
        }
    }
    return s;
}

namespace detail {

inline void require_zero_link(const ChainView& view, int j, int k,
                              const char* setup_name) {
    if (view.strength[j][k] != 0.0) {
        throw model_error(std::string("chain setup ") + setup_name +
                          " requires zero coupling a" + std::to_string(j + 1) +
                          "-b" + std::to_string(k + 1));
    }
}

/// Resolves a source-channel token: R1/R2 (mechanical baths), or an optical
/// label with optional "in" suffix, or a1/a2 ordinals.  Returns row index
/// 0..1 for optical sources (flag false) or mechanical (flag true).
inline std::pair<bool, int> resolve_chain_source(const NetworkModel& model,
                                                 const ChainView& view,
                                                 const std::string& token) {
    if (token.size() == 2 && token[0] == 'R' &&
        (token[1] == '1' || token[1] == '2')) {
        return {true, token[1] - '1'};
    }
    std::string base = token;
    if (base.size() > 2 && base.substr(base.size() - 2) == "in") {
        base = base.substr(0, base.size() - 2);
    }
    for (int j = 0; j < 2; ++j) {
        if (model.modes[view.optical[j]].label == base) return {false, j};
    }
    if (base.size() == 2 && base[0] == 'a' &&
        (base[1] == '1' || base[1] == '2')) {
        return {false, base[1] - '1'};
    }
    throw std::domain_error("unknown chain input channel '" + token + "'");
}

inline int resolve_chain_target(const NetworkModel& model,
                                const ChainView& view,
                                const std::string& token) {
    for (int k = 0; k < 2; ++k) {
        if (model.modes[view.mechanical[k]].label == token) return k;
    }
    if (token.size() == 2 && token[0] == 'b' &&
        (token[1] == '1' || token[1] == '2')) {
        return token[1] - '1';
    }
    throw std::domain_error("unknown chain target mode '" + token + "'");
}

}  // namespace detail

/// Closed-form amplitude from input channel `source` into mechanical mode
/// `target` at frequency omega.  |amplitude|^2 is the transmission.
/// Pairs outside the declared setup raise std::domain_error; couplings that
/// must vanish for the setup raise model_error.
[[nodiscard]] inline std::complex<double> chain_amplitude(
    const NetworkModel& model, ChainSetup setup, const std::string& source,
    const std::string& target, double omega) {
    using cd = std::complex<double>;
    const ChainView view = chain_view(model);
    const ChainSusceptibilities s = chain_susceptibilities(model, omega);
    const auto [from_mech, src] =
        detail::resolve_chain_source(model, view, source);
    const int tgt = detail::resolve_chain_target(model, view, target);

    const auto F = ChainSusceptibilities::F;
    const cd A11 = s.A[0][0], A12 = s.A[0][1], A21 = s.A[1][0], A22 = s.A[1][1];
    const cd B11 = s.B[0][0], B12 = s.B[0][1], B21 = s.B[1][0], B22 = s.B[1][1];

    const auto unsupported = [&]() -> cd {
        throw std::domain_error("chain setup does not connect channel '" +
                                source + "' to mode '" + target + "'");
    };

    switch (setup) {
        case ChainSetup::two_mode: {
            detail::require_zero_link(view, 0, 1, "two_mode");
            detail::require_zero_link(view, 1, 0, "two_mode");
            detail::require_zero_link(view, 1, 1, "two_mode");
            if (tgt != 0) return unsupported();
            const cd chi = F(A11 * B11);
            if (from_mech && src == 0) return chi * s.Gam[0];
            if (!from_mech && src == 0) return chi * B11 * s.K[0];
            return unsupported();
        }
        case ChainSetup::series_aba: {
            detail::require_zero_link(view, 0, 1, "series_aba");
            detail::require_zero_link(view, 1, 1, "series_aba");
            if (tgt != 0) return unsupported();
            const cd chi = F(A11 * B11 + A21 * B21);
            if (from_mech && src == 0) return chi * s.Gam[0];
            if (!from_mech && src == 0) return chi * B11 * s.K[0];
            if (!from_mech && src == 1) return chi * B21 * s.K[1];
            return unsupported();
        }
        case ChainSetup::series_bab: {
            detail::require_zero_link(view, 1, 0, "series_bab");
            detail::require_zero_link(view, 1, 1, "series_bab");
            if (from_mech && src == tgt) {
                const int o = 1 - tgt;  // the other resonator
                return F(s.loop(0, tgt) * F(s.loop(0, o))) * s.Gam[tgt];
            }
            if (from_mech) {  // across the shared cavity
                const int o = src;
                const cd chiF_other = F(s.loop(0, o));
                return F(s.loop(0, tgt) * chiF_other) * chiF_other *
                       s.A[0][o] * s.B[0][tgt] * s.Gam[o];
            }
            if (src == 0) {  // a1 vacuum input
                const int o = 1 - tgt;
                const cd chiF_other = F(s.loop(0, o));
                return F(s.loop(0, tgt) * chiF_other) * chiF_other *
                       s.B[0][tgt] * s.K[0];
            }
            return unsupported();
        }
        case ChainSetup::plaquette: {
            // Both targets share the path-sum structure; write it for b1 and
            // mirror the indices for b2.
            const cd cross =
                A11 * B12 * B21 * A22 + B11 * A12 * A21 * B22;
            if (tgt == 0) {
                const cd chiF2 = F(A12 * B12 + A22 * B22);
                const cd chiFF_12_22 = F(A12 * B12 * F(A22 * B22));
                const cd chiFF_22_12 = F(A22 * B22 * F(A12 * B12));
                const cd D1 = 1.0 - cross * chiF2 - A11 * B11 * chiFF_12_22 -
                              A21 * B21 * chiFF_22_12;
                if (from_mech && src == 0) return s.Gam[0] / D1;
                if (from_mech && src == 1) {
                    const cd H12 = (A12 * B11 + A22 * B21) * chiF2;
                    return H12 * s.Gam[1] / D1;
                }
                if (src == 0) {
                    const cd M11 = B21 * A22 * B12 * chiF2 +
                                   B11 * chiFF_12_22;
                    return M11 * s.K[0] / D1;
                }
                const cd M12 = B11 * A12 * B22 * chiF2 +
                               B21 * chiFF_22_12;
                return M12 * s.K[1] / D1;
            }
            const cd chiF1 = F(A11 * B11 + A21 * B21);
            const cd chiFF_11_21 = F(A11 * B11 * F(A21 * B21));
            const cd chiFF_21_11 = F(A21 * B21 * F(A11 * B11));
            const cd D2 = 1.0 - cross * chiF1 - A12 * B12 * chiFF_11_21 -
                          A22 * B22 * chiFF_21_11;
            if (from_mech && src == 1) return s.Gam[1] / D2;
            if (from_mech && src == 0) {
                const cd H21 = (A11 * B12 + A21 * B22) * chiF1;
                return H21 * s.Gam[0] / D2;
            }
            if (src == 0) {
                const cd M21 = B22 * A21 * B11 * chiF1 + B12 * chiFF_11_21;
                return M21 * s.K[0] / D2;
            }
            const cd M22 = B12 * A11 * B21 * chiF1 + B22 * chiFF_21_11;
            return M22 * s.K[1] / D2;
        }
    }
    return unsupported();
}

}  // namespace omflow
