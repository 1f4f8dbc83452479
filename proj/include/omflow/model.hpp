#pragma once

// =============================================================================
// omflow - network model types
// =============================================================================
// A NetworkModel is a bipartite graph of optical cavities and mechanical
// resonators connected by linearized beam-splitter couplings G e^{i phi}.
// The four-mode "plaquette" (two cavities, two resonators, all four links)
// is the workhorse topology; the builder accepts any bipartite layout.
//
// Conventions:
//   H1 - rotating frame in which cavities sit on resonance (optical detuning
//        must be zero); mechanical modes may carry detunings.
//   H2 - mechanical modes on resonance (mechanical detuning zero); cavities
//        may carry detunings.
// =============================================================================

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "omflow/constants.hpp"
#include "omflow/errors.hpp"

namespace omflow {

enum class ModeKind { optical, mechanical };

enum class Convention { H1, H2 };

/// One bosonic mode of the network.  All rates are in units of the reference
/// rate; `frequency` is the absolute mode frequency in rad/s and is only used
/// for bath-occupation conversion and validation warnings (0 = unspecified).
struct Mode {
    ModeKind kind = ModeKind::optical;
    std::string label;
    double frequency = 0.0;
    double detuning = 0.0;
    double damping = 1.0;
    double bath_occupation = 0.0;
};

/// Beam-splitter coupling  G e^{i phi} a_cavity b_mech^dag + h.c.
struct Coupling {
    std::string cavity;
    std::string mechanical;
    double strength = 0.0;
    double phase = 0.0;
};

/// Result of linearizing a single-photon coupling around a coherent cavity
/// amplitude: strength = |g * alpha|, phase = arg(g * alpha).
struct LinearizationInput {
    std::string cavity;
    std::string mechanical;
    double single_photon_coupling = 0.0;
    std::complex<double> cavity_amplitude{0.0, 0.0};
};

struct NetworkModel {
    std::vector<Mode> modes;
    std::vector<Coupling> couplings;
    Convention convention = Convention::H1;

    /// Index of the mode with the given label; throws if absent.
    [[nodiscard]] std::size_t mode_index(const std::string& label) const {
        for (std::size_t i = 0; i < modes.size(); ++i) {
            if (modes[i].label == label) return i;
        }
        throw model_error("unknown mode label '" + label + "'");
    }

    [[nodiscard]] const Mode& mode(const std::string& label) const {
        return modes[mode_index(label)];
    }

    [[nodiscard]] Mode& mode(const std::string& label) {
        return modes[mode_index(label)];
    }

    /// Index of the coupling between the given pair, if present.
    [[nodiscard]] std::optional<std::size_t> coupling_index(
        const std::string& cavity, const std::string& mechanical) const {
        for (std::size_t i = 0; i < couplings.size(); ++i) {
            if (couplings[i].cavity == cavity &&
                couplings[i].mechanical == mechanical) {
                return i;
            }
        }
        return std::nullopt;
    }

    /// Checks every structural invariant; throws model_error on violation.
    void validate() const {
        if (modes.empty()) throw model_error("model has no modes");
        for (const auto& m : modes) {
            if (m.label.empty()) throw model_error("mode with empty label");
            if (!std::isfinite(m.damping) || m.damping <= 0.0) {
                throw model_error("mode '" + m.label +
                                  "': damping must be positive and finite");
            }
            if (!std::isfinite(m.bath_occupation) || m.bath_occupation < 0.0) {
                throw model_error("mode '" + m.label +
                                  "': bath_occupation must be >= 0");
            }
            if (!std::isfinite(m.detuning)) {
                throw model_error("mode '" + m.label + "': detuning not finite");
            }
            if (convention == Convention::H1 &&
                m.kind == ModeKind::optical && m.detuning != 0.0) {
                throw model_error("convention H1 requires zero optical detuning "
                                  "(mode '" + m.label + "')");
            }
            if (convention == Convention::H2 &&
                m.kind == ModeKind::mechanical && m.detuning != 0.0) {
                throw model_error("convention H2 requires zero mechanical "
                                  "detuning (mode '" + m.label + "')");
            }
        }
        for (std::size_t i = 0; i < modes.size(); ++i) {
            for (std::size_t j = i + 1; j < modes.size(); ++j) {
                if (modes[i].label == modes[j].label) {
                    throw model_error("duplicate mode label '" +
                                      modes[i].label + "'");
                }
            }
        }
        for (const auto& c : couplings) {
            const Mode& cav = mode(c.cavity);
            const Mode& mech = mode(c.mechanical);
            if (cav.kind != ModeKind::optical) {
                throw model_error("coupling endpoint '" + c.cavity +
                                  "' is not an optical mode");
            }
            if (mech.kind != ModeKind::mechanical) {
                throw model_error("coupling endpoint '" + c.mechanical +
                                  "' is not a mechanical mode");
            }
            if (!std::isfinite(c.strength) || c.strength < 0.0) {
                throw model_error("coupling " + c.cavity + "-" + c.mechanical +
                                  ": strength must be >= 0");
            }
            if (!std::isfinite(c.phase)) {
                throw model_error("coupling " + c.cavity + "-" + c.mechanical +
                                  ": phase not finite");
            }
        }
        for (std::size_t i = 0; i < couplings.size(); ++i) {
            for (std::size_t j = i + 1; j < couplings.size(); ++j) {
                if (couplings[i].cavity == couplings[j].cavity &&
                    couplings[i].mechanical == couplings[j].mechanical) {
                    throw model_error("duplicate coupling " +
                                      couplings[i].cavity + "-" +
                                      couplings[i].mechanical);
                }
            }
        }
    }
};

/// Converts single-photon couplings + coherent amplitudes into effective
/// beam-splitter couplings.  A zero amplitude yields strength 0, phase 0.
[[nodiscard]] inline std::vector<Coupling> linearize(
    const std::vector<LinearizationInput>& inputs) {
    std::vector<Coupling> out;
    out.reserve(inputs.size());
    for (const auto& in : inputs) {
        const std::complex<double> effective =
            in.single_photon_coupling * in.cavity_amplitude;
        Coupling c;
        c.cavity = in.cavity;
        c.mechanical = in.mechanical;
        c.strength = std::abs(effective);
        c.phase = (c.strength == 0.0) ? 0.0 : wrap_angle(std::arg(effective));
        out.push_back(std::move(c));
    }
    return out;
}

/// Index bookkeeping for the four-mode plaquette: optical[j] / mechanical[k]
/// are mode indices in declaration order; link[j][k] is the coupling index of
/// cavity j <-> resonator k.
struct PlaquetteView {
    std::array<std::size_t, 2> optical{};
    std::array<std::size_t, 2> mechanical{};
    std::array<std::array<std::size_t, 2>, 2> link{};
    double strength[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    double phase[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

/// Resolves the plaquette topology (2 cavities, 2 resonators, all four
/// links present); throws model_error for any other layout.
[[nodiscard]] inline PlaquetteView plaquette_view(const NetworkModel& model) {
    PlaquetteView view;
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
    if (n_opt != 2 || n_mech != 2 || model.couplings.size() != 4) {
        throw model_error(
            "plaquette topology requires exactly 2 optical modes, "
            "2 mechanical modes and all 4 couplings");
    }
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            auto idx = model.coupling_index(
                model.modes[view.optical[j]].label,
                model.modes[view.mechanical[k]].label);
            if (!idx) {
                throw model_error(
                    "plaquette topology requires a coupling between '" +
                    model.modes[view.optical[j]].label + "' and '" +
                    model.modes[view.mechanical[k]].label + "'");
            }
            view.link[j][k] = *idx;
            view.strength[j][k] = model.couplings[*idx].strength;
            view.phase[j][k] = model.couplings[*idx].phase;
        }
    }
    return view;
}

/// The loop phase Phi = phi12 + phi21 - phi11 - phi22, wrapped to [0, 2*pi):
/// the alternating phase sum around the plaquette cycle, which is the
/// combination left invariant by local mode rephasings.  Every physical
/// output depends on the four coupling phases only through this number.
/// Plaquette topology only.
[[nodiscard]] inline double loop_phase(const NetworkModel& model) {
    const PlaquetteView v = plaquette_view(model);
    return wrap_angle(v.phase[0][1] + v.phase[1][0] - v.phase[0][0] -
                      v.phase[1][1]);
}

/// Returns a copy with all coupling phases concentrated on the a2-b1 link:
/// phi21 = loop_phase, the other three set to zero.  Physical outputs that
/// depend only on the loop phase are unchanged.
[[nodiscard]] inline NetworkModel gauge_fix(const NetworkModel& model) {
    const double phi_loop = loop_phase(model);
    const PlaquetteView v = plaquette_view(model);
    NetworkModel fixed = model;
    fixed.couplings[v.link[0][0]].phase = 0.0;
    fixed.couplings[v.link[0][1]].phase = 0.0;
    fixed.couplings[v.link[1][1]].phase = 0.0;
    fixed.couplings[v.link[1][0]].phase = phi_loop;
    return fixed;
}

/// Bose-Einstein occupation of a bath at absolute mode frequency
/// `omega` [rad/s] and temperature [K].  T = 0 gives exactly 0.
[[nodiscard]] inline double thermal_occupation(double omega, double temperature) {
    if (!(omega > 0.0)) {
        throw std::domain_error("thermal_occupation: frequency must be > 0");
    }
    if (temperature < 0.0) {
        throw std::domain_error("thermal_occupation: temperature must be >= 0");
    }
    if (temperature == 0.0) return 0.0;
    const double x = hbar * omega / (k_boltzmann * temperature);
    return 1.0 / std::expm1(x);
}

}  // namespace omflow
