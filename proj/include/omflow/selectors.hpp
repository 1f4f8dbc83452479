#pragma once

// =============================================================================
// omflow - parameter selectors
// =============================================================================
// One string grammar addresses every adjustable number in a NetworkModel, so
// sweeps and command-line overrides share a single code path:
//
//   modes[LABEL].FIELD            FIELD: detuning | damping |
//                                        bath_occupation | frequency
//   couplings[CAVITY,MECH].FIELD  FIELD: strength | phase
//   couplings[*].FIELD            every declared coupling at once
//   loop_phase                    rotates one link phase so the plaquette
//                                 loop phase equals the value
//   ratio:X/Y                     sets X to value * Y, leaving Y untouched;
//                                 X, Y from {G11, G12, G21, G22,
//                                 kappa1, kappa2, gamma1, gamma2}
//
// `omega` is reserved for sweep axes (the evaluation frequency is not a model
// parameter); applying it here is an error.
// =============================================================================

#include <string>

#include "omflow/errors.hpp"
#include "omflow/model.hpp"

namespace omflow {

/// True for the reserved axis selector `omega`, which sweeps the evaluation
/// frequency instead of a model parameter.
[[nodiscard]] inline bool selector_is_frequency_axis(const std::string& path) {
    return path == "omega";
}

namespace detail {

struct RatioTerm {
    bool is_coupling = false;
    int j = 0;  ///< coupling: cavity ordinal; mode: 1-based ordinal
    int k = 0;  ///< coupling: resonator ordinal
    bool optical = false;
};

[[nodiscard]] inline RatioTerm parse_ratio_term(const std::string& token,
                                                const std::string& path) {
    RatioTerm term;
    if (token.size() == 3 && token[0] == 'G' &&
        (token[1] == '1' || token[1] == '2') &&
        (token[2] == '1' || token[2] == '2')) {
        term.is_coupling = true;
        term.j = token[1] - '1';
        term.k = token[2] - '1';
        return term;
    }
    if ((token == "kappa1" || token == "kappa2")) {
        term.optical = true;
        term.j = token[5] - '1';
        return term;
    }
    if ((token == "gamma1" || token == "gamma2")) {
        term.optical = false;
        term.j = token[5] - '1';
        return term;
    }
    throw selector_error("unknown ratio term '" + token + "' in selector '" +
                         path + "'");
}

[[nodiscard]] inline double& ratio_term_ref(NetworkModel& model,
                                            const PlaquetteView& view,
                                            const RatioTerm& term) {
    if (term.is_coupling) {
        return model.couplings[view.link[term.j][term.k]].strength;
    }
    const std::size_t idx =
        term.optical ? view.optical[term.j] : view.mechanical[term.j];
    return model.modes[idx].damping;
}

inline void set_mode_field(Mode& mode, const std::string& field, double value,
                           const std::string& path) {
    if (field == "detuning") {
        mode.detuning = value;
    } else if (field == "damping") {
        mode.damping = value;
    } else if (field == "bath_occupation") {
        mode.bath_occupation = value;
    } else if (field == "frequency") {
        mode.frequency = value;
    } else {
        throw selector_error("unknown mode field '" + field +
                             "' in selector '" + path + "'");
    }
}

inline void set_coupling_field(Coupling& coupling, const std::string& field,
                               double value, const std::string& path) {
    if (field == "strength") {
        coupling.strength = value;
    } else if (field == "phase") {
        coupling.phase = value;
    } else {
        throw selector_error("unknown coupling field '" + field +
                             "' in selector '" + path + "'");
    }
}

}  // namespace detail

/// Applies `path = value` to the model in place.  Throws selector_error for
/// anything the grammar cannot resolve; performs no validation beyond that
/// (callers re-validate the resulting model).
inline void apply_selector(NetworkModel& model, const std::string& path,
                           double value) {
    if (selector_is_frequency_axis(path)) {
        throw selector_error(
            "selector 'omega' is only meaningful as a sweep axis");
    }

    // loop_phase and ratio:X/Y address plaquette positions; a non-plaquette
    // layout makes them unresolvable, which is a selector error here.
    const auto view_for = [&](const char* what) {
        try {
            return plaquette_view(model);
        } catch (const model_error& error) {
            throw selector_error(std::string("selector '") + what +
                                 "': " + error.what());
        }
    };

    if (path == "loop_phase") {
        const PlaquetteView v = view_for("loop_phase");
        const double current = loop_phase(model);
        auto& phase = model.couplings[v.link[1][0]].phase;
        phase = wrap_angle(phase + value - current);
        return;
    }

    if (path.rfind("ratio:", 0) == 0) {
        const std::string body = path.substr(6);
        const auto slash = body.find('/');
        if (slash == std::string::npos) {
            throw selector_error("ratio selector '" + path +
                                 "' must look like ratio:X/Y");
        }
        const PlaquetteView v = view_for(path.c_str());
        const auto num =
            detail::parse_ratio_term(body.substr(0, slash), path);
        const auto den = detail::parse_ratio_term(body.substr(slash + 1), path);
        const double denominator = detail::ratio_term_ref(model, v, den);
        detail::ratio_term_ref(model, v, num) = value * denominator;
        return;
    }

    if (path.rfind("modes[", 0) == 0) {
        const auto close = path.find(']');
        if (close == std::string::npos || close + 1 >= path.size() ||
            path[close + 1] != '.') {
            throw selector_error("malformed selector '" + path + "'");
        }
        const std::string label = path.substr(6, close - 6);
        const std::string field = path.substr(close + 2);
        for (auto& mode : model.modes) {
            if (mode.label == label) {
                detail::set_mode_field(mode, field, value, path);
                return;
            }
        }
        throw selector_error("selector '" + path +
                             "' names an unknown mode '" + label + "'");
    }

    if (path.rfind("couplings[", 0) == 0) {
        const auto close = path.find(']');
        if (close == std::string::npos || close + 1 >= path.size() ||
            path[close + 1] != '.') {
            throw selector_error("malformed selector '" + path + "'");
        }
        const std::string body = path.substr(10, close - 10);
        const std::string field = path.substr(close + 2);
        if (body == "*") {
            if (model.couplings.empty()) {
                throw selector_error("selector '" + path +
                                     "': the model declares no couplings");
            }
            for (auto& coupling : model.couplings) {
                detail::set_coupling_field(coupling, field, value, path);
            }
            return;
        }
        const auto comma = body.find(',');
        if (comma == std::string::npos) {
            throw selector_error("selector '" + path +
                                 "' must name couplings[CAVITY,MECH]");
        }
        const std::string cavity = body.substr(0, comma);
        const std::string mech = body.substr(comma + 1);
        const auto idx = model.coupling_index(cavity, mech);
        if (!idx) {
            throw selector_error("selector '" + path +
                                 "' names an undeclared coupling '" + cavity +
                                 "," + mech + "'");
        }
        detail::set_coupling_field(model.couplings[*idx], field, value, path);
        return;
    }

    throw selector_error("unrecognized selector '" + path + "'");
}

}  // namespace omflow
