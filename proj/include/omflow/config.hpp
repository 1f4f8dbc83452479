#pragma once

// =============================================================================
// omflow - configuration ingestion and regime diagnostics
// =============================================================================
// JSON schema (all rates dimensionless, in units of the reference rate):
//
//   {
//     "reference_rate_hz": 1.0e6,          // optional; kappa_ref / 2pi
//     "convention": "H1",                  // "H1" (default) or "H2"
//     "modes": [
//       {"label": "a1", "kind": "optical", "damping": 1.0, "detuning": 0.0},
//       {"label": "b1", "kind": "mechanical", "damping": 1.0e-5,
//        "frequency": 6.7,                 // optional, for regime checks
//        "bath_occupation": 1000.0}        // or an object, see below
//     ],
//     "couplings": [
//       {"cavity": "a1", "mechanical": "b1", "strength": 0.1, "phase": 0.0}
//     ]
//   }
//
// `bath_occupation` may instead be {"frequency_hz": ..., "temperature_K": ...},
// converted through the Bose-Einstein law; that form also fills the mode's
// `frequency` field (in reference-rate units) so the resolved-sideband check
// can run.  Unknown keys are rejected to catch typos.
// =============================================================================

#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "omflow/constants.hpp"
#include "omflow/errors.hpp"
#include "omflow/model.hpp"

namespace omflow {

struct LoadedConfig {
    NetworkModel model;
    double reference_rate_hz = default_reference_rate_hz;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& object,
                                std::initializer_list<const char*> known,
                                const std::string& where) {
    for (const auto& item : object.items()) {
        bool found = false;
        for (const char* key : known) {
            if (item.key() == key) {
                found = true;
                break;
            }
        }
        if (!found) {
            throw model_error("config: unknown key '" + item.key() + "' in " +
                              where);
        }
    }
}

[[nodiscard]] inline double require_number(const nlohmann::json& object,
                                           const char* key,
                                           const std::string& where) {
    if (!object.contains(key) || !object[key].is_number()) {
        throw model_error("config: " + where + " requires a numeric '" + key +
                          "'");
    }
    return object[key].get<double>();
}

}  // namespace detail

/// Parses a configuration document.  JSON syntax errors propagate as
/// nlohmann::json::parse_error (with byte position); schema violations
/// throw model_error.
[[nodiscard]] inline LoadedConfig load_config(std::istream& is) {
    const nlohmann::json doc = nlohmann::json::parse(is);
    if (!doc.is_object()) {
        throw model_error("config: top level must be an object");
    }
    detail::reject_unknown_keys(
        doc, {"reference_rate_hz", "convention", "modes", "couplings"},
        "the top-level object");

    LoadedConfig config;
    if (doc.contains("reference_rate_hz")) {
        if (!doc["reference_rate_hz"].is_number()) {
            throw model_error("config: reference_rate_hz must be a number");
        }
        config.reference_rate_hz = doc["reference_rate_hz"].get<double>();
        if (!(config.reference_rate_hz > 0.0)) {
            throw model_error("config: reference_rate_hz must be positive");
        }
    }

    if (doc.contains("convention")) {
        const std::string token = doc["convention"].is_string()
                                      ? doc["convention"].get<std::string>()
                                      : std::string();
        if (token == "H1") {
            config.model.convention = Convention::H1;
        } else if (token == "H2") {
            config.model.convention = Convention::H2;
        } else {
            throw model_error("config: convention must be \"H1\" or \"H2\"");
        }
    }

    if (!doc.contains("modes") || !doc["modes"].is_array()) {
        throw model_error("config: missing 'modes' array");
    }
    for (const auto& entry : doc["modes"]) {
        if (!entry.is_object()) {
            throw model_error("config: each mode must be an object");
        }
        detail::reject_unknown_keys(entry,
                                    {"label", "kind", "detuning", "damping",
                                     "frequency", "bath_occupation"},
                                    "a mode entry");
        Mode mode;
        if (!entry.contains("label") || !entry["label"].is_string()) {
            throw model_error("config: every mode needs a string 'label'");
        }
        mode.label = entry["label"].get<std::string>();
        const std::string where = "mode '" + mode.label + "'";
        if (!entry.contains("kind") || !entry["kind"].is_string()) {
            throw model_error("config: " + where +
                              " needs 'kind' (\"optical\"|\"mechanical\")");
        }
        const std::string kind = entry["kind"].get<std::string>();
        if (kind == "optical") {
            mode.kind = ModeKind::optical;
        } else if (kind == "mechanical") {
            mode.kind = ModeKind::mechanical;
        } else {
            throw model_error("config: " + where + " has unknown kind '" +
                              kind + "'");
        }
        mode.damping = detail::require_number(entry, "damping", where);
        if (entry.contains("detuning")) {
            mode.detuning = detail::require_number(entry, "detuning", where);
        }
        if (entry.contains("frequency")) {
            mode.frequency = detail::require_number(entry, "frequency", where);
        }
        if (entry.contains("bath_occupation")) {
            const auto& bath = entry["bath_occupation"];
            if (bath.is_number()) {
                mode.bath_occupation = bath.get<double>();
            } else if (bath.is_object()) {
                detail::reject_unknown_keys(
                    bath, {"frequency_hz", "temperature_K"},
                    "the bath_occupation of " + where);
                const double frequency_hz =
                    detail::require_number(bath, "frequency_hz", where);
                const double temperature =
                    detail::require_number(bath, "temperature_K", where);
                mode.bath_occupation =
                    thermal_occupation(two_pi * frequency_hz, temperature);
                if (mode.frequency == 0.0) {
                    mode.frequency = frequency_hz / config.reference_rate_hz;
                }
            } else {
                throw model_error(
                    "config: bath_occupation of " + where +
                    " must be a number or {frequency_hz, temperature_K}");
            }
        }
        config.model.modes.push_back(mode);
    }

    if (doc.contains("couplings")) {
        if (!doc["couplings"].is_array()) {
            throw model_error("config: 'couplings' must be an array");
        }
        for (const auto& entry : doc["couplings"]) {
            if (!entry.is_object()) {
                throw model_error("config: each coupling must be an object");
            }
            detail::reject_unknown_keys(
                entry, {"cavity", "mechanical", "strength", "phase"},
                "a coupling entry");
            Coupling coupling;
            if (!entry.contains("cavity") || !entry["cavity"].is_string() ||
                !entry.contains("mechanical") ||
                !entry["mechanical"].is_string()) {
                throw model_error(
                    "config: couplings need string 'cavity' and 'mechanical' "
                    "labels");
            }
            coupling.cavity = entry["cavity"].get<std::string>();
            coupling.mechanical = entry["mechanical"].get<std::string>();
            const std::string where = "coupling '" + coupling.cavity + "," +
                                      coupling.mechanical + "'";
            coupling.strength = detail::require_number(entry, "strength", where);
            if (entry.contains("phase")) {
                coupling.phase = detail::require_number(entry, "phase", where);
            }
            config.model.couplings.push_back(coupling);
        }
    }
    return config;
}

[[nodiscard]] inline LoadedConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw model_error("config: cannot open '" + path + "'");
    }
    return load_config(is);
}

/// Non-fatal regime diagnostics for a validated model.  The underlying
/// rotating-frame treatment assumes every retained mechanical sideband is
/// resolved and every dropped one is far detuned; these checks flag marginal
/// parameters without rejecting them.
[[nodiscard]] inline std::vector<std::string> regime_warnings(
    const NetworkModel& model) {
    std::vector<std::string> warnings;
    double fastest = 0.0;  // max of kappa/2 and every coupling strength
    double max_G = 0.0;
    for (const auto& mode : model.modes) {
        if (mode.kind == ModeKind::optical) {
            fastest = std::max(fastest, mode.damping / 2.0);
        }
    }
    for (const auto& coupling : model.couplings) {
        fastest = std::max(fastest, coupling.strength);
        max_G = std::max(max_G, coupling.strength);
    }

    std::vector<double> mech_frequencies;
    for (const auto& mode : model.modes) {
        if (mode.kind != ModeKind::mechanical) continue;
        if (mode.frequency <= 0.0) continue;  // not supplied; nothing to check
        mech_frequencies.push_back(mode.frequency);
        if (mode.frequency <= 10.0 * fastest) {
            warnings.push_back(
                "mode '" + mode.label + "': frequency " +
                std::to_string(mode.frequency) +
                " is not large against the cavity decay and couplings; the "
                "resolved-sideband picture is marginal");
        }
    }
    if (!mech_frequencies.empty() && max_G > 0.0) {
        double separation = mech_frequencies.front();
        for (std::size_t i = 0; i < mech_frequencies.size(); ++i) {
            separation = std::min(separation, mech_frequencies[i]);
            for (std::size_t j = i + 1; j < mech_frequencies.size(); ++j) {
                separation = std::min(separation,
                                      std::abs(mech_frequencies[i] -
                                               mech_frequencies[j]));
            }
        }
        if (separation <= 10.0 * max_G) {
            warnings.push_back(
                "mechanical frequencies (or their splittings) are not large "
                "against the couplings; fast oscillating coupling terms were "
                "dropped but would matter here");
        }
    }
    return warnings;
}

}  // namespace omflow
