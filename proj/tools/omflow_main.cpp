// =============================================================================
// omflow command-line tool
// =============================================================================
// Subcommands:
//   simulate          steady-state occupations and noise flows (both solver
//                     routes, cross-checked), optional spectra export
//   sweep             1- or 2-axis parameter sweeps to CSV / records
//   check-conditions  analytic interference / matching / blocking conditions
//   reproduce-figure  bundled reference sweeps with summary metrics
//   validate          schema validation plus physical-regime warnings
//
// Exit codes: 0 success; 1 configuration, selector, or usage errors;
// 2 numerical failures (instability, non-convergence, route disagreement).
// =============================================================================

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "omflow/omflow.hpp"

namespace {

constexpr double route_disagreement_tolerance = 1e-6;

struct Override {
    std::string selector;
    double value = 0.0;
};

omflow::NetworkModel load_model(const std::string& config_path,
                                const std::vector<std::string>& overrides) {
    omflow::LoadedConfig config = omflow::load_config_file(config_path);
    for (const auto& text : overrides) {
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw omflow::selector_error("override '" + text +
                                         "' must look like selector=value");
        }
        const std::string selector = text.substr(0, eq);
        const std::string value_text = text.substr(eq + 1);
        char* end = nullptr;
        const double value = std::strtod(value_text.c_str(), &end);
        if (end == value_text.c_str() || *end != '\0') {
            throw omflow::selector_error("override '" + text +
                                         "' has a non-numeric value");
        }
        omflow::apply_selector(config.model, selector, value);
    }
    config.model.validate();
    return config.model;
}

void print_warnings(const omflow::NetworkModel& model) {
    for (const auto& warning : omflow::regime_warnings(model)) {
        std::cerr << "warning: " << warning << '\n';
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os) {
        throw omflow::model_error("cannot open output file '" + path + "'");
    }
    return os;
}

/// Writes through `fn` to the file at `path`, or to stdout if empty.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty()) {
        fn(std::cout);
    } else {
        auto os = open_output(path);
        fn(os);
    }
}

omflow::SweepAxis parse_axis(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
        throw omflow::selector_error(
            "axis '" + text +
            "' must look like selector=start:stop:count or selector=v1,v2,...");
    }
    omflow::SweepAxis axis;
    axis.selector = text.substr(0, eq);
    const std::string body = text.substr(eq + 1);
    const auto parse_number = [&](const std::string& token) {
        char* end = nullptr;
        const double value = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0') {
            throw omflow::selector_error("axis '" + text +
                                         "': cannot parse number '" + token +
                                         "'");
        }
        return value;
    };
    if (body.find(':') != std::string::npos) {
        std::istringstream is(body);
        std::string start_text, stop_text, count_text;
        if (!std::getline(is, start_text, ':') ||
            !std::getline(is, stop_text, ':') ||
            !std::getline(is, count_text)) {
            throw omflow::selector_error("axis '" + text +
                                         "' must be selector=start:stop:count");
        }
        const double count_value = parse_number(count_text);
        const int count = static_cast<int>(count_value);
        if (count < 1 || count != count_value) {
            throw omflow::selector_error("axis '" + text +
                                         "': count must be a positive integer");
        }
        return omflow::linear_axis(axis.selector, parse_number(start_text),
                                   parse_number(stop_text), count);
    }
    std::istringstream is(body);
    std::string token;
    while (std::getline(is, token, ',')) {
        axis.values.push_back(parse_number(token));
    }
    return axis;
}

/// Maps a column-name token (as produced in sweep tables) back onto an
/// output request, resolved against the base system.
omflow::OutputRequest parse_quantity(const omflow::DynamicalSystem& sys,
                                     const std::string& token) {
    using omflow::OutputKind;
    omflow::OutputRequest request;
    const auto mech = sys.mechanical_rows();
    const auto find_mech = [&](const std::string& label) {
        for (std::size_t k = 0; k < mech.size(); ++k) {
            if (sys.labels[mech[k]] == label) return static_cast<int>(k);
        }
        throw omflow::selector_error("quantity '" + token +
                                     "' names an unknown mechanical mode '" +
                                     label + "'");
    };
    const auto find_channel = [&](const std::string& name) {
        for (std::size_t l = 0; l < sys.dimension(); ++l) {
            if (omflow::channel_name(sys, l) == name) {
                return static_cast<int>(l);
            }
        }
        throw omflow::selector_error("quantity '" + token +
                                     "' names an unknown input channel '" +
                                     name + "'");
    };
    const auto strip = [&](const char* prefix) -> std::optional<std::string> {
        const std::string p(prefix);
        if (token.rfind(p, 0) == 0) return token.substr(p.size());
        return std::nullopt;
    };

    if (token == "asymmetry") {
        request.kind = OutputKind::asymmetry;
        return request;
    }
    if (auto rest = strip("res_")) {
        for (const auto condition :
             {omflow::Condition::interference_exact,
              omflow::Condition::impedance_kappa,
              omflow::Condition::dark_mode_breaking,
              omflow::Condition::nonreciprocal_block_12,
              omflow::Condition::nonreciprocal_block_21}) {
            if (*rest == omflow::condition_name(condition)) {
                request.kind = OutputKind::condition_residual;
                request.condition = condition;
                return request;
            }
        }
        throw omflow::selector_error("quantity '" + token +
                                     "' names an unknown condition");
    }
    for (const auto& [prefix, kind] :
         {std::pair<const char*, OutputKind>{"nbar_", OutputKind::occupation},
          {"dn_", OutputKind::net_flow},
          {"Nout_", OutputKind::outflow},
          {"Nin_", OutputKind::inflow}}) {
        if (auto rest = strip(prefix)) {
            request.kind = kind;
            request.mech = find_mech(*rest);
            return request;
        }
    }
    for (const auto& [prefix, kind] : {std::pair<const char*, OutputKind>{
                                           "Tint_", OutputKind::integrated_T},
                                       {"T_", OutputKind::transmission}}) {
        if (auto rest = strip(prefix)) {
            const auto sep = rest->find("_to_");
            if (sep == std::string::npos) {
                throw omflow::selector_error(
                    "quantity '" + token +
                    "' must look like " + prefix + "CHANNEL_to_MODE");
            }
            request.kind = kind;
            request.channel = find_channel(rest->substr(0, sep));
            request.mech = find_mech(rest->substr(sep + 4));
            return request;
        }
    }
    throw omflow::selector_error("unrecognized quantity '" + token + "'");
}

std::vector<omflow::OutputRequest> default_quantities(
    const omflow::DynamicalSystem& sys) {
    using omflow::OutputKind;
    std::vector<omflow::OutputRequest> outputs;
    const auto mech = sys.mechanical_rows();
    for (int k = 0; k < static_cast<int>(mech.size()); ++k) {
        outputs.push_back({OutputKind::occupation, k});
        outputs.push_back({OutputKind::net_flow, k});
    }
    for (int k = 0; k < static_cast<int>(mech.size()); ++k) {
        for (std::size_t l = 0; l < mech.size(); ++l) {
            if (static_cast<int>(l) == k) continue;
            omflow::OutputRequest request;
            request.kind = OutputKind::integrated_T;
            request.channel = static_cast<int>(mech[l]);
            request.mech = k;
            outputs.push_back(request);
        }
    }
    return outputs;
}

void print_condition_table(std::ostream& os,
                           const std::vector<omflow::ConditionReport>& reports) {
    os << "condition,residual,satisfied,required_phase\n";
    for (const auto& report : reports) {
        os << omflow::condition_name(report.condition) << ','
           << omflow::format_number(report.residual) << ','
           << (report.satisfied ? "true" : "false") << ',';
        if (report.has_required_phase) {
            os << omflow::format_number(report.required_phase);
        }
        os << '\n';
        if (!report.warning.empty()) {
            std::cerr << "warning: " << report.warning << '\n';
        }
    }
}

int run(int argc, char** argv) {
    CLI::App app{
        "thermal noise flow in linearized optomechanical networks"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_path;
    std::string format = "csv";
    std::string spectra_path;
    std::string integrated_path;
    std::vector<std::string> axis_texts;
    std::vector<std::string> quantity_tokens;
    std::string figure_token;
    bool list_figures = false;
    double condition_omega = 0.0;

    const auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config,-c", config_path, "model configuration file")
            ->required();
        cmd->add_option("--set,-s", overrides,
                        "parameter override selector=value (repeatable)");
    };

    CLI::App* simulate = app.add_subcommand(
        "simulate", "steady-state occupations and noise flows");
    add_config(simulate);
    simulate->add_option("--output,-o", output_path,
                         "write the flow table here instead of stdout");
    simulate->add_option("--export-spectra", spectra_path,
                         "also write transmission spectra to this CSV file");
    simulate->add_option("--export-integrated", integrated_path,
                         "also write the integrated transmission matrix here");

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep");
    add_config(sweep);
    sweep->add_option("--axis,-a", axis_texts,
                      "sweep axis selector=start:stop:count or "
                      "selector=v1,v2,... (one or two)")
        ->required();
    sweep->add_option("--quantity,-q", quantity_tokens,
                      "output column (nbar_X, dn_X, Nout_X, Nin_X, "
                      "Tint_CH_to_X, T_CH_to_X, res_NAME, asymmetry); "
                      "default: occupations, net flows, bath cross-talk");
    sweep->add_option("--output,-o", output_path, "output file (default stdout)");
    sweep->add_option("--format", format, "csv or records")
        ->check(CLI::IsMember({"csv", "records"}));

    CLI::App* conditions = app.add_subcommand(
        "check-conditions", "analytic interference and matching conditions");
    add_config(conditions);
    conditions->add_option("--omega", condition_omega,
                           "evaluation frequency (default 0)");

    CLI::App* reproduce_cmd = app.add_subcommand(
        "reproduce-figure", "run a bundled reference sweep");
    reproduce_cmd->add_option("figure", figure_token, "preset name");
    reproduce_cmd->add_flag("--list", list_figures, "list available presets");
    reproduce_cmd->add_option("--output,-o", output_path,
                              "output file (default stdout)");
    reproduce_cmd->add_option("--format", format, "csv or records")
        ->check(CLI::IsMember({"csv", "records"}));

    CLI::App* validate = app.add_subcommand(
        "validate", "validate a configuration and report regime warnings");
    add_config(validate);

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) {
        const omflow::NetworkModel model = load_model(config_path, overrides);
        print_warnings(model);
        const omflow::DynamicalSystem sys = omflow::build_dynamics(model);
        const omflow::FlowReport exact = omflow::occupations_lyapunov(sys);
        const omflow::FlowReport integrated =
            omflow::occupations_spectral(sys, omflow::make_grid(sys));
        const double disagreement = omflow::flow_disagreement(exact, integrated);
        if (disagreement > route_disagreement_tolerance) {
            throw omflow::numerical_error(
                "steady-state routes disagree by " +
                std::to_string(disagreement) +
                " (relative); this indicates a solver problem, not a "
                "configuration problem");
        }
        with_output(output_path, [&](std::ostream& os) {
            omflow::write_flow_header(os);
            omflow::write_flow_rows(os, exact);
            omflow::write_flow_rows(os, integrated);
        });
        if (!integrated_path.empty()) {
            auto os = open_output(integrated_path);
            omflow::write_integrated_T_csv(os, exact);
        }
        if (!spectra_path.empty()) {
            auto os = open_output(spectra_path);
            const omflow::FrequencyGrid grid = omflow::make_grid(sys);
            omflow::export_spectra(os, sys, grid);
        }
        return 0;
    }

    if (sweep->parsed()) {
        omflow::SweepSpec spec;
        spec.base = load_model(config_path, overrides);
        print_warnings(spec.base);
        for (const auto& text : axis_texts) {
            spec.axes.push_back(parse_axis(text));
        }
        const omflow::DynamicalSystem sys = omflow::build_dynamics(spec.base);
        if (quantity_tokens.empty()) {
            spec.outputs = default_quantities(sys);
        } else {
            for (const auto& token : quantity_tokens) {
                spec.outputs.push_back(parse_quantity(sys, token));
            }
        }
        const omflow::SweepTable table = omflow::run_sweep(spec);
        with_output(output_path, [&](std::ostream& os) {
            if (format == "records") {
                omflow::write_sweep_records(os, table);
            } else {
                omflow::write_sweep_csv(os, table);
            }
        });
        return 0;
    }

    if (conditions->parsed()) {
        const omflow::NetworkModel model = load_model(config_path, overrides);
        print_warnings(model);
        std::vector<omflow::ConditionReport> reports;
        if (model.convention == omflow::Convention::H1) {
            reports.push_back(
                omflow::interference_residual(model, condition_omega));
            reports.push_back(omflow::impedance_kappa_check(model));
            reports.push_back(omflow::dark_mode_line_check(model));
        } else {
            const auto pair =
                omflow::nonreciprocity_residuals(model, condition_omega);
            reports.push_back(pair.first);
            reports.push_back(pair.second);
        }
        print_condition_table(std::cout, reports);
        return 0;
    }

    if (reproduce_cmd->parsed()) {
        if (list_figures) {
            for (const auto id : omflow::all_figures()) {
                const char* name = omflow::figure_name(id);
                std::cout << name << '\n';
            }
            return 0;
        }
        const auto id = omflow::figure_from_name(figure_token);
        if (!id) {
            throw omflow::selector_error(
                "unknown figure preset '" + figure_token +
                "' (use --list to see the available names)");
        }
        const omflow::ReproduceResult result = omflow::reproduce(*id);
        with_output(output_path, [&](std::ostream& os) {
            if (format == "records") {
                omflow::write_sweep_records(os, result.table, result.metrics);
            } else {
                os << "# " << result.name << ": " << result.description << '\n';
                omflow::write_sweep_csv(os, result.table, result.metrics);
            }
        });
        return 0;
    }

    // validate
    const omflow::NetworkModel model = load_model(config_path, overrides);
    const auto warnings = omflow::regime_warnings(model);
    std::cout << "configuration valid: " << model.modes.size() << " modes, "
              << model.couplings.size() << " couplings\n";
    for (const auto& warning : warnings) {
        std::cout << "warning: " << warning << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const omflow::numerical_error& error) {
        std::cerr << "numerical error: " << error.what() << '\n';
        return 2;
    } catch (const nlohmann::json::parse_error& error) {
        std::cerr << "parse error: " << error.what() << '\n';
        return 1;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    }
}
