#pragma once

// =============================================================================
// omflow - parameter-sweep engine
// =============================================================================
// Evaluates requested outputs of a model over a 1- or 2-axis parameter grid.
// Axis values are applied through the selector grammar (selectors.hpp); the
// reserved axis `omega` sweeps the evaluation frequency of transmission
// outputs instead of a model parameter.
//
// Rows are emitted in axis-major order (first axis outermost) and evaluated
// strictly serially, so repeated runs produce identical tables byte for byte.
// A cell whose model fails validation, stability, or the steady-state solve
// is recorded with NaN outputs and status `failed`; neighbouring cells are
// unaffected.  Unresolvable selectors abort the sweep instead.
//
// Every stored number is passed through the CSV formatter's round-trip first,
// so metrics computed from a table equal metrics recomputed from its CSV.
// =============================================================================

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "omflow/conditions.hpp"
#include "omflow/csv.hpp"
#include "omflow/dynamics.hpp"
#include "omflow/errors.hpp"
#include "omflow/selectors.hpp"
#include "omflow/spectral.hpp"
#include "omflow/steady.hpp"

namespace omflow {

struct SweepAxis {
    std::string selector;
    std::vector<double> values;
};

/// Evenly spaced axis helper (inclusive endpoints).
[[nodiscard]] inline SweepAxis linear_axis(std::string selector, double start,
                                           double stop, int count) {
    if (count < 1) throw selector_error("axis needs at least one point");
    SweepAxis axis{std::move(selector), {}};
    axis.values.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        axis.values.push_back(start);
        return axis;
    }
    for (int i = 0; i < count; ++i) {
        axis.values.push_back(start + (stop - start) * i / (count - 1));
    }
    return axis;
}

enum class OutputKind {
    occupation,    ///< nbar of a mechanical mode
    net_flow,      ///< occupation minus bath occupation
    outflow,       ///< noise flow out to the network
    inflow,        ///< noise flow in from other thermal baths
    integrated_T,  ///< frequency-integrated transmission, channel -> mech
    transmission,  ///< T(omega), channel -> mech, at the cell frequency
    asymmetry,     ///< (Tint_R2->b1 - Tint_R1->b2) / their sum
    condition_residual,
};

struct OutputRequest {
    OutputKind kind = OutputKind::occupation;
    int mech = 0;     ///< mechanical ordinal (0-based)
    int channel = 0;  ///< input-channel row for (integrated_)transmission
    Condition condition = Condition::interference_exact;
    double omega = 0.0;  ///< transmission frequency if no omega axis
};

struct SweepSpec {
    NetworkModel base;
    std::vector<SweepAxis> axes;
    std::vector<OutputRequest> outputs;
};

struct SweepTable {
    std::vector<std::string> columns;       ///< excludes trailing status
    std::vector<std::vector<double>> rows;  ///< one vector per grid cell
    std::vector<bool> ok;                   ///< row status
};

namespace detail {

[[nodiscard]] inline std::string output_column_name(
    const DynamicalSystem& sys, const OutputRequest& request) {
    const auto mech = sys.mechanical_rows();
    const auto mech_label = [&](int k) {
        if (k < 0 || k >= static_cast<int>(mech.size())) {
            throw selector_error("output refers to a mechanical mode ordinal " +
                                 std::to_string(k) + " that does not exist");
        }
        return sys.labels[mech[static_cast<std::size_t>(k)]];
    };
    const auto channel = [&](int l) {
        if (l < 0 || l >= static_cast<int>(sys.dimension())) {
            throw selector_error("output refers to input channel " +
                                 std::to_string(l) + " that does not exist");
        }
        return channel_name(sys, static_cast<std::size_t>(l));
    };
    switch (request.kind) {
        case OutputKind::occupation: return "nbar_" + mech_label(request.mech);
        case OutputKind::net_flow: return "dn_" + mech_label(request.mech);
        case OutputKind::outflow: return "Nout_" + mech_label(request.mech);
        case OutputKind::inflow: return "Nin_" + mech_label(request.mech);
        case OutputKind::integrated_T:
            return "Tint_" + channel(request.channel) + "_to_" +
                   mech_label(request.mech);
        case OutputKind::transmission:
            return "T_" + channel(request.channel) + "_to_" +
                   mech_label(request.mech);
        case OutputKind::asymmetry: return "asymmetry";
        case OutputKind::condition_residual:
            return std::string("res_") + condition_name(request.condition);
    }
    return "?";
}

[[nodiscard]] inline bool needs_flow(const SweepSpec& spec) {
    for (const auto& request : spec.outputs) {
        switch (request.kind) {
            case OutputKind::occupation:
            case OutputKind::net_flow:
            case OutputKind::outflow:
            case OutputKind::inflow:
            case OutputKind::integrated_T:
            case OutputKind::asymmetry: return true;
            default: break;
        }
    }
    return false;
}

[[nodiscard]] inline double evaluate_condition(const NetworkModel& model,
                                               Condition condition,
                                               double omega) {
    switch (condition) {
        case Condition::interference_exact:
            return interference_residual(model, omega).residual;
        case Condition::impedance_kappa:
            return impedance_kappa_check(model).residual;
        case Condition::dark_mode_breaking:
            return dark_mode_line_check(model).residual;
        case Condition::nonreciprocal_block_21:
            return nonreciprocity_residuals(model, omega).first.residual;
        case Condition::nonreciprocal_block_12:
            return nonreciprocity_residuals(model, omega).second.residual;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

/// Runs the sweep.  Throws selector_error for malformed specs or selectors;
/// per-cell validation/stability/solver failures become failed rows.
[[nodiscard]] inline SweepTable run_sweep(const SweepSpec& spec) {
    if (spec.axes.empty() || spec.axes.size() > 2) {
        throw selector_error("a sweep requires one or two axes");
    }
    if (spec.outputs.empty()) {
        throw selector_error("a sweep requires at least one output quantity");
    }
    int omega_axis = -1;
    for (std::size_t i = 0; i < spec.axes.size(); ++i) {
        if (spec.axes[i].values.empty()) {
            throw selector_error("sweep axis '" + spec.axes[i].selector +
                                 "' has no values");
        }
        if (selector_is_frequency_axis(spec.axes[i].selector)) {
            if (omega_axis >= 0) {
                throw selector_error("only one omega axis is allowed");
            }
            omega_axis = static_cast<int>(i);
        } else {
            // Resolve the selector up front so grammar errors abort cleanly
            // before any cell is evaluated.
            NetworkModel probe = spec.base;
            apply_selector(probe, spec.axes[i].selector,
                           spec.axes[i].values.front());
        }
    }

    const DynamicalSystem base_sys = build_dynamics(spec.base);
    SweepTable table;
    for (const auto& axis : spec.axes) table.columns.push_back(axis.selector);
    for (const auto& request : spec.outputs) {
        table.columns.push_back(detail::output_column_name(base_sys, request));
    }

    const bool needs_flow = detail::needs_flow(spec);
    const std::size_t n_outer = spec.axes.front().values.size();
    const std::size_t n_inner =
        spec.axes.size() == 2 ? spec.axes[1].values.size() : 1;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t outer = 0; outer < n_outer; ++outer) {
        for (std::size_t inner = 0; inner < n_inner; ++inner) {
            std::vector<double> row;
            row.reserve(table.columns.size());
            double omega = 0.0;
            bool omega_fixed = false;
            NetworkModel model = spec.base;
            const std::size_t cell[2] = {outer, inner};
            for (std::size_t i = 0; i < spec.axes.size(); ++i) {
                const double value = spec.axes[i].values[cell[i]];
                row.push_back(csv_roundtrip(value));
                if (static_cast<int>(i) == omega_axis) {
                    omega = value;
                    omega_fixed = true;
                } else {
                    apply_selector(model, spec.axes[i].selector, value);
                }
            }

            bool cell_ok = true;
            std::vector<double> outputs(spec.outputs.size(), nan);
            try {
                model.validate();
                const DynamicalSystem sys = build_dynamics(model);
                require_stable(sys);
                std::optional<FlowReport> flow;
                if (needs_flow) flow = occupations_lyapunov(sys);

                const auto mech_row = [&](int k) {
                    return static_cast<Eigen::Index>(
                        sys.mechanical_rows()[static_cast<std::size_t>(k)]);
                };
                for (std::size_t q = 0; q < spec.outputs.size(); ++q) {
                    const auto& request = spec.outputs[q];
                    const double cell_omega =
                        omega_fixed ? omega : request.omega;
                    double value = nan;
                    switch (request.kind) {
                        case OutputKind::occupation:
                            value = flow->occupations(request.mech);
                            break;
                        case OutputKind::net_flow:
                            value = flow->net_flow(request.mech);
                            break;
                        case OutputKind::outflow:
                            value = flow->outflow(request.mech);
                            break;
                        case OutputKind::inflow:
                            value = flow->inflow(request.mech);
                            break;
                        case OutputKind::integrated_T:
                            value = flow->integrated_T(request.channel,
                                                       request.mech);
                            break;
                        case OutputKind::transmission:
                            value = transmission(sys, cell_omega)(
                                mech_row(request.mech), request.channel);
                            break;
                        case OutputKind::asymmetry: {
                            const double t21 =
                                flow->integrated_T(mech_row(1), 0);
                            const double t12 =
                                flow->integrated_T(mech_row(0), 1);
                            const double sum = t21 + t12;
                            value = sum > 0.0 ? (t21 - t12) / sum : 0.0;
                            break;
                        }
                        case OutputKind::condition_residual:
                            value = detail::evaluate_condition(
                                model, request.condition, cell_omega);
                            break;
                    }
                    outputs[q] = value;
                }
            } catch (const model_error&) {
                cell_ok = false;
            } catch (const numerical_error&) {
                cell_ok = false;
            } catch (const std::domain_error&) {
                cell_ok = false;
            }
            if (!cell_ok) {
                std::fill(outputs.begin(), outputs.end(), nan);
            }
            for (const double value : outputs) {
                row.push_back(csv_roundtrip(value));
            }
            table.rows.push_back(std::move(row));
            table.ok.push_back(cell_ok);
        }
    }
    return table;
}

struct Metric {
    std::string name;
    double value = 0.0;
};

/// CSV body: header, axis-major rows with a trailing status column, then the
/// summary metrics as a commented footer block.
inline void write_sweep_csv(std::ostream& os, const SweepTable& table,
                            const std::vector<Metric>& metrics = {}) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) os << ',';
        os << csv_escape(table.columns[c]);
    }
    os << ",status\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (const double value : table.rows[r]) {
            os << format_number(value) << ',';
        }
        os << (table.ok[r] ? "ok" : "failed") << '\n';
    }
    for (const auto& metric : metrics) {
        os << "# metric," << csv_escape(metric.name) << ','
           << format_number(metric.value) << '\n';
    }
}

/// Line-delimited structured records; one object per row, then one per metric.
inline void write_sweep_records(std::ostream& os, const SweepTable& table,
                                const std::vector<Metric>& metrics = {}) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        os << '{';
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            os << '"' << table.columns[c] << "\":";
            const double v = table.rows[r][c];
            if (std::isfinite(v)) {
                os << format_number(v);
            } else {
                os << "null";
            }
            os << ',';
        }
        os << "\"status\":\"" << (table.ok[r] ? "ok" : "failed") << "\"}\n";
    }
    for (const auto& metric : metrics) {
        os << "{\"metric\":\"" << metric.name
           << "\",\"value\":" << format_number(metric.value) << "}\n";
    }
}

/// Reads back what write_sweep_csv produced (used for round-trip checks).
inline SweepTable read_sweep_csv(std::istream& is,
                                 std::vector<Metric>* metrics = nullptr) {
    SweepTable table;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("# metric,", 0) == 0) {
            if (metrics) {
                const auto cells = csv_split(line);
                if (cells.size() == 3) {
                    metrics->push_back(
                        {cells[1], std::strtod(cells[2].c_str(), nullptr)});
                }
            }
            continue;
        }
        auto cells = csv_split(line);
        if (header) {
            header = false;
            if (!cells.empty()) cells.pop_back();  // status
            table.columns = cells;
            continue;
        }
        if (cells.empty()) continue;
        table.ok.push_back(cells.back() == "ok");
        cells.pop_back();
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) {
            row.push_back(std::strtod(cell.c_str(), nullptr));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace omflow
