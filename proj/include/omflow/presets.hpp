#pragma once

// =============================================================================
// omflow - bundled reproduction presets
// =============================================================================
// Ready-made sweeps over the reference four-mode network (two cavities at
// kappa = 1, two resonators at gamma = 1e-5, couplings G/kappa = 0.1 unless a
// preset says otherwise; rates in units of the cavity linewidth).  Each preset
// fixes the grid, the output columns, and a handful of scalar summary metrics
// (peak values, minima, crossing points) appended to the table.
//
// Presets with a leading block column (G, mbar_1, kappa_ratio, loop_phase)
// repeat one sweep for several values of that parameter and stack the tables.
// =============================================================================

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "omflow/constants.hpp"
#include "omflow/errors.hpp"
#include "omflow/model.hpp"
#include "omflow/steady.hpp"
#include "omflow/sweep.hpp"

namespace omflow {

enum class FigureId { fig1b, fig1c, fig2, fig3, fig4, fig5, fig6, fig7, fig8 };

[[nodiscard]] inline const char* figure_name(FigureId id) {
    switch (id) {
        case FigureId::fig1b: return "fig1b";
        case FigureId::fig1c: return "fig1c";
        case FigureId::fig2: return "fig2";
        case FigureId::fig3: return "fig3";
        case FigureId::fig4: return "fig4";
        case FigureId::fig5: return "fig5";
        case FigureId::fig6: return "fig6";
        case FigureId::fig7: return "fig7";
        case FigureId::fig8: return "fig8";
    }
    return "?";
}

[[nodiscard]] inline std::vector<FigureId> all_figures() {
    return {FigureId::fig1b, FigureId::fig1c, FigureId::fig2,
            FigureId::fig3,  FigureId::fig4,  FigureId::fig5,
            FigureId::fig6,  FigureId::fig7,  FigureId::fig8};
}

[[nodiscard]] inline std::optional<FigureId> figure_from_name(
    const std::string& name) {
    for (const FigureId id : all_figures()) {
        if (name == figure_name(id)) return id;
    }
    return std::nullopt;
}

struct ReproduceResult {
    std::string name;
    std::string description;
    SweepTable table;
    std::vector<Metric> metrics;
};

namespace detail {

constexpr double preset_kappa = 1.0;
constexpr double preset_gamma = 1e-5;
constexpr double preset_G = 0.1;

[[nodiscard]] inline Mode preset_cavity(const std::string& label,
                                        double kappa = preset_kappa,
                                        double detuning = 0.0) {
    Mode mode;
    mode.kind = ModeKind::optical;
    mode.label = label;
    mode.damping = kappa;
    mode.detuning = detuning;
    return mode;
}

[[nodiscard]] inline Mode preset_resonator(const std::string& label,
                                           double mbar,
                                           double gamma = preset_gamma) {
    Mode mode;
    mode.kind = ModeKind::mechanical;
    mode.label = label;
    mode.damping = gamma;
    mode.bath_occupation = mbar;
    return mode;
}

/// Two cavities, two resonators, all four links at strength G, zero phases.
[[nodiscard]] inline NetworkModel standard_plaquette(double mbar1,
                                                     double mbar2) {
    NetworkModel model;
    model.convention = Convention::H1;
    model.modes = {preset_cavity("a1"), preset_cavity("a2"),
                   preset_resonator("b1", mbar1),
                   preset_resonator("b2", mbar2)};
    model.couplings = {{"a1", "b1", preset_G, 0.0},
                       {"a1", "b2", preset_G, 0.0},
                       {"a2", "b1", preset_G, 0.0},
                       {"a2", "b2", preset_G, 0.0}};
    return model;
}

[[nodiscard]] inline std::size_t column_index(const SweepTable& table,
                                              const std::string& name) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (table.columns[c] == name) return c;
    }
    throw selector_error("table has no column '" + name + "'");
}

[[nodiscard]] inline std::vector<double> column(const SweepTable& table,
                                                const std::string& name) {
    const std::size_t c = column_index(table, name);
    std::vector<double> values;
    values.reserve(table.rows.size());
    for (const auto& row : table.rows) values.push_back(row[c]);
    return values;
}

inline void prepend_column(SweepTable& table, const std::string& name,
                           double value) {
    table.columns.insert(table.columns.begin(), name);
    const double stored = csv_roundtrip(value);
    for (auto& row : table.rows) row.insert(row.begin(), stored);
}

inline void append_rows(SweepTable& into, SweepTable&& from) {
    if (into.columns.empty()) {
        into = std::move(from);
        return;
    }
    if (into.columns != from.columns) {
        throw selector_error("cannot stack tables with different columns");
    }
    for (auto& row : from.rows) into.rows.push_back(std::move(row));
    into.ok.insert(into.ok.end(), from.ok.begin(), from.ok.end());
}

/// Index of the row whose `axis` value is closest to `target`.
[[nodiscard]] inline std::size_t row_nearest(const SweepTable& table,
                                             const std::string& axis,
                                             double target) {
    const std::size_t c = column_index(table, axis);
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const double dist = std::abs(table.rows[r][c] - target);
        if (dist < best_dist) {
            best_dist = dist;
            best = r;
        }
    }
    return best;
}

/// All rows sharing the stored axis value nearest `target` (exact match on
/// the stored number, so this selects one grid line of a 2-axis sweep).
[[nodiscard]] inline std::vector<std::size_t> rows_on_grid_line(
    const SweepTable& table, const std::string& axis, double target) {
    const std::size_t c = column_index(table, axis);
    const double value = table.rows[row_nearest(table, axis, target)][c];
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (table.rows[r][c] == value) rows.push_back(r);
    }
    return rows;
}

/// Interior local maxima above a small fraction of the global peak.  A run
/// of equal samples counts as one maximum when both neighbours lie below it
/// (stored values are rounded to CSV precision, so a peak straddling two
/// symmetric grid points shows up as exactly such a plateau).
[[nodiscard]] inline int count_peaks(const std::vector<double>& y,
                                     double rel_threshold = 1e-3) {
    if (y.size() < 3) return 0;
    const double peak = *std::max_element(y.begin(), y.end());
    int count = 0;
    std::size_t i = 1;
    while (i + 1 < y.size()) {
        if (y[i] <= y[i - 1]) {
            ++i;
            continue;
        }
        std::size_t j = i;  // plateau [i, j] of equal values, risen into
        while (j + 1 < y.size() && y[j + 1] == y[j]) ++j;
        if (j + 1 < y.size() && y[j + 1] < y[j] &&
            y[i] >= rel_threshold * peak) {
            ++count;
        }
        i = j + 1;
    }
    return count;
}

/// Linear interpolation of the x where y crosses `target` between samples.
[[nodiscard]] inline double crossing_point(double x0, double y0, double x1,
                                           double y1, double target) {
    if (y1 == y0) return x0;
    return x0 + (target - y0) * (x1 - x0) / (y1 - y0);
}

/// Short token for metric names: 0.75 -> "0p75", 100000 -> "100000".
[[nodiscard]] inline std::string num_tag(double value) {
    std::string tag = format_number(value);
    for (auto& ch : tag) {
        if (ch == '.') ch = 'p';
    }
    return tag;
}

inline void add_metric(std::vector<Metric>& metrics, const std::string& name,
                       double value) {
    metrics.push_back({name, csv_roundtrip(value)});
}

// -------------------------------------------------------------------------
// fig1b: T_{R1->b1}(omega) across the elementary setups (bare resonator,
// one cavity, two cavities in series, one shared cavity with a second
// resonator).
// -------------------------------------------------------------------------
[[nodiscard]] inline ReproduceResult reproduce_fig1b() {
    NetworkModel bare;
    bare.modes = {preset_resonator("b1", 1e3)};

    NetworkModel single;
    single.modes = {preset_cavity("a1"), preset_resonator("b1", 1e3)};
    single.couplings = {{"a1", "b1", preset_G, 0.0}};

    NetworkModel dual;
    dual.modes = {preset_cavity("a1"), preset_cavity("a2"),
                  preset_resonator("b1", 1e3)};
    dual.couplings = {{"a1", "b1", preset_G, 0.0},
                      {"a2", "b1", preset_G, 0.0}};

    NetworkModel shared;
    shared.modes = {preset_cavity("a1"), preset_resonator("b1", 1e3),
                    preset_resonator("b2", 1e3)};
    shared.couplings = {{"a1", "b1", preset_G, 0.0},
                        {"a1", "b2", preset_G, 0.0}};

    const std::vector<std::string> tags = {"bare", "single_cavity",
                                           "dual_cavity", "shared_cavity"};
    std::vector<DynamicalSystem> systems;
    for (const auto* model : {&bare, &single, &dual, &shared}) {
        systems.push_back(build_dynamics(*model));
    }

    ReproduceResult result;
    result.name = "fig1b";
    result.description =
        "own-bath transmission of resonator b1 across the elementary "
        "cooling setups";
    result.table.columns = {"omega"};
    for (const auto& tag : tags) {
        result.table.columns.push_back("T_R1_to_b1_" + tag);
    }
    const SweepAxis axis = linear_axis("omega", -0.25, 0.25, 1001);
    for (const double omega : axis.values) {
        std::vector<double> row{csv_roundtrip(omega)};
        for (const auto& sys : systems) {
            const auto row_b1 =
                static_cast<Eigen::Index>(sys.mechanical_rows()[0]);
            row.push_back(
                csv_roundtrip(transmission(sys, omega)(row_b1, row_b1)));
        }
        result.table.rows.push_back(std::move(row));
        result.table.ok.push_back(true);
    }
    for (std::size_t s = 0; s < tags.size(); ++s) {
        const auto values = column(result.table, "T_R1_to_b1_" + tags[s]);
        add_metric(result.metrics, "peak_T_" + tags[s],
                   *std::max_element(values.begin(), values.end()));
    }
    return result;
}

// -------------------------------------------------------------------------
// fig1c: both bath responses of b1 in the shared-cavity (b1-a1-b2) setup,
// plus the resulting steady-state flows.
// -------------------------------------------------------------------------
[[nodiscard]] inline ReproduceResult reproduce_fig1c() {
    NetworkModel shared;
    shared.modes = {preset_cavity("a1"), preset_resonator("b1", 1e3),
                    preset_resonator("b2", 1e3)};
    shared.couplings = {{"a1", "b1", preset_G, 0.0},
                        {"a1", "b2", preset_G, 0.0}};

    SweepSpec spec;
    spec.base = shared;
    spec.axes = {linear_axis("omega", -0.25, 0.25, 1001)};
    spec.outputs = {{OutputKind::transmission, 0, 1, {}, 0.0},
                    {OutputKind::transmission, 0, 2, {}, 0.0}};

    ReproduceResult result;
    result.name = "fig1c";
    result.description =
        "transmissions into resonator b1 from both thermal baths when two "
        "resonators share one cooling cavity";
    result.table = run_sweep(spec);

    const auto own = column(result.table, "T_R1_to_b1");
    const auto cross = column(result.table, "T_R2_to_b1");
    add_metric(result.metrics, "peak_T_R1_to_b1",
               *std::max_element(own.begin(), own.end()));
    add_metric(result.metrics, "peak_T_R2_to_b1",
               *std::max_element(cross.begin(), cross.end()));

    const FlowReport flow = occupations_lyapunov(build_dynamics(shared));
    add_metric(result.metrics, "delta_n_b1", flow.net_flow(0));
    add_metric(result.metrics, "delta_n_b2", flow.net_flow(1));
    return result;
}

// -------------------------------------------------------------------------
// fig2: transmission maps T(omega, loop phase) into b1 from both resonator
// baths, for four coupling strengths.
// -------------------------------------------------------------------------
[[nodiscard]] inline ReproduceResult reproduce_fig2() {
    ReproduceResult result;
    result.name = "fig2";
    result.description =
        "transmission maps into resonator b1 versus frequency and loop "
        "phase at four coupling strengths";
    for (const double G : {0.1, 0.3, 0.7, 1.0}) {
        NetworkModel model = standard_plaquette(1e3, 1e3);
        apply_selector(model, "couplings[*].strength", G);
        SweepSpec spec;
        spec.base = model;
        spec.axes = {linear_axis("omega", -3.0, 3.0, 400),
                     linear_axis("loop_phase", 0.0, two_pi, 181)};
        spec.outputs = {{OutputKind::transmission, 0, 2, {}, 0.0},
                        {OutputKind::transmission, 0, 3, {}, 0.0},
                        {OutputKind::transmission, 1, 2, {}, 0.0}};
        SweepTable block = run_sweep(spec);

        const auto pi_rows = rows_on_grid_line(block, "loop_phase", pi);
        std::vector<double> own, cross;
        const std::size_t c_own = column_index(block, "T_R1_to_b1");
        const std::size_t c_cross = column_index(block, "T_R2_to_b1");
        for (const std::size_t r : pi_rows) {
            own.push_back(block.rows[r][c_own]);
            cross.push_back(block.rows[r][c_cross]);
        }
        const std::string tag = "_G" + num_tag(G);
        add_metric(result.metrics, "max_T_R1_to_b1_at_pi" + tag,
                   *std::max_element(own.begin(), own.end()));
        add_metric(result.metrics, "max_T_R2_to_b1_at_pi" + tag,
                   *std::max_element(cross.begin(), cross.end()));
        add_metric(result.metrics, "peaks_T_R1_to_b1_at_pi" + tag,
                   count_peaks(own));

        prepend_column(block, "G", G);
        append_rows(result.table, std::move(block));
    }
    return result;
}

// -------------------------------------------------------------------------
// fig3: steady-state flows and occupations versus loop phase for a cold
// (1e3/1e3) and a hot-bath (1e5/1e3) configuration.
// -------------------------------------------------------------------------
[[nodiscard]] inline ReproduceResult reproduce_fig3() {
    ReproduceResult result;
    result.name = "fig3";
    result.description =
        "noise flows and phonon occupations versus loop phase for equal and "
        "strongly unequal bath temperatures";
    for (const double mbar1 : {1e3, 1e5}) {
        NetworkModel model = standard_plaquette(mbar1, 1e3);
        SweepSpec spec;
        spec.base = model;
        spec.axes = {linear_axis("loop_phase", 0.0, two_pi, 101)};
        spec.outputs = {{OutputKind::occupation, 0},
                        {OutputKind::occupation, 1},
                        {OutputKind::net_flow, 0},
                        {OutputKind::net_flow, 1},
                        {OutputKind::outflow, 0},
                        {OutputKind::outflow, 1},
                        {OutputKind::inflow, 0},
                        {OutputKind::inflow, 1},
                        {OutputKind::integrated_T, 0, 3},
                        {OutputKind::integrated_T, 1, 2}};
        SweepTable block = run_sweep(spec);
        const std::string tag = "_m" + num_tag(mbar1);

        const std::size_t at_pi = row_nearest(block, "loop_phase", pi);
        const auto n1 = column(block, "nbar_b1");
        const auto n2 = column(block, "nbar_b2");
        add_metric(result.metrics, "nbar_b1_at_pi" + tag, n1[at_pi]);
        add_metric(result.metrics, "nbar_b2_at_pi" + tag, n2[at_pi]);

        if (mbar1 == 1e3) {
            // Ground-state window: outermost crossings of max(n1, n2) = 1.
            const auto phi = column(block, "loop_phase");
            std::vector<double> worst(n1.size());
            for (std::size_t i = 0; i < n1.size(); ++i) {
                worst[i] = std::max(n1[i], n2[i]);
            }
            double lower = std::numeric_limits<double>::quiet_NaN();
            double upper = lower;
            for (std::size_t i = 0; i + 1 < worst.size(); ++i) {
                const bool above0 = worst[i] > 1.0;
                const bool above1 = worst[i + 1] > 1.0;
                if (above0 != above1) {
                    const double x = crossing_point(phi[i], worst[i],
                                                    phi[i + 1], worst[i + 1],
                                                    1.0);
                    if (std::isnan(lower)) lower = x;
                    upper = x;
                }
            }
            add_metric(result.metrics, "window_lower_over_pi", lower / pi);
            add_metric(result.metrics, "window_upper_over_pi", upper / pi);

            const double scale = *std::max_element(n1.begin(), n1.end());
            double symmetry = 0.0;
            const std::size_t n = n1.size();
            for (std::size_t i = 0; i < n; ++i) {
                symmetry = std::max(
                    std::abs(n1[i] - n1[n - 1 - i]) / scale, symmetry);
            }
            add_metric(result.metrics, "nbar_b1_phase_symmetry_residual",
                       symmetry);
        }

        prepend_column(block, "mbar_1", mbar1);
        append_rows(result.table, std::move(block));
    }
    add_metric(result.metrics, "dual_cavity_limit_b2",
               dual_cavity_limit(preset_resonator("b2", 1e3), preset_G,
                                 preset_kappa, preset_G, preset_kappa));
    return result;
}

// -------------------------------------------------------------------------
// fig4: occupations versus loop phase at four coupling strengths with a hot
// first bath.
// -------------------------------------------------------------------------
[[nodiscard]] inline ReproduceResult reproduce_fig4() {
    ReproduceResult result;
    result.name = "fig4";
    result.description =
        "phonon occupations versus loop phase for increasing coupling "
        "strength, hot first bath";
    for (const double G : {0.1, 0.3, 0.7, 1.0}) {
        NetworkModel model = standard_plaquette(1e5, 1e3);
        apply_selector(model, "couplings[*].strength", G);
        SweepSpec spec;
        spec.base = model;
        spec.axes = {linear_axis("loop_phase", 0.0, two_pi, 181)};
        spec.outputs = {{OutputKind::occupation, 0},
                        {OutputKind::occupation, 1},
                        {OutputKind::integrated_T, 0, 3},
                        {OutputKind::integrated_T, 1, 2}};
        SweepTable block = run_sweep(spec);

        const auto phi = column(block, "loop_phase");
        const auto n2 = column(block, "nbar_b2");
        const auto min_it = std::min_element(n2.begin(), n2.end());
        const auto min_at = static_cast<std::size_t>(min_it - n2.begin());
        const std::string tag = "_G" + num_tag(G);
        add_metric(result.metrics, "min_nbar_b2" + tag, *min_it);
        add_metric(result.metrics, "argmin_phi_over_pi" + tag,
                   phi[min_at] / pi);

        prepend_column(block, "G", G);
        append_rows(result.table, std::move(block));
    }
    return result;
}

// -------------------------------------------------------------------------
// fig5: occupation of b2 versus the coupling ratio G21/G12 for four cavity
// linewidth ratios, compared against its dual-cavity cooling limit.
// -------------------------------------------------------------------------
[[nodiscard]] inline ReproduceResult reproduce_fig5() {
    ReproduceResult result;
    result.name = "fig5";
    result.description =
        "occupation of b2 versus coupling ratio for four cavity linewidth "
        "ratios, against the dual-cavity cooling limit";
    for (const double ratio : {1.0, 0.75, 0.625, 0.5}) {
        NetworkModel model = standard_plaquette(1e5, 1e3);
        apply_selector(model, "couplings[a2,b2].strength", 2.0 * preset_G);
        apply_selector(model, "loop_phase", pi);
        apply_selector(model, "ratio:kappa1/kappa2", ratio);
        SweepSpec spec;
        spec.base = model;
        spec.axes = {linear_axis("ratio:G21/G12", 0.05, 1.4, 109)};
        spec.outputs = {{OutputKind::occupation, 0},
                        {OutputKind::occupation, 1},
                        {OutputKind::integrated_T, 0, 3},
                        {OutputKind::integrated_T, 1, 2}};
        SweepTable block = run_sweep(spec);

        const auto x = column(block, "ratio:G21/G12");
        const auto n2 = column(block, "nbar_b2");
        const auto min_it = std::min_element(n2.begin(), n2.end());
        const auto min_at = static_cast<std::size_t>(min_it - n2.begin());
        const double limit =
            dual_cavity_limit(preset_resonator("b2", 1e3), preset_G,
                              ratio * preset_kappa, 2.0 * preset_G,
                              preset_kappa);
        const std::string tag = "_k" + num_tag(ratio);
        add_metric(result.metrics, "min_nbar_b2" + tag, *min_it);
        add_metric(result.metrics, "argmin_G_ratio" + tag, x[min_at]);
        add_metric(result.metrics, "dual_limit_b2" + tag, limit);
        add_metric(result.metrics, "valley_gap_rel" + tag,
                   (*min_it - limit) / limit);

        prepend_column(block, "kappa_ratio", ratio);
        append_rows(result.table, std::move(block));
    }
    return result;
}

// -------------------------------------------------------------------------
// fig6: occupations versus the detuning of resonator b1 at the two loop
// phases where the network stays reciprocal.
// -------------------------------------------------------------------------
[[nodiscard]] inline ReproduceResult reproduce_fig6() {
    ReproduceResult result;
    result.name = "fig6";
    result.description =
        "phonon occupations versus resonator detuning at loop phases 0 "
        "and pi, hot first bath";
    for (const double phi : {0.0, pi}) {
        NetworkModel model = standard_plaquette(1e5, 1e3);
        apply_selector(model, "loop_phase", phi);
        SweepSpec spec;
        spec.base = model;
        spec.axes = {linear_axis("modes[b1].detuning", -0.5, 0.5, 201)};
        spec.outputs = {{OutputKind::occupation, 0},
                        {OutputKind::occupation, 1},
                        {OutputKind::integrated_T, 0, 3},
                        {OutputKind::integrated_T, 1, 2}};
        SweepTable block = run_sweep(spec);

        const auto n2 = column(block, "nbar_b2");
        const std::size_t centre =
            row_nearest(block, "modes[b1].detuning", 0.0);
        const std::string tag = phi == 0.0 ? "_phi0" : "_phipi";
        add_metric(result.metrics, "nbar_b2_at_zero_detuning" + tag,
                   n2[centre]);
        add_metric(result.metrics, "max_nbar_b2" + tag,
                   *std::max_element(n2.begin(), n2.end()));

        prepend_column(block, "loop_phase", phi);
        append_rows(result.table, std::move(block));
    }
    return result;
}

// -------------------------------------------------------------------------
// fig7: occupation of b2 versus the coupling ratio for four first-bath
// occupations; at the matched ratio the curve is bath-independent.
// -------------------------------------------------------------------------
[[nodiscard]] inline ReproduceResult reproduce_fig7() {
    ReproduceResult result;
    result.name = "fig7";
    result.description =
        "occupation of b2 versus coupling ratio for four occupations of the "
        "hot bath";
    std::vector<double> at_match;
    for (const double mbar1 : {1e3, 1e4, 5e4, 1e5}) {
        NetworkModel model = standard_plaquette(mbar1, 1e3);
        apply_selector(model, "couplings[a2,b2].strength", 2.0 * preset_G);
        apply_selector(model, "loop_phase", pi);
        SweepSpec spec;
        spec.base = model;
        spec.axes = {linear_axis("ratio:G21/G12", 0.1, 2.5, 121)};
        spec.outputs = {{OutputKind::occupation, 0},
                        {OutputKind::occupation, 1},
                        {OutputKind::integrated_T, 0, 3},
                        {OutputKind::integrated_T, 1, 2}};
        SweepTable block = run_sweep(spec);

        const auto n2 = column(block, "nbar_b2");
        const std::size_t matched =
            row_nearest(block, "ratio:G21/G12", 0.5);
        const std::size_t dark_line =
            row_nearest(block, "ratio:G21/G12", 2.0);
        const std::string tag = "_m" + num_tag(mbar1);
        add_metric(result.metrics, "nbar_b2_at_match" + tag, n2[matched]);
        add_metric(result.metrics, "nbar_b2_at_dark_line" + tag,
                   n2[dark_line]);
        at_match.push_back(n2[matched]);

        prepend_column(block, "mbar_1", mbar1);
        append_rows(result.table, std::move(block));
    }
    const auto [lo, hi] = std::minmax_element(at_match.begin(), at_match.end());
    add_metric(result.metrics, "match_spread_rel", (*hi - *lo) / *lo);
    return result;
}

// -------------------------------------------------------------------------
// fig8: nonreciprocal flow versus loop phase for the detuned-cavity network
// (second cavity narrow and far detuned).
// -------------------------------------------------------------------------
[[nodiscard]] inline ReproduceResult reproduce_fig8() {
    NetworkModel model;
    model.convention = Convention::H2;
    model.modes = {preset_cavity("a1", preset_kappa, 0.0),
                   preset_cavity("a2", 0.1 * preset_kappa, 0.5 * preset_kappa),
                   preset_resonator("b1", 1e5), preset_resonator("b2", 1e3)};
    model.couplings = {{"a1", "b1", preset_G, 0.0},
                       {"a1", "b2", preset_G, 0.0},
                       {"a2", "b1", preset_G, 0.0},
                       {"a2", "b2", preset_G, 0.0}};

    SweepSpec spec;
    spec.base = model;
    spec.axes = {linear_axis("loop_phase", 0.0, two_pi, 181)};
    spec.outputs = {{OutputKind::occupation, 0},
                    {OutputKind::occupation, 1},
                    {OutputKind::integrated_T, 0, 3},
                    {OutputKind::integrated_T, 1, 2},
                    {OutputKind::asymmetry},
                    {OutputKind::condition_residual, 0, 0,
                     Condition::nonreciprocal_block_21},
                    {OutputKind::condition_residual, 0, 0,
                     Condition::nonreciprocal_block_12}};

    ReproduceResult result;
    result.name = "fig8";
    result.description =
        "directional phonon-noise asymmetry and occupations versus loop "
        "phase for the detuned narrow second cavity";
    result.table = run_sweep(spec);

    const auto asym = column(result.table, "asymmetry");
    const auto phi = column(result.table, "loop_phase");
    const auto n1 = column(result.table, "nbar_b1");
    const auto n2 = column(result.table, "nbar_b2");
    const std::size_t half = row_nearest(result.table, "loop_phase", pi / 2.0);
    const std::size_t three_half =
        row_nearest(result.table, "loop_phase", 3.0 * pi / 2.0);
    add_metric(result.metrics, "asymmetry_at_half_pi", asym[half]);
    add_metric(result.metrics, "asymmetry_at_three_half_pi", asym[three_half]);
    const auto min_it = std::min_element(asym.begin(), asym.end());
    add_metric(result.metrics, "min_asymmetry", *min_it);
    add_metric(result.metrics, "argmin_asymmetry_over_pi",
               phi[static_cast<std::size_t>(min_it - asym.begin())] / pi);
    add_metric(result.metrics, "max_asymmetry",
               *std::max_element(asym.begin(), asym.end()));
    add_metric(result.metrics, "nbar_b1_at_half_pi", n1[half]);
    add_metric(result.metrics, "nbar_b2_at_three_half_pi", n2[three_half]);
    return result;
}

}  // namespace detail

/// Runs the named preset and returns its table plus summary metrics.
[[nodiscard]] inline ReproduceResult reproduce(FigureId id) {
    switch (id) {
        case FigureId::fig1b: return detail::reproduce_fig1b();
        case FigureId::fig1c: return detail::reproduce_fig1c();
        case FigureId::fig2: return detail::reproduce_fig2();
        case FigureId::fig3: return detail::reproduce_fig3();
        case FigureId::fig4: return detail::reproduce_fig4();
        case FigureId::fig5: return detail::reproduce_fig5();
        case FigureId::fig6: return detail::reproduce_fig6();
        case FigureId::fig7: return detail::reproduce_fig7();
        case FigureId::fig8: return detail::reproduce_fig8();
    }
    throw selector_error("unknown figure preset");
}

}  // namespace omflow
