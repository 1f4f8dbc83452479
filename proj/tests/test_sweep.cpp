// ============================================================================
// Parameter sweeps: the selector grammar, grid evaluation with per-cell
// failure isolation, CSV/records serialization, and the built-in study
// presets with their frozen summary metrics.
// ============================================================================

#include <catch2/catch_amalgamated.hpp>

#include <nlohmann/json.hpp>
#include <sstream>

#include "omflow/presets.hpp"
#include "omflow/selectors.hpp"
#include "omflow/steady.hpp"
#include "omflow/sweep.hpp"
#include "test_helpers.hpp"

using namespace omflow;
using Catch::Approx;

namespace {

[[nodiscard]] double metric_value(const ReproduceResult& result,
                                  const std::string& name) {
    for (const auto& metric : result.metrics) {
        if (metric.name == name) return metric.value;
    }
    FAIL("metric '" << name << "' not found in " << result.name);
    return 0.0;
}

[[nodiscard]] std::vector<double> column_values(const SweepTable& table,
                                                const std::string& name) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (table.columns[c] == name) {
            std::vector<double> out;
            out.reserve(table.rows.size());
            for (const auto& row : table.rows) out.push_back(row[c]);
            return out;
        }
    }
    FAIL("column '" << name << "' not found");
    return {};
}

}  // namespace

// ----------------------------------------------------------------------------
// Selector grammar
// ----------------------------------------------------------------------------

TEST_CASE("selectors address mode and coupling fields") {
    auto model = testutil::flat_loop(0.1, 0.0, 1e3, 1e3);

    apply_selector(model, "modes[b1].detuning", 0.2);
    CHECK(model.mode("b1").detuning == 0.2);
    apply_selector(model, "modes[a2].damping", 0.7);
    CHECK(model.mode("a2").damping == 0.7);
    apply_selector(model, "modes[b2].bath_occupation", 55.0);
    CHECK(model.mode("b2").bath_occupation == 55.0);
    apply_selector(model, "modes[b1].frequency", 6.7);
    CHECK(model.mode("b1").frequency == 6.7);

    apply_selector(model, "couplings[a1,b2].strength", 0.4);
    CHECK(model.couplings[*model.coupling_index("a1", "b2")].strength == 0.4);
    apply_selector(model, "couplings[a2,b1].phase", 1.25);
    CHECK(model.couplings[*model.coupling_index("a2", "b1")].phase == 1.25);

    apply_selector(model, "couplings[*].phase", 0.5);
    for (const auto& c : model.couplings) CHECK(c.phase == 0.5);
    apply_selector(model, "couplings[*].strength", 0.2);
    for (const auto& c : model.couplings) CHECK(c.strength == 0.2);
}

TEST_CASE("loop_phase selector retargets only the a2-b1 link") {
    testutil::LoopParams p;
    p.phase = {{{0.3, 1.1}, {-0.4, 2.0}}};
    auto model = testutil::make_loop(p);

    apply_selector(model, "loop_phase", 2.0);
    CHECK(loop_phase(model) == Approx(2.0).margin(1e-12));
    const auto view = plaquette_view(model);
    CHECK(view.phase[0][0] == 0.3);
    CHECK(view.phase[0][1] == 1.1);
    CHECK(view.phase[1][1] == 2.0);
    CHECK(view.phase[1][0] != -0.4);
}

TEST_CASE("ratio selectors scale the numerator against the denominator") {
    auto model = testutil::flat_loop(0.1, 0.0, 0.0, 0.0);

    apply_selector(model, "ratio:G21/G12", 0.5);
    {
        const auto view = plaquette_view(model);
        CHECK(view.strength[1][0] == Approx(0.05).epsilon(1e-12));
        CHECK(view.strength[0][1] == 0.1);
    }

    apply_selector(model, "ratio:kappa1/kappa2", 0.75);
    CHECK(model.mode("a1").damping == Approx(0.75).epsilon(1e-12));
    CHECK(model.mode("a2").damping == 1.0);

    apply_selector(model, "ratio:gamma2/gamma1", 2.0);
    CHECK(model.mode("b2").damping == Approx(2e-5).epsilon(1e-12));
    CHECK(model.mode("b1").damping == 1e-5);

    apply_selector(model, "ratio:G22/G11", 3.0);
    const auto view = plaquette_view(model);
    CHECK(view.strength[1][1] == Approx(0.3).epsilon(1e-12));
}

TEST_CASE("selector errors are specific") {
    auto model = testutil::flat_loop(0.1, 0.0, 0.0, 0.0);
    CHECK_THROWS_AS(apply_selector(model, "modes[zz].detuning", 1.0),
                    selector_error);
    CHECK_THROWS_AS(apply_selector(model, "modes[b1].strength", 1.0),
                    selector_error);
    CHECK_THROWS_AS(apply_selector(model, "couplings[a1,b3].phase", 1.0),
                    selector_error);
    CHECK_THROWS_AS(apply_selector(model, "couplings[a2].phase", 1.0),
                    selector_error);
    CHECK_THROWS_AS(apply_selector(model, "ratio:G13/G12", 1.0), selector_error);
    CHECK_THROWS_AS(apply_selector(model, "ratio:G21", 1.0), selector_error);
    CHECK_THROWS_AS(apply_selector(model, "omega", 1.0), selector_error);
    CHECK_THROWS_AS(apply_selector(model, "nonsense", 1.0), selector_error);

    // Plaquette-level selectors need the full four-mode loop.
    NetworkModel three = model;
    three.modes.pop_back();
    three.couplings.resize(2);
    CHECK_THROWS_AS(apply_selector(three, "loop_phase", 1.0), selector_error);
    CHECK_THROWS_AS(apply_selector(three, "ratio:G21/G12", 1.0), selector_error);
}

TEST_CASE("omega is reserved for the frequency axis") {
    CHECK(selector_is_frequency_axis("omega"));
    CHECK_FALSE(selector_is_frequency_axis("modes[b1].detuning"));
}

TEST_CASE("linear_axis endpoints are inclusive") {
    const auto axis = linear_axis("loop_phase", 0.0, 2.0, 5);
    REQUIRE(axis.values.size() == 5);
    CHECK(axis.values.front() == 0.0);
    CHECK(axis.values.back() == 2.0);
    CHECK(axis.values[2] == Approx(1.0).epsilon(1e-15));
    CHECK(linear_axis("x", 3.0, 9.0, 1).values ==
          std::vector<double>{3.0});
    CHECK_THROWS_AS(linear_axis("x", 0.0, 1.0, 0), selector_error);
}

// ----------------------------------------------------------------------------
// run_sweep
// ----------------------------------------------------------------------------

TEST_CASE("two-axis sweeps run axis-major with named columns") {
    SweepSpec spec;
    spec.base = testutil::flat_loop(0.1, pi, 1e3, 1e3);
    spec.axes = {linear_axis("loop_phase", 0.5, 1.5, 3),
                 linear_axis("modes[b1].bath_occupation", 10.0, 40.0, 4)};
    spec.outputs = {OutputRequest{}};  // nbar of b1

    const auto table = run_sweep(spec);
    REQUIRE(table.columns.size() == 3);
    CHECK(table.columns[0] == "loop_phase");
    CHECK(table.columns[1] == "modes[b1].bath_occupation");
    CHECK(table.columns[2] == "nbar_b1");
    REQUIRE(table.rows.size() == 12);
    // Axis-major: the first axis value is constant over each inner block.
    CHECK(table.rows[0][0] == 0.5);
    CHECK(table.rows[3][0] == 0.5);
    CHECK(table.rows[4][0] == 1.0);
    CHECK(table.rows[4][1] == 10.0);
    CHECK(table.rows[7][1] == 40.0);
    for (bool ok : table.ok) CHECK(ok);
}

TEST_CASE("omega axes drive the transmission output") {
    SweepSpec spec;
    spec.base = testutil::two_mode_chain(0.1, 0.0);
    spec.axes = {linear_axis("omega", -0.2, 0.2, 5)};
    OutputRequest T;
    T.kind = OutputKind::transmission;
    T.mech = 0;
    T.channel = 2;
    spec.outputs = {T};

    const auto table = run_sweep(spec);
    CHECK(table.columns == std::vector<std::string>{"omega", "T_R1_to_b1"});
    REQUIRE(table.rows.size() == 5);
    const auto sys = build_dynamics(spec.base);
    for (const auto& row : table.rows) {
        const double direct = transmission(sys, row[0])(2, 2);
        CHECK(row[1] == Approx(direct).epsilon(1e-8));
    }
}

TEST_CASE("sweep output is deterministic") {
    SweepSpec spec;
    spec.base = testutil::flat_loop(0.3, 1.1, 1e4, 1e2);
    spec.axes = {linear_axis("loop_phase", 0.0, two_pi, 11)};
    OutputRequest n1, n2;
    n2.mech = 1;
    spec.outputs = {n1, n2};

    std::ostringstream first, second;
    write_sweep_csv(first, run_sweep(spec));
    write_sweep_csv(second, run_sweep(spec));
    CHECK(first.str() == second.str());
}

TEST_CASE("a failing cell is isolated, not fatal") {
    SweepSpec spec;
    spec.base = testutil::flat_loop(0.1, pi, 1e3, 1e3);
    SweepAxis axis;
    axis.selector = "modes[b1].damping";
    axis.values = {1e-3, 0.0, 2e-3};  // middle value is invalid
    spec.axes = {axis};
    spec.outputs = {OutputRequest{}};

    const auto table = run_sweep(spec);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.ok[0]);
    CHECK_FALSE(table.ok[1]);
    CHECK(table.ok[2]);
    CHECK(std::isnan(table.rows[1][1]));
    CHECK(std::isfinite(table.rows[0][1]));
    CHECK(std::isfinite(table.rows[2][1]));
    // The axis value itself is still recorded for the failed row.
    CHECK(table.rows[1][0] == 0.0);
}

TEST_CASE("a wrong-convention condition output fails per cell") {
    SweepSpec spec;
    spec.base = testutil::flat_loop(0.1, pi, 1e3, 1e3);  // H1 model
    spec.axes = {linear_axis("loop_phase", 0.0, 1.0, 3)};
    OutputRequest res;
    res.kind = OutputKind::condition_residual;
    res.condition = Condition::nonreciprocal_block_21;  // needs H2
    spec.outputs = {res};

    const auto table = run_sweep(spec);
    REQUIRE(table.rows.size() == 3);
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK_FALSE(table.ok[r]);
        CHECK(std::isnan(table.rows[r][1]));
    }
}

TEST_CASE("structural sweep errors abort instead of producing rows") {
    SweepSpec spec;
    spec.base = testutil::flat_loop(0.1, pi, 1e3, 1e3);

    SECTION("unknown selector") {
        spec.axes = {linear_axis("modes[b1].wavelength", 0.0, 1.0, 3)};
        spec.outputs = {OutputRequest{}};
        CHECK_THROWS_AS(run_sweep(spec), selector_error);
    }
    SECTION("no axes") {
        spec.outputs = {OutputRequest{}};
        CHECK_THROWS_AS(run_sweep(spec), selector_error);
    }
    SECTION("three axes") {
        spec.axes = {linear_axis("loop_phase", 0.0, 1.0, 2),
                     linear_axis("modes[b1].detuning", 0.0, 1.0, 2),
                     linear_axis("modes[b2].detuning", 0.0, 1.0, 2)};
        spec.outputs = {OutputRequest{}};
        CHECK_THROWS_AS(run_sweep(spec), selector_error);
    }
    SECTION("empty axis") {
        spec.axes = {SweepAxis{"loop_phase", {}}};
        spec.outputs = {OutputRequest{}};
        CHECK_THROWS_AS(run_sweep(spec), selector_error);
    }
    SECTION("two omega axes") {
        spec.axes = {linear_axis("omega", 0.0, 1.0, 2),
                     linear_axis("omega", 0.0, 1.0, 2)};
        spec.outputs = {OutputRequest{}};
        CHECK_THROWS_AS(run_sweep(spec), selector_error);
    }
    SECTION("no outputs") {
        spec.axes = {linear_axis("loop_phase", 0.0, 1.0, 2)};
        CHECK_THROWS_AS(run_sweep(spec), selector_error);
    }
}

TEST_CASE("sweeps respect physical symmetries of the loop") {
    SweepSpec spec;
    spec.base = testutil::flat_loop(0.1, 0.0, 1e3, 1e3);
    spec.axes = {linear_axis("loop_phase", 0.0, two_pi, 21)};
    OutputRequest n1;
    OutputRequest cross21, cross12;
    cross21.kind = OutputKind::integrated_T;
    cross21.mech = 0;
    cross21.channel = 3;  // R2 -> b1
    cross12.kind = OutputKind::integrated_T;
    cross12.mech = 1;
    cross12.channel = 2;  // R1 -> b2
    spec.outputs = {n1, cross21, cross12};

    const auto table = run_sweep(spec);
    REQUIRE(table.rows.size() == 21);
    const std::size_t n = table.rows.size();
    for (std::size_t r = 0; r < n; ++r) {
        // Reciprocity at equal bath damping, any loop phase.
        CHECK(std::abs(table.rows[r][2] - table.rows[r][3]) <=
              1e-9 * std::max({table.rows[r][2], table.rows[r][3], 1e-6}));
        // Occupations are symmetric under phi -> 2pi - phi.
        const auto& mirror = table.rows[n - 1 - r];
        CHECK(table.rows[r][1] ==
              Approx(mirror[1]).epsilon(1e-9).margin(1e-12));
    }
}

// ----------------------------------------------------------------------------
// Serialization
// ----------------------------------------------------------------------------

TEST_CASE("sweep CSV round-trips through read_sweep_csv") {
    SweepSpec spec;
    spec.base = testutil::flat_loop(0.1, pi, 1e3, 1e3);
    SweepAxis axis;
    axis.selector = "modes[b1].damping";
    axis.values = {1e-3, 0.0, 2e-3};
    spec.axes = {axis};
    spec.outputs = {OutputRequest{}};
    const auto table = run_sweep(spec);

    std::ostringstream out;
    write_sweep_csv(out, table, {{"answer", 42.0}, {"minimum", 0.135}});

    std::istringstream in(out.str());
    std::vector<Metric> metrics;
    const auto back = read_sweep_csv(in, &metrics);

    CHECK(back.columns == table.columns);
    REQUIRE(back.rows.size() == table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        CHECK(back.ok[r] == table.ok[r]);
        for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
            if (std::isnan(table.rows[r][c])) {
                CHECK(std::isnan(back.rows[r][c]));
            } else {
                // Values were stored round-tripped, so re-reading is exact.
                CHECK(back.rows[r][c] == table.rows[r][c]);
            }
        }
    }
    REQUIRE(metrics.size() == 2);
    CHECK(metrics[0].name == "answer");
    CHECK(metrics[0].value == 42.0);
    CHECK(metrics[1].name == "minimum");
    CHECK(metrics[1].value == 0.135);
}

TEST_CASE("sweep records are line-delimited JSON with null for failed cells") {
    SweepSpec spec;
    spec.base = testutil::flat_loop(0.1, pi, 1e3, 1e3);
    SweepAxis axis;
    axis.selector = "modes[b1].damping";
    axis.values = {1e-3, 0.0};
    spec.axes = {axis};
    spec.outputs = {OutputRequest{}};
    const auto table = run_sweep(spec);

    std::ostringstream out;
    write_sweep_records(out, table, {{"answer", 42.0}});

    std::istringstream in(out.str());
    std::string line;
    std::vector<nlohmann::json> objects;
    while (std::getline(in, line)) {
        objects.push_back(nlohmann::json::parse(line));
    }
    REQUIRE(objects.size() == 3);
    CHECK(objects[0]["status"] == "ok");
    CHECK(objects[0]["nbar_b1"].is_number());
    CHECK(objects[1]["status"] == "failed");
    CHECK(objects[1]["nbar_b1"].is_null());
    CHECK(objects[2]["metric"] == "answer");
    CHECK(objects[2]["value"] == 42.0);
}

// ----------------------------------------------------------------------------
// Study presets
// ----------------------------------------------------------------------------

TEST_CASE("figure names round-trip") {
    for (const FigureId id : all_figures()) {
        const auto back = figure_from_name(figure_name(id));
        REQUIRE(back.has_value());
        CHECK(*back == id);
    }
    CHECK_FALSE(figure_from_name("fig99").has_value());
    CHECK(all_figures().size() == 9);
}

TEST_CASE("preset: elementary cooling spectra") {
    const auto result = reproduce(FigureId::fig1b);
    CHECK(result.table.rows.size() == 1001);
    CHECK(metric_value(result, "peak_T_bare") == Approx(4e5).epsilon(1e-6));
    CHECK(metric_value(result, "peak_T_single_cavity") ==
          Approx(0.0249875047).epsilon(1e-6));
    CHECK(metric_value(result, "peak_T_dual_cavity") ==
          Approx(0.00624843779).epsilon(1e-6));
    CHECK(metric_value(result, "peak_T_shared_cavity") ==
          Approx(100024.998).epsilon(1e-5));
}

TEST_CASE("preset: shared-cavity exchange flows") {
    const auto result = reproduce(FigureId::fig1c);
    CHECK(metric_value(result, "peak_T_R1_to_b1") ==
          Approx(100024.998).epsilon(1e-5));
    CHECK(metric_value(result, "peak_T_R2_to_b1") ==
          Approx(99975.0047).epsilon(1e-5));
    CHECK(metric_value(result, "delta_n_b1") ==
          Approx(-499.932508).epsilon(1e-6));
    CHECK(metric_value(result, "delta_n_b2") ==
          Approx(-499.932508).epsilon(1e-6));
}

TEST_CASE("preset: blocked-channel spectra across coupling strengths") {
    const auto result = reproduce(FigureId::fig2);
    CHECK(result.table.rows.size() == 4 * 400 * 181);

    CHECK(metric_value(result, "max_T_R1_to_b1_at_pi_G0p1") ==
          Approx(0.0060697).epsilon(1e-4));
    CHECK(metric_value(result, "max_T_R1_to_b1_at_pi_G0p3") ==
          Approx(1.11385e-4).epsilon(1e-4));
    CHECK(metric_value(result, "max_T_R1_to_b1_at_pi_G0p7") ==
          Approx(5.02993e-5).epsilon(1e-4));
    CHECK(metric_value(result, "max_T_R1_to_b1_at_pi_G1") ==
          Approx(4.50089e-5).epsilon(1e-4));

    // The interference-blocked channel sits many orders below the open one.
    for (const char* tag : {"G0p1", "G0p3", "G0p7", "G1"}) {
        const double own =
            metric_value(result, std::string("max_T_R1_to_b1_at_pi_") + tag);
        const double cross =
            metric_value(result, std::string("max_T_R2_to_b1_at_pi_") + tag);
        INFO(tag);
        CHECK(cross <= 1e-8 * own);
    }

    // Normal-mode splitting appears between G = 0.1 and G = 0.7.
    CHECK(metric_value(result, "peaks_T_R1_to_b1_at_pi_G0p1") == 1.0);
    CHECK(metric_value(result, "peaks_T_R1_to_b1_at_pi_G0p7") == 2.0);
    CHECK(metric_value(result, "peaks_T_R1_to_b1_at_pi_G1") == 2.0);
}

TEST_CASE("preset: occupations versus loop phase") {
    const auto result = reproduce(FigureId::fig3);
    CHECK(metric_value(result, "nbar_b1_at_pi_m1000") ==
          Approx(0.13498303).epsilon(1e-6));
    CHECK(metric_value(result, "nbar_b2_at_pi_m1000") ==
          Approx(0.13498303).epsilon(1e-6));
    CHECK(metric_value(result, "nbar_b1_at_pi_m100000") ==
          Approx(13.4983).epsilon(1e-4));
    CHECK(metric_value(result, "nbar_b2_at_pi_m100000") ==
          Approx(0.134983).epsilon(1e-5));
    CHECK(metric_value(result, "dual_cavity_limit_b2") ==
          Approx(0.134983027).epsilon(1e-7));

    // Ground-state window boundaries on the sampled grid.
    CHECK(metric_value(result, "window_lower_over_pi") ==
          Approx(0.23168).margin(5e-4));
    CHECK(metric_value(result, "window_upper_over_pi") ==
          Approx(1.76832).margin(5e-4));
    CHECK(metric_value(result, "nbar_b1_phase_symmetry_residual") < 1e-9);
}

TEST_CASE("preset: phase valley across coupling strengths") {
    const auto result = reproduce(FigureId::fig4);
    CHECK(metric_value(result, "min_nbar_b2_G0p1") ==
          Approx(0.13498303).epsilon(1e-5));
    CHECK(metric_value(result, "min_nbar_b2_G0p3") ==
          Approx(0.023888457).epsilon(1e-5));
    CHECK(metric_value(result, "min_nbar_b2_G0p7") ==
          Approx(0.012550888).epsilon(1e-5));
    CHECK(metric_value(result, "min_nbar_b2_G1") ==
          Approx(0.011249886).epsilon(1e-5));
    for (const char* tag : {"G0p1", "G0p3", "G0p7", "G1"}) {
        CHECK(metric_value(result, std::string("argmin_phi_over_pi_") + tag) ==
              Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("preset: impedance matching across linewidth ratios") {
    const auto result = reproduce(FigureId::fig5);
    CHECK(metric_value(result, "argmin_G_ratio_k1") == Approx(0.5).margin(1e-9));
    CHECK(metric_value(result, "argmin_G_ratio_k0p75") ==
          Approx(0.6625).margin(1e-9));
    CHECK(metric_value(result, "argmin_G_ratio_k0p625") ==
          Approx(0.7875).margin(1e-9));
    CHECK(metric_value(result, "argmin_G_ratio_k0p5") ==
          Approx(0.9625).margin(1e-9));

    CHECK(metric_value(result, "min_nbar_b2_k1") ==
          Approx(0.059997).epsilon(1e-4));
    CHECK(metric_value(result, "min_nbar_b2_k0p75") ==
          Approx(0.058702).epsilon(1e-4));
    CHECK(metric_value(result, "min_nbar_b2_k0p625") ==
          Approx(0.060485).epsilon(1e-4));
    CHECK(metric_value(result, "min_nbar_b2_k0p5") ==
          Approx(0.069928).epsilon(1e-4));

    CHECK(metric_value(result, "dual_limit_b2_k1") ==
          Approx(0.059997).epsilon(1e-4));
    CHECK(metric_value(result, "dual_limit_b2_k0p5") ==
          Approx(0.054567).epsilon(1e-4));

    // Valley depth approaches the dual-cavity limit for mild asymmetry and
    // detaches from it at kappa1/kappa2 = 1/2.
    CHECK(metric_value(result, "valley_gap_rel_k1") < 1e-4);
    CHECK(metric_value(result, "valley_gap_rel_k0p75") ==
          Approx(0.0179).margin(2e-3));
    CHECK(metric_value(result, "valley_gap_rel_k0p625") ==
          Approx(0.0759).margin(2e-3));
    CHECK(metric_value(result, "valley_gap_rel_k0p5") ==
          Approx(0.2815).margin(5e-3));
}

TEST_CASE("preset: resonator detuning at open and closed loop phase") {
    const auto result = reproduce(FigureId::fig6);
    CHECK(metric_value(result, "nbar_b2_at_zero_detuning_phi0") ==
          Approx(25245.6).epsilon(1e-4));
    CHECK(metric_value(result, "max_nbar_b2_phi0") ==
          Approx(25245.6).epsilon(1e-4));
    CHECK(metric_value(result, "nbar_b2_at_zero_detuning_phipi") ==
          Approx(0.134983).epsilon(1e-5));
    // With the loop closed the protection is frequency independent: flat in
    // the resonator detuning.
    CHECK(metric_value(result, "max_nbar_b2_phipi") ==
          Approx(0.134983).epsilon(1e-4));
}

TEST_CASE("preset: hot-bath independence at the matching point") {
    const auto result = reproduce(FigureId::fig7);
    const double reference = 0.05999690016;
    for (const char* tag : {"m1000", "m10000", "m50000", "m100000"}) {
        CHECK(metric_value(result, std::string("nbar_b2_at_match_") + tag) ==
              Approx(reference).epsilon(1e-6));
    }
    CHECK(metric_value(result, "match_spread_rel") < 1e-9);

    // On the dark-mode comparison line the protection degrades with mbar1.
    CHECK(metric_value(result, "nbar_b2_at_dark_line_m1000") ==
          Approx(0.0881158).epsilon(1e-4));
    CHECK(metric_value(result, "nbar_b2_at_dark_line_m100000") ==
          Approx(1.67946).epsilon(1e-4));
}

TEST_CASE("preset: directional transfer in the detuned loop") {
    const auto result = reproduce(FigureId::fig8);
    CHECK(metric_value(result, "asymmetry_at_half_pi") ==
          Approx(-0.988872).margin(1e-5));
    CHECK(metric_value(result, "asymmetry_at_three_half_pi") ==
          Approx(0.988872).margin(1e-5));
    CHECK(metric_value(result, "min_asymmetry") ==
          Approx(-0.997090).margin(1e-5));
    CHECK(metric_value(result, "max_asymmetry") ==
          Approx(0.997090).margin(1e-5));
    CHECK(metric_value(result, "argmin_asymmetry_over_pi") ==
          Approx(0.5444).margin(1e-3));
    CHECK(metric_value(result, "nbar_b1_at_half_pi") ==
          Approx(23.598).epsilon(1e-4));
    CHECK(metric_value(result, "nbar_b2_at_three_half_pi") ==
          Approx(0.456082).epsilon(1e-4));
}

TEST_CASE("preset tables round-trip through CSV with their metrics") {
    const auto result = reproduce(FigureId::fig4);

    std::ostringstream out;
    write_sweep_csv(out, result.table, result.metrics);
    std::istringstream in(out.str());
    std::vector<Metric> metrics;
    const auto back = read_sweep_csv(in, &metrics);

    REQUIRE(back.rows.size() == result.table.rows.size());
    REQUIRE(metrics.size() == result.metrics.size());
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        CHECK(metrics[i].name == result.metrics[i].name);
        CHECK(metrics[i].value == result.metrics[i].value);
    }

    // Recomputing a metric from the stored table reproduces it bitwise.
    const auto phi = column_values(back, "loop_phase");
    const auto n2 = column_values(back, "nbar_b2");
    const auto G = column_values(back, "G");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < n2.size(); ++r) {
        if (G[r] == 1.0 && n2[r] < best) best = n2[r];
    }
    CHECK(best == metric_value(result, "min_nbar_b2_G1"));
}

TEST_CASE("reproduce is deterministic") {
    const auto a = reproduce(FigureId::fig6);
    const auto b = reproduce(FigureId::fig6);
    REQUIRE(a.metrics.size() == b.metrics.size());
    for (std::size_t i = 0; i < a.metrics.size(); ++i) {
        CHECK(a.metrics[i].value == b.metrics[i].value);
    }
    CHECK(a.table.rows == b.table.rows);
}
