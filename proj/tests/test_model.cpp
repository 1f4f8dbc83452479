// ============================================================================
// Model layer: validation rules, linearization, plaquette topology, loop
// phase, gauge fixing, and bath thermometry.
// ============================================================================

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "omflow/model.hpp"
#include "test_helpers.hpp"

using namespace omflow;
using Catch::Approx;

TEST_CASE("linearize converts drive amplitudes to beam-splitter couplings") {
    std::vector<LinearizationInput> inputs(2);
    inputs[0].cavity = "a1";
    inputs[0].mechanical = "b1";
    inputs[0].single_photon_coupling = 0.02;
    inputs[0].cavity_amplitude = {3.0, 4.0};
    inputs[1].cavity = "a1";
    inputs[1].mechanical = "b2";
    inputs[1].single_photon_coupling = 0.05;
    inputs[1].cavity_amplitude = {0.0, 0.0};

    const auto couplings = linearize(inputs);
    REQUIRE(couplings.size() == 2);
    CHECK(couplings[0].cavity == "a1");
    CHECK(couplings[0].mechanical == "b1");
    CHECK(couplings[0].strength == Approx(0.1).epsilon(1e-12));
    CHECK(couplings[0].phase == Approx(std::atan2(4.0, 3.0)).epsilon(1e-12));
    CHECK(couplings[1].strength == 0.0);
    CHECK(couplings[1].phase == 0.0);
}

TEST_CASE("linearize wraps negative phases into [0, 2pi)") {
    std::vector<LinearizationInput> inputs(1);
    inputs[0].cavity = "a1";
    inputs[0].mechanical = "b1";
    inputs[0].single_photon_coupling = 1.0;
    inputs[0].cavity_amplitude = {0.0, -1.0};  // arg = -pi/2
    const auto couplings = linearize(inputs);
    CHECK(couplings[0].phase == Approx(1.5 * pi).epsilon(1e-12));
}

TEST_CASE("validate accepts a well-formed loop") {
    const auto model = testutil::flat_loop(0.1, pi, 1e3, 1e3);
    REQUIRE_NOTHROW(model.validate());
}

TEST_CASE("validate rejects structural violations") {
    SECTION("empty model") {
        NetworkModel model;
        CHECK_THROWS_AS(model.validate(), model_error);
    }
    SECTION("empty label") {
        auto model = testutil::flat_loop(0.1, 0.0, 0.0, 0.0);
        model.modes[0].label = "";
        CHECK_THROWS_AS(model.validate(), model_error);
    }
    SECTION("duplicate label") {
        auto model = testutil::flat_loop(0.1, 0.0, 0.0, 0.0);
        model.modes[1].label = "a1";
        CHECK_THROWS_AS(model.validate(), model_error);
    }
    SECTION("zero damping is rejected with a message naming the mode") {
        auto model = testutil::flat_loop(0.1, 0.0, 0.0, 0.0);
        model.mode("b1").damping = 0.0;
        CHECK_THROWS_WITH(model.validate(),
                          Catch::Matchers::ContainsSubstring("damping") &&
                              Catch::Matchers::ContainsSubstring("b1"));
    }
    SECTION("negative bath occupation") {
        auto model = testutil::flat_loop(0.1, 0.0, 0.0, 0.0);
        model.mode("b2").bath_occupation = -1.0;
        CHECK_THROWS_AS(model.validate(), model_error);
    }
    SECTION("non-finite damping") {
        auto model = testutil::flat_loop(0.1, 0.0, 0.0, 0.0);
        model.mode("a1").damping = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(model.validate(), model_error);
    }
    SECTION("negative coupling strength") {
        auto model = testutil::flat_loop(0.1, 0.0, 0.0, 0.0);
        model.couplings[2].strength = -0.1;
        CHECK_THROWS_AS(model.validate(), model_error);
    }
    SECTION("coupling endpoint with the wrong kind") {
        auto model = testutil::flat_loop(0.1, 0.0, 0.0, 0.0);
        model.couplings[0].cavity = "b2";
        CHECK_THROWS_AS(model.validate(), model_error);
    }
    SECTION("coupling to an unknown label") {
        auto model = testutil::flat_loop(0.1, 0.0, 0.0, 0.0);
        model.couplings[0].mechanical = "b9";
        CHECK_THROWS_AS(model.validate(), model_error);
    }
    SECTION("duplicate coupling") {
        auto model = testutil::flat_loop(0.1, 0.0, 0.0, 0.0);
        model.couplings.push_back(model.couplings[0]);
        CHECK_THROWS_AS(model.validate(), model_error);
    }
}

TEST_CASE("convention selects which detunings must vanish") {
    SECTION("both-resonant convention forbids optical detuning") {
        testutil::LoopParams p;
        p.optical_detuning = {0.1, 0.0};
        const auto model = testutil::make_loop(p);
        CHECK_THROWS_AS(model.validate(), model_error);
    }
    SECTION("both-resonant convention allows mechanical detuning") {
        testutil::LoopParams p;
        p.mech_detuning = {0.1, -0.2};
        CHECK_NOTHROW(testutil::make_loop(p).validate());
    }
    SECTION("cavity-detuned convention forbids mechanical detuning") {
        testutil::LoopParams p;
        p.convention = Convention::H2;
        p.mech_detuning = {0.1, 0.0};
        CHECK_THROWS_AS(testutil::make_loop(p).validate(), model_error);
    }
    SECTION("cavity-detuned convention allows optical detuning") {
        testutil::LoopParams p;
        p.convention = Convention::H2;
        p.optical_detuning = {0.0, 0.5};
        CHECK_NOTHROW(testutil::make_loop(p).validate());
    }
}

TEST_CASE("mode lookup by label") {
    const auto model = testutil::flat_loop(0.1, 0.0, 0.0, 0.0);
    CHECK(model.mode_index("a1") == 0);
    CHECK(model.mode_index("b2") == 3);
    CHECK_THROWS_AS(model.mode_index("c7"), model_error);
    CHECK(model.mode("b1").kind == ModeKind::mechanical);
    REQUIRE(model.coupling_index("a2", "b1").has_value());
    CHECK(*model.coupling_index("a2", "b1") == 2);
    CHECK_FALSE(model.coupling_index("a1", "zz").has_value());
}

TEST_CASE("plaquette_view resolves the four-mode loop") {
    testutil::LoopParams p;
    p.G = {{{0.11, 0.23}, {0.17, 0.29}}};
    p.phase = {{{0.3, 1.1}, {-0.4, 2.0}}};
    const auto model = testutil::make_loop(p);
    const auto view = plaquette_view(model);

    CHECK(view.optical[0] == 0);
    CHECK(view.optical[1] == 1);
    CHECK(view.mechanical[0] == 2);
    CHECK(view.mechanical[1] == 3);
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            CHECK(view.strength[j][k] ==
                  p.G[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]);
            CHECK(view.phase[j][k] ==
                  p.phase[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]);
        }
    }
}

TEST_CASE("plaquette_view rejects incomplete topologies") {
    SECTION("missing link") {
        auto model = testutil::flat_loop(0.1, 0.0, 0.0, 0.0);
        model.couplings.erase(model.couplings.begin() + 1);
        CHECK_THROWS_AS(plaquette_view(model), model_error);
    }
    SECTION("wrong mode count") {
        auto model = testutil::flat_loop(0.1, 0.0, 0.0, 0.0);
        model.modes.pop_back();
        CHECK_THROWS_AS(plaquette_view(model), model_error);
    }
}

TEST_CASE("loop_phase is the alternating sum around the plaquette") {
    SECTION("all phases zero") {
        CHECK(loop_phase(testutil::flat_loop(0.1, 0.0, 0.0, 0.0)) == 0.0);
    }
    SECTION("single pi on the a1-b1 link") {
        testutil::LoopParams p;
        p.phase[0][0] = pi;
        CHECK(loop_phase(testutil::make_loop(p)) == Approx(pi).epsilon(1e-12));
    }
    SECTION("worked example") {
        testutil::LoopParams p;
        p.phase = {{{0.3, 1.1}, {-0.4, 2.0}}};
        // phi12 + phi21 - phi11 - phi22 = 1.1 - 0.4 - 0.3 - 2.0 = -1.6
        CHECK(loop_phase(testutil::make_loop(p)) ==
              Approx(two_pi - 1.6).epsilon(1e-12));
    }
    SECTION("invariant under per-mode phase shifts") {
        testutil::LoopParams p;
        p.phase = {{{0.3, 1.1}, {-0.4, 2.0}}};
        const double reference = loop_phase(testutil::make_loop(p));

        // Shift every link touching cavity j by theta_j and every link
        // touching resonator k by mu_k; the loop combination cancels all.
        const double theta[2] = {0.7, -1.2};
        const double mu[2] = {2.5, 0.9};
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                p.phase[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] +=
                    theta[j] + mu[k];
            }
        }
        CHECK(loop_phase(testutil::make_loop(p)) == Approx(reference).margin(1e-12));
    }
}

TEST_CASE("gauge_fix concentrates the loop phase on the a2-b1 link") {
    testutil::LoopParams p;
    p.G = {{{0.11, 0.23}, {0.17, 0.29}}};
    p.phase = {{{0.3, 1.1}, {-0.4, 2.0}}};
    const auto model = testutil::make_loop(p);
    const double phi = loop_phase(model);

    const auto fixed = gauge_fix(model);
    const auto view = plaquette_view(fixed);
    CHECK(view.phase[0][0] == 0.0);
    CHECK(view.phase[0][1] == 0.0);
    CHECK(view.phase[1][1] == 0.0);
    CHECK(view.phase[1][0] == Approx(phi).margin(1e-12));
    CHECK(loop_phase(fixed) == Approx(phi).margin(1e-12));
    // Strengths and rates are untouched.
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            CHECK(view.strength[j][k] ==
                  p.G[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]);
        }
    }
    for (std::size_t i = 0; i < model.modes.size(); ++i) {
        CHECK(fixed.modes[i].damping == model.modes[i].damping);
        CHECK(fixed.modes[i].bath_occupation == model.modes[i].bath_occupation);
    }
}

TEST_CASE("thermal_occupation follows the Bose-Einstein distribution") {
    // 5 MHz resonator at 240 mK sits near 1000 quanta.
    const double n1 = thermal_occupation(two_pi * 5e6, 0.240);
    CHECK(n1 == Approx(999.6578018527).epsilon(1e-9));
    CHECK(std::abs(n1 / 1e3 - 1.0) < 0.05);

    // 1 MHz resonator at 4 K sits within 20% of 1e5 quanta.
    const double n2 = thermal_occupation(two_pi * 1e6, 4.0);
    CHECK(n2 == Approx(83345.9765453781).epsilon(1e-9));
    CHECK(std::abs(n2 / 1e5 - 1.0) < 0.20);

    CHECK(thermal_occupation(two_pi * 5e6, 0.0) == 0.0);
    CHECK_THROWS_AS(thermal_occupation(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(thermal_occupation(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(thermal_occupation(1.0, -0.1), std::domain_error);
}

TEST_CASE("wrap_angle maps onto [0, 2pi)") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(two_pi) == Approx(0.0).margin(1e-15));
    CHECK(wrap_angle(-0.5) == Approx(two_pi - 0.5).epsilon(1e-12));
    CHECK(wrap_angle(7.0 * pi) == Approx(pi).epsilon(1e-12));
    CHECK(wrap_angle(3.0) == 3.0);
}
