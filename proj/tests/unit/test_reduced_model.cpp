#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "ibgsg/dynamics.hpp"
#include "ibgsg/errors.hpp"
#include "ibgsg/reduced_model.hpp"

using namespace ibgsg;

namespace {

ModelCoeffs case_coeffs(double ki, double kp, double tg, double rf_ohm) {
    const ReducedNetwork red = reduce(fixtures::table1(rf_ohm));
    return smib_coefficients(red, fixtures::sg(tg), PLLParams{kp, ki}, CurrentInjection(0.0, -0.8), fixtures::kOmegaB);
}

}  // namespace

TEST_CASE("parameter validation carries field paths") {
    try {
        PLLParams{1.0, 0.0}.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "pll.ki");
    }
    try {
        SGParams{-1.0, 0.2, 1.0}.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "sg.t_g");
    }
    CHECK_THROWS_AS(PLLParams({-0.1, 10.0}).validate(), ValidationError);
}

TEST_CASE("model applicability") {
    const ReducedNetwork red = reduce(fixtures::table1(0.05));
    const PLLParams pll{1.0, 50.0};
    CHECK_THROWS_AS(smib_coefficients(red, fixtures::sg(), pll, CurrentInjection(0.8, 0.0), fixtures::kOmegaB),
                    InapplicableModelError);
    CHECK_THROWS_AS(smib_coefficients(red, fixtures::sg(), pll, CurrentInjection(0.0, 0.8), fixtures::kOmegaB),
                    InapplicableModelError);
    CHECK_THROWS_AS(smib_coefficients(red, fixtures::sg(), pll, CurrentInjection(0.3, -0.7), fixtures::kOmegaB),
                    UnsupportedInjectionError);
    CHECK_NOTHROW(GeneralModel(red, fixtures::sg(), pll, CurrentInjection(0.3, -0.7), fixtures::kOmegaB));
}

TEST_CASE("inertia split for a purely reactive fault current") {
    const ModelCoeffs c = case_coeffs(220.0, 1.0, 0.8, 0.05);
    CHECK(c.tp == doctest::Approx(0.8 / 220.0));
    CHECK(c.alpha == doctest::Approx(220.0));
    CHECK(c.teq == doctest::Approx(c.tp * 0.8 / (c.tp + 0.8)));
    // T_eq is below both inertias.
    CHECK(c.teq < c.tp);
    CHECK(c.b < 0.0);
    CHECK(c.d > 0.0);
}

TEST_CASE("sine form reproduces the general relative powers and damping") {
    const ReducedNetwork red = reduce(fixtures::table1(0.05));
    for (double ki : {22.0, 50.0, 220.0}) {
        const PLLParams pll{0.02 * ki, ki};
        const CurrentInjection inj(0.0, -0.8);
        const GeneralModel general(red, fixtures::sg(), pll, inj, fixtures::kOmegaB);
        const ModelCoeffs c = smib_coefficients(red, fixtures::sg(), pll, inj, fixtures::kOmegaB);
        for (double delta = -6.0; delta <= 6.0; delta += 0.25) {
            const double general_net = general.relative_input_power(delta) - general.relative_output_power(delta);
            CHECK(c.a + c.b * std::sin(delta + c.phi) == doctest::Approx(general_net).epsilon(1e-12));
            CHECK(c.d * std::cos(delta) == doctest::Approx(general.damping(delta)).epsilon(1e-12));
            CHECK(general.relative_input_power(delta) == doctest::Approx(c.p_in_eq).epsilon(1e-12));
        }
    }
}

TEST_CASE("reduced acceleration equals the full-model acceleration of omega_p - omega_g") {
    // Oracle: central finite difference of omega_p - omega_g along the full vector field.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 50; ++n) {
        const double ki = 20.0 + 300.0 * u(rng);
        const double kp = ki * (0.005 + 0.045 * u(rng));
        const double tg = 0.5 + 1.5 * u(rng);
        const double rf = 0.02 + 0.5 * u(rng);
        const double current = 0.2 + u(rng);
        const ReducedNetwork red = reduce(fixtures::table1(rf));
        const SGParams sg = fixtures::sg(tg);
        const PLLParams pll{kp, ki};
        const CurrentInjection inj(0.0, -current);
        const ModelCoeffs c = smib_coefficients(red, sg, pll, inj, fixtures::kOmegaB);
        const FullContext ctx{red, inj, sg, pll, fixtures::kOmegaB};

        const FullState x{-1.0 + 2.0 * u(rng), 0.98 + 0.04 * u(rng), -3.0 + 6.0 * u(rng), -0.05 + 0.1 * u(rng)};
        const FullOutputs out = full_outputs(x, ctx);
        const double domega = out.omega_p - x.omega_g;

        const FullState f = derivatives_full(x, ctx);
        const double h = 1e-6;
        auto relative_speed = [&](const FullState& s) { return full_outputs(s, ctx).omega_p - s.omega_g; };
        const double fd = (relative_speed(x + h * f) - relative_speed(x + (-h) * f)) / (2.0 * h);

        const ReducedState r = derivatives_reduced({out.delta, domega}, c, true);
        CHECK(r.delta == doctest::Approx(f.theta_p - f.theta_g).epsilon(1e-12));
        CHECK(r.domega == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("a rebuilt from the power shortages") {
    for (double rf : {0.02, 0.05, 0.12, 0.5}) {
        for (double ki : {22.0, 50.0, 220.0}) {
            const ReducedNetwork red = reduce(fixtures::table1(rf));
            const CurrentInjection inj(0.0, -0.8);
            const ModelCoeffs c = smib_coefficients(red, fixtures::sg(), {1.0, ki}, inj, fixtures::kOmegaB);
            const PowerShortages s = power_shortages(red, fixtures::sg(), inj, c);
            CHECK(a_from_shortages(s, c.alpha) == doctest::Approx(c.a).epsilon(1e-12));
            CHECK(s.alpha_dp_ps == doctest::Approx(c.alpha * s.dp_ps));
            // With the SG removed the reactive IBG draws no reference power, so its shortage is -P_ps.
            CHECK(s.dp_ps == doctest::Approx(-s.p_ps));
            CHECK(s.dp_gs == doctest::Approx(0.2465 - red.p_gs()));
        }
    }
}

TEST_CASE("LOS risk follows the sign of a with a marginal band") {
    CHECK(classify_los_risk(1e-3) == LosRisk::Accelerating);
    CHECK(classify_los_risk(-1e-3) == LosRisk::Decelerating);
    CHECK(classify_los_risk(0.0) == LosRisk::Marginal);
    CHECK(classify_los_risk(5e-10) == LosRisk::Marginal);
    CHECK(std::string(to_string(LosRisk::Accelerating)) == "accelerating");
    CHECK(std::string(to_string(LosType::Decelerating)) == "decelerating");
}

TEST_CASE("raising alpha moves a toward the IBG shortage") {
    // a(alpha) = (alpha dP_ps - dP_gs)/(1 + alpha) is monotone in alpha with the sign of dP_ps + dP_gs.
    const double a22 = case_coeffs(22.0, 0.44, 0.8, 0.05).a;
    const double a50 = case_coeffs(50.0, 1.0, 0.8, 0.05).a;
    const double a220 = case_coeffs(220.0, 1.0, 0.8, 0.05).a;
    CHECK(a22 > a50);
    CHECK(a50 > a220);
    CHECK(a22 > 0.0);
    CHECK(a220 < 0.0);
}
