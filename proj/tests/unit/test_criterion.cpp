#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "ibgsg/angles.hpp"
#include "ibgsg/criterion.hpp"
#include "ibgsg/energy.hpp"
#include "ibgsg/equilibria.hpp"
#include "ibgsg/errors.hpp"

using namespace ibgsg;

namespace {

ModelCoeffs synthetic(double a, double b, double phi) {
    ModelCoeffs c{};
    c.a = a;
    c.b = b;
    c.phi = phi;
    c.teq = 0.0036;
    c.omega_b = fixtures::kOmegaB;
    return c;
}

InitialState state_at(const ModelCoeffs& c, double delta_post, double domega_post) {
    return {0.0, delta_post, domega_post, 0.0, kinetic(c.teq, domega_post, c.omega_b)};
}

}  // namespace

TEST_CASE("pre-fault angle solves u_q = 0 on the stable branch") {
    const ReducedNetwork pre = reduce(fixtures::table1());
    for (const CurrentInjection inj : {CurrentInjection(0.8, 0.0), CurrentInjection(0.5, -0.3), CurrentInjection(0.2, 0.1)}) {
        const double delta = prefault_angle(pre, inj);
        CHECK(std::abs(pcc_voltage(pre, delta, inj).u_q) < 1e-14);
        CHECK(std::abs(delta) <= kPi / 2.0);
    }
    CHECK(prefault_angle(pre, CurrentInjection(0.8, 0.0)) == doctest::Approx(0.3145).epsilon(1e-3));
    CHECK_THROWS_AS(prefault_angle(pre, CurrentInjection(10.0, 0.0)), ValidationError);
}

TEST_CASE("pre-fault operating point balances the SG") {
    // P_m is the SG output at the pre-fault equilibrium with the rated active current.
    const ReducedNetwork pre = reduce(fixtures::table1());
    const CurrentInjection inj(0.8, 0.0);
    CHECK(sg_power(pre, prefault_angle(pre, inj), inj) == doctest::Approx(0.2465).epsilon(1e-4));
}

TEST_CASE("fault-instant jump preserves the PLL angle in the SG frame") {
    const ReducedNetwork pre = reduce(fixtures::table1());
    const ReducedNetwork fault = reduce(fixtures::table1(0.05));
    const PLLParams pll{1.0, 220.0};
    const CurrentInjection inj(0.0, -0.8);
    const ModelCoeffs c = smib_coefficients(fault, fixtures::sg(), pll, inj, fixtures::kOmegaB);
    const double delta_pre = prefault_angle(pre, CurrentInjection(0.8, 0.0));
    const InitialState s = initial_jump(pre, fault, delta_pre, pll, inj, c);
    // The PLL angle delta + phi_g is continuous across the switch.
    CHECK(s.delta_post + fault.phi_g() == doctest::Approx(delta_pre + pre.phi_g()).epsilon(1e-14));
    CHECK(s.delta_post == doctest::Approx(1.668).epsilon(1e-3));
    CHECK(s.u_q_post == doctest::Approx(pcc_voltage(fault, s.delta_post, inj).u_q));
    CHECK(s.domega_post == doctest::Approx(pll.kp * s.u_q_post));
    CHECK(s.domega_post < 0.0);
    CHECK(s.e_k_post == doctest::Approx(0.5 * c.omega_b * c.teq * s.domega_post * s.domega_post));
}

TEST_CASE("areas by hand") {
    const ModelCoeffs c = synthetic(-0.003, -0.017, 0.0);
    const EquilibriumSet eq = find_equilibria(c);
    const Areas s = areas(c, eq, 1.0);
    auto ep = [&](double x) { return -c.a * x + c.b * std::cos(x + c.phi); };
    CHECK(s.s1 == doctest::Approx(ep(eq.left_uep) - ep(eq.sep)));
    CHECK(s.s2 == doctest::Approx(ep(1.0) - ep(eq.sep)));
    CHECK(s.s3 == doctest::Approx(ep(eq.right_uep) - ep(1.0)));
    CHECK(s.s1 > 0.0);
    CHECK(s.s2 > 0.0);
    CHECK(s.s3 > 0.0);
    CHECK_THROWS_AS(areas(c, eq, eq.right_uep + 0.1), BeyondUepError);
    CHECK_THROWS_AS(areas(c, eq, eq.left_uep - 0.1), BeyondUepError);
    CHECK_THROWS_AS(areas(synthetic(0.04, -0.01, 0.0), find_equilibria(synthetic(0.04, -0.01, 0.0)), 0.0),
                    ValidationError);
}

TEST_CASE("verdicts for each branch") {
    SUBCASE("no SEP predicts LOS in the direction of a") {
        const ModelCoeffs c = synthetic(0.04, -0.016, 0.0);
        const auto v = assess(c, find_equilibria(c), state_at(c, 1.6, -0.01));
        CHECK(v.no_sep);
        CHECK_FALSE(v.stable_unified);
        CHECK(v.predicted_los == LosType::Accelerating);
        CHECK(std::isnan(v.s3));
        const ModelCoeffs neg = synthetic(-0.04, -0.016, 0.0);
        CHECK(assess(neg, find_equilibria(neg), state_at(neg, 1.6, -0.01)).predicted_los == LosType::Decelerating);
    }
    SUBCASE("beyond the right UEP") {
        const ModelCoeffs c = synthetic(0.01, -0.016, 0.0);
        const EquilibriumSet eq = find_equilibria(c);
        const auto v = assess(c, eq, state_at(c, eq.right_uep + 0.2, 0.0));
        CHECK(v.beyond_uep);
        CHECK(v.predicted_los == LosType::Accelerating);
    }
    SUBCASE("decelerating risk with small kinetic energy is stable") {
        const ModelCoeffs c = synthetic(-0.0029, -0.0173, 0.0);
        const auto v = assess(c, find_equilibria(c), state_at(c, 1.668, -0.0314));
        CHECK(v.risk == LosRisk::Decelerating);
        CHECK(v.stable_unified);
        CHECK(v.stable_type_specific);
        CHECK_FALSE(v.predicted_los.has_value());
    }
    SUBCASE("accelerating risk with kinetic energy above S3") {
        const ModelCoeffs c = synthetic(0.0134, -0.0168, 0.0);
        const auto v = assess(c, find_equilibria(c), state_at(c, 1.668, -0.5));
        CHECK(v.risk == LosRisk::Accelerating);
        CHECK(v.margin_accel < 0.0);
        CHECK(v.predicted_los == LosType::Accelerating);
    }
    SUBCASE("marginal a falls back to the unified verdict") {
        const ModelCoeffs c = synthetic(0.0, -0.0168, 0.0);
        const auto stable = assess(c, find_equilibria(c), state_at(c, 0.5, 0.0));
        CHECK(stable.risk == LosRisk::Marginal);
        CHECK(stable.stable_type_specific);
        const auto unstable = assess(c, find_equilibria(c), state_at(c, 0.5, 1.0));
        CHECK_FALSE(unstable.stable_type_specific);
        CHECK(unstable.predicted_los.has_value());
    }
}

TEST_CASE("unified and type-specific verdicts coincide away from a = 0") {
    // E_p(delta_1) - E_p(delta_2) = 2 a pi, so the smaller area is always the one facing a.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n = 0; n < 5000; ++n) {
        const double b = -0.01 - 0.01 * std::abs(u(rng));
        const ModelCoeffs c = synthetic(0.95 * std::abs(b) * u(rng), b, 0.05 * u(rng));
        const EquilibriumSet eq = find_equilibria(c);
        const double delta = eq.sep + (eq.right_uep - eq.sep) * u(rng);
        const auto v = assess(c, eq, state_at(c, delta, 0.05 * u(rng)));
        if (v.risk == LosRisk::Marginal || v.beyond_uep) continue;
        CHECK(v.stable_unified == v.stable_type_specific);
        const double facing = c.a > 0.0 ? v.s3 : v.s1 - v.s2;
        CHECK(std::min(v.s1 - v.s2, v.s3) == doctest::Approx(facing));
    }
}
