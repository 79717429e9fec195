#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "ibgsg/angles.hpp"
#include "ibgsg/dynamics.hpp"
#include "ibgsg/energy.hpp"
#include "ibgsg/equilibria.hpp"
#include "ibgsg/errors.hpp"

using namespace ibgsg;

namespace {

ModelCoeffs synthetic(double a, double b, double phi, double d = 0.0) {
    ModelCoeffs c{};
    c.a = a;
    c.b = b;
    c.phi = phi;
    c.d = d;
    c.teq = 0.0036;
    c.omega_b = fixtures::kOmegaB;
    return c;
}

TrajectorySample sample(double delta, double domega) {
    TrajectorySample s{};
    s.delta = delta;
    s.domega = domega;
    return s;
}

}  // namespace

TEST_CASE("kinetic energy") {
    CHECK(kinetic(0.01, 0.0, fixtures::kOmegaB) == 0.0);
    CHECK(kinetic(0.01, -0.03, 100.0) == doctest::Approx(0.5 * 100.0 * 0.01 * 0.0009));
}

TEST_CASE("potential is the negative antiderivative of the accelerating power") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n = 0; n < 200; ++n) {
        const ModelCoeffs c = synthetic(0.02 * u(rng), -0.02 - 0.01 * std::abs(u(rng)), 0.1 * u(rng));
        const double delta = 4.0 * u(rng);
        const double h = 1e-5;
        const double fd = (potential(c, delta + h, 0.0) - potential(c, delta - h, 0.0)) / (2.0 * h);
        CHECK(fd == doctest::Approx(-sine_form_residual(c, delta)).epsilon(1e-7));
    }
}

TEST_CASE("potential reference zeroes the SEP") {
    const ModelCoeffs c = synthetic(-0.0029, -0.0173, 0.005);
    const EquilibriumSet eq = find_equilibria(c);
    const double lambda = potential_reference(c, eq);
    CHECK(std::abs(potential(c, eq.sep, lambda)) < 1e-15);
    // The SEP is a strict local minimum.
    CHECK(potential(c, eq.sep + 0.01, lambda) > 0.0);
    CHECK(potential(c, eq.sep - 0.01, lambda) > 0.0);
    CHECK(potential_reference(synthetic(0.04, -0.016, 0.0), find_equilibria(synthetic(0.04, -0.016, 0.0))) == 0.0);
}

TEST_CASE("UEP kinetic change is 2 a pi") {
    for (double a : {-0.01, -0.0029, 0.0, 0.0134}) {
        const ModelCoeffs c = synthetic(a, -0.0168, 0.01);
        const EquilibriumSet eq = find_equilibria(c);
        // Undamped: E_k,2 - E_k,1 = E_p(delta_1) - E_p(delta_2).
        const double drop = potential(c, eq.left_uep, 0.0) - potential(c, eq.right_uep, 0.0);
        CHECK(uep_kinetic_delta(c) == doctest::Approx(2.0 * a * kPi).epsilon(1e-14));
        CHECK(drop == doctest::Approx(uep_kinetic_delta(c)).epsilon(1e-12));
    }
}

TEST_CASE("energy breakdown sums its parts") {
    const ModelCoeffs c = synthetic(0.01, -0.02, 0.02);
    const EnergyBreakdown e = energy_at(c, 0.3, 0.7, -0.02, 0.004);
    CHECK(e.kinetic == doctest::Approx(kinetic(c.teq, -0.02, c.omega_b)));
    CHECK(e.potential == doctest::Approx(potential(c, 0.7, 0.3)));
    CHECK(e.total == doctest::Approx(e.kinetic + e.potential + e.dissipation));
    CHECK(e.reference == 0.3);
}

TEST_CASE("dissipation quadrature against an analytic path") {
    // delta from 0 to 1 at constant dw = 0.5: d * 0.5 * sin(1).
    const double d = 0.7;
    std::vector<TrajectorySample> path;
    const int n = 2000;
    for (int i = 0; i <= n; ++i) path.push_back(sample(static_cast<double>(i) / n, 0.5));
    CHECK(dissipation_along(path, d) == doctest::Approx(d * 0.5 * std::sin(1.0)).epsilon(1e-7));

    // dw = delta on [0, pi/2]: d * integral of x cos x = d (pi/2 - 1).
    path.clear();
    for (int i = 0; i <= n; ++i) {
        const double x = kPi / 2.0 * i / n;
        path.push_back(sample(x, x));
    }
    CHECK(dissipation_along(path, d) == doctest::Approx(d * (kPi / 2.0 - 1.0)).epsilon(1e-6));

    CHECK_THROWS_AS(dissipation_along(std::span<const TrajectorySample>(path.data(), 1), d), ValidationError);
}

TEST_CASE("undamped reduced motion conserves V") {
    const ModelCoeffs c = synthetic(-0.0029, -0.0173, 0.005, 0.0);
    const Trajectory traj = integrate_reduced(c, {1.668, -0.0314}, 2.0, 1e-4, false);
    const double v0 = traj.samples.front().v;
    double drift = 0.0;
    for (const auto& s : traj.samples) drift = std::max(drift, std::abs(s.v - v0));
    CHECK(drift / std::abs(v0) < 1e-6);
}

TEST_CASE("damped accounting E_k + E_p + dE_dis is conserved and dissipation grows") {
    const ModelCoeffs c = synthetic(-0.0029, -0.0173, 0.005, 0.02);
    const Trajectory traj = integrate_reduced(c, {1.0, -0.02}, 2.0, 1e-4, true);
    const double v0 = traj.samples.front().v;
    double drift = 0.0;
    for (const auto& s : traj.samples) drift = std::max(drift, std::abs(s.v - v0));
    CHECK(drift / std::abs(v0) < 1e-6);
    CHECK(traj.samples.back().e_dis > 0.0);
    CHECK(traj.samples.back().e_k + traj.samples.back().e_p < v0);
}
