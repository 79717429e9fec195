#pragma once

// Fixed-step time-domain simulation of the IBG-SG pair.
//
// Full model (4 states): SG swing equation plus a PI PLL whose output speed is
// omega_p = omega_0 + K_p u_q + x_i, so the frequency jump at a fault comes
// out of the algebraic u_q discontinuity. Reduced model (2 states): the
// sine-form delta-power-frequency equation with the fault-instant jump applied
// explicitly.

#include <cmath>
#include <limits>
#include <optional>

#include "ibgsg/equilibria.hpp"
#include "ibgsg/errors.hpp"
#include "ibgsg/network.hpp"
#include "ibgsg/reduced_model.hpp"
#include "ibgsg/trajectory.hpp"

namespace ibgsg {

struct FullState {
    double theta_g;  ///< SG frame angle [rad]
    double omega_g;  ///< SG speed [pu]
    double theta_p;  ///< PLL frame angle [rad]
    double x_i;      ///< PLL integrator [pu]

    friend FullState operator+(const FullState& l, const FullState& r) {
        return {l.theta_g + r.theta_g, l.omega_g + r.omega_g, l.theta_p + r.theta_p, l.x_i + r.x_i};
    }
    friend FullState operator*(double k, const FullState& s) {
        return {k * s.theta_g, k * s.omega_g, k * s.theta_p, k * s.x_i};
    }
    [[nodiscard]] bool finite() const {
        return std::isfinite(theta_g) && std::isfinite(omega_g) && std::isfinite(theta_p) && std::isfinite(x_i);
    }
};

struct ReducedState {
    double delta;   ///< relative angle [rad]
    double domega;  ///< relative frequency [pu]

    friend ReducedState operator+(const ReducedState& l, const ReducedState& r) {
        return {l.delta + r.delta, l.domega + r.domega};
    }
    friend ReducedState operator*(double k, const ReducedState& s) { return {k * s.delta, k * s.domega}; }
    [[nodiscard]] bool finite() const { return std::isfinite(delta) && std::isfinite(domega); }
};

/// Network state and controls active for one topology.
struct FullContext {
    ReducedNetwork red;
    CurrentInjection inj;
    SGParams sg;
    PLLParams pll;
    double omega_b;
};

/// Algebraic outputs of the full model at a state.
struct FullOutputs {
    double delta;
    double u_q;
    double omega_p;
    double p_g;
    double p_p;
};

FullOutputs full_outputs(const FullState& state, const FullContext& ctx);

FullState derivatives_full(const FullState& state, const FullContext& ctx);

ReducedState derivatives_reduced(const ReducedState& state, const ModelCoeffs& coeffs, bool damping_enabled);

/// Classical fourth-order Runge-Kutta step. Throws ValidationError on dt <= 0
/// and IntegrationError when the input state is not finite.
template <class State, class Derivative>
State rk4_step(const State& x, Derivative&& f, double dt);

enum class ModelKind { Full, Reduced };

const char* to_string(ModelKind kind);

struct SimConfig {
    double dt = 1e-4;
    double t_end = 3.0;
    double t_fault = 0.5;
    ModelKind model = ModelKind::Full;
    bool damping_enabled = true;
    /// When false the pre-fault topology is held for the whole horizon.
    bool apply_fault = true;
    /// Stop at the first LOS event instead of running to t_end.
    bool stop_on_los = false;
    /// Keep every sample; when false only the final sample is retained.
    bool record = true;

    void validate() const;
    [[nodiscard]] long steps() const;
    /// Index of the first fault-on sample (t_fault rounded to the step grid).
    [[nodiscard]] long fault_step() const;
};

struct LosEvent {
    LosType type;
    double time;
};

struct SimResult {
    Trajectory trajectory;
    std::optional<LosEvent> los;
    TrajectorySample final_state;
};

/// Everything a fault-on study needs besides the integration settings.
struct FaultStudy {
    double omega_b;
    SGParams sg;
    PLLParams pll;
    ReducedNetwork pre;
    ReducedNetwork fault;
    CurrentInjection inj_pre;
    CurrentInjection inj_fault;
};

inline constexpr double kLosMargin = 1e-3;

/// LOS test for one fault-on sample. Without an SEP, one full revolution away
/// from delta_0+ counts as LOS in the direction of travel.
std::optional<LosEvent> detect_los(const TrajectorySample& sample, const EquilibriumSet& eq, double delta_post);

SimResult simulate(const FaultStudy& study, const SimConfig& config);

/// Integrates the sine-form model from `initial` for `duration` seconds.
/// Only t, delta, domega and the energy columns are filled; the rest are NaN.
Trajectory integrate_reduced(const ModelCoeffs& coeffs, const ReducedState& initial, double duration, double dt,
                             bool damping_enabled);

// ---------------------------------------------------------------------------

template <class State, class Derivative>
State rk4_step(const State& x, Derivative&& f, double dt) {
    if (!(dt > 0.0)) throw ValidationError("time step must be positive", "sim.dt");
    if (!x.finite()) throw IntegrationError("non-finite state", std::numeric_limits<double>::quiet_NaN());
    const State k1 = f(x);
    const State k2 = f(x + (0.5 * dt) * k1);
    const State k3 = f(x + (0.5 * dt) * k2);
    const State k4 = f(x + dt * k3);
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace ibgsg
