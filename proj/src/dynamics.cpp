#include "ibgsg/dynamics.hpp"

#include <cmath>
#include <limits>

#include "ibgsg/angles.hpp"
#include "ibgsg/criterion.hpp"
#include "ibgsg/energy.hpp"

namespace ibgsg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Per-topology constants hoisted out of the derivative evaluation.
struct Compiled {
    double u_g;
    double phi_g;
    double phi_i;
    double drop_q;       // Z_eq I sin(phi_I + phi_Z)
    double p_gs;
    double u_g_i;        // U_g I
    double p_p_const;    // Z_eq I^2 cos(phi_Z)
    double kp;
    double ki;
    double tg;
    double pm;
    double omega_b;

    explicit Compiled(const FullContext& ctx)
        : u_g(ctx.red.u_g()),
          phi_g(ctx.red.phi_g()),
          phi_i(ctx.inj.angle()),
          drop_q(ctx.red.z_eq_mag() * ctx.inj.magnitude() * std::sin(ctx.inj.angle() + ctx.red.phi_z())),
          p_gs(ctx.red.p_gs()),
          u_g_i(ctx.red.u_g() * ctx.inj.magnitude()),
          p_p_const(ctx.red.z_eq_mag() * ctx.inj.magnitude() * ctx.inj.magnitude() * std::cos(ctx.red.phi_z())),
          kp(ctx.pll.kp),
          ki(ctx.pll.ki),
          tg(ctx.sg.inertia),
          pm(ctx.sg.mech_power),
          omega_b(ctx.omega_b) {}

    [[nodiscard]] FullOutputs outputs(const FullState& s) const {
        FullOutputs o{};
        o.delta = s.theta_p - s.theta_g - phi_g;
        o.u_q = -u_g * std::sin(o.delta) + drop_q;
        o.omega_p = BaseQuantities::omega_0() + kp * o.u_q + s.x_i;
        o.p_g = p_gs - u_g_i * std::cos(o.delta + 2.0 * phi_g + phi_i);
        o.p_p = u_g_i * std::cos(o.delta + phi_i) + p_p_const;
        return o;
    }

    [[nodiscard]] FullState derivative(const FullState& s) const {
        const double delta = s.theta_p - s.theta_g - phi_g;
        const double u_q = -u_g * std::sin(delta) + drop_q;
        const double omega_p = BaseQuantities::omega_0() + kp * u_q + s.x_i;
        const double p_g = p_gs - u_g_i * std::cos(delta + 2.0 * phi_g + phi_i);
        return {omega_b * (s.omega_g - BaseQuantities::omega_0()), (pm - p_g) / tg,
                omega_b * (omega_p - BaseQuantities::omega_0()), ki * u_q};
    }
};

// Reduced state plus the SG speed and the dissipated energy, both integrated
// alongside for output only; neither feeds back into (delta, dw).
struct ReducedWithSpeed {
    double delta;
    double domega;
    double omega_g;
    double e_dis;

    friend ReducedWithSpeed operator+(const ReducedWithSpeed& l, const ReducedWithSpeed& r) {
        return {l.delta + r.delta, l.domega + r.domega, l.omega_g + r.omega_g, l.e_dis + r.e_dis};
    }
    friend ReducedWithSpeed operator*(double k, const ReducedWithSpeed& s) {
        return {k * s.delta, k * s.domega, k * s.omega_g, k * s.e_dis};
    }
    [[nodiscard]] bool finite() const {
        return std::isfinite(delta) && std::isfinite(domega) && std::isfinite(omega_g) && std::isfinite(e_dis);
    }
};

// Full state plus the dissipated energy.
struct FullWithDissipation {
    FullState x;
    double e_dis;

    friend FullWithDissipation operator+(const FullWithDissipation& l, const FullWithDissipation& r) {
        return {l.x + r.x, l.e_dis + r.e_dis};
    }
    friend FullWithDissipation operator*(double k, const FullWithDissipation& s) { return {k * s.x, k * s.e_dis}; }
    [[nodiscard]] bool finite() const { return x.finite() && std::isfinite(e_dis); }
};

// Rate of dE_dis = d cos(delta) dw d(delta), with d(delta)/dt = omega_b dw.
double dissipation_rate(const ModelCoeffs& c, double delta, double domega) {
    return c.d * std::cos(delta) * domega * c.omega_b * domega;
}

void fill_energy(TrajectorySample& s, const ModelCoeffs& coeffs, double reference, double e_dis) {
    const EnergyBreakdown e = energy_at(coeffs, reference, s.delta, s.domega, e_dis);
    s.e_k = e.kinetic;
    s.e_p = e.potential;
    s.e_dis = e.dissipation;
    s.v = e.total;
}

void check_finite(const TrajectorySample& s, double last_valid) {
    if (!std::isfinite(s.delta) || !std::isfinite(s.domega) || !std::isfinite(s.omega_g)) {
        throw IntegrationError("integration produced a non-finite state", last_valid);
    }
}

}  // namespace

FullOutputs full_outputs(const FullState& state, const FullContext& ctx) { return Compiled(ctx).outputs(state); }

FullState derivatives_full(const FullState& state, const FullContext& ctx) {
    return Compiled(ctx).derivative(state);
}

ReducedState derivatives_reduced(const ReducedState& state, const ModelCoeffs& coeffs, bool damping_enabled) {
    double accel = coeffs.a + coeffs.b * std::sin(state.delta + coeffs.phi);
    if (damping_enabled) accel -= coeffs.d * std::cos(state.delta) * state.domega;
    return {coeffs.omega_b * state.domega, accel / coeffs.teq};
}

const char* to_string(ModelKind kind) { return kind == ModelKind::Full ? "full" : "reduced"; }

void SimConfig::validate() const {
    if (!std::isfinite(dt) || dt <= 0.0 || dt > 1e-3) throw ValidationError("must satisfy 0 < dt <= 1e-3", "sim.dt");
    if (!std::isfinite(t_end) || t_end <= 0.0) throw ValidationError("must be positive", "sim.t_end");
    if (!std::isfinite(t_fault) || t_fault < 0.0 || t_fault >= t_end) {
        throw ValidationError("must satisfy 0 <= t_fault < t_end", "sim.t_fault");
    }
    if (model == ModelKind::Full && !damping_enabled) {
        throw ValidationError("damping can only be disabled in the reduced model", "sim.damping");
    }
}

long SimConfig::steps() const { return std::lround(t_end / dt); }

long SimConfig::fault_step() const { return std::lround(t_fault / dt); }

std::optional<LosEvent> detect_los(const TrajectorySample& sample, const EquilibriumSet& eq, double delta_post) {
    if (eq.exists) {
        if (sample.delta > eq.right_uep + kLosMargin) return LosEvent{LosType::Accelerating, sample.t};
        if (sample.delta < eq.left_uep - kLosMargin) return LosEvent{LosType::Decelerating, sample.t};
        return std::nullopt;
    }
    const double travel = sample.delta - delta_post;
    if (travel > kTwoPi) return LosEvent{LosType::Accelerating, sample.t};
    if (travel < -kTwoPi) return LosEvent{LosType::Decelerating, sample.t};
    return std::nullopt;
}

SimResult simulate(const FaultStudy& study, const SimConfig& config) {
    config.validate();
    const ModelCoeffs coeffs = smib_coefficients(study.fault, study.sg, study.pll, study.inj_fault, study.omega_b);
    const EquilibriumSet eq = find_equilibria(coeffs);
    const double delta_pre = prefault_angle(study.pre, study.inj_pre);
    const InitialState init = initial_jump(study.pre, study.fault, delta_pre, study.pll, study.inj_fault, coeffs);

    const FullContext pre_ctx{study.pre, study.inj_pre, study.sg, study.pll, study.omega_b};
    const FullContext fault_ctx{study.fault, study.inj_fault, study.sg, study.pll, study.omega_b};
    const Compiled pre(pre_ctx);
    const Compiled fault(fault_ctx);

    const long n_steps = config.steps();
    const long n_fault = config.apply_fault ? config.fault_step() : n_steps + 1;
    const double dt = config.dt;

    SimResult result;
    result.trajectory.dt = dt;
    if (config.record) result.trajectory.samples.reserve(static_cast<std::size_t>(n_steps + 1));

    const double reference = potential_reference(coeffs, eq);

    // Returns true when the run should stop.
    auto emit = [&](TrajectorySample s, long k, double e_dis) {
        const bool fault_on = k >= n_fault;
        fill_energy(s, coeffs, reference, e_dis);
        if (config.record) result.trajectory.samples.push_back(s);
        result.final_state = s;
        if (fault_on && !result.los) {
            result.los = detect_los(s, eq, init.delta_post);
            if (result.los && config.stop_on_los) return true;
        }
        return false;
    };

    if (config.model == ModelKind::Full) {
        FullWithDissipation state{{0.0, BaseQuantities::omega_0(), delta_pre + study.pre.phi_g(), 0.0}, 0.0};
        for (long k = 0; k <= n_steps; ++k) {
            const double t = static_cast<double>(k) * dt;
            const bool fault_on = k >= n_fault;
            const Compiled& active = fault_on ? fault : pre;
            const FullOutputs out = active.outputs(state.x);
            TrajectorySample s{t, out.delta, out.omega_p - state.x.omega_g, state.x.omega_g, out.omega_p,
                               out.p_g, out.p_p, out.u_q, 0.0, 0.0, 0.0, 0.0};
            check_finite(s, k > 0 ? t - dt : 0.0);
            if (emit(s, k, state.e_dis) || k == n_steps) break;
            const bool accumulate = fault_on && config.damping_enabled;
            state = rk4_step(
                state,
                [&](const FullWithDissipation& y) {
                    FullWithDissipation dy{active.derivative(y.x), 0.0};
                    if (accumulate) {
                        const FullOutputs o = active.outputs(y.x);
                        dy.e_dis = dissipation_rate(coeffs, o.delta, o.omega_p - y.x.omega_g);
                    }
                    return dy;
                },
                dt);
        }
        return result;
    }

    ReducedWithSpeed state{delta_pre, 0.0, BaseQuantities::omega_0(), 0.0};
    for (long k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const bool fault_on = k >= n_fault;
        if (k == n_fault) {
            state.delta = init.delta_post;
            state.domega = init.domega_post;
        }
        const Compiled& active = fault_on ? fault : pre;
        const double u_q = -active.u_g * std::sin(state.delta) + active.drop_q;
        const double p_g = active.p_gs - active.u_g_i * std::cos(state.delta + 2.0 * active.phi_g + active.phi_i);
        const double p_p = active.u_g_i * std::cos(state.delta + active.phi_i) + active.p_p_const;
        TrajectorySample s{t, state.delta, state.domega, state.omega_g, state.omega_g + state.domega,
                           p_g, p_p, u_q, 0.0, 0.0, 0.0, 0.0};
        check_finite(s, k > 0 ? t - dt : 0.0);
        if (emit(s, k, state.e_dis) || k == n_steps) break;
        if (!fault_on) continue;  // pre-fault equilibrium is held
        state = rk4_step(
            state,
            [&](const ReducedWithSpeed& x) {
                const ReducedState r = derivatives_reduced({x.delta, x.domega}, coeffs, config.damping_enabled);
                const double pg = fault.p_gs - fault.u_g_i * std::cos(x.delta + 2.0 * fault.phi_g + fault.phi_i);
                const double de = config.damping_enabled ? dissipation_rate(coeffs, x.delta, x.domega) : 0.0;
                return ReducedWithSpeed{r.delta, r.domega, (fault.pm - pg) / fault.tg, de};
            },
            dt);
    }
    return result;
}

Trajectory integrate_reduced(const ModelCoeffs& coeffs, const ReducedState& initial, double duration, double dt,
                             bool damping_enabled) {
    if (!(dt > 0.0)) throw ValidationError("time step must be positive", "sim.dt");
    if (!(duration > 0.0)) throw ValidationError("duration must be positive", "sim.t_end");
    const double reference = potential_reference(coeffs, find_equilibria(coeffs));

    const long n_steps = std::lround(duration / dt);
    Trajectory traj;
    traj.dt = dt;
    traj.samples.reserve(static_cast<std::size_t>(n_steps + 1));
    ReducedWithSpeed state{initial.delta, initial.domega, 0.0, 0.0};
    for (long k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        TrajectorySample s{t, state.delta, state.domega, kNaN, kNaN, kNaN, kNaN, kNaN, 0.0, 0.0, 0.0, 0.0};
        if (!state.finite()) throw IntegrationError("integration produced a non-finite state", t - dt);
        fill_energy(s, coeffs, reference, state.e_dis);
        traj.samples.push_back(s);
        if (k == n_steps) break;
        state = rk4_step(
            state,
            [&](const ReducedWithSpeed& x) {
                const ReducedState r = derivatives_reduced({x.delta, x.domega}, coeffs, damping_enabled);
                const double de = damping_enabled ? dissipation_rate(coeffs, x.delta, x.domega) : 0.0;
                return ReducedWithSpeed{r.delta, r.domega, 0.0, de};
            },
            dt);
    }
    return traj;
}

}  // namespace ibgsg
