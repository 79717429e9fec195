#include "ibgsg/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ibgsg/energy.hpp"
#include "ibgsg/errors.hpp"

namespace ibgsg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

LosType type_from_sign(double a) { return a >= 0.0 ? LosType::Accelerating : LosType::Decelerating; }

}  // namespace

double prefault_angle(const ReducedNetwork& red_pre, const CurrentInjection& inj_pre) {
    const double drop_q = red_pre.z_eq_mag() * inj_pre.magnitude() * std::sin(inj_pre.angle() + red_pre.phi_z());
    if (drop_q == 0.0) return 0.0;
    const double ratio = red_pre.u_g() > 0.0 ? drop_q / red_pre.u_g() : std::numeric_limits<double>::infinity();
    if (!(std::abs(ratio) <= 1.0)) {
        throw ValidationError("no pre-fault equilibrium: |Z_eq I sin(phi_I + phi_Z)| exceeds U_g", "injections.prefault");
    }
    return std::asin(ratio);
}

InitialState initial_jump(const ReducedNetwork& red_pre, const ReducedNetwork& red_fault, double delta_pre,
                          const PLLParams& pll, const CurrentInjection& inj_fault, const ModelCoeffs& coeffs) {
    InitialState s{};
    s.delta_pre = delta_pre;
    s.delta_post = delta_pre + red_pre.phi_g() - red_fault.phi_g();
    s.u_q_post = pcc_voltage(red_fault, s.delta_post, inj_fault).u_q;
    s.domega_post = pll.kp * s.u_q_post;
    s.e_k_post = kinetic(coeffs.teq, s.domega_post, coeffs.omega_b);
    return s;
}

Areas areas(const ModelCoeffs& coeffs, const EquilibriumSet& eq, double delta_post) {
    if (!eq.exists) throw ValidationError("areas are undefined without a stable equilibrium");
    if (delta_post > eq.right_uep) throw BeyondUepError("initial angle beyond the right UEP", true);
    if (delta_post < eq.left_uep) throw BeyondUepError("initial angle beyond the left UEP", false);
    const double ep_sep = potential(coeffs, eq.sep, 0.0);
    const double ep_init = potential(coeffs, delta_post, 0.0);
    return {potential(coeffs, eq.left_uep, 0.0) - ep_sep, ep_init - ep_sep,
            potential(coeffs, eq.right_uep, 0.0) - ep_init};
}

CriterionVerdict assess(const ModelCoeffs& coeffs, const EquilibriumSet& eq, const InitialState& init) {
    CriterionVerdict v{};
    v.risk = classify_los_risk(coeffs.a);
    v.s1 = v.s2 = v.s3 = v.margin_decel = v.margin_accel = kNaN;

    if (!eq.exists) {
        v.no_sep = true;
        v.predicted_los = type_from_sign(coeffs.a);
        return v;
    }

    Areas s{};
    try {
        s = areas(coeffs, eq, init.delta_post);
    } catch (const BeyondUepError& e) {
        v.beyond_uep = true;
        v.predicted_los = e.past_right_uep() ? LosType::Accelerating : LosType::Decelerating;
        return v;
    }

    v.s1 = s.s1;
    v.s2 = s.s2;
    v.s3 = s.s3;
    v.margin_decel = (s.s1 - s.s2) - init.e_k_post;
    v.margin_accel = s.s3 - init.e_k_post;
    v.stable_unified = init.e_k_post < std::min(s.s1 - s.s2, s.s3);

    switch (v.risk) {
        case LosRisk::Accelerating:
            v.stable_type_specific = v.margin_accel > 0.0;
            if (!v.stable_type_specific) v.predicted_los = LosType::Accelerating;
            break;
        case LosRisk::Decelerating:
            v.stable_type_specific = v.margin_decel > 0.0;
            if (!v.stable_type_specific) v.predicted_los = LosType::Decelerating;
            break;
        case LosRisk::Marginal:
            v.stable_type_specific = v.stable_unified;
            if (!v.stable_type_specific) {
                v.predicted_los = v.margin_accel <= v.margin_decel ? LosType::Accelerating : LosType::Decelerating;
            }
            break;
    }
    return v;
}

}  // namespace ibgsg
