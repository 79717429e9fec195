#include "ibgsg/reduced_model.hpp"

#include <cmath>

#include "ibgsg/errors.hpp"

namespace ibgsg {

void SGParams::validate() const {
    if (!std::isfinite(inertia) || inertia <= 0.0) throw ValidationError("inertia must be positive", "sg.t_g");
    if (!std::isfinite(mech_power) || mech_power < 0.0) {
        throw ValidationError("mechanical power must be non-negative", "sg.p_m");
    }
    if (!std::isfinite(emf) || emf <= 0.0) throw ValidationError("must be positive", "topology.e_g");
}

void PLLParams::validate() const {
    if (!std::isfinite(kp) || kp < 0.0) throw ValidationError("must be non-negative", "pll.kp");
    if (!std::isfinite(ki) || ki <= 0.0) throw ValidationError("must be positive", "pll.ki");
}

CurrentInjection current_polar(double i_d, double i_q) { return CurrentInjection(i_d, i_q); }

GeneralModel::GeneralModel(const ReducedNetwork& red, const SGParams& sg, const PLLParams& pll,
                           const CurrentInjection& inj, double omega_b)
    : red_(red), sg_(sg), inj_(inj) {
    sg.validate();
    pll.validate();
    if (inj.i_q() == 0.0) {
        throw InapplicableModelError("zero reactive current: the PLL equivalent inertia is undefined");
    }
    tp_ = -inj.magnitude() * inj.sin_angle() / pll.ki;
    if (tp_ <= 0.0) {
        throw InapplicableModelError("positive i_q gives a negative PLL equivalent inertia");
    }
    alpha_ = sg.inertia / tp_;
    teq_ = tp_ * sg.inertia / (tp_ + sg.inertia);
    dp_coeff_ = -(pll.kp / pll.ki) * omega_b * red.u_g() * inj.magnitude() * inj.sin_angle();
}

double GeneralModel::relative_input_power(double delta) const {
    const double p_ref = ibg_power(red_, delta, inj_).reference;
    return (sg_.inertia * p_ref - tp_ * sg_.mech_power) / (tp_ + sg_.inertia);
}

double GeneralModel::relative_output_power(double delta) const {
    const double p_p = ibg_power(red_, delta, inj_).actual;
    const double p_g = sg_power(red_, delta, inj_);
    return (sg_.inertia * p_p - tp_ * p_g) / (tp_ + sg_.inertia);
}

double GeneralModel::damping(double delta) const {
    return sg_.inertia / (tp_ + sg_.inertia) * dp_coeff_ * std::cos(delta);
}

ModelCoeffs smib_coefficients(const ReducedNetwork& red_fault, const SGParams& sg, const PLLParams& pll,
                              const CurrentInjection& inj, double omega_b) {
    const GeneralModel general(red_fault, sg, pll, inj, omega_b);
    if (std::abs(inj.cos_angle()) >= 1e-9) {
        throw UnsupportedInjectionError("sine-form coefficients need a purely reactive fault current (i_d = 0)");
    }
    const double alpha = general.alpha();
    const double current = inj.magnitude();
    const double two_phi_g = 2.0 * red_fault.phi_g();

    ModelCoeffs c{};
    c.tp = general.tp();
    c.teq = general.teq();
    c.alpha = alpha;
    c.a = (-alpha * red_fault.z_eq_mag() * current * current * std::cos(red_fault.phi_z()) + red_fault.p_gs() -
           sg.mech_power) /
          (1.0 + alpha);
    c.b = -red_fault.u_g() * current / (1.0 + alpha) *
          std::hypot(alpha + std::cos(two_phi_g), std::sin(two_phi_g));
    c.phi = std::atan2(std::sin(two_phi_g), alpha + std::cos(two_phi_g));
    c.d = alpha / (1.0 + alpha) * (pll.kp / pll.ki) * omega_b * red_fault.u_g() * current;
    c.dp_coeff = general.dp_coeff();
    c.p_in_eq = -sg.mech_power / (1.0 + alpha);
    c.omega_b = omega_b;
    return c;
}

PowerShortages power_shortages(const ReducedNetwork& red_fault, const SGParams& sg, const CurrentInjection& inj,
                               const ModelCoeffs& coeffs) {
    const double current = inj.magnitude();
    const double z_eq = red_fault.z_eq_mag();
    const double phi_z = red_fault.phi_z();

    PowerShortages s{};
    s.p_ps = z_eq * current * current * std::cos(phi_z);
    const double p_ref_sg_removed = z_eq * current * current * std::cos(inj.angle() + phi_z) * inj.cos_angle();
    s.dp_ps = p_ref_sg_removed - s.p_ps;
    s.p_gs = red_fault.p_gs();
    s.dp_gs = sg.mech_power - s.p_gs;
    s.alpha_dp_ps = coeffs.alpha * s.dp_ps;
    return s;
}

double a_from_shortages(const PowerShortages& shortages, double alpha) {
    return (shortages.alpha_dp_ps - shortages.dp_gs) / (1.0 + alpha);
}

LosRisk classify_los_risk(double a) {
    if (a > kMarginalTolerance) return LosRisk::Accelerating;
    if (a < -kMarginalTolerance) return LosRisk::Decelerating;
    return LosRisk::Marginal;
}

const char* to_string(LosRisk risk) {
    switch (risk) {
        case LosRisk::Accelerating: return "accelerating";
        case LosRisk::Decelerating: return "decelerating";
        case LosRisk::Marginal: return "marginal";
    }
    return "unknown";
}

const char* to_string(LosType type) {
    return type == LosType::Accelerating ? "accelerating" : "decelerating";
}

}  // namespace ibgsg
