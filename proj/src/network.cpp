#include "ibgsg/network.hpp"

#include <cmath>

#include "ibgsg/angles.hpp"
#include "ibgsg/errors.hpp"

namespace ibgsg {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

Complex parallel(Complex a, Complex b) {
    const Complex sum = a + b;
    if (std::abs(sum) == 0.0) throw ValidationError("parallel combination with zero total impedance");
    return a * b / sum;
}

}  // namespace

BaseQuantities::BaseQuantities(double power_va, double voltage_v, double omega_b)
    : power_va_(power_va), voltage_v_(voltage_v), omega_b_(omega_b) {
    if (!positive_finite(power_va)) throw ValidationError("must be positive", "base.s_b");
    if (!positive_finite(voltage_v)) throw ValidationError("must be positive", "base.u_b");
    if (!positive_finite(omega_b)) throw ValidationError("must be positive", "base.omega_b");
}

Polar to_polar(Complex z) { return {std::abs(z), normalize_angle(std::arg(z))}; }

double ohms_to_pu(double ohms, const BaseQuantities& base) {
    if (!(ohms >= 0.0) || !std::isfinite(ohms)) throw ValidationError("resistance must be non-negative");
    return ohms / base.impedance_ohm();
}

double pu_to_ohms(double pu, const BaseQuantities& base) {
    if (!(pu >= 0.0) || !std::isfinite(pu)) throw ValidationError("resistance must be non-negative");
    return pu * base.impedance_ohm();
}

void NetworkTopology::validate() const {
    if (!positive_finite(emf)) throw ValidationError("must be positive", "topology.e_g");
    for (auto [z, name] : {std::pair{z_g, "topology.z_g"}, {z_p, "topology.z_p"}, {z_l, "topology.z_l"}}) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ValidationError("must be finite", name);
    }
    if (std::abs(z_l) == 0.0) throw ValidationError("load impedance must be non-zero", "topology.z_l");
    if (std::abs(z_g + z_l) == 0.0) throw ValidationError("|Z_g + Z_l| must be non-zero", "topology.z_g");
    if (fault_resistance && !positive_finite(*fault_resistance)) {
        throw ValidationError("fault resistance must be positive", "topology.r_f_ohm");
    }
}

CurrentInjection::CurrentInjection(double i_d, double i_q) : dq_(i_d, i_q) {
    if (!std::isfinite(i_d) || !std::isfinite(i_q)) throw ValidationError("current components must be finite");
}

double CurrentInjection::angle() const { return normalize_angle(std::atan2(i_q(), i_d())); }

double CurrentInjection::cos_angle() const noexcept {
    const double mag = magnitude();
    return mag == 0.0 ? 0.0 : i_d() / mag;
}

double CurrentInjection::sin_angle() const noexcept {
    const double mag = magnitude();
    return mag == 0.0 ? 0.0 : i_q() / mag;
}

ReducedNetwork::ReducedNetwork(Complex source, Complex z_eq, Complex z_gl, double emf)
    : source_(source), z_eq_(z_eq), z_gl_(z_gl), emf_(emf) {}

double ReducedNetwork::phi_g() const { return normalize_angle(std::arg(source_)); }
double ReducedNetwork::phi_z() const { return normalize_angle(std::arg(z_eq_)); }
double ReducedNetwork::phi_gl() const { return normalize_angle(std::arg(z_gl_)); }

double ReducedNetwork::p_gs() const noexcept {
    // E_g^2 cos(phi_G) / |Z| == E_g^2 Re(Z) / |Z|^2
    return emf_ * emf_ * z_gl_.real() / std::norm(z_gl_);
}

Complex effective_load(Complex z_l, std::optional<double> fault_resistance) {
    if (std::abs(z_l) == 0.0) throw ValidationError("load impedance must be non-zero", "topology.z_l");
    if (!fault_resistance) return z_l;
    if (!positive_finite(*fault_resistance)) throw ValidationError("fault resistance must be positive", "topology.r_f_ohm");
    const Complex admittance = 1.0 / z_l + 1.0 / *fault_resistance;
    if (std::abs(admittance) == 0.0) throw ValidationError("zero total admittance at the load bus");
    return 1.0 / admittance;
}

ReducedNetwork reduce(const NetworkTopology& topology) {
    topology.validate();
    const Complex z_load = effective_load(topology.z_l, topology.fault_resistance);
    const Complex z_gl = topology.z_g + z_load;
    if (std::abs(z_gl) == 0.0) throw ValidationError("degenerate network: Z_g + Z_l' == 0");
    const Complex source = z_load / z_gl * topology.emf;
    const Complex z_eq = topology.z_p + parallel(topology.z_g, z_load);
    return ReducedNetwork(source, z_eq, z_gl, topology.emf);
}

DqVoltage pcc_voltage(const ReducedNetwork& red, double delta, const CurrentInjection& inj) {
    const double drop = red.z_eq_mag() * inj.magnitude();
    const double angle = inj.angle() + red.phi_z();
    return {red.u_g() * std::cos(delta) + drop * std::cos(angle),
            -red.u_g() * std::sin(delta) + drop * std::sin(angle)};
}

double sg_power(const ReducedNetwork& red, double delta, const CurrentInjection& inj) {
    return red.p_gs() - red.u_g() * inj.magnitude() * std::cos(delta + 2.0 * red.phi_g() + inj.angle());
}

IbgPower ibg_power(const ReducedNetwork& red, double delta, const CurrentInjection& inj) {
    const double current = inj.magnitude();
    const double phi_i = inj.angle();
    const double z_eq = red.z_eq_mag();
    const double phi_z = red.phi_z();
    const double actual = red.u_g() * current * std::cos(delta + phi_i) + z_eq * current * current * std::cos(phi_z);
    const double reference = red.u_g() * current * std::cos(delta) * inj.cos_angle() +
                             z_eq * current * current * std::cos(phi_i + phi_z) * inj.cos_angle();
    return {actual, reference};
}

double load_bus_voltage(const NetworkTopology& topology, double delta, const CurrentInjection& inj) {
    const ReducedNetwork red = reduce(topology);
    const Complex z_load = effective_load(topology.z_l, topology.fault_resistance);
    const Complex z_par = parallel(topology.z_g, z_load);
    const Complex ibg_current = std::polar(inj.magnitude(), delta + red.phi_g() + inj.angle());
    return std::abs(z_par * (Complex(topology.emf, 0.0) / topology.z_g + ibg_current));
}

}  // namespace ibgsg
