#pragma once

// Phasor reduction of the IBG-SG circuit: an SG behind Z_g and a
// current-source IBG behind Z_p, both feeding a load Z_l at the load bus.
// A three-phase fault at the load bus is a resistance in parallel with Z_l.

#include <complex>
#include <optional>

namespace ibgsg {

using Complex = std::complex<double>;

/// Per-unit base. Z_b is derived, never stored.
class BaseQuantities {
public:
    /// Throws ValidationError unless all three values are positive and finite.
    BaseQuantities(double power_va, double voltage_v, double omega_b);

    [[nodiscard]] double power_va() const noexcept { return power_va_; }
    [[nodiscard]] double voltage_v() const noexcept { return voltage_v_; }
    /// Base angular frequency in rad/s.
    [[nodiscard]] double omega_b() const noexcept { return omega_b_; }
    /// Nominal speed in pu.
    [[nodiscard]] static constexpr double omega_0() noexcept { return 1.0; }
    [[nodiscard]] double impedance_ohm() const noexcept { return voltage_v_ * voltage_v_ / power_va_; }

private:
    double power_va_;
    double voltage_v_;
    double omega_b_;
};

/// Polar view of a complex impedance or phasor.
struct Polar {
    double magnitude;
    double angle;
};

[[nodiscard]] Polar to_polar(Complex z);

double ohms_to_pu(double ohms, const BaseQuantities& base);
double pu_to_ohms(double pu, const BaseQuantities& base);

/// Circuit parameters for one topology state. All impedances in pu.
struct NetworkTopology {
    double emf;                    ///< E_g, SG internal EMF magnitude
    Complex z_g;                   ///< SG-side line
    Complex z_p;                   ///< IBG-side line
    Complex z_l;                   ///< load
    std::optional<double> fault_resistance;  ///< R_f in pu; empty when healthy

    /// Throws ValidationError on E_g <= 0, |Z_g + Z_l| == 0 or R_f <= 0.
    void validate() const;
};

/// IBG current in the PLL frame, stored as (i_d, i_q).
class CurrentInjection {
public:
    CurrentInjection() = default;
    CurrentInjection(double i_d, double i_q);

    [[nodiscard]] double i_d() const noexcept { return dq_.real(); }
    [[nodiscard]] double i_q() const noexcept { return dq_.imag(); }
    [[nodiscard]] double magnitude() const noexcept { return std::abs(dq_); }
    /// phi_I in (-pi, pi].
    [[nodiscard]] double angle() const;
    /// cos(phi_I), exact for axis-aligned currents. Zero when I = 0.
    [[nodiscard]] double cos_angle() const noexcept;
    [[nodiscard]] double sin_angle() const noexcept;

private:
    Complex dq_{0.0, 0.0};
};

/// Thevenin-style reduction of one topology state.
///
/// U_g∠phi_g = Z_l'/(Z_g + Z_l') * E_g and Z_eq∠phi_Z = Z_p + Z_g || Z_l',
/// where Z_l' is the load with the fault resistance in parallel.
class ReducedNetwork {
public:
    ReducedNetwork(Complex source, Complex z_eq, Complex z_gl, double emf);

    [[nodiscard]] Complex source() const noexcept { return source_; }
    [[nodiscard]] Complex z_eq() const noexcept { return z_eq_; }
    [[nodiscard]] Complex z_gl() const noexcept { return z_gl_; }
    [[nodiscard]] double emf() const noexcept { return emf_; }

    [[nodiscard]] double u_g() const noexcept { return std::abs(source_); }
    [[nodiscard]] double phi_g() const;
    [[nodiscard]] double z_eq_mag() const noexcept { return std::abs(z_eq_); }
    [[nodiscard]] double phi_z() const;
    /// phi_G = angle(Z_g + Z_l').
    [[nodiscard]] double phi_gl() const;
    [[nodiscard]] double z_gl_mag() const noexcept { return std::abs(z_gl_); }
    /// SG output with the IBG removed: E_g^2 cos(phi_G) / |Z_g + Z_l'|.
    [[nodiscard]] double p_gs() const noexcept;

private:
    Complex source_;
    Complex z_eq_;
    Complex z_gl_;
    double emf_;
};

/// Z_l, or Z_l || R_f when a fault is present.
Complex effective_load(Complex z_l, std::optional<double> fault_resistance);

ReducedNetwork reduce(const NetworkTopology& topology);

struct DqVoltage {
    double u_d;
    double u_q;
};

/// PCC voltage in the PLL frame at relative angle delta.
DqVoltage pcc_voltage(const ReducedNetwork& red, double delta, const CurrentInjection& inj);

/// SG electrical output P_g.
double sg_power(const ReducedNetwork& red, double delta, const CurrentInjection& inj);

struct IbgPower {
    double actual;     ///< P_p = u_d i_d + u_q i_q
    double reference;  ///< P_p* = u_d i_d*
};

IbgPower ibg_power(const ReducedNetwork& red, double delta, const CurrentInjection& inj);

/// Load-bus voltage magnitude from the node equation, SG frame at angle 0.
double load_bus_voltage(const NetworkTopology& topology, double delta, const CurrentInjection& inj);

}  // namespace ibgsg
