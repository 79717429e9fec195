#pragma once

// Constants of the delta-power-frequency model of the IBG-SG pair:
//
//   d(delta)/dt      = omega_b * dw
//   T_eq d(dw)/dt    = dP_in,eq - dP_out,eq - D_eq * dw
//
// and, for a purely reactive fault current, the sine form
//
//   T_eq d(dw)/dt    = a + b sin(delta + phi) - d cos(delta) dw

#include "ibgsg/network.hpp"

namespace ibgsg {

struct SGParams {
    double inertia;     ///< T_g [s]
    double mech_power;  ///< P_m [pu]
    double emf;         ///< E_g [pu]

    void validate() const;
};

struct PLLParams {
    double kp;  ///< proportional gain [pu/pu]
    double ki;  ///< integral gain [1/s]

    void validate() const;
};

/// (i_d, i_q) -> current vector in the PLL frame.
CurrentInjection current_polar(double i_d, double i_q);

/// Inertia split and the general (any current angle) model terms.
///
/// Valid whenever sin(phi_I) != 0. The power terms are evaluated at a given
/// relative angle; the damping is D_eq(delta) = damping_coeff * cos(delta).
class GeneralModel {
public:
    GeneralModel(const ReducedNetwork& red, const SGParams& sg, const PLLParams& pll, const CurrentInjection& inj,
                 double omega_b);

    [[nodiscard]] double tp() const noexcept { return tp_; }
    [[nodiscard]] double teq() const noexcept { return teq_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    /// Coefficient of cos(delta) in D_p.
    [[nodiscard]] double dp_coeff() const noexcept { return dp_coeff_; }

    [[nodiscard]] double relative_input_power(double delta) const;
    [[nodiscard]] double relative_output_power(double delta) const;
    [[nodiscard]] double damping(double delta) const;

private:
    ReducedNetwork red_;
    SGParams sg_;
    CurrentInjection inj_;
    double tp_;
    double teq_;
    double alpha_;
    double dp_coeff_;
};

/// Sine-form constants of the fault-on model.
struct ModelCoeffs {
    double tp;        ///< IBG equivalent inertia [s]
    double teq;       ///< T_p T_g / (T_p + T_g) [s]
    double alpha;     ///< T_g / T_p
    double a;         ///< constant relative input power [pu]
    double b;         ///< sine amplitude, <= 0 [pu]
    double phi;       ///< sine phase [rad]
    double d;         ///< damping magnitude, D_eq = d cos(delta) [pu s]
    double dp_coeff;  ///< coefficient of cos(delta) in D_p [pu s]
    double p_in_eq;   ///< relative input power dP_in,eq (constant for reactive injection) [pu]
    double omega_b;   ///< base angular frequency [rad/s]
};

/// Throws InapplicableModelError when i_q == 0 and UnsupportedInjectionError
/// when |cos(phi_I)| >= 1e-9.
ModelCoeffs smib_coefficients(const ReducedNetwork& red_fault, const SGParams& sg, const PLLParams& pll,
                              const CurrentInjection& inj, double omega_b);

struct PowerShortages {
    double p_ps;           ///< IBG output with the SG removed
    double dp_ps;          ///< IBG power shortage
    double p_gs;           ///< SG output with the IBG removed
    double dp_gs;          ///< SG power shortage
    double alpha_dp_ps;    ///< equivalent IBG power shortage
};

PowerShortages power_shortages(const ReducedNetwork& red_fault, const SGParams& sg, const CurrentInjection& inj,
                               const ModelCoeffs& coeffs);

/// a rebuilt from the shortages: (alpha dP_ps - dP_gs) / (1 + alpha).
double a_from_shortages(const PowerShortages& shortages, double alpha);

enum class LosRisk { Accelerating, Decelerating, Marginal };

inline constexpr double kMarginalTolerance = 1e-9;

LosRisk classify_los_risk(double a);

const char* to_string(LosRisk risk);

/// Direction of a loss of synchronization: delta running up past the right
/// UEP, or down past the left one.
enum class LosType { Accelerating, Decelerating };

const char* to_string(LosType type);

}  // namespace ibgsg
