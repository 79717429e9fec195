#pragma once

// Energy function of the sine-form model:
//
//   V = 1/2 omega_b T_eq dw^2  - a delta + b cos(delta + phi) + lambda  + d ∫ cos(delta) dw d(delta)
//       \_______ E_k ________/  \____________ E_p ______________/      \_______ dE_dis ______/

#include <span>

#include "ibgsg/equilibria.hpp"
#include "ibgsg/reduced_model.hpp"
#include "ibgsg/trajectory.hpp"

namespace ibgsg {

struct EnergyBreakdown {
    double kinetic;
    double potential;
    double dissipation;
    double total;
    double reference;  ///< lambda
};

double kinetic(double teq, double domega, double omega_b);

double potential(const ModelCoeffs& coeffs, double delta, double reference);

/// lambda such that E_p(delta_e) = 0; zero when no SEP exists.
double potential_reference(const ModelCoeffs& coeffs, const EquilibriumSet& eq);

/// Trapezoidal accumulation of d ∫ cos(delta) dw d(delta) over consecutive samples.
/// Throws ValidationError on fewer than two samples.
double dissipation_along(std::span<const TrajectorySample> samples, double d);

/// Kinetic-energy change between adjacent UEPs for undamped motion: 2 a pi.
double uep_kinetic_delta(const ModelCoeffs& coeffs);

EnergyBreakdown energy_at(const ModelCoeffs& coeffs, double reference, double delta, double domega,
                          double dissipation = 0.0);

}  // namespace ibgsg
