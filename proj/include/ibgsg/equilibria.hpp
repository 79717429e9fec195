#pragma once

#include "ibgsg/reduced_model.hpp"

namespace ibgsg {

/// SEP and the two UEPs bracketing its potential well.
struct EquilibriumSet {
    double sep;        ///< delta_e
    double left_uep;   ///< delta_1 = delta_2 - 2 pi
    double right_uep;  ///< delta_2
    bool exists;       ///< |a| < |b|
    double margin;     ///< |b| - |a|
};

/// Right-hand side of the undamped sine-form model at dw = 0.
double sine_form_residual(const ModelCoeffs& coeffs, double delta);

/// Closed-form roots of a + b sin(delta + phi) = 0, verified by bisection.
///
/// When |a| > |b| the angles are NaN and `exists` is false. At |a| == |b|
/// the roots merge and `exists` is false.
EquilibriumSet find_equilibria(const ModelCoeffs& coeffs);

/// Approximation that neglects phi: delta_e = asin(-a/b), delta_{1,2} = -/+pi - delta_e.
EquilibriumSet approx_equilibria(const ModelCoeffs& coeffs);

}  // namespace ibgsg
