#pragma once

// Fault-instant state jump, acceleration/deceleration areas, and the
// energy-based transient-stability verdict for the fault-on period.

#include <optional>

#include "ibgsg/equilibria.hpp"
#include "ibgsg/network.hpp"
#include "ibgsg/reduced_model.hpp"

namespace ibgsg {

struct InitialState {
    double delta_pre;    ///< delta_0-
    double delta_post;   ///< delta_0+
    double domega_post;  ///< dw_0+
    double u_q_post;     ///< u_q at 0+
    double e_k_post;     ///< E_k,0+
};

struct Areas {
    double s1;  ///< E_p(delta_1) - E_p(delta_e)
    double s2;  ///< E_p(delta_0+) - E_p(delta_e)
    double s3;  ///< E_p(delta_2) - E_p(delta_0+)
};

struct CriterionVerdict {
    LosRisk risk;
    double s1;
    double s2;
    double s3;
    double margin_decel;  ///< (S_1 - S_2) - E_k,0+
    double margin_accel;  ///< S_3 - E_k,0+
    bool stable_unified;
    bool stable_type_specific;
    bool no_sep;
    bool beyond_uep;
    /// LOS direction implied by the type-specific verdict; empty when stable.
    std::optional<LosType> predicted_los;
};

/// Pre-fault operating angle from u_q = 0 on the SEP branch, in [-pi/2, pi/2].
/// Throws ValidationError when no pre-fault equilibrium exists.
double prefault_angle(const ReducedNetwork& red_pre, const CurrentInjection& inj_pre);

InitialState initial_jump(const ReducedNetwork& red_pre, const ReducedNetwork& red_fault, double delta_pre,
                          const PLLParams& pll, const CurrentInjection& inj_fault, const ModelCoeffs& coeffs);

/// Throws BeyondUepError when delta_0+ lies outside [delta_1, delta_2] and
/// ValidationError when no SEP exists.
Areas areas(const ModelCoeffs& coeffs, const EquilibriumSet& eq, double delta_post);

CriterionVerdict assess(const ModelCoeffs& coeffs, const EquilibriumSet& eq, const InitialState& init);

}  // namespace ibgsg
