#include "ibgsg/energy.hpp"

#include <cmath>

#include "ibgsg/angles.hpp"
#include "ibgsg/errors.hpp"

namespace ibgsg {

double kinetic(double teq, double domega, double omega_b) { return 0.5 * omega_b * teq * domega * domega; }

double potential(const ModelCoeffs& coeffs, double delta, double reference) {
    return -coeffs.a * delta + coeffs.b * std::cos(delta + coeffs.phi) + reference;
}

double potential_reference(const ModelCoeffs& coeffs, const EquilibriumSet& eq) {
    if (!eq.exists) return 0.0;
    return -potential(coeffs, eq.sep, 0.0);
}

double dissipation_along(std::span<const TrajectorySample> samples, double d) {
    if (samples.size() < 2) throw ValidationError("dissipation needs at least two samples");
    double sum = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const auto& p = samples[i - 1];
        const auto& q = samples[i];
        const double f_p = std::cos(p.delta) * p.domega;
        const double f_q = std::cos(q.delta) * q.domega;
        sum += 0.5 * (f_p + f_q) * (q.delta - p.delta);
    }
    return d * sum;
}

double uep_kinetic_delta(const ModelCoeffs& coeffs) { return 2.0 * coeffs.a * kPi; }

EnergyBreakdown energy_at(const ModelCoeffs& coeffs, double reference, double delta, double domega,
                          double dissipation) {
    EnergyBreakdown e{};
    e.kinetic = kinetic(coeffs.teq, domega, coeffs.omega_b);
    e.potential = potential(coeffs, delta, reference);
    e.dissipation = dissipation;
    e.total = e.kinetic + e.potential + e.dissipation;
    e.reference = reference;
    return e;
}

}  // namespace ibgsg
