#pragma once

#include <complex>
#include <optional>

#include "ibgsg/network.hpp"
#include "ibgsg/reduced_model.hpp"

namespace fixtures {

inline constexpr double kOmegaB = 314.15926535897932;
inline constexpr double kZbOhm = 690.0 * 690.0 / 20000.0;

inline ibgsg::NetworkTopology table1(std::optional<double> rf_ohm = std::nullopt) {
    ibgsg::NetworkTopology t{1.05, {0.01, 0.1}, {0.01, 0.3}, {0.99, 0.1}, std::nullopt};
    if (rf_ohm) t.fault_resistance = *rf_ohm / kZbOhm;
    return t;
}

inline ibgsg::SGParams sg(double tg = 0.8) { return {tg, 0.2465, 1.05}; }

// Node-voltage solution of the circuit in the SG frame: returns the load-bus
// and PCC voltages for an IBG current phasor injected at the PCC.
struct Nodal {
    std::complex<double> v_load;
    std::complex<double> v_pcc;
    std::complex<double> i_sg;
};

inline Nodal solve_nodal(const ibgsg::NetworkTopology& t, std::complex<double> i_ibg) {
    std::complex<double> y_load = 1.0 / t.z_l;
    if (t.fault_resistance) y_load += 1.0 / *t.fault_resistance;
    const std::complex<double> y_g = 1.0 / t.z_g;
    // (V_l - E) y_g + V_l y_load = I
    const std::complex<double> v_l = (i_ibg + t.emf * y_g) / (y_g + y_load);
    return {v_l, v_l + t.z_p * i_ibg, (t.emf - v_l) * y_g};
}

// IBG current as an SG-frame phasor when the PLL frame sits at delta + phi_g.
inline std::complex<double> ibg_phasor(double i_d, double i_q, double delta, double phi_g) {
    return std::complex<double>(i_d, i_q) * std::polar(1.0, delta + phi_g);
}

}  // namespace fixtures
