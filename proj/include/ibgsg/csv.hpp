#pragma once

#include <ostream>
#include <string>

#include "ibgsg/trajectory.hpp"

namespace ibgsg {

inline constexpr const char* kTrajectoryHeader = "t,delta,domega,omega_g,omega_p,P_g,P_p,u_q,E_k,E_p,E_dis,V";

/// Shortest round-trip-free rendering with 12 significant digits, '.' as the
/// decimal separator regardless of locale. NaN renders as "nan".
std::string format_number(double value);

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace ibgsg
