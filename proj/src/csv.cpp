#include "ibgsg/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace ibgsg {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0;  // drop the sign of negative zero
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
    return std::string(buf.data(), res.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    out << kTrajectoryHeader << '\n';
    for (const auto& s : trajectory.samples) {
        const std::array<double, 12> row{s.t, s.delta, s.domega, s.omega_g, s.omega_p, s.p_g,
                                         s.p_p, s.u_q, s.e_k, s.e_p, s.e_dis, s.v};
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_number(row[i]);
        }
        out << '\n';
    }
}

}  // namespace ibgsg
