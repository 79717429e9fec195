#pragma once

#include <vector>

namespace ibgsg {

struct TrajectorySample {
    double t;
    double delta;
    double domega;
    double omega_g;
    double omega_p;
    double p_g;
    double p_p;
    double u_q;
    double e_k;
    double e_p;
    double e_dis;
    double v;
};

/// Uniformly sampled time series, one sample per integration step.
struct Trajectory {
    double dt = 0.0;
    std::vector<TrajectorySample> samples;
};

}  // namespace ibgsg
