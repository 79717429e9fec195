#include "ibgsg/equilibria.hpp"

#include <cmath>
#include <limits>

#include "ibgsg/angles.hpp"
#include "ibgsg/errors.hpp"

namespace ibgsg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Sign-change bisection on [lo, hi]; f(lo) and f(hi) must differ in sign.
double bisect(const ModelCoeffs& c, double lo, double hi) {
    double f_lo = sine_form_residual(c, lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = sine_form_residual(c, mid);
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void verify(const ModelCoeffs& c, const EquilibriumSet& eq) {
    // SEP lives where the sine is rising through -a/b, the right UEP where it falls.
    const double sep = bisect(c, -c.phi - kPi / 2.0, -c.phi + kPi / 2.0);
    const double right = bisect(c, -c.phi + kPi / 2.0, -c.phi + 3.0 * kPi / 2.0);
    if (std::abs(sep - eq.sep) > 1e-9 || std::abs(right - eq.right_uep) > 1e-9) {
        throw InternalError("closed-form equilibria disagree with the bisection check");
    }
}

}  // namespace

double sine_form_residual(const ModelCoeffs& coeffs, double delta) {
    return coeffs.a + coeffs.b * std::sin(delta + coeffs.phi);
}

EquilibriumSet find_equilibria(const ModelCoeffs& coeffs) {
    if (coeffs.b == 0.0) throw ValidationError("sine amplitude b is zero");
    EquilibriumSet eq{};
    eq.margin = std::abs(coeffs.b) - std::abs(coeffs.a);
    eq.exists = std::abs(coeffs.a) < std::abs(coeffs.b);
    const double s = -coeffs.a / coeffs.b;
    if (std::abs(s) > 1.0) {
        eq.sep = eq.left_uep = eq.right_uep = kNaN;
        return eq;
    }
    // b < 0: the restoring root has cos(delta + phi) > 0.
    const double root = std::asin(s);
    eq.sep = -coeffs.phi + root;
    eq.right_uep = -coeffs.phi + kPi - root;
    eq.left_uep = eq.right_uep - kTwoPi;
    if (eq.exists) verify(coeffs, eq);
    return eq;
}

EquilibriumSet approx_equilibria(const ModelCoeffs& coeffs) {
    if (coeffs.b == 0.0) throw ValidationError("sine amplitude b is zero");
    EquilibriumSet eq{};
    eq.margin = std::abs(coeffs.b) - std::abs(coeffs.a);
    eq.exists = std::abs(coeffs.a) < std::abs(coeffs.b);
    const double s = -coeffs.a / coeffs.b;
    if (std::abs(s) > 1.0) {
        eq.sep = eq.left_uep = eq.right_uep = kNaN;
        return eq;
    }
    eq.sep = std::asin(s);
    eq.left_uep = -kPi - eq.sep;
    eq.right_uep = kPi - eq.sep;
    return eq;
}

}  // namespace ibgsg
