#pragma once

#include <array>
#include <cmath>
#include <limits>

#include <decolab/errors.hpp>

namespace decolab {

// V(x) = sum_k c[k] x^k, degree at most 4, plus an optional dipole drive
// -eps * x * cos(omega t). Degree 4 keeps the quantum correction to the
// evolution a single exact term.
struct PolynomialPotential {
    std::array<double, 5> c{0, 0, 0, 0, 0};
    double drive_amplitude = 0;  // erg/cm
    double drive_omega = 0;      // 1/s

    double value(double x, double t = 0) const {
        double v = c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4])));
        if (drive_amplitude != 0) v -= drive_amplitude * x * std::cos(drive_omega * t);
        return v;
    }
    // dV/dx of the bare polynomial; the drive shift is handled separately
    // because it is x-independent.
    double d1(double x) const {
        return c[1] + x * (2 * c[2] + x * (3 * c[3] + x * 4 * c[4]));
    }
    double d2(double x) const { return 2 * c[2] + x * (6 * c[3] + x * 12 * c[4]); }
    double d3(double x) const { return 6 * c[3] + 24 * c[4] * x; }
    // force shift from the drive at time t: V'(x,t) = d1(x) + drive_shift(t)
    double drive_shift(double t) const {
        return drive_amplitude == 0 ? 0.0 : -drive_amplitude * std::cos(drive_omega * t);
    }
};

inline void validate_potential(const PolynomialPotential& v) {
    for (double ck : v.c)
        if (!std::isfinite(ck)) throw config_error("potential: coefficients must be finite");
    if (!std::isfinite(v.drive_amplitude) || !std::isfinite(v.drive_omega))
        throw config_error("potential: drive parameters must be finite");
    if (v.drive_amplitude != 0 && v.drive_omega <= 0)
        throw config_error("potential: drive frequency must be positive when driven");
}

// Length scale sqrt(|V'/V'''|) separating quadratic from genuinely nonlinear
// dynamics, evaluated on the bare polynomial. A quadratic potential has no
// third derivative and gets the infinite sentinel.
struct NonlinearityScale {
    double chi = std::numeric_limits<double>::infinity();  // cm
    bool negative_ratio = false;
};

inline NonlinearityScale nonlinearity_scale(const PolynomialPotential& v, double x) {
    NonlinearityScale out;
    double v3 = v.d3(x);
    if (v3 == 0) return out;
    double ratio = v.d1(x) / v3;
    out.chi = std::sqrt(std::abs(ratio));
    out.negative_ratio = ratio < 0;
    return out;
}

}  // namespace decolab
