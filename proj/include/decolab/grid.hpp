#pragma once

#include <cmath>
#include <numbers>

#include <decolab/errors.hpp>

namespace decolab {

// Uniform periodic phase-space grid. Points are x_i = x_min + i*dx with
// dx = (x_max - x_min)/nx; x_max itself is the wrap point and carries no
// sample. Same convention in p.
struct PhaseSpaceGrid {
    int nx = 0;
    int np = 0;
    double x_min = 0, x_max = 0;
    double p_min = 0, p_max = 0;

    double dx() const { return (x_max - x_min) / nx; }
    double dp() const { return (p_max - p_min) / np; }
    double x(int i) const { return x_min + i * dx(); }
    double p(int j) const { return p_min + j * dp(); }
    double cell_area() const { return dx() * dp(); }
    double x_span() const { return x_max - x_min; }
    double p_span() const { return p_max - p_min; }

    bool operator==(const PhaseSpaceGrid&) const = default;
};

inline bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline void validate_grid(const PhaseSpaceGrid& g) {
    if (g.nx < 32 || g.np < 32)
        throw config_error("grid: nx and np must be at least 32");
    if (!power_of_two(g.nx) || !power_of_two(g.np))
        throw config_error("grid: nx and np must be powers of two");
    if (!(g.x_min < g.x_max) || !(g.p_min < g.p_max))
        throw config_error("grid: domain bounds must be strictly ordered");
}

// Angular wavenumber of r2c bin k for a transform along x (period x_span).
inline double wavenumber_x(const PhaseSpaceGrid& g, int k) {
    return 2.0 * std::numbers::pi * k / g.x_span();
}

inline double wavenumber_p(const PhaseSpaceGrid& g, int k) {
    return 2.0 * std::numbers::pi * k / g.p_span();
}

}  // namespace decolab
