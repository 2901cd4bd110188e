#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <decolab/errors.hpp>
#include <decolab/grid.hpp>

namespace decolab {

// Discretized quasiprobability density W(x, p) in units of 1/(erg s).
// Values may go negative; that is the quantum signal, not a defect.
// Storage is row-major in p: values[ip * nx + ix], x contiguous.
struct WignerField {
    PhaseSpaceGrid grid;
    std::vector<double> values;
    double time = 0;   // s
    double hbar = 1;   // erg s (or the scaled-units analog)
    bool macroscopic = false;

    double& at(int ix, int ip) { return values[static_cast<size_t>(ip) * grid.nx + ix]; }
    double at(int ix, int ip) const {
        return values[static_cast<size_t>(ip) * grid.nx + ix];
    }
};

// Initial packets with sigma_x sigma_p >= 100 hbar count as macroscopic:
// round and smooth on quantum scales.
inline constexpr double macroscopic_action_ratio = 100.0;

inline WignerField init_gaussian(const PhaseSpaceGrid& grid, double x0, double p0,
                                 double sigma_x, double sigma_p, double hbar) {
    validate_grid(grid);
    if (!(hbar > 0)) throw config_error("init_gaussian: hbar must be positive");
    if (!(sigma_x > 0) || !(sigma_p > 0))
        throw config_error("init_gaussian: widths must be positive");
    if (sigma_x * sigma_p < 0.5 * hbar * (1.0 - 1e-12))
        throw config_error("init_gaussian: sigma_x * sigma_p below hbar/2");
    if (x0 - 5 * sigma_x < grid.x_min || x0 + 5 * sigma_x > grid.x_max ||
        p0 - 5 * sigma_p < grid.p_min || p0 + 5 * sigma_p > grid.p_max)
        throw config_error("init_gaussian: packet needs 5 sigma of clearance inside the grid");

    WignerField f;
    f.grid = grid;
    f.hbar = hbar;
    f.macroscopic = sigma_x * sigma_p >= macroscopic_action_ratio * hbar;
    f.values.resize(static_cast<size_t>(grid.nx) * grid.np);
    double sum = 0;
    for (int ip = 0; ip < grid.np; ++ip) {
        double up = (grid.p(ip) - p0) / sigma_p;
        for (int ix = 0; ix < grid.nx; ++ix) {
            double ux = (grid.x(ix) - x0) / sigma_x;
            double w = std::exp(-0.5 * (ux * ux + up * up));
            f.at(ix, ip) = w;
            sum += w;
        }
    }
    double scale = 1.0 / (sum * grid.cell_area());
    for (double& w : f.values) w *= scale;
    return f;
}

struct FieldMoments {
    double norm = 0;
    double mean_x = 0, mean_p = 0;
    double var_x = 0, var_p = 0, cov_xp = 0;
};

// Plain Riemann sums; on the periodic grid these are trapezoid-exact and
// superalgebraically accurate for fields that decay inside the domain.
// Row partials are folded in index order so the result is independent of
// any worker threading.
inline FieldMoments moments(const WignerField& f) {
    const auto& g = f.grid;
    std::vector<double> row_w(g.np), row_wx(g.np), row_wxx(g.np);
    for (int ip = 0; ip < g.np; ++ip) {
        const double* row = f.values.data() + static_cast<size_t>(ip) * g.nx;
        double sw = 0, swx = 0, swxx = 0;
        for (int ix = 0; ix < g.nx; ++ix) {
            double x = g.x(ix);
            sw += row[ix];
            swx += row[ix] * x;
            swxx += row[ix] * x * x;
        }
        row_w[ip] = sw;
        row_wx[ip] = swx;
        row_wxx[ip] = swxx;
    }
    double sw = 0, swx = 0, swp = 0, swxx = 0, swpp = 0, swxp = 0;
    for (int ip = 0; ip < g.np; ++ip) {
        double p = g.p(ip);
        sw += row_w[ip];
        swx += row_wx[ip];
        swxx += row_wxx[ip];
        swp += row_w[ip] * p;
        swpp += row_w[ip] * p * p;
        swxp += row_wx[ip] * p;
    }
    FieldMoments m;
    m.norm = sw * g.cell_area();
    if (sw == 0) return m;
    m.mean_x = swx / sw;
    m.mean_p = swp / sw;
    m.var_x = swxx / sw - m.mean_x * m.mean_x;
    m.var_p = swpp / sw - m.mean_p * m.mean_p;
    m.cov_xp = swxp / sw - m.mean_x * m.mean_p;
    return m;
}

inline double field_norm(const WignerField& f) {
    double s = 0;
    for (double w : f.values) s += w;
    return s * f.grid.cell_area();
}

inline double purity(const WignerField& f) {
    double s = 0;
    for (double w : f.values) s += w * w;
    return s * f.grid.cell_area();
}

inline double purity_bound(const WignerField& f) {
    return 1.0 / (2.0 * std::numbers::pi * f.hbar);
}

// Volume of the negative part, via the excess of the absolute integral over
// the total: integral |W| - 1. Zero (up to discretization) for any
// classical-like nonnegative state.
inline double negativity_volume(const WignerField& f) {
    double s = 0;
    for (double w : f.values) s += std::abs(w);
    double v = s * f.grid.cell_area() - 1.0;
    return v > 0 ? v : 0.0;
}

inline double l1_distance(const WignerField& a, const WignerField& b) {
    if (!(a.grid == b.grid))
        throw config_error("l1_distance: fields live on different grids");
    double s = 0;
    for (size_t i = 0; i < a.values.size(); ++i) s += std::abs(a.values[i] - b.values[i]);
    return s * a.grid.cell_area();
}

inline double min_value(const WignerField& f) {
    double m = f.values.empty() ? 0.0 : f.values[0];
    for (double w : f.values) m = std::min(m, w);
    return m;
}

inline double max_value(const WignerField& f) {
    double m = f.values.empty() ? 0.0 : f.values[0];
    for (double w : f.values) m = std::max(m, w);
    return m;
}

}  // namespace decolab
