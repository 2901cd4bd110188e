#pragma once

#include <cmath>
#include <optional>

#include <decolab/wigner.hpp>

namespace decolab {

struct CoarseBox {
    double width_x = 0;  // cm
    double width_p = 0;  // g cm/s
};

// -integral p ln p dx dp of the (optionally box-averaged) density. Requires
// a nonnegative field: the classical comparator or a husimi output. Cells
// that dip below zero by no more than floor_rel of the peak are treated as
// empty; anything lower is a genuinely negative density and a domain error.
// The default floor suits smoothed fields; sharpening classical runs carry
// spectral ringing around 1e-6 of peak and need a looser one.
inline double gibbs_entropy(const WignerField& f, std::optional<CoarseBox> box = {},
                            double floor_rel = 1e-9) {
    const auto& g = f.grid;
    int cells_x = 1, cells_p = 1;
    if (box) {
        if (!(box->width_x > 0) || !(box->width_p > 0))
            throw config_error("gibbs_entropy: box widths must be positive");
        double rx = box->width_x / g.dx();
        double rp = box->width_p / g.dp();
        cells_x = static_cast<int>(std::lround(rx));
        cells_p = static_cast<int>(std::lround(rp));
        if (cells_x < 1 || cells_p < 1 || std::abs(rx - cells_x) > 1e-9 * rx ||
            std::abs(rp - cells_p) > 1e-9 * rp)
            throw config_error("gibbs_entropy: box must span a whole number of cells");
        if (g.nx % cells_x != 0 || g.np % cells_p != 0)
            throw config_error("gibbs_entropy: box must divide the grid evenly");
    }

    if (!(floor_rel >= 0)) throw config_error("gibbs_entropy: floor_rel must be >= 0");
    double floor = -floor_rel * std::max(0.0, max_value(f));
    double box_area = g.cell_area() * cells_x * cells_p;
    double inv_count = 1.0 / (static_cast<double>(cells_x) * cells_p);
    double s = 0;
    for (int jp = 0; jp < g.np; jp += cells_p)
        for (int jx = 0; jx < g.nx; jx += cells_x) {
            double acc = 0;
            for (int ip = jp; ip < jp + cells_p; ++ip)
                for (int ix = jx; ix < jx + cells_x; ++ix) acc += f.at(ix, ip);
            double mean = acc * inv_count;
            if (mean <= 0) {
                if (mean < floor)
                    throw std::domain_error(
                        "gibbs_entropy: density has negative regions; smooth with husimi "
                        "first");
                continue;
            }
            s -= mean * std::log(mean) * box_area;
        }
    return s;
}

}  // namespace decolab
