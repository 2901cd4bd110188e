#pragma once

#include <complex>
#include <vector>

#include <decolab/fft.hpp>
#include <decolab/parallel.hpp>
#include <decolab/wigner.hpp>

namespace decolab {

// Gaussian smoothing of the field with widths (sigma_x, hbar / 2 sigma_x),
// the coherent-state kernel that washes the quantum fine structure out and
// leaves a nonnegative density. Implemented as two spectral convolutions;
// the k = 0 bins are untouched, so normalization is preserved exactly.
inline WignerField husimi(const WignerField& f, double sigma_x) {
    if (!(sigma_x > 0)) throw config_error("husimi: sigma_x must be positive");
    const auto& g = f.grid;
    double sigma_p = f.hbar / (2.0 * sigma_x);

    WignerField out = f;
    RealFftPlan plan_x(g.nx), plan_p(g.np);

    std::vector<double> mult_x(plan_x.bins()), mult_p(plan_p.bins());
    for (int k = 0; k < plan_x.bins(); ++k) {
        double kx = wavenumber_x(g, k);
        mult_x[k] = std::exp(-0.5 * kx * kx * sigma_x * sigma_x) / g.nx;
    }
    for (int k = 0; k < plan_p.bins(); ++k) {
        double kp = wavenumber_p(g, k);
        mult_p[k] = std::exp(-0.5 * kp * kp * sigma_p * sigma_p) / g.np;
    }

    parallel_chunks(g.np, [&](int begin, int end) {
        std::vector<std::complex<double>> spec(plan_x.bins());
        for (int ip = begin; ip < end; ++ip) {
            double* row = out.values.data() + static_cast<size_t>(ip) * g.nx;
            plan_x.forward(row, spec.data());
            for (int k = 0; k < plan_x.bins(); ++k) spec[k] *= mult_x[k];
            plan_x.inverse(spec.data(), row);
        }
    });

    std::vector<double> t(out.values.size());
    transpose(out.values.data(), t.data(), g.np, g.nx);
    parallel_chunks(g.nx, [&](int begin, int end) {
        std::vector<std::complex<double>> spec(plan_p.bins());
        for (int ix = begin; ix < end; ++ix) {
            double* col = t.data() + static_cast<size_t>(ix) * g.np;
            plan_p.forward(col, spec.data());
            for (int k = 0; k < plan_p.bins(); ++k) spec[k] *= mult_p[k];
            plan_p.inverse(spec.data(), col);
        }
    });
    transpose(t.data(), out.values.data(), g.nx, g.np);
    return out;
}

}  // namespace decolab
