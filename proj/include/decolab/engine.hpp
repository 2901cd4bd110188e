#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <decolab/entropy.hpp>
#include <decolab/fft.hpp>
#include <decolab/parallel.hpp>
#include <decolab/potential.hpp>
#include <decolab/wigner.hpp>

namespace decolab {

enum class Scheme { Strang, Yoshida4 };

inline const char* scheme_name(Scheme s) {
    return s == Scheme::Strang ? "strang" : "yoshida4";
}

inline Scheme parse_scheme(const std::string& s) {
    if (s == "strang") return Scheme::Strang;
    if (s == "yoshida4") return Scheme::Yoshida4;
    throw config_error("unknown scheme '" + s + "' (strang, yoshida4)");
}

struct EvolutionSpec {
    PolynomialPotential potential;
    double mass = 1;       // g
    double hbar = 1;       // erg s, or the scaled-units analog
    double gamma = 0;      // 1/s, friction 2 gamma d(pW)/dp
    double diffusion = 0;  // erg g / s, momentum diffusion D d2W/dp2
    bool moyal_enabled = true;
    double dt = 0;   // s
    double t_end = 0;
    int snapshot_stride = 1;
    Scheme scheme = Scheme::Yoshida4;
    bool absorber = true;
    double absorber_rate = 0;  // 1/s; 0 picks 4/dt
    double entropy_box_x = 0;  // coarse-grained entropy box; 0 = fine only
    double entropy_box_p = 0;
};

inline void validate_spec(const EvolutionSpec& s) {
    validate_potential(s.potential);
    if (!(s.mass > 0)) throw config_error("evolution: mass must be positive");
    if (!(s.hbar > 0)) throw config_error("evolution: hbar must be positive");
    if (s.gamma < 0 || s.diffusion < 0)
        throw config_error("evolution: gamma and diffusion must be non-negative");
    if (!(s.dt > 0)) throw config_error("evolution: dt must be positive");
    if (s.t_end < 0) throw config_error("evolution: t_end must be non-negative");
    if (s.snapshot_stride < 1) throw config_error("evolution: snapshot_stride must be >= 1");
    if (s.absorber_rate < 0) throw config_error("evolution: absorber_rate must be >= 0");
}

// Largest dt the stepper accepts. The exact spectral substeps get accuracy
// caps (cells of displacement per substep for advection, splitting error for
// diffusion); friction, the one explicit substep, gets its stability limit.
inline double stability_check(const EvolutionSpec& spec, const PhaseSpaceGrid& g) {
    constexpr double c_adv = 32.0;
    constexpr double c_diff = 0.5;
    double bound = std::numeric_limits<double>::infinity();
    double p_absmax = std::max(std::abs(g.p_min), std::abs(g.p_max));
    if (p_absmax > 0) bound = std::min(bound, c_adv * g.dx() * spec.mass / p_absmax);
    double v1max = 0;
    for (int i = 0; i < g.nx; ++i)
        v1max = std::max(v1max, std::abs(spec.potential.d1(g.x(i))));
    v1max += std::abs(spec.potential.drive_amplitude);
    if (v1max > 0) bound = std::min(bound, c_adv * g.dp() / v1max);
    if (spec.diffusion > 0)
        bound = std::min(bound, c_diff * g.dp() * g.dp() / spec.diffusion);
    if (spec.gamma > 0 && p_absmax > 0) {
        // RK4 on the spectral gradient holds only up to
        // |2 gamma p k_p| dt/2 ~ 2.8; cap at 2 for headroom
        double k_pmax = wavenumber_p(g, g.np / 2);
        bound = std::min(bound, 2.0 / (spec.gamma * p_absmax * k_pmax));
    }
    return bound;
}

// Split-step spectral integrator for
//   dW/dt = V'(x) dW/dp - (p/m) dW/dx - (hbar^2/24) V'''(x) d3W/dp3
//           + 2 gamma d(pW)/dp + D d2W/dp2.
// The x-advection is a per-row shear, diagonal in k_x; the force plus the
// cubic correction are diagonal in k_p per column (the potential has degree
// at most 4, so the correction series is that single term). Both are exact
// maps of the band-limited interpolant. Dissipation is wrapped around the
// Hamiltonian composition in symmetric halves: diffusion as an exact k_p
// multiplier, friction as an RK4 substep with spectral d/dp. The wrap keeps
// every dissipative sub-time positive under Yoshida's negative middle step;
// it costs one order, so runs with gamma or D are second order in dt while
// pure Hamiltonian runs are fourth.
class Stepper {
  public:
    Stepper(const PhaseSpaceGrid& grid, const EvolutionSpec& spec)
        : g_(grid), spec_(spec), fx_(grid.nx), fp_(grid.np) {
        validate_grid(grid);
        validate_spec(spec);
        double bound = stability_check(spec, grid);
        if (spec.dt > bound * (1 + 1e-12)) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "evolution: dt %.6g exceeds the stability bound %.6g", spec.dt,
                          bound);
            throw config_error(msg);
        }

        if (spec.scheme == Scheme::Yoshida4) {
            double w1 = 1.0 / (2.0 - std::cbrt(2.0));
            double w0 = 1.0 - 2.0 * w1;
            a_first_ = build_a(0.5 * w1 * spec.dt);
            a_mid_ = build_a(0.5 * (w1 + w0) * spec.dt);
            b_outer_ = build_b(w1 * spec.dt);
            b_mid_ = build_b(w0 * spec.dt);
            w1_ = w1;
            w0_ = w0;
        } else {
            a_first_ = build_a(0.5 * spec.dt);
            b_outer_ = build_b(spec.dt);
        }
        if (spec_.diffusion > 0) {
            diff_half_.resize(fp_.bins());
            for (int k = 0; k < fp_.bins(); ++k) {
                double kp = wavenumber_p(g_, k);
                diff_half_[k] =
                    std::exp(-spec_.diffusion * kp * kp * 0.5 * spec_.dt) / g_.np;
            }
        }
        if (spec_.gamma > 0) {
            deriv_p_.resize(fp_.bins());
            for (int k = 0; k < fp_.bins(); ++k)
                deriv_p_[k] = std::complex<double>(0, wavenumber_p(g_, k) / g_.np);
            deriv_p_.back() = 0;  // no odd derivative at the Nyquist bin
        }
        if (spec_.absorber) build_absorber();
        scratch_.resize(static_cast<size_t>(g_.nx) * g_.np);
    }

    const EvolutionSpec& spec() const { return spec_; }

    // Advances one dt in place. Throws numerical_error if the field goes
    // non-finite; the broken field is left for the caller to snapshot.
    void advance(WignerField& f) {
        if (!(f.grid == g_)) throw config_error("step: field grid does not match spec");
        if (f.hbar != spec_.hbar) throw config_error("step: field hbar does not match spec");
        double t0 = f.time;
        double* w = f.values.data();

        bool dissipative = spec_.diffusion > 0 || spec_.gamma > 0;
        if (dissipative) {
            to_p_major(w);
            apply_diffusion(w);
            apply_friction(w, 0.5 * spec_.dt);
            to_x_major(w);
        }

        if (spec_.scheme == Scheme::Yoshida4) {
            apply_a(w, a_first_);
            to_p_major(w);
            apply_b(w, b_outer_, t0 + 0.5 * w1_ * spec_.dt);
            to_x_major(w);
            apply_a(w, a_mid_);
            to_p_major(w);
            apply_b(w, b_mid_, t0 + (w1_ + 0.5 * w0_) * spec_.dt);
            to_x_major(w);
            apply_a(w, a_mid_);
            to_p_major(w);
            apply_b(w, b_outer_, t0 + (w1_ + w0_ + 0.5 * w1_) * spec_.dt);
            to_x_major(w);
            apply_a(w, a_first_);
        } else {
            apply_a(w, a_first_);
            to_p_major(w);
            apply_b(w, b_outer_, t0 + 0.5 * spec_.dt);
            to_x_major(w);
            apply_a(w, a_first_);
        }

        if (dissipative) {
            to_p_major(w);
            apply_friction(w, 0.5 * spec_.dt);
            apply_diffusion(w);
            to_x_major(w);
        }

        if (spec_.absorber) {
            for (int ip = 0; ip < g_.np; ++ip) {
                double mp = mask_p_[ip];
                double* row = w + static_cast<size_t>(ip) * g_.nx;
                for (int ix = 0; ix < g_.nx; ++ix) row[ix] *= mp * mask_x_[ix];
            }
        }

        f.time = t0 + spec_.dt;

        double total = 0;
        for (double v : f.values) total += std::abs(v);
        if (!std::isfinite(total)) {
            char msg[96];
            std::snprintf(msg, sizeof msg, "evolution: field went non-finite at t = %.6g",
                          f.time);
            throw numerical_error(msg);
        }
    }

  private:
    struct BTable {
        double tau = 0;
        std::vector<std::complex<double>> m;  // nx rows of np/2+1 bins
    };

    std::vector<std::complex<double>> build_a(double tau) {
        std::vector<std::complex<double>> t(static_cast<size_t>(g_.np) * fx_.bins());
        for (int ip = 0; ip < g_.np; ++ip) {
            double shift = g_.p(ip) * tau / spec_.mass;
            for (int k = 0; k < fx_.bins(); ++k) {
                double theta = -wavenumber_x(g_, k) * shift;
                t[static_cast<size_t>(ip) * fx_.bins() + k] =
                    std::polar(1.0 / g_.nx, theta);
            }
        }
        return t;
    }

    BTable build_b(double tau) {
        BTable bt;
        bt.tau = tau;
        bt.m.resize(static_cast<size_t>(g_.nx) * fp_.bins());
        double moyal = spec_.moyal_enabled ? spec_.hbar * spec_.hbar / 24.0 : 0.0;
        for (int ix = 0; ix < g_.nx; ++ix) {
            double x = g_.x(ix);
            double v1 = spec_.potential.d1(x);
            double v3 = moyal * spec_.potential.d3(x);
            for (int k = 0; k < fp_.bins(); ++k) {
                double kp = wavenumber_p(g_, k);
                double theta = (v1 * kp + v3 * kp * kp * kp) * tau;
                bt.m[static_cast<size_t>(ix) * fp_.bins() + k] =
                    std::polar(1.0 / g_.np, theta);
            }
        }
        return bt;
    }

    void build_absorber() {
        double rate = spec_.absorber_rate > 0 ? spec_.absorber_rate : 4.0 / spec_.dt;
        double exponent = rate * spec_.dt;
        auto mask = [exponent](double coord, double lo, double hi) {
            double zone = 0.1 * (hi - lo);
            double edge = std::min(coord - lo, hi - coord);
            if (edge >= zone) return 1.0;
            double xi = 1.0 - edge / zone;
            return std::exp(-exponent * xi * xi * xi * xi);
        };
        mask_x_.resize(g_.nx);
        for (int i = 0; i < g_.nx; ++i) mask_x_[i] = mask(g_.x(i), g_.x_min, g_.x_max);
        mask_p_.resize(g_.np);
        for (int j = 0; j < g_.np; ++j) mask_p_[j] = mask(g_.p(j), g_.p_min, g_.p_max);
    }

    // Layout bookkeeping: values enter advance() x-contiguous ([ip][ix],
    // "x major"). Column passes run on the transposed buffer.
    void to_p_major(double* w) {
        transpose(w, scratch_.data(), g_.np, g_.nx);
        std::swap_ranges(scratch_.begin(), scratch_.end(), w);
    }
    void to_x_major(double* w) {
        transpose(w, scratch_.data(), g_.nx, g_.np);
        std::swap_ranges(scratch_.begin(), scratch_.end(), w);
    }

    void apply_a(double* w, const std::vector<std::complex<double>>& table) {
        int bins = fx_.bins();
        parallel_chunks(g_.np, [&](int begin, int end) {
            std::vector<std::complex<double>> spec(bins);
            for (int ip = begin; ip < end; ++ip) {
                double* row = w + static_cast<size_t>(ip) * g_.nx;
                const std::complex<double>* mult = table.data() + static_cast<size_t>(ip) * bins;
                fx_.forward(row, spec.data());
                for (int k = 0; k < bins - 1; ++k) spec[k] *= mult[k];
                spec[bins - 1] = spec[bins - 1].real() * mult[bins - 1].real();
                fx_.inverse(spec.data(), row);
            }
        });
    }

    // Force plus cubic-correction pass; the drive enters as an x-independent
    // extra phase evaluated at this substep's midpoint time.
    void apply_b(double* w, const BTable& table, double t_mid) {
        int bins = fp_.bins();
        double shift = spec_.potential.drive_shift(t_mid);
        std::vector<std::complex<double>> drive;
        if (shift != 0) {
            drive.resize(bins);
            for (int k = 0; k < bins; ++k)
                drive[k] = std::polar(1.0, shift * wavenumber_p(g_, k) * table.tau);
        }
        const std::complex<double>* dv = drive.empty() ? nullptr : drive.data();
        parallel_chunks(g_.nx, [&](int begin, int end) {
            std::vector<std::complex<double>> spec(bins);
            for (int ix = begin; ix < end; ++ix) {
                double* col = w + static_cast<size_t>(ix) * g_.np;
                const std::complex<double>* mult = table.m.data() + static_cast<size_t>(ix) * bins;
                fp_.forward(col, spec.data());
                if (dv) {
                    for (int k = 0; k < bins - 1; ++k) spec[k] *= mult[k] * dv[k];
                    spec[bins - 1] =
                        spec[bins - 1].real() * (mult[bins - 1] * dv[bins - 1]).real();
                } else {
                    for (int k = 0; k < bins - 1; ++k) spec[k] *= mult[k];
                    spec[bins - 1] = spec[bins - 1].real() * mult[bins - 1].real();
                }
                fp_.inverse(spec.data(), col);
            }
        });
    }

    void apply_diffusion(double* w) {
        if (spec_.diffusion <= 0) return;
        int bins = fp_.bins();
        parallel_chunks(g_.nx, [&](int begin, int end) {
            std::vector<std::complex<double>> spec(bins);
            for (int ix = begin; ix < end; ++ix) {
                double* col = w + static_cast<size_t>(ix) * g_.np;
                fp_.forward(col, spec.data());
                for (int k = 0; k < bins; ++k) spec[k] *= diff_half_[k];
                fp_.inverse(spec.data(), col);
            }
        });
    }

    // RK4 substep for 2 gamma d(pW)/dp with a spectral derivative. Not
    // diagonal in any one transform, but smooth and non-stiff at the dt the
    // advective bound already enforces.
    void apply_friction(double* w, double tau) {
        if (spec_.gamma <= 0) return;
        int n = g_.np;
        parallel_chunks(g_.nx, [&](int begin, int end) {
            std::vector<std::complex<double>> spec(fp_.bins());
            std::vector<double> pw(n), k1(n), k2(n), k3(n), k4(n), tmp(n);
            auto rhs = [&](const double* col, double* out) {
                for (int j = 0; j < n; ++j) pw[j] = g_.p(j) * col[j];
                fp_.forward(pw.data(), spec.data());
                for (int k = 0; k < fp_.bins(); ++k) spec[k] *= deriv_p_[k];
                fp_.inverse(spec.data(), out);
                double two_gamma = 2.0 * spec_.gamma;
                for (int j = 0; j < n; ++j) out[j] *= two_gamma;
            };
            for (int ix = begin; ix < end; ++ix) {
                double* col = w + static_cast<size_t>(ix) * g_.np;
                rhs(col, k1.data());
                for (int j = 0; j < n; ++j) tmp[j] = col[j] + 0.5 * tau * k1[j];
                rhs(tmp.data(), k2.data());
                for (int j = 0; j < n; ++j) tmp[j] = col[j] + 0.5 * tau * k2[j];
                rhs(tmp.data(), k3.data());
                for (int j = 0; j < n; ++j) tmp[j] = col[j] + tau * k3[j];
                rhs(tmp.data(), k4.data());
                for (int j = 0; j < n; ++j)
                    col[j] += tau / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
            }
        });
    }

    PhaseSpaceGrid g_;
    EvolutionSpec spec_;
    RealFftPlan fx_, fp_;
    std::vector<std::complex<double>> a_first_, a_mid_;
    BTable b_outer_, b_mid_;
    double w1_ = 0, w0_ = 0;
    std::vector<double> diff_half_;
    std::vector<std::complex<double>> deriv_p_;
    std::vector<double> mask_x_, mask_p_;
    std::vector<double> scratch_;
};

}  // namespace decolab
