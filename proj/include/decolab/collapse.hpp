#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "constants.hpp"
#include "errors.hpp"

namespace decolab {

// New constants of nature for the spontaneous-localization models.
struct CollapseModelParams {
    double lambda_grw = 1e-16;  // s^-1, per-nucleon localization rate
    double a = 1e-5;            // cm, localization length
    double gamma_gpr = 1e-30;   // cm^-3 s^-1, Wiener intensity
};

inline void validate_collapse_params(const CollapseModelParams& p) {
    if (!(p.lambda_grw > 0)) throw config_error("collapse params: lambda_grw must be positive");
    if (!(p.a > 0)) throw config_error("collapse params: a must be positive");
    if (!(p.gamma_gpr > 0)) throw config_error("collapse params: gamma_gpr must be positive");
}

enum class FluctuationKind { Env, GRW, GPR, GGR };

inline const char* kind_name(FluctuationKind k) {
    switch (k) {
        case FluctuationKind::Env: return "env";
        case FluctuationKind::GRW: return "grw";
        case FluctuationKind::GPR: return "gpr";
        case FluctuationKind::GGR: return "ggr";
    }
    return "?";
}

inline FluctuationKind parse_kind(const std::string& s) {
    if (s == "env") return FluctuationKind::Env;
    if (s == "grw") return FluctuationKind::GRW;
    if (s == "gpr") return FluctuationKind::GPR;
    if (s == "ggr") return FluctuationKind::GGR;
    throw config_error("unknown model '" + s + "' (expected env|grw|gpr|ggr)");
}

struct FluctuationModel {
    FluctuationKind kind = FluctuationKind::Env;
    CollapseModelParams params;
    double env_temperature_K = 0;  // used by Env only
    double env_rate_per_s = 0;     // used by Env only
};

inline void validate_model(const FluctuationModel& m) {
    validate_collapse_params(m.params);
    if (m.kind == FluctuationKind::Env) {
        if (!(m.env_temperature_K > 0))
            throw config_error("env model requires a positive temperature");
        if (!(m.env_rate_per_s > 0)) throw config_error("env model requires a positive rate");
    }
}

// Environmental T and gamma default to the body's catalog values.
inline FluctuationModel make_model(FluctuationKind kind, const BodyProfile& body,
                                   const CollapseModelParams& params = {}) {
    FluctuationModel m;
    m.kind = kind;
    m.params = params;
    m.env_temperature_K = body.temperature_K;
    m.env_rate_per_s = body.relax_rate_per_s;
    validate_model(m);
    return m;
}

// Momentum diffusion coefficient, erg g / s.
inline double diffusion_coefficient(const FluctuationModel& m, const BodyProfile& b,
                                    const PhysicalConstants& c) {
    const auto& p = m.params;
    switch (m.kind) {
        case FluctuationKind::Env:
            return 2.0 * b.mass_g * m.env_rate_per_s * c.k_B * m.env_temperature_K;
        case FluctuationKind::GRW:
            return b.particle_count * p.lambda_grw * c.hbar * c.hbar / (4.0 * p.a * p.a);
        case FluctuationKind::GPR:
            return p.gamma_gpr * c.hbar * c.hbar * b.particle_count * b.particle_count *
                   b.s_perp_cm2 /
                   (4.0 * b.volume_cm3 * b.volume_cm3 * p.a * std::sqrt(std::numbers::pi));
        case FluctuationKind::GGR:
            return c.G * c.hbar * b.mass_g * b.mass_g / (2.0 * b.volume_cm3);
    }
    throw config_error("unreachable model kind");
}

enum class KernelRegime { Exact, SmallSeparationQuadratic };

// Decoherence kernel Gamma(d^2) for one model/body pair. Gamma(0) = 0 and
// Gamma is non-decreasing in the squared separation for every model.
struct DecoherenceKernel {
    FluctuationModel model;
    BodyProfile body;
    KernelRegime regime = KernelRegime::SmallSeparationQuadratic;
};

inline DecoherenceKernel make_kernel(FluctuationKind kind, const BodyProfile& body,
                                     const CollapseModelParams& params = {},
                                     std::optional<KernelRegime> regime = std::nullopt) {
    DecoherenceKernel k;
    k.model = make_model(kind, body, params);
    k.body = body;
    k.regime = regime.value_or(kind == FluctuationKind::GRW
                                   ? KernelRegime::Exact
                                   : KernelRegime::SmallSeparationQuadratic);
    if (k.regime == KernelRegime::Exact && kind != FluctuationKind::GRW)
        throw config_error(std::string("model ") + kind_name(kind) +
                           ": only the small-separation quadratic kernel is implemented");
    return k;
}

inline double gamma_grw(const DecoherenceKernel& k, double d2_cm2) {
    if (k.model.kind != FluctuationKind::GRW) throw config_error("gamma_grw: kernel is not GRW");
    if (d2_cm2 < 0) throw std::domain_error("gamma_grw: squared separation must be non-negative");
    const auto& p = k.model.params;
    double u = d2_cm2 / (4.0 * p.a * p.a);
    if (k.regime == KernelRegime::SmallSeparationQuadratic)
        return k.body.particle_count * p.lambda_grw * u;
    return k.body.particle_count * p.lambda_grw * -std::expm1(-u);
}

struct GgrRate {
    double rate_per_s = 0;
    bool regime_warning = false;  // set when d^2 leaves the small-separation window
};

inline GgrRate gamma_ggr_quadratic(const DecoherenceKernel& k, double d2_cm2,
                                   const PhysicalConstants& c) {
    if (k.model.kind != FluctuationKind::GGR)
        throw config_error("gamma_ggr_quadratic: kernel is not GGR");
    if (d2_cm2 < 0)
        throw std::domain_error("gamma_ggr_quadratic: squared separation must be non-negative");
    GgrRate r;
    r.rate_per_s =
        c.G * k.body.mass_g * k.body.mass_g / (2.0 * k.body.volume_cm3 * c.hbar) * d2_cm2;
    r.regime_warning = d2_cm2 > std::pow(k.body.volume_cm3, 2.0 / 3.0) / 100.0;
    return r;
}

// Unified kernel evaluation. Quadratic kernels have slope D / hbar^2 so that
// the induced momentum diffusion matches diffusion_coefficient exactly.
inline double kernel_rate(const DecoherenceKernel& k, double d2_cm2, const PhysicalConstants& c) {
    if (d2_cm2 < 0) throw std::domain_error("kernel rate: squared separation must be non-negative");
    switch (k.model.kind) {
        case FluctuationKind::GRW:
            return gamma_grw(k, d2_cm2);
        case FluctuationKind::GGR:
            return gamma_ggr_quadratic(k, d2_cm2, c).rate_per_s;
        case FluctuationKind::GPR:
        case FluctuationKind::Env:
            return diffusion_coefficient(k.model, k.body, c) / (c.hbar * c.hbar) * d2_cm2;
    }
    throw config_error("unreachable model kind");
}

// Off-diagonal survival factor exp(-Gamma(d^2) t) with frozen Hamiltonian motion.
inline double coherence_decay_factor(const DecoherenceKernel& k, double d_cm, double t_s,
                                     const PhysicalConstants& c) {
    if (d_cm < 0) throw std::domain_error("coherence decay: separation must be non-negative");
    if (t_s < 0) throw std::domain_error("coherence decay: time must be non-negative");
    return std::exp(-kernel_rate(k, d_cm * d_cm, c) * t_s);
}

// One-sided difference quotient of Gamma at the origin (Gamma(0) = 0).
inline double kernel_slope_at_origin(const DecoherenceKernel& k, const PhysicalConstants& c,
                                     double step_cm2) {
    if (!(step_cm2 > 0)) throw std::domain_error("kernel slope: step must be positive");
    return kernel_rate(k, step_cm2, c) / step_cm2;
}

// hbar^2 times the kernel slope at zero separation: the effective momentum
// diffusion coefficient this kernel induces. One Richardson refinement of the
// one-sided quotient; matches diffusion_coefficient within 1% for GRW and GGR.
inline double kernel_curvature_check(const DecoherenceKernel& k, const PhysicalConstants& c,
                                     double step_cm2 = 0) {
    if (step_cm2 == 0) step_cm2 = k.model.params.a * k.model.params.a * 1e-4;
    double s1 = kernel_slope_at_origin(k, c, step_cm2);
    double s2 = kernel_slope_at_origin(k, c, step_cm2 / 2.0);
    double slope = 2.0 * s2 - s1;
    if (!std::isfinite(slope)) throw numerical_error("kernel curvature: slope is not finite");
    return c.hbar * c.hbar * slope;
}

// Literature order-of-magnitude estimates for the four Jupiter diffusion
// coefficients, erg g / s, in kind order env, grw, gpr, ggr.
inline std::optional<std::array<double, 4>> table2_targets(const std::string& body_name) {
    if (body_name == "jupiter") return std::array<double, 4>{1e-10, 1e-8, 1e-11, 1e-4};
    return std::nullopt;
}

struct Table2Row {
    FluctuationKind kind;
    double computed = 0;          // erg g / s
    std::optional<double> target;  // present only when targets exist for the body
    std::optional<double> dex;     // log10(computed / target)
    std::optional<bool> pass;      // |dex| <= 1
};

inline std::vector<Table2Row> table2(const BodyProfile& body, const CollapseModelParams& params,
                                     const PhysicalConstants& c) {
    auto targets = table2_targets(body.name);
    std::vector<Table2Row> rows;
    const FluctuationKind kinds[] = {FluctuationKind::Env, FluctuationKind::GRW,
                                     FluctuationKind::GPR, FluctuationKind::GGR};
    for (int i = 0; i < 4; ++i) {
        Table2Row row;
        row.kind = kinds[i];
        row.computed = diffusion_coefficient(make_model(kinds[i], body, params), body, c);
        if (targets) {
            row.target = (*targets)[static_cast<size_t>(i)];
            row.dex = std::log10(row.computed / *row.target);
            row.pass = std::abs(*row.dex) <= 1.0;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace decolab
