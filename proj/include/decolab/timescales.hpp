#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "catalog.hpp"
#include "collapse.hpp"
#include "constants.hpp"
#include "errors.hpp"

namespace decolab {

// q = 1 within this tolerance routes to the strong-chaos (exponential) branch,
// keeping the power-law branch away from its numerically fragile limit.
inline constexpr double q_branch_tolerance = 1e-12;

inline bool strong_chaos(double q) { return std::abs(1.0 - q) < q_branch_tolerance; }

// Phase-space area not yet visited at time t. Strong chaos decays
// exponentially; weak chaos follows the q-deformed power law.
inline double unexplored_area(const ChaosProfile& ch, double t_s) {
    validate_chaos(ch);
    if (t_s < 0) throw std::domain_error("unexplored area: time must be non-negative");
    if (strong_chaos(ch.q)) return ch.m0 * std::exp(-ch.lambda_q * t_s);
    double one_minus_q = 1.0 - ch.q;
    return ch.m0 * std::exp(-std::log1p(ch.lambda_q * t_s * one_minus_q) / one_minus_q);
}

// Breakdown time from the squeezing argument: lambda^-1 ln(chi sigma_p / hbar).
inline double t_q_zurek(double lambda_per_s, double chi_cm, double sigma_p0_gcm_s, double hbar) {
    if (!(lambda_per_s > 0)) throw std::domain_error("t_q: lambda must be positive");
    double arg = chi_cm * sigma_p0_gcm_s / hbar;
    if (!(arg > 1))
        throw std::domain_error("t_q: chi * sigma_p0 / hbar must exceed 1 "
                                "(system is already quantum-scale)");
    return std::log(arg) / lambda_per_s;
}

// Breakdown time from the unexplored-area law: M(t_Q) = hbar^dims.
inline double t_q_general(const ChaosProfile& ch, double hbar) {
    validate_chaos(ch);
    double log_ratio = std::log(ch.m0) - ch.dims * std::log(hbar);
    if (!(log_ratio > 0)) throw std::domain_error("t_q: M(0) must exceed hbar^dims");
    if (strong_chaos(ch.q)) return log_ratio / ch.lambda_q;
    double one_minus_q = 1.0 - ch.q;
    return std::expm1(one_minus_q * log_ratio) / (ch.lambda_q * one_minus_q);
}

// Coarse-graining time, closed form: lambda^-1 ln(sigma_p sqrt(lambda) / sqrt(2D)).
inline double t_cg_closed_form(double lambda_per_s, double sigma_p0_gcm_s, double diffusion) {
    if (!(lambda_per_s > 0)) throw std::domain_error("t_cg: lambda must be positive");
    if (!(sigma_p0_gcm_s > 0)) throw std::domain_error("t_cg: sigma_p0 must be positive");
    if (!(diffusion > 0)) throw std::domain_error("t_cg: diffusion must be positive");
    double log_arg = std::log(sigma_p0_gcm_s) + 0.5 * std::log(lambda_per_s) -
                     0.5 * std::log(2.0 * diffusion);
    if (!(log_arg > 0))
        throw std::domain_error("t_cg: sigma_p0 sqrt(lambda) / sqrt(2D) must exceed 1 "
                                "(diffusion dominates instantly)");
    return log_arg / lambda_per_s;
}

// Standoff between squeezing and diffusive spreading:
// solves sigma_p exp(-lambda t) = sqrt(2 D t) by bisection in log t.
// The closed form drops the sqrt(t) inside the logarithm, so the two agree
// up to |t_standoff - t_closed| * lambda <= 0.5 ln(lambda t_standoff) + 1.
inline double t_cg_standoff(double lambda_per_s, double sigma_p0_gcm_s, double diffusion) {
    t_cg_closed_form(lambda_per_s, sigma_p0_gcm_s, diffusion);  // shared preconditions
    auto residual = [&](double t) {
        return std::log(sigma_p0_gcm_s) - lambda_per_s * t - 0.5 * std::log(2.0 * diffusion * t);
    };
    double lo = 1e-30, hi = 1e20;
    if (!(residual(lo) > 0) || !(residual(hi) < 0))
        throw std::domain_error("t_cg standoff: no sign change in [1e-30, 1e20] s");
    double ulo = std::log(lo), uhi = std::log(hi);
    for (int i = 0; i < 200 && (uhi - ulo) > 1e-10; ++i) {
        double mid = 0.5 * (ulo + uhi);
        (residual(std::exp(mid)) > 0 ? ulo : uhi) = mid;
    }
    return std::exp(0.5 * (ulo + uhi));
}

// Coarse-graining time from the unexplored-area law with diffusion floor
// (2 sqrt(Dx Dp))^dims.
inline double t_cg_general(const ChaosProfile& ch, double diffusion_x, double diffusion_p) {
    validate_chaos(ch);
    if (!(diffusion_x > 0) || !(diffusion_p > 0))
        throw std::domain_error("t_cg: diffusion coefficients must be positive");
    double log_arg = std::log(ch.m0) + ch.dims * std::log(ch.lambda_q) -
                     ch.dims * std::log(2.0 * std::sqrt(diffusion_x * diffusion_p));
    if (!(log_arg > 0))
        throw std::domain_error("t_cg: M(0) lambda^dims must exceed (2 sqrt(Dx Dp))^dims");
    if (strong_chaos(ch.q)) return log_arg / ch.lambda_q;
    double one_minus_q = 1.0 - ch.q;
    return std::expm1(one_minus_q * log_arg) / (ch.lambda_q * one_minus_q);
}

// Spatial diffusion scale paired with a momentum diffusion D under the default
// chaos profile; chosen so that for dims = 1, q = 1, m0 = chi sigma_p0 the
// general coarse-graining time coincides with the closed form exactly.
inline double default_diffusion_x(double lambda_per_s, double chi_cm) {
    return lambda_per_s * chi_cm * chi_cm / 2.0;
}

enum class Verdict { ClassicalitySafe, CorrespondenceBreakdown };

inline const char* verdict_name(Verdict v) {
    return v == Verdict::ClassicalitySafe ? "ClassicalitySafe" : "CorrespondenceBreakdown";
}

struct TimescaleReport {
    std::string body;
    FluctuationKind model = FluctuationKind::Env;
    double t_q_s = 0;
    double t_cg_s = 0;
    double diffusion = 0;  // erg g / s
    ChaosProfile chaos;
    Verdict verdict = Verdict::CorrespondenceBreakdown;
    std::map<std::string, double> intermediates;
};

// Full verdict for one body/model pair. Uses the catalog chaos profile unless
// an explicit one is given; override_diffusion substitutes the model's D.
inline TimescaleReport classicality_verdict(const BodyProfile& body, const FluctuationModel& model,
                                            const PhysicalConstants& c,
                                            std::optional<ChaosProfile> chaos = std::nullopt,
                                            std::optional<double> override_diffusion = std::nullopt) {
    TimescaleReport r;
    r.body = body.name;
    r.model = model.kind;
    r.chaos = chaos.value_or(default_chaos_profile(body));
    validate_chaos(r.chaos);
    r.diffusion = override_diffusion.value_or(diffusion_coefficient(model, body, c));
    if (!(r.diffusion > 0)) throw std::domain_error("verdict: diffusion must be positive");

    bool catalog_case = strong_chaos(r.chaos.q) && r.chaos.dims == 1;
    double dx = default_diffusion_x(r.chaos.lambda_q, body.chi_cm);
    if (catalog_case) {
        r.t_q_s = t_q_zurek(r.chaos.lambda_q, body.chi_cm, body.sigma_p0_gcm_s, c.hbar);
        r.t_cg_s = t_cg_closed_form(r.chaos.lambda_q, body.sigma_p0_gcm_s, r.diffusion);
        double standoff = t_cg_standoff(r.chaos.lambda_q, body.sigma_p0_gcm_s, r.diffusion);
        r.intermediates["standoff_time_s"] = standoff;
        r.intermediates["standoff_gap_log"] = std::abs(standoff - r.t_cg_s) * r.chaos.lambda_q;
        r.intermediates["tq_log_argument"] =
            body.chi_cm * body.sigma_p0_gcm_s / c.hbar;
        r.intermediates["tcg_log_argument"] =
            body.sigma_p0_gcm_s * std::sqrt(r.chaos.lambda_q) / std::sqrt(2.0 * r.diffusion);
    } else {
        r.t_q_s = t_q_general(r.chaos, c.hbar);
        r.t_cg_s = t_cg_general(r.chaos, dx, r.diffusion);
    }
    r.intermediates["q"] = r.chaos.q;
    r.intermediates["lambda_q_per_s"] = r.chaos.lambda_q;
    r.intermediates["m0"] = r.chaos.m0;
    r.intermediates["diffusion_x_cm2_s"] = dx;
    r.intermediates["t_q_years"] = seconds_to_years(r.t_q_s);
    r.intermediates["t_cg_years"] = seconds_to_years(r.t_cg_s);
    r.verdict = r.t_cg_s < r.t_q_s ? Verdict::ClassicalitySafe : Verdict::CorrespondenceBreakdown;
    return r;
}

}  // namespace decolab
