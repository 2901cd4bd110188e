#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "constants.hpp"
#include "errors.hpp"
#include "ini.hpp"

namespace decolab {

// One macroscopic body. All CGS; the field names carry the units.
struct BodyProfile {
    std::string name;
    double mass_g = 0;
    double volume_cm3 = 0;
    double particle_count = 0;  // nucleons
    double temperature_K = 0;
    double relax_rate_per_s = 0;
    double sigma_p0_gcm_s = 0;  // initial momentum dispersion
    double lyapunov_per_s = 0;
    double s_perp_cm2 = 0;  // transverse cross section
    double chi_cm = 0;      // nonlinearity length of the governing potential
};

// Chaos description used by the timescale formulas. dims counts phase-space
// dimension pairs; m0 is the initial unexplored area in (erg s)^dims.
struct ChaosProfile {
    double q = 1.0;
    double lambda_q = 0;  // s^-1
    int dims = 1;
    double m0 = 0;
};

inline double derived_particle_count(const BodyProfile& b, const PhysicalConstants& c) {
    return b.mass_g / c.proton_mass;
}

// Cross section of the volume-equivalent sphere.
inline double derived_s_perp(const BodyProfile& b) {
    double r = std::cbrt(3.0 * b.volume_cm3 / (4.0 * std::numbers::pi));
    return std::numbers::pi * r * r;
}

inline void validate_body(const BodyProfile& b, const PhysicalConstants& c) {
    auto positive = [&](double v, const char* field) {
        if (!(v > 0) || !std::isfinite(v))
            throw config_error("body " + b.name + ": field " + field + " must be positive");
    };
    positive(b.mass_g, "mass_g");
    positive(b.volume_cm3, "volume_cm3");
    positive(b.particle_count, "particle_count");
    positive(b.sigma_p0_gcm_s, "sigma_p0_gcm_s");
    positive(b.lyapunov_per_s, "lyapunov_per_s");
    positive(b.s_perp_cm2, "s_perp_cm2");
    positive(b.chi_cm, "chi_cm");
    if (b.temperature_K < 0)
        throw config_error("body " + b.name + ": field temperature_K must be non-negative");
    if (b.relax_rate_per_s < 0)
        throw config_error("body " + b.name + ": field relax_rate_per_s must be non-negative");
    double n_ref = derived_particle_count(b, c);
    if (b.particle_count < 0.5 * n_ref || b.particle_count > 2.0 * n_ref)
        throw config_error("body " + b.name + ": particle_count deviates from mass_g/proton_mass " +
                           "by more than a factor of 2");
    // Macroscopicity guard: the logarithmic timescale formulas assume a large
    // action-to-hbar ratio.
    if (!(b.sigma_p0_gcm_s * b.chi_cm / c.hbar > 1e10))
        throw config_error("body " + b.name + ": sigma_p0 * chi / hbar must exceed 1e10");
}

inline BodyProfile complete_body(BodyProfile b, const PhysicalConstants& c) {
    if (b.particle_count == 0) b.particle_count = derived_particle_count(b, c);
    if (b.s_perp_cm2 == 0) b.s_perp_cm2 = derived_s_perp(b);
    validate_body(b, c);
    return b;
}

inline std::vector<BodyProfile> builtin_catalog(const PhysicalConstants& c) {
    BodyProfile jupiter;
    jupiter.name = "jupiter";
    jupiter.mass_g = 1.898e30;
    jupiter.volume_cm3 = 1.43128e30;
    jupiter.temperature_K = 100.0;
    jupiter.relax_rate_per_s = 1e-26;
    jupiter.sigma_p0_gcm_s = 2.478788e36;  // mass times mean orbital speed 1.306e6 cm/s
    jupiter.lyapunov_per_s = 6.337135614702154e-15;  // inverse of 5e6 yr
    jupiter.chi_cm = 7.78e13;  // orbital radius

    BodyProfile hyperion;
    hyperion.name = "hyperion";
    hyperion.mass_g = 5.6e21;
    hyperion.volume_cm3 = 1.0306e22;
    hyperion.temperature_K = 93.0;
    hyperion.relax_rate_per_s = 1e-26;
    hyperion.sigma_p0_gcm_s = 2.83416e27;  // mass times mean orbital speed 5.061e5 cm/s
    hyperion.lyapunov_per_s = 2.4e-7;  // calibrated: ~48 day tumbling instability time
    hyperion.chi_cm = 1.481e11;  // orbital radius around Saturn

    return {complete_body(jupiter, c), complete_body(hyperion, c)};
}

inline const char* catalog_required_fields[] = {
    "mass_g",         "volume_cm3",     "temperature_K", "relax_rate_per_s",
    "sigma_p0_gcm_s", "lyapunov_per_s", "chi_cm",
};

inline BodyProfile body_from_section(const IniSection& s, const PhysicalConstants& c) {
    for (const char* field : catalog_required_fields)
        if (!ini_has(s, field))
            throw config_error("body " + s.name + ": missing field " + field);
    BodyProfile b;
    b.name = s.name;
    b.mass_g = ini_number(s, "mass_g");
    b.volume_cm3 = ini_number(s, "volume_cm3");
    b.particle_count = ini_number_or(s, "particle_count", 0.0);
    b.temperature_K = ini_number(s, "temperature_K");
    b.relax_rate_per_s = ini_number(s, "relax_rate_per_s");
    b.sigma_p0_gcm_s = ini_number(s, "sigma_p0_gcm_s");
    b.lyapunov_per_s = ini_number(s, "lyapunov_per_s");
    b.s_perp_cm2 = ini_number_or(s, "s_perp_cm2", 0.0);
    b.chi_cm = ini_number(s, "chi_cm");
    return complete_body(b, c);
}

// File entries override same-named built-ins; the built-in bodies are always present.
inline std::vector<BodyProfile> load_catalog(std::istream& in, const std::string& origin,
                                             const PhysicalConstants& c) {
    std::vector<BodyProfile> catalog = builtin_catalog(c);
    for (const IniSection& s : parse_ini(in, origin)) {
        BodyProfile b = body_from_section(s, c);
        bool replaced = false;
        for (auto& existing : catalog)
            if (existing.name == b.name) {
                existing = b;
                replaced = true;
                break;
            }
        if (!replaced) catalog.push_back(std::move(b));
    }
    return catalog;
}

inline std::vector<BodyProfile> load_catalog_file(const std::string& path,
                                                  const PhysicalConstants& c) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open catalog " + path);
    return load_catalog(in, path, c);
}

inline std::string serialize_catalog(const std::vector<BodyProfile>& catalog) {
    std::ostringstream out;
    for (const auto& b : catalog) {
        out << "[" << b.name << "]\n";
        out << "mass_g = " << format_g17(b.mass_g) << "\n";
        out << "volume_cm3 = " << format_g17(b.volume_cm3) << "\n";
        out << "particle_count = " << format_g17(b.particle_count) << "\n";
        out << "temperature_K = " << format_g17(b.temperature_K) << "\n";
        out << "relax_rate_per_s = " << format_g17(b.relax_rate_per_s) << "\n";
        out << "sigma_p0_gcm_s = " << format_g17(b.sigma_p0_gcm_s) << "\n";
        out << "lyapunov_per_s = " << format_g17(b.lyapunov_per_s) << "\n";
        out << "s_perp_cm2 = " << format_g17(b.s_perp_cm2) << "\n";
        out << "chi_cm = " << format_g17(b.chi_cm) << "\n\n";
    }
    return out.str();
}

inline const BodyProfile& find_body(const std::vector<BodyProfile>& catalog,
                                    const std::string& name) {
    for (const auto& b : catalog)
        if (b.name == name) return b;
    throw config_error("unknown body '" + name + "'");
}

// Momentum dispersion fallback: the body's mean orbital momentum.
inline double default_sigma_p0(const BodyProfile& b, double orbital_speed_cm_s) {
    if (!(orbital_speed_cm_s > 0)) throw std::domain_error("orbital speed must be positive");
    return b.mass_g * orbital_speed_cm_s;
}

// Chaos profile matching the body's catalog data: strong chaos, one dimension
// pair, initial unexplored area chi * sigma_p0.
inline ChaosProfile default_chaos_profile(const BodyProfile& b) {
    ChaosProfile ch;
    ch.q = 1.0;
    ch.lambda_q = b.lyapunov_per_s;
    ch.dims = 1;
    ch.m0 = b.chi_cm * b.sigma_p0_gcm_s;
    return ch;
}

inline void validate_chaos(const ChaosProfile& ch) {
    if (!(ch.q > 0) || ch.q > 1) throw config_error("chaos profile: q must lie in (0, 1]");
    if (!(ch.lambda_q > 0)) throw config_error("chaos profile: lambda_q must be positive");
    if (ch.dims < 1) throw config_error("chaos profile: dims must be at least 1");
    if (!(ch.m0 > 0)) throw config_error("chaos profile: m0 must be positive");
}

}  // namespace decolab
