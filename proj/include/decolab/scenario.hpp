#pragma once

#include <istream>
#include <map>
#include <set>
#include <string>

#include "engine.hpp"
#include "ini.hpp"
#include "wigner.hpp"

namespace decolab {

// One self-contained engine run: grid, dynamics, and the initial Gaussian.
struct Scenario {
    PhaseSpaceGrid grid;
    EvolutionSpec spec;
    double x0 = 0;
    double p0 = 0;
    double sigma_x = 0;
    double sigma_p = 0;
};

namespace detail {

inline bool ini_bool(const IniSection& s, const std::string& key, bool fallback) {
    if (!ini_has(s, key)) return fallback;
    std::string v = ini_string(s, key);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw config_error("[" + s.name + "] field " + key + ": expected a boolean, got '" + v +
                       "'");
}

inline int ini_int(const IniSection& s, const std::string& key) {
    double v = ini_number(s, key);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw config_error("[" + s.name + "] field " + key + ": expected an integer");
    return i;
}

inline void reject_unknown(const IniSection& s, const std::set<std::string>& known,
                           const std::string& origin) {
    for (const auto& [key, value] : s.entries)
        if (!known.count(key))
            throw config_error(origin + ": [" + s.name + "] unknown field " + key);
}

}  // namespace detail

inline Scenario load_scenario(std::istream& in, const std::string& origin) {
    auto sections = parse_ini(in, origin);
    if (sections.empty()) throw config_error(origin + ": scenario file is empty");

    std::map<std::string, const IniSection*> by_name;
    for (const auto& s : sections) {
        if (by_name.count(s.name))
            throw config_error(origin + ": duplicate section [" + s.name + "]");
        static const std::set<std::string> known_sections{"grid", "potential", "evolution",
                                                          "initial", "diagnostics"};
        if (!known_sections.count(s.name))
            throw config_error(origin + ": unknown section [" + s.name + "]");
        by_name[s.name] = &s;
    }
    auto require = [&](const char* name) -> const IniSection& {
        auto it = by_name.find(name);
        if (it == by_name.end())
            throw config_error(origin + ": missing section [" + std::string(name) + "]");
        return *it->second;
    };

    Scenario sc;

    const IniSection& grid = require("grid");
    detail::reject_unknown(grid, {"nx", "np", "x_min", "x_max", "p_min", "p_max"}, origin);
    sc.grid.nx = detail::ini_int(grid, "nx");
    sc.grid.np = detail::ini_int(grid, "np");
    sc.grid.x_min = ini_number(grid, "x_min");
    sc.grid.x_max = ini_number(grid, "x_max");
    sc.grid.p_min = ini_number(grid, "p_min");
    sc.grid.p_max = ini_number(grid, "p_max");
    validate_grid(sc.grid);

    if (by_name.count("potential")) {
        const IniSection& pot = *by_name["potential"];
        detail::reject_unknown(
            pot, {"c0", "c1", "c2", "c3", "c4", "drive_amplitude", "drive_omega"}, origin);
        for (int i = 0; i < 5; ++i) {
            std::string key = "c" + std::to_string(i);
            sc.spec.potential.c[static_cast<size_t>(i)] = ini_number_or(pot, key, 0.0);
        }
        sc.spec.potential.drive_amplitude = ini_number_or(pot, "drive_amplitude", 0.0);
        sc.spec.potential.drive_omega = ini_number_or(pot, "drive_omega", 0.0);
    }

    const IniSection& evo = require("evolution");
    detail::reject_unknown(evo,
                           {"mass", "hbar", "gamma", "diffusion", "moyal", "dt", "t_end",
                            "snapshot_stride", "scheme", "absorber", "absorber_rate"},
                           origin);
    sc.spec.mass = ini_number_or(evo, "mass", 1.0);
    sc.spec.hbar = ini_number_or(evo, "hbar", 1.0);
    sc.spec.gamma = ini_number_or(evo, "gamma", 0.0);
    sc.spec.diffusion = ini_number_or(evo, "diffusion", 0.0);
    sc.spec.moyal_enabled = detail::ini_bool(evo, "moyal", true);
    sc.spec.dt = ini_number(evo, "dt");
    sc.spec.t_end = ini_number(evo, "t_end");
    sc.spec.snapshot_stride = ini_has(evo, "snapshot_stride")
                                  ? detail::ini_int(evo, "snapshot_stride")
                                  : 1;
    sc.spec.scheme = parse_scheme(ini_string_or(evo, "scheme", "yoshida4"));
    sc.spec.absorber = detail::ini_bool(evo, "absorber", true);
    sc.spec.absorber_rate = ini_number_or(evo, "absorber_rate", 0.0);

    const IniSection& init = require("initial");
    detail::reject_unknown(init, {"x0", "p0", "sigma_x", "sigma_p"}, origin);
    sc.x0 = ini_number_or(init, "x0", 0.0);
    sc.p0 = ini_number_or(init, "p0", 0.0);
    sc.sigma_x = ini_number(init, "sigma_x");
    sc.sigma_p = ini_number(init, "sigma_p");

    if (by_name.count("diagnostics")) {
        const IniSection& diag = *by_name["diagnostics"];
        detail::reject_unknown(diag, {"entropy_box_x", "entropy_box_p"}, origin);
        sc.spec.entropy_box_x = ini_number_or(diag, "entropy_box_x", 0.0);
        sc.spec.entropy_box_p = ini_number_or(diag, "entropy_box_p", 0.0);
    }

    validate_spec(sc.spec);
    return sc;
}

inline Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open " + path);
    return load_scenario(in, path);
}

inline WignerField initial_state(const Scenario& sc) {
    return init_gaussian(sc.grid, sc.x0, sc.p0, sc.sigma_x, sc.sigma_p, sc.spec.hbar);
}

// Canonical key/value image of the fully resolved run. Feeds both the config
// hash and the manifest, so defaults and overrides land in the same map.
inline std::map<std::string, std::string> resolved_parameters(const Scenario& sc) {
    std::map<std::string, std::string> m;
    m["grid.nx"] = std::to_string(sc.grid.nx);
    m["grid.np"] = std::to_string(sc.grid.np);
    m["grid.x_min"] = format_g17(sc.grid.x_min);
    m["grid.x_max"] = format_g17(sc.grid.x_max);
    m["grid.p_min"] = format_g17(sc.grid.p_min);
    m["grid.p_max"] = format_g17(sc.grid.p_max);
    for (int i = 0; i < 5; ++i)
        m["potential.c" + std::to_string(i)] =
            format_g17(sc.spec.potential.c[static_cast<size_t>(i)]);
    m["potential.drive_amplitude"] = format_g17(sc.spec.potential.drive_amplitude);
    m["potential.drive_omega"] = format_g17(sc.spec.potential.drive_omega);
    m["evolution.mass"] = format_g17(sc.spec.mass);
    m["evolution.hbar"] = format_g17(sc.spec.hbar);
    m["evolution.gamma"] = format_g17(sc.spec.gamma);
    m["evolution.diffusion"] = format_g17(sc.spec.diffusion);
    m["evolution.moyal"] = sc.spec.moyal_enabled ? "true" : "false";
    m["evolution.dt"] = format_g17(sc.spec.dt);
    m["evolution.t_end"] = format_g17(sc.spec.t_end);
    m["evolution.snapshot_stride"] = std::to_string(sc.spec.snapshot_stride);
    m["evolution.scheme"] = scheme_name(sc.spec.scheme);
    m["evolution.absorber"] = sc.spec.absorber ? "true" : "false";
    m["evolution.absorber_rate"] = format_g17(sc.spec.absorber_rate);
    m["initial.x0"] = format_g17(sc.x0);
    m["initial.p0"] = format_g17(sc.p0);
    m["initial.sigma_x"] = format_g17(sc.sigma_x);
    m["initial.sigma_p"] = format_g17(sc.sigma_p);
    m["diagnostics.entropy_box_x"] = format_g17(sc.spec.entropy_box_x);
    m["diagnostics.entropy_box_p"] = format_g17(sc.spec.entropy_box_p);
    return m;
}

}  // namespace decolab
