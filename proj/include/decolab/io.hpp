#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "evolve.hpp"
#include "ini.hpp"

namespace decolab {

inline std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write " + path);
    return out;
}

// Snapshot layout: one row per grid node, x varying slowest. Fixed order and
// 17-digit formatting keep repeated runs byte-identical.
inline void write_snapshot_csv(const std::string& path, const WignerField& f) {
    auto out = open_for_write(path);
    out << "x, p, W\n";
    for (int ix = 0; ix < f.grid.nx; ++ix) {
        std::string x = format_g17(f.grid.x(ix));
        for (int ip = 0; ip < f.grid.np; ++ip)
            out << x << ", " << format_g17(f.grid.p(ip)) << ", "
                << format_g17(f.at(ix, ip)) << "\n";
    }
}

inline const char* diagnostics_csv_header =
    "time, norm, mean_x, mean_p, var_x, var_p, cov_xp, coherence_length, negativity, "
    "purity, entropy_fine, entropy_coarse";

inline void append_diagnostics_row(std::ostream& out, const Diagnostics& d) {
    out << format_g17(d.time) << ", " << format_g17(d.norm) << ", " << format_g17(d.mean_x)
        << ", " << format_g17(d.mean_p) << ", " << format_g17(d.var_x) << ", "
        << format_g17(d.var_p) << ", " << format_g17(d.cov_xp) << ", "
        << format_g17(d.coherence_length) << ", " << format_g17(d.negativity) << ", "
        << format_g17(d.purity) << ", " << format_g17(d.entropy_fine) << ", "
        << format_g17(d.entropy_coarse) << "\n";
}

inline void write_diagnostics_csv(const std::string& path,
                                  const std::vector<Diagnostics>& series) {
    auto out = open_for_write(path);
    out << diagnostics_csv_header << "\n";
    for (const auto& d : series) append_diagnostics_row(out, d);
}

inline void write_distance_csv(const std::string& path, const DistanceSeries& series) {
    auto out = open_for_write(path);
    out << "time, l1_distance\n";
    for (const auto& pt : series.points)
        out << format_g17(pt.time) << ", " << format_g17(pt.distance) << "\n";
}

inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Digest of the fully resolved parameter set: sorted key=value lines.
inline std::string config_hash(const std::map<std::string, std::string>& params) {
    std::string canon;
    for (const auto& [k, v] : params) canon += k + "=" + v + "\n";
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canon)));
    return buf;
}

struct RunManifest {
    std::string command;
    std::string hash;
    std::map<std::string, std::string> inputs;
    std::vector<std::string> outputs;
    double wall_time_s = 0;
    nlohmann::ordered_json extra;  // command-specific results
};

inline nlohmann::ordered_json diagnostics_json(const Diagnostics& d) {
    nlohmann::ordered_json j;
    j["time"] = d.time;
    j["norm"] = d.norm;
    j["mean_x"] = d.mean_x;
    j["mean_p"] = d.mean_p;
    j["var_x"] = d.var_x;
    j["var_p"] = d.var_p;
    j["cov_xp"] = d.cov_xp;
    j["coherence_length"] = d.coherence_length;
    j["negativity"] = d.negativity;
    j["purity"] = d.purity;
    // NaN is not representable in JSON; entropy fields drop out when unset
    if (std::isfinite(d.entropy_fine)) j["entropy_fine"] = d.entropy_fine;
    if (std::isfinite(d.entropy_coarse)) j["entropy_coarse"] = d.entropy_coarse;
    return j;
}

inline void write_manifest(const std::string& path, const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["config_hash"] = m.hash;
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["wall_time_s"] = m.wall_time_s;
    for (auto& [key, value] : m.extra.items()) j[key] = value;
    auto out = open_for_write(path);
    out << j.dump(2) << "\n";
}

}  // namespace decolab
