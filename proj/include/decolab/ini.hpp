#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"

namespace decolab {

// Minimal INI dialect shared by catalog and scenario files:
// [section] headers, key = value lines, '#' comments, blank lines ignored.
struct IniSection {
    std::string name;
    std::map<std::string, std::string> entries;
};

inline std::string ini_trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<IniSection> parse_ini(std::istream& in, const std::string& origin) {
    std::vector<IniSection> sections;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto where = [&] { return origin + ":" + std::to_string(lineno); };
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = ini_trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw config_error(where() + ": unterminated section header");
            IniSection s;
            s.name = ini_trim(line.substr(1, line.size() - 2));
            if (s.name.empty()) throw config_error(where() + ": empty section name");
            sections.push_back(std::move(s));
        } else {
            auto eq = line.find('=');
            if (eq == std::string::npos) throw config_error(where() + ": expected key = value");
            if (sections.empty()) throw config_error(where() + ": key outside any section");
            std::string key = ini_trim(line.substr(0, eq));
            std::string val = ini_trim(line.substr(eq + 1));
            if (key.empty()) throw config_error(where() + ": empty key");
            sections.back().entries[key] = val;
        }
    }
    return sections;
}

inline std::vector<IniSection> parse_ini_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open " + path);
    return parse_ini(in, path);
}

inline bool ini_has(const IniSection& s, const std::string& key) {
    return s.entries.count(key) != 0;
}

inline std::string ini_string(const IniSection& s, const std::string& key) {
    auto it = s.entries.find(key);
    if (it == s.entries.end()) throw config_error("[" + s.name + "] missing field " + key);
    return it->second;
}

inline double ini_number(const IniSection& s, const std::string& key) {
    std::string v = ini_string(s, key);
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw config_error("[" + s.name + "] field " + key + ": not a number: '" + v + "'");
    return x;
}

inline double ini_number_or(const IniSection& s, const std::string& key, double fallback) {
    return ini_has(s, key) ? ini_number(s, key) : fallback;
}

inline std::string ini_string_or(const IniSection& s, const std::string& key,
                                 const std::string& fallback) {
    return ini_has(s, key) ? ini_string(s, key) : fallback;
}

// 17 significant digits: round-trips every double exactly.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace decolab
