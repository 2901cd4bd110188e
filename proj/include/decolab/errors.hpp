#pragma once

#include <stdexcept>
#include <string>

namespace decolab {

// Error taxonomy mirrors the CLI exit codes:
//   config_error      -> 2 (usage, malformed files, invalid parameter sets)
//   std::domain_error -> 3 (inputs outside a formula's validity range)
//   numerical_error   -> 4 (blow-up, non-finite results)
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace decolab
