#pragma once

#include <stdexcept>
#include <string>

namespace gapcount {

// exit code 2
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// exit code 3
struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerics = 3;
inline constexpr int kExitThreshold = 4;

}  // namespace gapcount
