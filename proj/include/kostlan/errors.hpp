#pragma once

#include <stdexcept>
#include <string>

namespace kostlan {

// rejected experiment configuration (CLI exit code 2)
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// non-convergent quadrature or solver resource failure (CLI exit code 3)
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kostlan
