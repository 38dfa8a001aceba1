#pragma once

#include <stdexcept>
#include <string>

namespace nlsq {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// zero of mu inside the tolerance band; Mehler kernel degenerates there
struct CausticError : Error {
    using Error::Error;
};

// gamma coefficient requested past a zero-crossing of mu_dot
struct GammaUnavailableError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct NumericsError : Error {
    using Error::Error;
};

}  // namespace nlsq
