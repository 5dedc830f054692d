#pragma once

#include <stdexcept>
#include <string>

namespace spinsq {

/// Invalid user input: malformed config, out-of-range parameter, bad file.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine could not reach its accuracy target.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spinsq
