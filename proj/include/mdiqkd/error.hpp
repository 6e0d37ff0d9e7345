#ifndef MDIQKD_ERROR_HPP
#define MDIQKD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mdiqkd {

// Bad input: out-of-range parameter, violated ordering, malformed config.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Two intensity levels coincide, so a decoy-state denominator vanishes.
class DegenerateIntensityError : public ValidationError {
public:
    explicit DegenerateIntensityError(const std::string& what) : ValidationError(what) {}
};

// Config file or command-line problem: unknown key, unparsable value,
// unknown preset.
class ConfigError : public ValidationError {
public:
    explicit ConfigError(const std::string& what) : ValidationError(what) {}
};

// A computation produced something that cannot be used downstream
// (no coincidences at all, a non-finite value, an unbounded error rate).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mdiqkd

#endif  // MDIQKD_ERROR_HPP
