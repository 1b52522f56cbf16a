#pragma once

#include <stdexcept>
#include <string>

namespace rtg {

// Error kinds map onto CLI exit codes: ConfigError -> 2, SolverError -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class VacuumError : public ConfigError {
public:
    VacuumError(const std::string& side, const std::string& what)
        : ConfigError("vacuum on " + side + " side: " + what), side_(side) {}
    const std::string& side() const { return side_; }

private:
    std::string side_;
};

class LayoutError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace rtg
