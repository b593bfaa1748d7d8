#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bnpool {

// Base class for every error the toolkit raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The edge set of a Dag contains a directed cycle.
class CycleError : public Error {
public:
    using Error::Error;
};

// A network failed validation. Carries every violation found, not just the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string msg = "network validation failed:";
        for (const auto& s : v) {
            msg += "\n  - " + s;
        }
        return msg;
    }
    std::vector<std::string> violations_;
};

// A dense table would exceed the configured state-space limit.
class StateSpaceTooLarge : public Error {
public:
    using Error::Error;
};

class UnknownVariable : public Error {
public:
    using Error::Error;
};

class ScopeMismatch : public Error {
public:
    using Error::Error;
};

class VariableMismatch : public Error {
public:
    using Error::Error;
};

class WeightError : public Error {
public:
    using Error::Error;
};

class MissingPriorInfo : public Error {
public:
    using Error::Error;
};

class DegenerateCounts : public Error {
public:
    using Error::Error;
};

class EmptyDataSet : public Error {
public:
    using Error::Error;
};

// Malformed input file; the message names the offending location.
class ParseError : public Error {
public:
    using Error::Error;
};

class MissingSourceVariable : public Error {
public:
    using Error::Error;
};

// Bad experiment or search configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace bnpool
