#pragma once

#include <stdexcept>
#include <string>

namespace sudr {

// Base of every error raised by the library. kind() is the stable
// machine-readable tag the CLI puts in its error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain_error", what) {}
};

// Numerical blow-up while integrating; signals parameters outside any sane region.
class BlowupError : public Error {
public:
    explicit BlowupError(const std::string& what) : Error("numerical_blowup", what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error("data_error", what) {}
    DataError(std::string kind, const std::string& what) : Error(std::move(kind), what) {}
};

class InsufficientDataError : public Error {
public:
    explicit InsufficientDataError(const std::string& what) : Error("insufficient_data", what) {}
};

class SingularSystemError : public Error {
public:
    explicit SingularSystemError(const std::string& what) : Error("singular_system", what) {}
};

class SamplerError : public Error {
public:
    explicit SamplerError(const std::string& what) : Error("sampler_failed", what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config_error", what) {}
};

}  // namespace sudr
