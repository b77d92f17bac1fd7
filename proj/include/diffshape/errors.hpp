#pragma once

#include <stdexcept>
#include <string>

namespace diffshape {

// Configuration problems (bad flags, eps out of admissible range, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Geometric preconditions violated (point not on boundary, outside domain, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Numerically degenerate situation during path simulation.
struct SimulationError : std::runtime_error {
    explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

// Tabulated field queried outside its coverage, or malformed grid data.
struct FieldError : std::runtime_error {
    explicit FieldError(const std::string& what) : std::runtime_error(what) {}
};

// PDE coefficient violates an assumption (non-SPD diffusion, df_du > 0, ...).
struct CoefficientError : std::runtime_error {
    explicit CoefficientError(const std::string& what) : std::runtime_error(what) {}
};

// Acceptance-rejection sampler failures (no in-domain samples, envelope violated).
struct SamplingError : std::runtime_error {
    explicit SamplingError(const std::string& what) : std::runtime_error(what) {}
};
struct EnvelopeError : SamplingError {
    explicit EnvelopeError(const std::string& what) : SamplingError(what) {}
};

// Requested configuration outside the supported model class.
struct UnsupportedError : std::runtime_error {
    explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace diffshape
