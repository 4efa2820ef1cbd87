// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace tla {

// Fock-space cutoff too small for the requested state or operator.
struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// Requested Hilbert-space dimension exceeds the configured cap.
struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

struct NotHermitianError : std::runtime_error {
    explicit NotHermitianError(const std::string& what) : std::runtime_error(what) {}
};

struct BasisMismatchError : std::runtime_error {
    explicit BasisMismatchError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive step control could not meet the requested tolerance.
struct ToleranceNotMetError : std::runtime_error {
    explicit ToleranceNotMetError(const std::string& what) : std::runtime_error(what) {}
};

// Level pair outside the configured resonance window.
struct NotResonantError : std::runtime_error {
    explicit NotResonantError(const std::string& what) : std::runtime_error(what) {}
};

// Phase-space grid does not cover the state's support.
struct GridTooSmallError : std::runtime_error {
    explicit GridTooSmallError(const std::string& what) : std::runtime_error(what) {}
};

// Grid spacing cannot resolve the requested spatial frequency.
struct UnderresolvedError : std::runtime_error {
    explicit UnderresolvedError(const std::string& what) : std::runtime_error(what) {}
};

// Too few time samples for the oscillation rate of the averaged family.
struct UndersampledError : std::runtime_error {
    explicit UndersampledError(const std::string& what) : std::runtime_error(what) {}
};

// Scaling family with vanishing mean energy.
struct DegenerateFamilyError : std::runtime_error {
    explicit DegenerateFamilyError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tla
