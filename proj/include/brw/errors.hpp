#pragma once

#include <stdexcept>
#include <string>

namespace brw {

struct AssumptionViolated : std::runtime_error {
    explicit AssumptionViolated(const std::string& which)
        : std::runtime_error("assumption violated: " + which) {}
};

struct DomainExceeded : std::runtime_error {
    explicit DomainExceeded(const std::string& what)
        : std::runtime_error("CGF domain exceeded: " + what) {}
};

struct BoundaryPoint : std::runtime_error {
    explicit BoundaryPoint(const std::string& what)
        : std::runtime_error("value undefined at boundary point: " + what) {}
};

struct NoSolution : std::runtime_error {
    explicit NoSolution(const std::string& what)
        : std::runtime_error("no solution: " + what) {}
};

struct WrongRegime : std::runtime_error {
    explicit WrongRegime(const std::string& what)
        : std::runtime_error("regime mismatch: " + what) {}
};

struct OutOfRange : std::runtime_error {
    explicit OutOfRange(const std::string& what)
        : std::runtime_error("out of range: " + what) {}
};

struct ZeroProbability : std::runtime_error {
    explicit ZeroProbability(const std::string& what)
        : std::runtime_error("zero-probability event: " + what) {}
};

struct PopulationCapExceeded : std::runtime_error {
    explicit PopulationCapExceeded(const std::string& what)
        : std::runtime_error("population cap exceeded: " + what) {}
};

struct TooLarge : std::runtime_error {
    explicit TooLarge(const std::string& what)
        : std::runtime_error("state space too large: " + what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what)
        : std::runtime_error("config error: " + what) {}
};

} // namespace brw
