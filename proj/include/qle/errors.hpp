// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace qle {

/// Thrown when a semi-infinite integral fails its tail-decay test
/// (e.g. unregulated induced-mass integrals).
class divergence_error : public std::runtime_error {
public:
    explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a time-domain simulation is requested for a kernel that is
/// not classified stable_causal.
class stability_error : public std::runtime_error {
public:
    explicit stability_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an operation would require analytic continuation of sampled
/// (tabulated) data.
class unsupported_continuation : public std::domain_error {
public:
    explicit unsupported_continuation(const std::string& what) : std::domain_error(what) {}
};

/// Thrown when a winding-number contour passes too close to a zero or pole
/// and the phase accumulation cannot stabilize. Caller should shift the box.
class contour_error : public std::runtime_error {
public:
    explicit contour_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qle
