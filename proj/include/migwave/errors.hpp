#pragma once

#include <stdexcept>
#include <string>

namespace migwave {

// Bad input: rejected parameters, malformed config, out-of-domain arguments.
// The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerically meaningful state that the method cannot handle (left the small
// regime, contour too close to a zero, lambda too close to the spectrum).
// The CLI maps these to exit code 2 and still writes a machine-readable report.
class RegimeError : public std::runtime_error {
public:
    explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

class OutOfRangeError : public ValidationError {
public:
    explicit OutOfRangeError(const std::string& msg) : ValidationError(msg) {}
};

class NearSpectrumError : public RegimeError {
public:
    explicit NearSpectrumError(const std::string& msg) : RegimeError(msg) {}
};

class BranchCutError : public RegimeError {
public:
    explicit BranchCutError(const std::string& msg) : RegimeError(msg) {}
};

// Contour passed too close to a zero; retry with slightly jittered bounds.
class ContourNearZeroError : public RegimeError {
public:
    ContourNearZeroError(const std::string& msg, double suggested_jitter)
        : RegimeError(msg), suggested_jitter(suggested_jitter) {}
    double suggested_jitter;
};

} // namespace migwave
