#pragma once

#include <stdexcept>
#include <string>

namespace rydsim {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

// Wavenumber triangle that cannot close into a zero-sum beam geometry.
class ClosureError : public Error {
public:
    using Error::Error;
};

// Two atoms closer than the allowed pair-distance floor.
class MinDistanceError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// A trace too short to contain the requested analysis windows.
class WindowError : public Error {
public:
    using Error::Error;
};

class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double time_reached)
        : Error(what + " (reached t = " + std::to_string(time_reached) + " us)"),
          time_reached_(time_reached) {}

    double time_reached() const noexcept { return time_reached_; }

private:
    double time_reached_;
};

}  // namespace rydsim
