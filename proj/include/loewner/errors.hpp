#pragma once

#include <stdexcept>
#include <string>

namespace loewner {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Evaluation too close to a square-root branch point of a slit map.
// `event_index` identifies the offending map inside a composition, or -1
// for a standalone map.
class SingularityError : public Error {
public:
    SingularityError(const std::string& msg, int event_index = -1)
        : Error(msg), event_index(event_index) {}
    int event_index;
};

// A tip preimage collided with (or came too close to) the base arc of a
// newly attached particle.
class GeometryError : public Error {
public:
    using Error::Error;
};

// Quadrature / linear-program / iteration failures.
class NumericError : public Error {
public:
    using Error::Error;
};

// Initial-configuration construction could not reach its tolerance.
class ConstructionError : public Error {
public:
    using Error::Error;
};

// Invalid run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace loewner
