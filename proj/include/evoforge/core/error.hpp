#pragma once

#include <stdexcept>
#include <string>

namespace evoforge {

/// Root of every exception thrown by evoforge libraries.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Illegal lifecycle transition.
class StateMachineError : public Error {
public:
    using Error::Error;
};

/// Metric values that cannot be compared (NaN, infinity, wrong type).
class CorruptMetricsError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration: schemas, DAG topology, run config.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace evoforge
