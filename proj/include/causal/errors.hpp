#pragma once

#include <stdexcept>
#include <string>

namespace causal {

// Invalid argument value or violated call precondition.
class ParameterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Reference to a variable, column, or category label that does not exist.
class IdentifierError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Partially directed graph admits no consistent extension.
class ExtensionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Conditioning event has probability zero under the model.
class ZeroProbabilityEvidenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unsmoothed fit hit a parent configuration absent from the data.
class UndefinedRowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested model alteration cannot be applied (e.g. edge would create a cycle).
class AlterationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or internally inconsistent input data (CSV, JSON models, factorial files).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace causal
