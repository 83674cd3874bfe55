#pragma once

#include <stdexcept>
#include <string>

namespace speechbio {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or truncated input container (e.g. a broken RIFF header).
class DecodeError : public Error {
public:
    using Error::Error;
};

/// Well-formed container but an encoding we do not handle; the message
/// names the offending field.
class UnsupportedFormatError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value (bad parameter range, unknown name).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Caller violated an operation precondition.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Corpus manifest problems; the message carries the row number.
class ManifestError : public Error {
public:
    using Error::Error;
};

/// Feature table header/shape does not match the expected schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Model training cannot proceed (missing classes, empty target set...).
class TrainingError : public Error {
public:
    using Error::Error;
};

/// Signal too short or too degenerate for the requested analysis.
class SignalError : public Error {
public:
    using Error::Error;
};

/// File system failures; the message carries path and cause.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace speechbio
