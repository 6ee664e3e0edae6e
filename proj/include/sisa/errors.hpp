#pragma once

#include <stdexcept>
#include <string>

namespace sisa {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument or violated precondition.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Malformed input file (CSV, JSON); messages carry the offending row where known.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A referenced entity (point id, shard, checkpoint) does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Stored data failed a consistency check (bad magic, checksum mismatch, truncation).
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// Stored data uses an unsupported format version.
class VersionError : public Error {
public:
    using Error::Error;
};

/// A numerical computation produced a non-finite value.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace sisa
