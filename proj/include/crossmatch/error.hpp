#pragma once

#include <stdexcept>
#include <string>

namespace crossmatch {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad command line or configuration.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data.
class DataError : public Error {
public:
    using Error::Error;
};

/// A numerical routine could not produce a result.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace crossmatch
