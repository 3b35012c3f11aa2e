#pragma once

#include <stdexcept>
#include <string>

namespace rockseg {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a precondition (bad parameter, mismatched shapes).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Input data could not be read or written (malformed file, I/O failure).
class DataError : public Error {
public:
    using Error::Error;
};

/// The input is valid but numerically degenerate for the requested method,
/// e.g. Otsu on a constant image.
class DegenerateInput : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool cond, const std::string& what)
{
    if (!cond)
        throw InvalidArgument(what);
}

} // namespace detail
} // namespace rockseg
