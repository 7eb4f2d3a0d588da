#pragma once

#include <stdexcept>
#include <string>

namespace symsing {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A size guard (enumeration, kernel, term count, exact arithmetic) refused the input.
class GuardError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Exact integer accumulation would have wrapped.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Rejection sampling gave up before finding an admissible draw.
class SamplingError : public Error {
public:
    using Error::Error;
};

}  // namespace symsing
