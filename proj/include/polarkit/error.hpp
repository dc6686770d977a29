#pragma once

#include <stdexcept>
#include <string>

namespace polarkit {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// DOP requested for a Stokes vector with zero total intensity.
class ZeroIntensityError : public Error {
public:
    using Error::Error;
};

/// Polarized component exceeds total intensity beyond the clamping band.
class NonPhysicalError : public Error {
public:
    using Error::Error;
};

/// A mosaicked frame must have even width and height.
class OddDimensionsError : public Error {
public:
    using Error::Error;
};

/// Requested channel combination needs a plane the input does not carry.
class MissingChannelError : public Error {
public:
    using Error::Error;
};

/// Weighted mAP over classes that have no instances at all.
class ZeroInstancesError : public Error {
public:
    using Error::Error;
};

/// Error-rate evolution against a baseline AP of exactly 1.
class BaselinePerfectError : public Error {
public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Input data does not match the documented schema; message carries context.
class SchemaError : public Error {
public:
    using Error::Error;
};

} // namespace polarkit
