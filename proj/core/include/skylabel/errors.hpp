#pragma once

#include <stdexcept>
#include <string>

namespace skylabel {

/// Base class for all errors thrown by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A domain value violates its invariant (non-finite coordinate, alpha
/// outside [0,1], negative delay, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A configuration value is unusable (non-integer samples per bit, tone
/// beyond Nyquist, bad sample rate, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// alpha = 1 with the delayed path exactly out of phase: the composite
/// amplitude vanishes and the phase shift is undefined.
class DegenerateCancellation : public Error {
public:
    using Error::Error;
};

/// Latitude inside a polar circle, where the sunrise/sunset model does not
/// apply.
class UnsupportedLatitude : public Error {
public:
    using Error::Error;
};

/// A daytime window came out empty or inverted.
class DegenerateWindow : public Error {
public:
    using Error::Error;
};

/// Not enough samples to compute the requested quantity (empty daytime
/// pool, uncovered window, short integration buffer).
class InsufficientData : public Error {
public:
    using Error::Error;
};

/// A phase log declares no unit and no override was given.
class UnitAmbiguity : public Error {
public:
    using Error::Error;
};

/// Malformed file content; the message carries file and line.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure (missing file, unwritable path).
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace skylabel
