#pragma once

#include <stdexcept>
#include <string>

namespace scaledecay {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (k <= 0, E >= V0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// t outside the validity window of a contracting scale law.
class TimeOutOfWindow : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

/// Integration step too coarse for the wavenumber or potential features.
class ResolutionError : public Error {
public:
    using Error::Error;
};

class NoSuchResonance : public Error {
public:
    using Error::Error;
};

class FitDiverged : public Error {
public:
    using Error::Error;
};

class WindowTooWide : public Error {
public:
    using Error::Error;
};

class BoxTooSmall : public Error {
public:
    using Error::Error;
};

class UnstableStep : public Error {
public:
    using Error::Error;
};

class DomainTooSmall : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent run configuration. Carries the offending line when known.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_ = 0;
};

} // namespace scaledecay
