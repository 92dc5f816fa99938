#pragma once

#include <stdexcept>
#include <string>

namespace clonesim {

class Error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

// Tensoring two states or spaces that share a subsystem id.
class CompositionError : public Error {
 public:
    using Error::Error;
};

class SpaceMismatch : public Error {
 public:
    using Error::Error;
};

class UnknownSubsystem : public Error {
 public:
    using Error::Error;
};

// A post-selected branch whose norm fell below the configured floor.
class DegenerateBranch : public Error {
 public:
    using Error::Error;
};

// Amplitude would leave the truncated occupation alphabet.
class LeakageError : public Error {
 public:
    using Error::Error;
};

class IntegratorFault : public Error {
 public:
    using Error::Error;
};

class StepSizeError : public Error {
 public:
    using Error::Error;
};

class InvalidParameter : public Error {
 public:
    using Error::Error;
};

class ConfigError : public Error {
 public:
    using Error::Error;
};

}  // namespace clonesim
