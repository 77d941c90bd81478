#pragma once

#include <stdexcept>
#include <string>

namespace ppv {

// Base of every error raised by the library. Each subsystem derives its own
// type so callers (notably the CLI) can map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: manifests, listings, IR text, package databases.
class InputError : public Error {
 public:
  using Error::Error;
};

// A resource model rejected its attributes or referenced unknown data.
class ModelError : public Error {
 public:
  enum class Kind { InvalidAttributes, UnknownPackage, UnknownPlatform };

  ModelError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// The external solver crashed, timed out, or answered something unusable.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

// Internal consistency failure (an encoding bug surfaced loudly).
class InternalError : public Error {
 public:
  using Error::Error;
};

// Exploration budget exhausted.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace ppv
