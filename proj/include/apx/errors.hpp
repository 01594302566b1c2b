#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace apx {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (rationals, name specs, expressions, JSON lines).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An index outside the domain of a space's enumeration.
class InvalidIndex : public Error {
 public:
  using Error::Error;
};

/// A schedule value that is not a positive rational.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

/// The space or system cannot support the requested operation
/// (e.g. point equality is not decidable).
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

/// A μ-search ran out of its step budget. This is the only way a
/// divergent search on contract-violating input becomes observable.
class StepCapExceeded : public Error {
 public:
  StepCapExceeded(const std::string& what, std::uint64_t cap)
      : Error(what + " (step cap " + std::to_string(cap) + " exhausted)"),
        cap_(cap) {}

  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t cap_;
};

}  // namespace apx
