#pragma once

#include <stdexcept>
#include <string>

namespace twofusion {

// Base for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// A precondition or size cap was violated by the caller.
class InputError : public Error {
public:
  explicit InputError(const std::string &msg) : Error(msg) {}
};

// A closure/enumeration hit its element cap. Carries the partial count.
class CapExceededError : public Error {
public:
  CapExceededError(const std::string &msg, std::size_t found)
      : Error(msg), elements_found(found) {}
  std::size_t elements_found;
};

// An internal cross-check failed. Must not occur on valid inputs.
class ConsistencyError : public Error {
public:
  explicit ConsistencyError(const std::string &msg) : Error(msg) {}
};

} // namespace twofusion
