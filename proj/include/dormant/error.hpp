#pragma once

#include <stdexcept>
#include <string>

namespace dormant {

/// Raised for malformed arguments: out-of-range qubits, bad sizes, invalid permutations.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when the channel protocol is driven out of order.
class ProtocolError : public std::logic_error {
 public:
  explicit ProtocolError(const std::string& what) : std::logic_error(what) {}
};

/// Raised when a branch that must be unreachable is hit (e.g. sampling a zero-probability outcome).
class InternalError : public std::runtime_error {
 public:
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dormant
