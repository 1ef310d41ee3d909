#pragma once

#include <stdexcept>
#include <string>

namespace seqdist {

/// Two objects that must share an alphabet do not.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the domain an operation is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A tester that already emitted a verdict was stepped again.
class AbsorbedStateError : public std::logic_error {
 public:
  AbsorbedStateError() : std::logic_error("tester already stopped; its decision is absorbing") {}
};

/// A finite symbol source ran dry.
class StreamExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace seqdist
