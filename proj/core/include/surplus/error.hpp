#pragma once

#include <stdexcept>
#include <string>

namespace surplus {

/// Malformed or inconsistent input: wrong lengths, non-finite payoffs,
/// parameters outside their domain.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was asked to work on an object whose structural claims do
/// not satisfy its precondition (e.g. a non-monotone set passed to a
/// capital-requirement construction).
class ClaimError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical contract was breached at runtime: a value of -infinity, a
/// truncation sequence that fails to be monotone, and similar.
class ContractError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class NotRadiallyBounded : public std::domain_error {
public:
  NotRadiallyBounded() : std::domain_error("not radially bounded") {}
  explicit NotRadiallyBounded(const std::string& what) : std::domain_error(what) {}
};

}  // namespace surplus
