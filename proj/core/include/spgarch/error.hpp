#pragma once

#include <stdexcept>
#include <string>

namespace spgarch {

/// Input outside the mathematical domain of an operation (e.g. sigma2 <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine failed to converge or produced an unusable result.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (mismatched sizes, missing cache entry, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed external input (CSV rows, config files, draw files).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spgarch
