// Exception types shared across the library.
#ifndef MDP_ERRORS_HPP
#define MDP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdp {

// Invalid numeric argument (z <= 0, t <= 0, tau out of range, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Malformed gap-sequence spec or partition literal. Carries the offset of the
// offending token within the input string.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Construction-time violation of a gap-sequence or partition invariant.
class SpecError : public std::invalid_argument {
 public:
  explicit SpecError(const std::string& what) : std::invalid_argument(what) {}
};

// Input partition does not satisfy the minimal-difference condition.
class NotMdpError : public std::invalid_argument {
 public:
  explicit NotMdpError(const std::string& what) : std::invalid_argument(what) {}
};

// Requested fiber contains no partitions.
class EmptyClassError : public std::runtime_error {
 public:
  explicit EmptyClassError(const std::string& what) : std::runtime_error(what) {}
};

// Random-environment regime query outside its hypotheses (e.g. kappa with
// non-negative log-rho mean).
class RegimeError : public std::runtime_error {
 public:
  explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

// Exact counting table would exceed the configured memory budget.
class TableBudgetError : public std::runtime_error {
 public:
  explicit TableBudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mdp

#endif  // MDP_ERRORS_HPP
