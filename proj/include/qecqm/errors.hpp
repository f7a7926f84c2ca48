#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qecqm {

/// Invalid argument: bad index, mismatched dimensions, non-Hermitian input.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Integrator produced a state outside the physical tolerance band.
class NumericalInstabilityError : public std::runtime_error {
 public:
  NumericalInstabilityError(const std::string& what, double offending_eigenvalue)
      : std::runtime_error(what), eigenvalue_(offending_eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation called on an object that does not satisfy its precondition
/// (e.g. a codespace that fails the Knill-Laflamme check).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Carries every problem found while parsing or validating a scenario file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> issues_;
};

}  // namespace qecqm
