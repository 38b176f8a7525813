#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ggd {

/// Argument outside the mathematical domain of an operation (x <= 0, gamma
/// outside the bound's validity window, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// All-zero coefficient vector handed to a polynomial solver.
class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Quadrature or optimizer failure, or a vanishing Newton denominator.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A surrogate equation produced no root inside the admissible interval.
class NoAdmissibleRoot : public std::runtime_error {
 public:
  NoAdmissibleRoot(double lower, double upper, std::vector<double> candidates);

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  const std::vector<double>& candidates() const noexcept { return candidates_; }

 private:
  double lower_;
  double upper_;
  std::vector<double> candidates_;
};

/// A Newton update left the parameter space (alpha or gamma <= 0).
class DomainEscape : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Importance weights that are all zero or non-finite, or too few non-zero
/// weights to draw the requested number of items without replacement.
class DegenerateWeights : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested more items than the pool holds.
class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ggd
