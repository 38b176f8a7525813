#pragma once

#include <limits>
#include <span>
#include <vector>

namespace ggd {

/// Real roots of a polynomial, ascending, with |p(root)| alongside each.
struct RealRoots {
  std::vector<double> roots;
  std::vector<double> residuals;

  bool empty() const noexcept { return roots.empty(); }
  std::size_t size() const noexcept { return roots.size(); }
};

/// A candidate is treated as real when |Im z| <= kImagTolerance * (1 + |Re z|).
inline constexpr double kImagTolerance = 1e-9;

/// Residual contract: |p(r)| <= kResidualTolerance * max|c_i| * max(1,|r|)^deg.
inline constexpr double kResidualTolerance = 1e-10;

/// Evaluates sum c[i] x^i (coefficients in ascending order) by Horner.
double evaluate_polynomial(std::span<const double> ascending, double x) noexcept;

/// Real roots of a*x^2 + b*x + c. Falls back to the linear equation when
/// a == 0. a == b == 0 with c != 0 yields no roots; all-zero input throws
/// DegenerateInput.
RealRoots solve_quadratic_real(double a, double b, double c);

/// Real roots of d3*x^3 + d2*x^2 + d1*x + d0, with the same fallbacks.
RealRoots solve_cubic_real(double d3, double d2, double d1, double d0);

/// Real roots of d4*x^4 + ... + d0 via the resolvent cubic, followed by a
/// Newton polish on the original quartic. Leading zeros fall through to the
/// cubic, quadratic and linear solvers. All-zero input throws DegenerateInput.
RealRoots solve_quartic_real(double d4, double d3, double d2, double d1, double d0);

/// Largest root strictly inside (lower, upper). Throws NoAdmissibleRoot when
/// the interval holds no root, DomainError when lower >= upper.
double select_admissible_root(const RealRoots& roots, double lower,
                              double upper = std::numeric_limits<double>::infinity());

}  // namespace ggd
