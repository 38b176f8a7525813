#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "ggd/special_fn.hpp"

namespace ggd {

/// Parameters of the generalized Gamma density
///
///   f(x) = beta^alpha * gamma / Gamma(alpha/gamma) * x^(alpha-1) * exp(-(beta x)^gamma),  x > 0.
///
/// All three are checked positive and finite at construction.
class ParamTriple {
 public:
  ParamTriple(double alpha, double beta, double gamma);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }

  friend bool operator==(const ParamTriple&, const ParamTriple&) = default;

 private:
  double alpha_;
  double beta_;
  double gamma_;
};

/// Max-abs coordinate difference.
double distance(const ParamTriple& a, const ParamTriple& b) noexcept;

/// Immutable set of positive observations with sum(log x) cached.
class Sample {
 public:
  explicit Sample(std::vector<double> observations);

  std::span<const double> observations() const noexcept { return x_; }
  std::size_t size() const noexcept { return x_.size(); }
  double n() const noexcept { return static_cast<double>(x_.size()); }
  double sum_log_x() const noexcept { return sum_log_x_; }

 private:
  std::vector<double> x_;
  double sum_log_x_;
};

enum class BoundMode { Correct, PaperCompat };

/// Constant standing in for sum_{m>=1} 1/m^2 in the curvature bounds.
/// Correct uses pi^2/6. PaperCompat uses pi/6, which is not a valid bound;
/// it exists to replay trajectories computed with that constant.
struct BoundConstants {
  BoundMode mode = BoundMode::Correct;

  static BoundConstants correct() noexcept { return {BoundMode::Correct}; }
  static BoundConstants paper_compat() noexcept { return {BoundMode::PaperCompat}; }

  double basel() const noexcept {
    return mode == BoundMode::Correct ? std::numbers::pi * std::numbers::pi / 6.0
                                      : std::numbers::pi / 6.0;
  }
  /// (2 + basel)/3, the coefficient of alpha^2/gamma^3 in the integrated gamma bound.
  double cubic_coefficient() const noexcept { return (2.0 + basel()) / 3.0; }
};

double log_pdf(double x, const ParamTriple& theta);
double pdf(double x, const ParamTriple& theta);

double log_likelihood(const Sample& s, const ParamTriple& theta);

/// d l / d alpha  = n [log beta - psi(alpha/gamma)/gamma] + sum log x
double dl_dalpha(const Sample& s, const ParamTriple& theta, const SeriesConfig& cfg = {});
/// d2 l / d alpha2 = -(n/gamma^2) psi'(alpha/gamma)
double d2l_dalpha2(const Sample& s, const ParamTriple& theta, const SeriesConfig& cfg = {});
/// d l / d beta  = n alpha / beta - gamma beta^(gamma-1) sum x^gamma
double dl_dbeta(const Sample& s, const ParamTriple& theta);
/// d l / d gamma = n [1/gamma + alpha psi(alpha/gamma)/gamma^2] - sum (beta x)^gamma log(beta x)
double dl_dgamma(const Sample& s, const ParamTriple& theta, const SeriesConfig& cfg = {});
double d2l_dgamma2(const Sample& s, const ParamTriple& theta, const SeriesConfig& cfg = {});

/// b_alpha = -n/alpha^2 - basel * n/gamma^2, a lower bound of d2l_dalpha2
/// (in Correct mode) that no longer depends on the digamma family.
double lower_bound_alpha(const Sample& s, const ParamTriple& theta, const BoundConstants& k);

/// Lower bound of d2l_dgamma2 at gamma = theta.gamma(), valid on the window
/// 0 < gamma < 2 * anchor_gamma:
///
///   n[-2/g^2 + 2 a g0/g^3 - (2+basel) a^2/g^4]
///     - sum_i [ 4 e^{2 max(anchor * log(b x_i) - 1, 0)} I(x_i > 1/b) / (2 anchor - g)^2
///               + (2/3) I(x_i <= 1/b) / g^2 ].
///
/// Observations with x_i == 1/beta fall on the "<=" side. Throws DomainError
/// outside the window.
double lower_bound_gamma(const Sample& s, const ParamTriple& theta, double anchor_gamma,
                         const BoundConstants& k);

/// E[X^k] = Gamma((alpha+k)/gamma) / (beta^k Gamma(alpha/gamma)).
double moment(const ParamTriple& theta, int k);

/// P(X <= x) by adaptive quadrature of the density (absolute error <= 1e-8).
/// Throws NumericError if the quadrature does not converge.
double numeric_cdf(double x, const ParamTriple& theta);

}  // namespace ggd
