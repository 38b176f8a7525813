#pragma once

#include <cstddef>

namespace ggd {

/// Number of terms kept when an infinite series is evaluated.
struct SeriesConfig {
  std::size_t truncation_terms = 1000;

  /// Throws DomainError when truncation_terms == 0.
  void validate() const;
};

inline constexpr double kEulerMascheroni = 0.57721566490153286060651209008240243104215933593992;

constexpr double euler_mascheroni() noexcept { return kEulerMascheroni; }

/// Digamma as the truncated series
///
///   psi(x) ~= -gamma0 + sum_{m=0}^{M-1} (1/(m+1) - 1/(m+x)),
///
/// with M = cfg.truncation_terms. The omitted tail equals
/// sum_{m>=M} (x-1)/((m+1)(m+x)), so the truncation error is bounded by
/// |x-1|/M. x == 1 returns -gamma0 exactly. Throws DomainError for x <= 0.
double digamma_series(double x, const SeriesConfig& cfg = {});

/// sum_{m=0}^{M-1} 1/(m+x)^2, the truncated trigamma series. The omitted tail
/// is below 1/(M+x-1). Throws DomainError for x <= 0.
double inverse_square_tail(double x, const SeriesConfig& cfg = {});

/// ln Gamma(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

}  // namespace ggd
