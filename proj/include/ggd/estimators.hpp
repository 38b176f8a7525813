#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ggd/model.hpp"
#include "ggd/special_fn.hpp"

namespace ggd {

enum class Algorithm { SeLF, Newton };

const char* algorithm_name(Algorithm a) noexcept;

/// Why and where a run stopped early.
struct Halt {
  std::size_t iteration = 0;  // the update that failed: points[iteration-1] -> points[iteration]
  std::string kind;           // "no_admissible_root", "domain_escape", "numeric"
  std::string message;
};

/// Iterates of one estimator run; points[0] is the starting triple.
struct IterationTrace {
  Algorithm algorithm = Algorithm::SeLF;
  std::vector<ParamTriple> points;
  std::vector<double> loglik;
  std::optional<Halt> halt;

  std::size_t iterations() const noexcept { return points.empty() ? 0 : points.size() - 1; }
  const ParamTriple& last() const { return points.back(); }
  bool completed() const noexcept { return !halt.has_value(); }
};

/// Fixed iteration budget, optionally cut short once the sup-norm step falls
/// to `tolerance` (0 disables the early stop).
struct StoppingRule {
  std::size_t max_iterations = 200;
  double tolerance = 0.0;

  void validate() const;
};

/// Coefficients of a^(t) alpha^2 + b^(t) alpha + c^(t) = 0.
struct QuadraticCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Coefficients of d4 g^4 + d3 g^3 + d2 g^2 + d1 g + d0 = 0.
struct QuarticCoeffs {
  double d4 = 0.0;
  double d3 = 0.0;
  double d2 = 0.0;
  double d1 = 0.0;
  double d0 = 0.0;

  double operator()(double g) const noexcept {
    return (((d4 * g + d3) * g + d2) * g + d1) * g + d0;
  }
};

// Gradient magnitudes at or below this are treated as an exact stationary
// point: the coordinate update returns its anchor unchanged.
inline constexpr double kStationaryGradient = 1e-12;

// ---- alpha update -------------------------------------------------------

/// U_alpha(alpha | theta) = dl_dalpha(theta) + int_{alpha^(t)}^{alpha} b_alpha(z) dz.
double u_alpha(double alpha, const Sample& s, const ParamTriple& anchor, const SeriesConfig& cfg,
               const BoundConstants& k);

/// Quadratic whose positive root is the zero of U_alpha (after multiplying by alpha > 0).
QuadraticCoeffs alpha_surrogate(const Sample& s, const ParamTriple& theta, const SeriesConfig& cfg,
                                const BoundConstants& k);

/// Step 1: alpha^(t+1), the largest positive root of the alpha surrogate.
double self_step_alpha(const Sample& s, const ParamTriple& theta, const SeriesConfig& cfg,
                       const BoundConstants& k);

// ---- beta update --------------------------------------------------------

/// Step 2: maximizer of l in beta for fixed alpha and gamma,
/// (n alpha / (gamma sum x^gamma))^(1/gamma).
double beta_closed_form(const Sample& s, double alpha_next, double gamma_curr);

// ---- gamma update -------------------------------------------------------

/// Everything the gamma step holds fixed.
struct GammaAnchor {
  double alpha;      // alpha^(t+1)
  double beta;       // beta^(t+1)
  double gamma;      // gamma^(t)
  double indicator_beta;  // beta used to split observations at 1/beta; normally == beta

  GammaAnchor(double alpha_next, double beta_next, double gamma_curr)
      : alpha(alpha_next), beta(beta_next), gamma(gamma_curr), indicator_beta(beta_next) {}
  GammaAnchor(double alpha_next, double beta_next, double gamma_curr, double split_beta)
      : alpha(alpha_next), beta(beta_next), gamma(gamma_curr), indicator_beta(split_beta) {}
};

/// U_gamma(gamma | anchor) = dl_dgamma(anchor) + int_{gamma^(t)}^{gamma} b_gamma(z) dz,
/// defined for 0 < gamma < 2 gamma^(t).
double u_gamma(double gamma, const Sample& s, const GammaAnchor& anchor, const SeriesConfig& cfg,
               const BoundConstants& k);

/// Quartic equal to gamma^3 (2 gamma^(t) - gamma) U_gamma(gamma); it shares
/// U_gamma's zeros on (0, 2 gamma^(t)).
QuarticCoeffs gamma_surrogate(const Sample& s, const GammaAnchor& anchor, const SeriesConfig& cfg,
                              const BoundConstants& k);

/// Step 3: gamma^(t+1), the largest root of the quartic in (0, 2 gamma^(t)).
double self_step_gamma(const Sample& s, const GammaAnchor& anchor, const SeriesConfig& cfg,
                       const BoundConstants& k);

double self_step_gamma(const Sample& s, double alpha_next, double beta_next, double gamma_curr,
                       const SeriesConfig& cfg, const BoundConstants& k);

// ---- full runs ----------------------------------------------------------

struct SelfOptions {
  SeriesConfig series;
  BoundConstants bounds;
  /// Freeze the 1/beta observation split at the starting beta. Off by default.
  bool indicator_compat = false;
};

/// One alpha -> beta -> gamma sweep. Throws NoAdmissibleRoot.
ParamTriple self_iteration(const Sample& s, const ParamTriple& theta, const SelfOptions& opts,
                           std::optional<double> indicator_beta = std::nullopt);

/// Iterates self_iteration from theta0. A failing step ends the run; the
/// trace keeps every point produced so far and records the failure in `halt`.
IterationTrace run_self(const Sample& s, const ParamTriple& theta0, const StoppingRule& stop,
                        const SelfOptions& opts = {});

/// One coordinate-wise Newton sweep: alpha by Newton, beta in closed form,
/// gamma by Newton at (alpha^(t+1), beta^(t+1), gamma^(t)). Throws
/// DomainEscape when alpha or gamma leaves (0, inf) and NumericError when a
/// second derivative vanishes.
ParamTriple newton_step(const Sample& s, const ParamTriple& theta, const SeriesConfig& cfg = {});

IterationTrace run_newton(const Sample& s, const ParamTriple& theta0, const StoppingRule& stop,
                          const SeriesConfig& cfg = {});

// ---- reference maximizer ------------------------------------------------

/// Score vector (dl/dalpha, dl/dbeta, dl/dgamma) using library-grade digamma
/// rather than the truncated series.
std::array<double, 3> exact_score(const Sample& s, const ParamTriple& theta);

double score_sup_norm(const Sample& s, const ParamTriple& theta);

/// Maximum-likelihood estimate found by a generic optimizer: multi-start
/// Nelder-Mead on the beta-profiled likelihood, then damped full Newton with
/// exact derivatives. The returned point has score_sup_norm <= 1e-7.
/// Throws NumericError otherwise.
ParamTriple mle_oracle(const Sample& s);

}  // namespace ggd
