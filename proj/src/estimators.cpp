#include "ggd/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ggd/errors.hpp"
#include "ggd/model_detail.hpp"
#include "ggd/poly_roots.hpp"

namespace ggd {

const char* algorithm_name(Algorithm a) noexcept {
  return a == Algorithm::SeLF ? "self" : "newton";
}

void StoppingRule::validate() const {
  if (max_iterations < 1) throw DomainError("StoppingRule: max_iterations must be >= 1");
  if (!(tolerance >= 0.0)) throw DomainError("StoppingRule: tolerance must be >= 0");
}

// ---- alpha ----------------------------------------------------------------

double u_alpha(double alpha, const Sample& s, const ParamTriple& anchor, const SeriesConfig& cfg,
               const BoundConstants& k) {
  const double n = s.n();
  const double g2 = anchor.gamma() * anchor.gamma();
  const auto antiderivative = [&](double z) { return n / z - k.basel() * n * z / g2; };
  return dl_dalpha(s, anchor, cfg) + antiderivative(alpha) - antiderivative(anchor.alpha());
}

QuadraticCoeffs alpha_surrogate(const Sample& s, const ParamTriple& theta, const SeriesConfig& cfg,
                                const BoundConstants& k) {
  const double n = s.n();
  const double a = theta.alpha();
  const double g2 = theta.gamma() * theta.gamma();
  QuadraticCoeffs q;
  q.a = -k.basel() * n / g2;
  q.b = dl_dalpha(s, theta, cfg) - n / a + k.basel() * n * a / g2;
  q.c = n;
  return q;
}

double self_step_alpha(const Sample& s, const ParamTriple& theta, const SeriesConfig& cfg,
                       const BoundConstants& k) {
  if (std::abs(dl_dalpha(s, theta, cfg)) <= kStationaryGradient) return theta.alpha();
  const auto q = alpha_surrogate(s, theta, cfg, k);
  return select_admissible_root(solve_quadratic_real(q.a, q.b, q.c), 0.0);
}

// ---- beta -----------------------------------------------------------------

double beta_closed_form(const Sample& s, double alpha_next, double gamma_curr) {
  double power_sum = 0.0;
  for (double x : s.observations()) power_sum += std::pow(x, gamma_curr);
  return std::pow(s.n() * alpha_next / (gamma_curr * power_sum), 1.0 / gamma_curr);
}

// ---- gamma ----------------------------------------------------------------

namespace {

struct GammaPieces {
  double gradient;  // dl_dgamma at the anchor
  double exp_weight_sum;
  double low_weight;  // (2/3) * #{x_i <= 1/beta}
};

GammaPieces gamma_pieces(const Sample& s, const GammaAnchor& anchor, const SeriesConfig& cfg) {
  const auto t = detail::data_bound_terms(s, anchor.beta, anchor.gamma, anchor.indicator_beta);
  return {dl_dgamma(s, ParamTriple(anchor.alpha, anchor.beta, anchor.gamma), cfg),
          t.exp_weight_sum, (2.0 / 3.0) * t.low_count};
}

// Antiderivative of b_gamma in gamma with alpha, beta, anchor held fixed.
double gamma_bound_antiderivative(double z, double n, const GammaAnchor& anchor,
                                  const GammaPieces& p, const BoundConstants& k) {
  const double a = anchor.alpha;
  return n * (2.0 / z - a * kEulerMascheroni / (z * z) + k.cubic_coefficient() * a * a / (z * z * z)) -
         (p.exp_weight_sum / (2.0 * anchor.gamma - z) - p.low_weight / z);
}

void require_gamma_window(double gamma, const GammaAnchor& anchor) {
  if (!(gamma > 0.0) || !(gamma < 2.0 * anchor.gamma)) {
    throw DomainError("u_gamma: gamma must lie in (0, 2*gamma^(t))");
  }
}

}  // namespace

double u_gamma(double gamma, const Sample& s, const GammaAnchor& anchor, const SeriesConfig& cfg,
               const BoundConstants& k) {
  require_gamma_window(gamma, anchor);
  const auto p = gamma_pieces(s, anchor, cfg);
  const double n = s.n();
  return p.gradient + gamma_bound_antiderivative(gamma, n, anchor, p, k) -
         gamma_bound_antiderivative(anchor.gamma, n, anchor, p, k);
}

namespace {

QuarticCoeffs quartic_from_pieces(double n, const GammaAnchor& anchor, const GammaPieces& p,
                                  const BoundConstants& k) {
  const double a = anchor.alpha;
  const double gt = anchor.gamma;
  const double cubic = k.cubic_coefficient();
  // U_gamma = C + (2n + B)/g - n a g0/g^2 + n K a^2/g^3 - A/(2 gt - g), with
  // C collecting every term evaluated at the anchor; multiply by g^3 (2 gt - g).
  const double constant = p.gradient - gamma_bound_antiderivative(gt, n, anchor, p, k);
  const double linear = 2.0 * n + p.low_weight;
  QuarticCoeffs q;
  q.d4 = -constant;
  q.d3 = 2.0 * gt * constant - linear - p.exp_weight_sum;
  q.d2 = 2.0 * gt * linear + kEulerMascheroni * n * a;
  q.d1 = -2.0 * kEulerMascheroni * n * a * gt - cubic * n * a * a;
  q.d0 = 2.0 * cubic * n * gt * a * a;
  return q;
}

}  // namespace

QuarticCoeffs gamma_surrogate(const Sample& s, const GammaAnchor& anchor, const SeriesConfig& cfg,
                              const BoundConstants& k) {
  return quartic_from_pieces(s.n(), anchor, gamma_pieces(s, anchor, cfg), k);
}

double self_step_gamma(const Sample& s, const GammaAnchor& anchor, const SeriesConfig& cfg,
                       const BoundConstants& k) {
  const auto p = gamma_pieces(s, anchor, cfg);
  if (std::abs(p.gradient) <= kStationaryGradient) return anchor.gamma;
  const double n = s.n();
  const double upper = 2.0 * anchor.gamma;
  if (p.exp_weight_sum == 0.0) {
    // Without observations above 1/beta the quartic carries a spurious
    // factor (2 gt - g); solve the cubic g^3 U_gamma instead.
    const double a = anchor.alpha;
    const double constant = p.gradient - gamma_bound_antiderivative(anchor.gamma, n, anchor, p, k);
    return select_admissible_root(
        solve_cubic_real(constant, 2.0 * n + p.low_weight, -kEulerMascheroni * n * a,
                         k.cubic_coefficient() * n * a * a),
        0.0, upper);
  }
  const auto q = quartic_from_pieces(n, anchor, p, k);
  return select_admissible_root(solve_quartic_real(q.d4, q.d3, q.d2, q.d1, q.d0), 0.0, upper);
}

double self_step_gamma(const Sample& s, double alpha_next, double beta_next, double gamma_curr,
                       const SeriesConfig& cfg, const BoundConstants& k) {
  return self_step_gamma(s, GammaAnchor(alpha_next, beta_next, gamma_curr), cfg, k);
}

// ---- runs -----------------------------------------------------------------

ParamTriple self_iteration(const Sample& s, const ParamTriple& theta, const SelfOptions& opts,
                           std::optional<double> indicator_beta) {
  const double alpha = self_step_alpha(s, theta, opts.series, opts.bounds);
  const double beta = beta_closed_form(s, alpha, theta.gamma());
  const GammaAnchor anchor(alpha, beta, theta.gamma(), indicator_beta.value_or(beta));
  const double gamma = self_step_gamma(s, anchor, opts.series, opts.bounds);
  return ParamTriple(alpha, beta, gamma);
}

namespace {

template <typename Step>
IterationTrace iterate(Algorithm algo, const Sample& s, const ParamTriple& theta0,
                       const StoppingRule& stop, Step&& step) {
  stop.validate();
  IterationTrace trace;
  trace.algorithm = algo;
  trace.points.reserve(stop.max_iterations + 1);
  trace.loglik.reserve(stop.max_iterations + 1);
  trace.points.push_back(theta0);
  trace.loglik.push_back(log_likelihood(s, theta0));
  for (std::size_t t = 1; t <= stop.max_iterations; ++t) {
    const ParamTriple prev = trace.points.back();
    std::optional<ParamTriple> next;
    try {
      next = step(prev);
    } catch (const NoAdmissibleRoot& e) {
      trace.halt = Halt{t, "no_admissible_root", e.what()};
    } catch (const DomainEscape& e) {
      trace.halt = Halt{t, "domain_escape", e.what()};
    } catch (const DomainError& e) {
      trace.halt = Halt{t, "domain_escape", e.what()};
    } catch (const NumericError& e) {
      trace.halt = Halt{t, "numeric", e.what()};
    }
    if (!next) break;
    trace.points.push_back(*next);
    trace.loglik.push_back(log_likelihood(s, *next));
    if (stop.tolerance > 0.0 && distance(prev, *next) <= stop.tolerance) break;
  }
  return trace;
}

}  // namespace

IterationTrace run_self(const Sample& s, const ParamTriple& theta0, const StoppingRule& stop,
                        const SelfOptions& opts) {
  opts.series.validate();
  const std::optional<double> frozen =
      opts.indicator_compat ? std::optional<double>(theta0.beta()) : std::nullopt;
  return iterate(Algorithm::SeLF, s, theta0, stop,
                 [&](const ParamTriple& th) { return self_iteration(s, th, opts, frozen); });
}

ParamTriple newton_step(const Sample& s, const ParamTriple& theta, const SeriesConfig& cfg) {
  constexpr double kTiny = 1e-300;
  const double h_alpha = d2l_dalpha2(s, theta, cfg);
  if (!(std::abs(h_alpha) > kTiny) || !std::isfinite(h_alpha)) {
    throw NumericError("newton_step: vanishing second derivative in alpha");
  }
  const double alpha = theta.alpha() - dl_dalpha(s, theta, cfg) / h_alpha;
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainEscape("newton_step: alpha left the parameter space (" + std::to_string(alpha) + ")");
  }
  const double beta = beta_closed_form(s, alpha, theta.gamma());
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw NumericError("newton_step: beta update is not finite");
  }
  const ParamTriple mid(alpha, beta, theta.gamma());
  const double h_gamma = d2l_dgamma2(s, mid, cfg);
  if (!(std::abs(h_gamma) > kTiny) || !std::isfinite(h_gamma)) {
    throw NumericError("newton_step: vanishing second derivative in gamma");
  }
  const double gamma = theta.gamma() - dl_dgamma(s, mid, cfg) / h_gamma;
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainEscape("newton_step: gamma left the parameter space (" + std::to_string(gamma) + ")");
  }
  return ParamTriple(alpha, beta, gamma);
}

IterationTrace run_newton(const Sample& s, const ParamTriple& theta0, const StoppingRule& stop,
                          const SeriesConfig& cfg) {
  cfg.validate();
  return iterate(Algorithm::Newton, s, theta0, stop,
                 [&](const ParamTriple& th) { return newton_step(s, th, cfg); });
}

}  // namespace ggd
