#include "ggd/model.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "ggd/errors.hpp"
#include "ggd/model_detail.hpp"

namespace ggd {

namespace {

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

ParamTriple::ParamTriple(double alpha, double beta, double gamma)
    : alpha_(alpha), beta_(beta), gamma_(gamma) {
  if (!positive_finite(alpha) || !positive_finite(beta) || !positive_finite(gamma)) {
    throw DomainError("ParamTriple: alpha, beta, gamma must be positive and finite (got " +
                      std::to_string(alpha) + ", " + std::to_string(beta) + ", " +
                      std::to_string(gamma) + ")");
  }
}

double distance(const ParamTriple& a, const ParamTriple& b) noexcept {
  return std::max({std::abs(a.alpha() - b.alpha()), std::abs(a.beta() - b.beta()),
                   std::abs(a.gamma() - b.gamma())});
}

Sample::Sample(std::vector<double> observations) : x_(std::move(observations)), sum_log_x_(0.0) {
  if (x_.empty()) throw DomainError("Sample: at least one observation is required");
  for (double v : x_) {
    if (!positive_finite(v)) {
      throw DomainError("Sample: observations must be positive and finite, got " +
                        std::to_string(v));
    }
    sum_log_x_ += std::log(v);
  }
}

double log_pdf(double x, const ParamTriple& theta) {
  if (!(x > 0.0)) throw DomainError("log_pdf: x must be positive");
  const double a = theta.alpha();
  const double b = theta.beta();
  const double g = theta.gamma();
  return a * std::log(b) + std::log(g) - log_gamma(a / g) + (a - 1.0) * std::log(x) -
         std::pow(b * x, g);
}

double pdf(double x, const ParamTriple& theta) { return std::exp(log_pdf(x, theta)); }

double log_likelihood(const Sample& s, const ParamTriple& theta) {
  const double a = theta.alpha();
  const double b = theta.beta();
  const double g = theta.gamma();
  double power_sum = 0.0;
  for (double x : s.observations()) power_sum += std::pow(b * x, g);
  return s.n() * (a * std::log(b) + std::log(g) - log_gamma(a / g)) +
         (a - 1.0) * s.sum_log_x() - power_sum;
}

double dl_dalpha(const Sample& s, const ParamTriple& theta, const SeriesConfig& cfg) {
  const double g = theta.gamma();
  const double psi = digamma_series(theta.alpha() / g, cfg);
  return s.n() * (std::log(theta.beta()) - psi / g) + s.sum_log_x();
}

double d2l_dalpha2(const Sample& s, const ParamTriple& theta, const SeriesConfig& cfg) {
  const double g = theta.gamma();
  return -s.n() / (g * g) * inverse_square_tail(theta.alpha() / g, cfg);
}

double dl_dbeta(const Sample& s, const ParamTriple& theta) {
  const double b = theta.beta();
  const double g = theta.gamma();
  double power_sum = 0.0;
  for (double x : s.observations()) power_sum += std::pow(b * x, g);
  return s.n() * theta.alpha() / b - g / b * power_sum;
}

double dl_dgamma(const Sample& s, const ParamTriple& theta, const SeriesConfig& cfg) {
  const double a = theta.alpha();
  const double b = theta.beta();
  const double g = theta.gamma();
  const double psi = digamma_series(a / g, cfg);
  double data = 0.0;
  for (double x : s.observations()) {
    const double bx = b * x;
    data += std::pow(bx, g) * std::log(bx);
  }
  return s.n() * (1.0 / g + a / (g * g) * psi) - data;
}

double d2l_dgamma2(const Sample& s, const ParamTriple& theta, const SeriesConfig& cfg) {
  const double a = theta.alpha();
  const double b = theta.beta();
  const double g = theta.gamma();
  const double psi = digamma_series(a / g, cfg);
  const double tri = inverse_square_tail(a / g, cfg);
  double data = 0.0;
  for (double x : s.observations()) {
    const double bx = b * x;
    const double l = std::log(bx);
    data += std::pow(bx, g) * l * l;
  }
  const double g2 = g * g;
  return s.n() * (-1.0 / g2 - 2.0 * a / (g2 * g) * psi - a * a / (g2 * g2) * tri) - data;
}

double lower_bound_alpha(const Sample& s, const ParamTriple& theta, const BoundConstants& k) {
  const double a = theta.alpha();
  const double g = theta.gamma();
  return -s.n() / (a * a) - k.basel() * s.n() / (g * g);
}

namespace detail {

DataBoundTerms data_bound_terms(const Sample& s, double beta, double anchor_gamma,
                                double indicator_beta) {
  DataBoundTerms t;
  const double threshold = 1.0 / indicator_beta;
  for (double x : s.observations()) {
    if (x > threshold) {
      const double e = std::max(anchor_gamma * std::log(beta * x) - 1.0, 0.0);
      t.exp_weight_sum += 4.0 * std::exp(2.0 * e);
    } else {
      t.low_count += 1.0;
    }
  }
  return t;
}

double smooth_bound_part(double n, double alpha, double gamma, const BoundConstants& k) {
  const double g2 = gamma * gamma;
  return n * (-2.0 / g2 + 2.0 * alpha * kEulerMascheroni / (g2 * gamma) -
              (2.0 + k.basel()) * alpha * alpha / (g2 * g2));
}

}  // namespace detail

double lower_bound_gamma(const Sample& s, const ParamTriple& theta, double anchor_gamma,
                         const BoundConstants& k) {
  const double g = theta.gamma();
  if (!(anchor_gamma > 0.0) || !(g < 2.0 * anchor_gamma)) {
    throw DomainError("lower_bound_gamma: gamma must lie in (0, 2*anchor_gamma)");
  }
  const auto t = detail::data_bound_terms(s, theta.beta(), anchor_gamma, theta.beta());
  const double gap = 2.0 * anchor_gamma - g;
  return detail::smooth_bound_part(s.n(), theta.alpha(), g, k) - t.exp_weight_sum / (gap * gap) -
         (2.0 / 3.0) * t.low_count / (g * g);
}

double moment(const ParamTriple& theta, int k) {
  if (k < 1) throw DomainError("moment: order must be a positive integer");
  const double a = theta.alpha();
  const double g = theta.gamma();
  return std::exp(log_gamma((a + k) / g) - k * std::log(theta.beta()) - log_gamma(a / g));
}

double numeric_cdf(double x, const ParamTriple& theta) {
  if (!(x > 0.0)) throw DomainError("numeric_cdf: x must be positive");
  if (std::isinf(x)) return 1.0;
  const auto density = [&theta](double t) { return t > 0.0 ? pdf(t, theta) : 0.0; };
  // Split where (beta t)^gamma reaches alpha/gamma: the bulk of the mass.
  const double split =
      std::pow(theta.alpha() / theta.gamma(), 1.0 / theta.gamma()) / theta.beta();
  constexpr double kTol = 1e-12;
  double error = 0.0;
  double value = 0.0;
  try {
    if (x <= split) {
      boost::math::quadrature::tanh_sinh<double> integrator;
      value = integrator.integrate(density, 0.0, x, kTol, &error);
    } else {
      boost::math::quadrature::exp_sinh<double> integrator;
      value = 1.0 - integrator.integrate(density, x, std::numeric_limits<double>::infinity(),
                                         kTol, &error);
    }
  } catch (const std::exception& e) {
    throw NumericError(std::string("numeric_cdf: quadrature failed: ") + e.what());
  }
  if (!std::isfinite(value) || error > 1e-8) {
    throw NumericError("numeric_cdf: quadrature did not converge (error estimate " +
                       std::to_string(error) + ")");
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace ggd
