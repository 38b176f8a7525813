#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ggd/errors.hpp"
#include "ggd/estimators.hpp"

namespace ggd {

namespace {

struct PowerSums {
  double p0 = 0.0;  // sum (b x)^g
  double p1 = 0.0;  // sum (b x)^g log(b x)
  double p2 = 0.0;  // sum (b x)^g log(b x)^2
};

PowerSums power_sums(const Sample& s, double beta, double gamma) {
  PowerSums ps;
  for (double x : s.observations()) {
    const double bx = beta * x;
    const double l = std::log(bx);
    const double w = std::pow(bx, gamma);
    ps.p0 += w;
    ps.p1 += w * l;
    ps.p2 += w * l * l;
  }
  return ps;
}

Eigen::Matrix3d hessian(const Sample& s, const ParamTriple& th) {
  const double n = s.n();
  const double a = th.alpha();
  const double b = th.beta();
  const double g = th.gamma();
  const double psi = boost::math::digamma(a / g);
  const double tri = boost::math::trigamma(a / g);
  const auto ps = power_sums(s, b, g);
  Eigen::Matrix3d h;
  h(0, 0) = -n * tri / (g * g);
  h(0, 1) = n / b;
  h(0, 2) = n * (psi / (g * g) + a * tri / (g * g * g));
  h(1, 1) = -n * a / (b * b) - g * (g - 1.0) / (b * b) * ps.p0;
  h(1, 2) = -ps.p0 / b - g / b * ps.p1;
  h(2, 2) = n * (-1.0 / (g * g) - 2.0 * a * psi / (g * g * g) - a * a * tri / (g * g * g * g)) - ps.p2;
  h(1, 0) = h(0, 1);
  h(2, 0) = h(0, 2);
  h(2, 1) = h(1, 2);
  return h;
}

double profiled_beta(const Sample& s, double alpha, double gamma) {
  double sum = 0.0;
  for (double x : s.observations()) sum += std::pow(x, gamma);
  return std::pow(s.n() * alpha / (gamma * sum), 1.0 / gamma);
}

// Negative profile log-likelihood in (log alpha, log gamma).
double profile_objective(const Sample& s, const std::array<double, 2>& u) {
  const double a = std::exp(u[0]);
  const double g = std::exp(u[1]);
  if (!std::isfinite(a) || !std::isfinite(g) || a <= 0.0 || g <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double b = profiled_beta(s, a, g);
  if (!std::isfinite(b) || b <= 0.0) return std::numeric_limits<double>::infinity();
  const double l = log_likelihood(s, ParamTriple(a, b, g));
  return std::isfinite(l) ? -l : std::numeric_limits<double>::infinity();
}

std::array<double, 2> nelder_mead(const Sample& s, std::array<double, 2> start, double step) {
  using Point = std::array<double, 2>;
  std::array<Point, 3> simplex = {start, Point{start[0] + step, start[1]},
                                  Point{start[0], start[1] + step}};
  std::array<double, 3> f;
  for (int i = 0; i < 3; ++i) f[i] = profile_objective(s, simplex[i]);

  const auto lerp = [](const Point& p, const Point& q, double t) {
    return Point{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
  };
  for (int it = 0; it < 2000; ++it) {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return f[i] < f[j]; });
    const int best = idx[0];
    const int mid = idx[1];
    const int worst = idx[2];
    if (std::abs(f[worst] - f[best]) <= 1e-13 * (1.0 + std::abs(f[best])) &&
        std::max(std::abs(simplex[worst][0] - simplex[best][0]),
                 std::abs(simplex[worst][1] - simplex[best][1])) < 1e-10) {
      break;
    }
    const Point centroid = lerp(simplex[best], simplex[mid], 0.5);
    const Point reflected = lerp(centroid, simplex[worst], -1.0);
    const double fr = profile_objective(s, reflected);
    if (fr < f[best]) {
      const Point expanded = lerp(centroid, simplex[worst], -2.0);
      const double fe = profile_objective(s, expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        f[worst] = fe;
      } else {
        simplex[worst] = reflected;
        f[worst] = fr;
      }
    } else if (fr < f[mid]) {
      simplex[worst] = reflected;
      f[worst] = fr;
    } else {
      const bool outside = fr < f[worst];
      const Point contracted = lerp(centroid, outside ? reflected : simplex[worst], 0.5);
      const double fc = profile_objective(s, contracted);
      if (fc < (outside ? fr : f[worst])) {
        simplex[worst] = contracted;
        f[worst] = fc;
      } else {
        for (int i : {mid, worst}) {
          simplex[i] = lerp(simplex[best], simplex[i], 0.5);
          f[i] = profile_objective(s, simplex[i]);
        }
      }
    }
  }
  const auto it = std::min_element(f.begin(), f.end());
  return simplex[static_cast<std::size_t>(it - f.begin())];
}

// Damped Newton on the full three-parameter likelihood.
std::optional<ParamTriple> newton_polish(const Sample& s, ParamTriple th, double target) {
  double l = log_likelihood(s, th);
  for (int it = 0; it < 200; ++it) {
    const auto score = exact_score(s, th);
    const Eigen::Vector3d grad(score[0], score[1], score[2]);
    if (grad.cwiseAbs().maxCoeff() <= target) return th;
    const Eigen::Matrix3d neg_h = -hessian(s, th);
    Eigen::LDLT<Eigen::Matrix3d> ldlt(neg_h);
    Eigen::Vector3d dir;
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() && (ldlt.vectorD().array() > 0).all()) {
      dir = ldlt.solve(grad);
    } else {
      dir = grad.cwiseQuotient(neg_h.diagonal().cwiseAbs().cwiseMax(1.0));
    }
    bool moved = false;
    for (double t = 1.0; t > 1e-12; t *= 0.5) {
      const Eigen::Vector3d cand =
          Eigen::Vector3d(th.alpha(), th.beta(), th.gamma()) + t * dir;
      if ((cand.array() <= 0.0).any() || !cand.allFinite()) continue;
      const ParamTriple next(cand[0], cand[1], cand[2]);
      const double ln = log_likelihood(s, next);
      if (std::isfinite(ln) && ln >= l - 1e-12 * std::abs(l)) {
        th = next;
        l = std::max(l, ln);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (score_sup_norm(s, th) <= target) return th;
  return std::nullopt;
}

}  // namespace

std::array<double, 3> exact_score(const Sample& s, const ParamTriple& th) {
  const double n = s.n();
  const double a = th.alpha();
  const double b = th.beta();
  const double g = th.gamma();
  const double psi = boost::math::digamma(a / g);
  const auto ps = power_sums(s, b, g);
  return {n * (std::log(b) - psi / g) + s.sum_log_x(), n * a / b - g / b * ps.p0,
          n * (1.0 / g + a * psi / (g * g)) - ps.p1};
}

double score_sup_norm(const Sample& s, const ParamTriple& theta) {
  const auto sc = exact_score(s, theta);
  return std::max({std::abs(sc[0]), std::abs(sc[1]), std::abs(sc[2])});
}

ParamTriple mle_oracle(const Sample& s) {
  constexpr double kTarget = 1e-7;
  // Coarse grid in (alpha, gamma) for starting simplices.
  const std::array<double, 6> grid = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  std::vector<std::pair<double, std::array<double, 2>>> starts;
  for (double a : grid) {
    for (double g : grid) {
      const std::array<double, 2> u = {std::log(a), std::log(g)};
      starts.emplace_back(profile_objective(s, u), u);
    }
  }
  std::sort(starts.begin(), starts.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });

  std::optional<ParamTriple> best;
  double best_l = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < std::min<std::size_t>(4, starts.size()); ++i) {
    if (!std::isfinite(starts[i].first)) continue;
    auto u = nelder_mead(s, starts[i].second, 0.3);
    u = nelder_mead(s, u, 0.05);
    const double a = std::exp(u[0]);
    const double g = std::exp(u[1]);
    const auto polished = newton_polish(s, ParamTriple(a, profiled_beta(s, a, g), g), kTarget);
    if (!polished) continue;
    const double l = log_likelihood(s, *polished);
    if (l > best_l) {
      best_l = l;
      best = polished;
    }
  }
  if (!best) {
    throw NumericError("mle_oracle: no start reached a score sup-norm of " +
                       std::to_string(kTarget));
  }
  return *best;
}

}  // namespace ggd
