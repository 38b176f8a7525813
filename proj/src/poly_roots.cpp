#include "ggd/poly_roots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "ggd/errors.hpp"

namespace ggd {

namespace {

using cplx = std::complex<double>;

constexpr double kMergeTolerance = 1e-8;

// p and p' together, ascending coefficients.
template <typename T>
std::pair<T, T> eval_with_derivative(std::span<const double> c, T z) noexcept {
  T p = 0.0;
  T dp = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
  }
  return {p, dp};
}

template <typename T>
T newton_polish(std::span<const double> c, T z, int max_iter) noexcept {
  T best = z;
  double best_abs = std::abs(eval_with_derivative(c, z).first);
  for (int it = 0; it < max_iter && best_abs > 0.0; ++it) {
    const auto [p, dp] = eval_with_derivative(c, z);
    if (std::abs(dp) == 0.0) break;
    const T step = p / dp;
    z -= step;
    const double a = std::abs(eval_with_derivative(c, z).first);
    if (!std::isfinite(a)) break;
    if (a < best_abs) {
      best_abs = a;
      best = z;
    }
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(z)) break;
  }
  return best;
}

double coefficient_scale(std::span<const double> c) noexcept {
  double s = 0.0;
  for (double v : c) s = std::max(s, std::abs(v));
  return s;
}

double residual_bound(std::span<const double> c, double r) noexcept {
  const int degree = static_cast<int>(c.size()) - 1;
  return kResidualTolerance * coefficient_scale(c) * std::pow(std::max(1.0, std::abs(r)), degree);
}

// Size of the rounding error in evaluating the polynomial at x.
double rounding_floor(std::span<const double> c, double x) noexcept {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * std::abs(x) + std::abs(c[i]);
  return 64.0 * std::numeric_limits<double>::epsilon() * acc;
}

// Turns complex root approximations into the polished, sorted, merged set of
// real roots. A candidate with a non-negligible imaginary part is still kept
// when its real part already satisfies the residual contract; multiple roots
// come out of the closed forms as clusters with imaginary parts of order
// eps^(1/k), far above kImagTolerance.
RealRoots finalize(std::span<const double> c, std::span<const cplx> candidates) {
  std::vector<double> reals;
  for (cplx z : candidates) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
    z = newton_polish<cplx>(c, z, 8);
    const double re = z.real();
    const bool real = std::abs(z.imag()) <= kImagTolerance * (1.0 + std::abs(re));
    if (!real && std::abs(evaluate_polynomial(c, re)) > residual_bound(c, re)) continue;
    const double polished = newton_polish<double>(c, re, 60);
    if (std::abs(evaluate_polynomial(c, polished)) <= residual_bound(c, polished)) {
      reals.push_back(polished);
    }
  }
  std::sort(reals.begin(), reals.end());

  RealRoots out;
  for (double r : reals) {
    const double res = std::abs(evaluate_polynomial(c, r));
    if (!out.roots.empty()) {
      const double prev = out.roots.back();
      // Same root when the two are within the merge tolerance, or when the
      // polynomial between them is lost in rounding noise (a multiple root
      // leaves a flat cluster of polished candidates).
      const double mid = 0.5 * (r + prev);
      if (r - prev <= kMergeTolerance * (1.0 + std::max(std::abs(r), std::abs(prev))) ||
          std::abs(evaluate_polynomial(c, mid)) <= rounding_floor(c, mid)) {
        if (res < out.residuals.back()) {
          out.roots.back() = r;
          out.residuals.back() = res;
        }
        continue;
      }
    }
    out.roots.push_back(r);
    out.residuals.push_back(res);
  }
  return out;
}

// Roots of z^2 + b z + c with complex coefficients, no cancellation.
std::array<cplx, 2> monic_quadratic_roots(cplx b, cplx c) {
  cplx sq = std::sqrt(b * b - 4.0 * c);
  if ((std::conj(b) * sq).real() < 0.0) sq = -sq;
  const cplx q = -0.5 * (b + sq);
  if (q == cplx(0.0)) return {cplx(0.0), cplx(0.0)};
  return {q, c / q};
}

// Roots of x^3 + a x^2 + b x + c (real coefficients).
std::array<cplx, 3> monic_cubic_roots(double a, double b, double c) {
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double shift = -a / 3.0;
  const double disc = 0.25 * q * q + p * p * p / 27.0;
  std::array<cplx, 3> t;
  if (p == 0.0 && q == 0.0) {
    t = {cplx(0.0), cplx(0.0), cplx(0.0)};
  } else if (disc > 0.0) {
    const double u = std::cbrt(-0.5 * q - std::copysign(std::sqrt(disc), q));
    const double v = (u != 0.0) ? -p / (3.0 * u) : 0.0;
    const double re = -0.5 * (u + v);
    const double im = 0.5 * std::sqrt(3.0) * (u - v);
    t = {cplx(u + v), cplx(re, im), cplx(re, -im)};
  } else {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(1.5 * q / p * std::sqrt(-3.0 / p), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      t[k] = cplx(r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
    }
  }
  const std::array<double, 4> coeffs = {c, b, a, 1.0};
  for (auto& z : t) z = newton_polish<cplx>(coeffs, z + shift, 8);
  return t;
}

// Roots of x^4 + a x^3 + b x^2 + c x + d by Ferrari's resolvent cubic.
std::array<cplx, 4> monic_quartic_roots(double a, double b, double c, double d) {
  const double a2 = a * a;
  const double p = b - 3.0 * a2 / 8.0;
  const double q = c - a * b / 2.0 + a2 * a / 8.0;
  const double r = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;
  const double shift = -a / 4.0;

  // m^3 + p m^2 + (p^2/4 - r) m - q^2/8 = 0 has a real root m >= 0.
  const auto resolvent = monic_cubic_roots(p, 0.25 * p * p - r, -0.125 * q * q);
  double m = 0.0;
  for (const cplx& z : resolvent) {
    if (std::abs(z.imag()) <= 1e-7 * (1.0 + std::abs(z.real()))) m = std::max(m, z.real());
  }

  std::array<cplx, 4> y;
  const double scale = std::max({std::abs(p), std::sqrt(std::abs(r)), 1e-300});
  if (m <= 1e-14 * scale) {
    // Biquadratic: y^4 + p y^2 + r = 0.
    const auto w = monic_quadratic_roots(cplx(p), cplx(r));
    y = {std::sqrt(w[0]), -std::sqrt(w[0]), std::sqrt(w[1]), -std::sqrt(w[1])};
  } else {
    const double s = std::sqrt(2.0 * m);
    const double base = 0.5 * p + m;
    const double cross = q / (2.0 * s);
    const auto lo = monic_quadratic_roots(cplx(-s), cplx(base + cross));
    const auto hi = monic_quadratic_roots(cplx(s), cplx(base - cross));
    y = {lo[0], lo[1], hi[0], hi[1]};
  }
  for (auto& z : y) z += shift;
  return y;
}

// Peels roots off largest-magnitude first, re-solving the deflated remainder
// by its closed form each time. Backward deflation (from the constant term) is
// stable in this order, and it recovers small roots that the quartic's -a/4
// shift wipes out when the root magnitudes differ by many orders.
std::vector<cplx> deflation_candidates(std::vector<double> c) {
  std::vector<cplx> out;
  while (c.size() > 3) {
    const std::size_t deg = c.size() - 1;
    const double lead = c[deg];
    std::vector<cplx> z;
    if (deg == 4) {
      const auto q = monic_quartic_roots(c[3] / lead, c[2] / lead, c[1] / lead, c[0] / lead);
      z.assign(q.begin(), q.end());
    } else {
      const auto q = monic_cubic_roots(c[2] / lead, c[1] / lead, c[0] / lead);
      z.assign(q.begin(), q.end());
    }
    cplx big = 0.0;
    for (cplx w : z) {
      w = newton_polish<cplx>(c, w, 30);
      if (std::isfinite(w.real()) && std::isfinite(w.imag()) && std::abs(w) >= std::abs(big)) big = w;
    }
    if (big == cplx(0.0)) {
      out.insert(out.end(), deg, cplx(0.0));
      return out;
    }
    if (std::abs(big.imag()) <= kImagTolerance * (1.0 + std::abs(big.real()))) {
      // c = (x - r) q
      const double r = big.real();
      std::vector<double> q(deg);
      q[0] = -c[0] / r;
      for (std::size_t k = 1; k < deg; ++k) q[k] = (q[k - 1] - c[k]) / r;
      out.emplace_back(r);
      c = std::move(q);
    } else {
      // c = (x^2 + b1 x + b0) q with b1 = -2 Re z, b0 = |z|^2
      const double b1 = -2.0 * big.real();
      const double b0 = std::norm(big);
      std::vector<double> q(deg - 1);
      for (std::size_t k = 0; k + 1 < deg; ++k) {
        const double prev1 = k >= 1 ? q[k - 1] : 0.0;
        const double prev2 = k >= 2 ? q[k - 2] : 0.0;
        q[k] = (c[k] - b1 * prev1 - prev2) / b0;
      }
      out.push_back(big);
      out.push_back(std::conj(big));
      c = std::move(q);
    }
  }
  if (c.size() == 3 && c[2] != 0.0) {
    const auto q = monic_quadratic_roots(cplx(c[1] / c[2]), cplx(c[0] / c[2]));
    out.insert(out.end(), q.begin(), q.end());
  } else if (c.size() == 2 && c[1] != 0.0) {
    out.emplace_back(-c[0] / c[1]);
  }
  return out;
}

}  // namespace

double evaluate_polynomial(std::span<const double> ascending, double x) noexcept {
  double acc = 0.0;
  for (std::size_t i = ascending.size(); i-- > 0;) acc = acc * x + ascending[i];
  return acc;
}

RealRoots solve_quadratic_real(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) {
      if (c == 0.0) throw DegenerateInput("solve_quadratic_real: all coefficients are zero");
      return {};
    }
    const std::array<double, 2> lin = {c, b};
    const double r = -c / b;
    return {{r}, {std::abs(evaluate_polynomial(lin, r))}};
  }
  const std::array<double, 3> coeffs = {c, b, a};
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::array<cplx, 2> candidates;
  if (q == 0.0) {
    candidates = {cplx(0.0), cplx(0.0)};
  } else {
    candidates = {cplx(q / a), cplx(c / q)};
  }
  return finalize(coeffs, candidates);
}

RealRoots solve_cubic_real(double d3, double d2, double d1, double d0) {
  if (d3 == 0.0) return solve_quadratic_real(d2, d1, d0);
  const std::array<double, 4> coeffs = {d0, d1, d2, d3};
  const auto z = monic_cubic_roots(d2 / d3, d1 / d3, d0 / d3);
  auto candidates = deflation_candidates({coeffs.begin(), coeffs.end()});
  candidates.insert(candidates.end(), z.begin(), z.end());
  return finalize(coeffs, candidates);
}

RealRoots solve_quartic_real(double d4, double d3, double d2, double d1, double d0) {
  if (d4 == 0.0) return solve_cubic_real(d3, d2, d1, d0);
  const std::array<double, 5> coeffs = {d0, d1, d2, d3, d4};
  const auto z = monic_quartic_roots(d3 / d4, d2 / d4, d1 / d4, d0 / d4);
  auto candidates = deflation_candidates({coeffs.begin(), coeffs.end()});
  candidates.insert(candidates.end(), z.begin(), z.end());
  return finalize(coeffs, candidates);
}

NoAdmissibleRoot::NoAdmissibleRoot(double lower, double upper, std::vector<double> candidates)
    : std::runtime_error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "no admissible root in (" << lower << ", " << upper << "); candidates: [";
        for (std::size_t i = 0; i < candidates.size(); ++i) os << (i ? ", " : "") << candidates[i];
        os << "]";
        return os.str();
      }()),
      lower_(lower),
      upper_(upper),
      candidates_(std::move(candidates)) {}

double select_admissible_root(const RealRoots& roots, double lower, double upper) {
  if (!(lower < upper)) {
    throw DomainError("select_admissible_root: empty interval");
  }
  bool found = false;
  double best = lower;
  for (double r : roots.roots) {
    if (r > lower && r < upper && (!found || r > best)) {
      best = r;
      found = true;
    }
  }
  if (!found) throw NoAdmissibleRoot(lower, upper, roots.roots);
  return best;
}

}  // namespace ggd
