#include "ggd/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ggd/errors.hpp"
#include "ggd/special_fn.hpp"

namespace ggd {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng Rng::split(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

double Rng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::standard_normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  // Marsaglia polar method.
  double u, v, r2;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    r2 = u * u + v * v;
  } while (r2 >= 1.0 || r2 == 0.0);
  const double f = std::sqrt(-2.0 * std::log(r2) / r2);
  spare_normal_ = v * f;
  has_spare_normal_ = true;
  return u * f;
}

double Rng::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw DomainError("Rng::gamma: shape and rate must be positive");
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a+1) * U^(1/a).
    const double g = gamma(shape + 1.0, 1.0);
    return g * std::pow(uniform(), 1.0 / shape) / rate;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

std::vector<double> sample_gamma(double alpha, double beta, std::size_t count,
                                 std::uint64_t seed) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw DomainError("sample_gamma: alpha and beta must be positive");
  }
  Rng rng(seed);
  std::vector<double> out(count);
  for (auto& v : out) v = rng.gamma(alpha, beta);
  return out;
}

double sir_log_weight(double x, const ParamTriple& target) {
  const double a = target.alpha();
  const double g = target.gamma();
  const double bx = target.beta() * x;
  return log_gamma(a) + std::log(g) - log_gamma(a / g) + bx - std::pow(bx, g);
}

WeightedPool sir_weights(std::span<const double> draws, const ParamTriple& target) {
  WeightedPool pool;
  pool.draws.assign(draws.begin(), draws.end());
  pool.weights.resize(draws.size());

  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < draws.size(); ++j) {
    if (!(draws[j] > 0.0)) throw DomainError("sir_weights: draws must be positive");
    const double lw = sir_log_weight(draws[j], target);
    pool.weights[j] = lw;
    if (std::isfinite(lw)) max_log = std::max(max_log, lw);
  }
  if (!std::isfinite(max_log)) {
    throw DegenerateWeights("sir_weights: no finite importance weight");
  }
  // Neumaier-compensated total.
  double total = 0.0;
  double comp = 0.0;
  for (auto& w : pool.weights) {
    w = std::isfinite(w) ? std::exp(w - max_log) : 0.0;
    const double t = total + w;
    comp += (std::abs(total) >= w) ? (total - t) + w : (w - t) + total;
    total = t;
  }
  total += comp;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DegenerateWeights("sir_weights: importance weights sum to zero");
  }
  for (auto& w : pool.weights) w /= total;
  return pool;
}

std::vector<std::size_t> sir_resample_indices(const WeightedPool& pool, std::size_t output_size,
                                              std::uint64_t seed) {
  const std::size_t pool_size = pool.draws.size();
  if (pool.weights.size() != pool_size) {
    throw SizeError("sir_resample: draws and weights differ in length");
  }
  if (output_size > pool_size) {
    throw SizeError("sir_resample: output_size " + std::to_string(output_size) +
                    " exceeds pool size " + std::to_string(pool_size));
  }
  Rng rng(seed);
  std::vector<double> keys(pool_size);
  std::size_t positive = 0;
  for (std::size_t j = 0; j < pool_size; ++j) {
    const double u = rng.uniform();
    const double w = pool.weights[j];
    if (w > 0.0) {
      keys[j] = std::log(u) / w;
      ++positive;
    } else {
      keys[j] = -std::numeric_limits<double>::infinity();
    }
  }
  if (positive < output_size) {
    throw DegenerateWeights("sir_resample: only " + std::to_string(positive) +
                            " positive weights for " + std::to_string(output_size) + " draws");
  }
  std::vector<std::size_t> idx(pool_size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const auto by_key = [&keys](std::size_t l, std::size_t r) {
    return keys[l] != keys[r] ? keys[l] > keys[r] : l < r;
  };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(output_size), idx.end(),
                    by_key);
  idx.resize(output_size);
  return idx;
}

std::vector<double> sir_resample(const WeightedPool& pool, std::size_t output_size,
                                 std::uint64_t seed) {
  const auto idx = sir_resample_indices(pool, output_size, seed);
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t j : idx) out.push_back(pool.draws[j]);
  return out;
}

bool SirConfig::validate() const {
  if (output_size < 1) throw SizeError("SirConfig: output_size must be >= 1");
  if (ratio < 1) throw SizeError("SirConfig: ratio must be >= 1");
  return ratio >= 10;
}

Sample sample_ggd(const SirConfig& cfg) {
  cfg.validate();
  const std::size_t pool_size = cfg.output_size * cfg.ratio;
  const auto draws = sample_gamma(cfg.target.alpha(), cfg.target.beta(), pool_size,
                                  derive_seed(cfg.seed, 0));
  const auto pool = sir_weights(draws, cfg.target);
  return Sample(sir_resample(pool, cfg.output_size, derive_seed(cfg.seed, 1)));
}

}  // namespace ggd
