#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ggd/model.hpp"

namespace ggd {

/// The artifact's single random source: a 64-bit Mersenne Twister (whose
/// output sequence is fixed by the C++ standard) with hand-written variate
/// transforms, so a seed gives the same stream on every platform. std::
/// distributions are deliberately not used; their algorithms are
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  /// Independent child generator for stream `stream`.
  Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on (0, 1), 53 bits of resolution; never returns 0 or 1.
  double uniform();
  double standard_normal();
  /// Gamma(shape, rate), density proportional to x^(shape-1) e^(-rate x).
  double gamma(double shape, double rate);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Mixes (seed, stream) into a child seed with SplitMix64.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// `count` draws from Gamma(shape alpha, rate beta), Marsaglia-Tsang squeeze.
std::vector<double> sample_gamma(double alpha, double beta, std::size_t count,
                                 std::uint64_t seed);

/// Proposal draws with their normalized importance weights.
struct WeightedPool {
  std::vector<double> draws;
  std::vector<double> weights;  // non-negative, sum to 1
};

/// log w(x) = log[Gamma(alpha) gamma / Gamma(alpha/gamma)] + beta x - (beta x)^gamma,
/// the target/proposal density ratio for a Gamma(alpha, beta) proposal.
double sir_log_weight(double x, const ParamTriple& target);

/// Normalized weights w_j / sum w, computed in log space with the maximum
/// subtracted. Throws DegenerateWeights when no weight is positive and finite.
WeightedPool sir_weights(std::span<const double> draws, const ParamTriple& target);

/// Draws `output_size` items without replacement, each pick made with
/// probability proportional to the weights still in the pool. Implemented by
/// exponential-key sorting (key = log(u)/w, keep the largest), which has
/// exactly the distribution of the sequential renormalized draw; the output is
/// in selection order. Throws SizeError when output_size exceeds the pool and
/// DegenerateWeights when fewer than output_size weights are positive.
std::vector<double> sir_resample(const WeightedPool& pool, std::size_t output_size,
                                 std::uint64_t seed);

/// Same as sir_resample but returns pool indices.
std::vector<std::size_t> sir_resample_indices(const WeightedPool& pool, std::size_t output_size,
                                              std::uint64_t seed);

struct SirConfig {
  ParamTriple target{2.0, 3.0, 2.0};
  std::size_t output_size = 1000;
  std::size_t ratio = 20;  // J / I
  std::uint64_t seed = 1027;

  /// Throws on output_size == 0 or ratio == 0. Returns false when ratio is
  /// below the recommended minimum of 10.
  bool validate() const;
};

/// Sampling/importance resampling draw of output_size generalized-Gamma
/// variates: output_size * ratio Gamma(alpha, beta) proposals, importance
/// weights, then resampling without replacement.
Sample sample_ggd(const SirConfig& cfg);

}  // namespace ggd
