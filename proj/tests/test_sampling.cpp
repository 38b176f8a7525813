#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "ggd/errors.hpp"
#include "ggd/model.hpp"
#include "ggd/sampling.hpp"
#include "oracles.hpp"

using namespace ggd;

namespace {

double gamma_cdf(double x, double shape, double rate) { return boost::math::gamma_p(shape, rate * x); }

double log_gamma_proposal(double x, double shape, double rate) {
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

std::vector<double> sorted(std::span<const double> xs) {
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("gamma sampler moments", "[sampling]") {
  const auto xs = sample_gamma(2.0, 3.0, 1'000'000, 11);
  REQUIRE(xs.size() == 1'000'000);
  CHECK(std::all_of(xs.begin(), xs.end(), [](double x) { return x > 0.0; }));
  CHECK(std::abs(oracle::mean(xs) - 2.0 / 3.0) <= 3.0 * std::sqrt(2.0 / 9.0 / 1e6));

  // Small shapes use the boosted branch.
  const auto small = sample_gamma(0.3, 1.0, 200'000, 12);
  CHECK(std::abs(oracle::mean(small) - 0.3) <= 3.0 * std::sqrt(0.3 / 2e5));
}

TEST_CASE("gamma sampler at shape one is exponential", "[sampling]") {
  const std::size_t n = 100'000;
  const auto xs = sample_gamma(1.0, 2.5, n, 13);
  const double d = oracle::ks_statistic(xs, [](double x) { return 1.0 - std::exp(-2.5 * x); });
  CHECK(d <= oracle::ks_critical(n, 1e-3));

  const auto other = sample_gamma(4.5, 0.7, n, 14);
  CHECK(oracle::ks_statistic(other, [](double x) { return gamma_cdf(x, 4.5, 0.7); }) <=
        oracle::ks_critical(n, 1e-3));
}

TEST_CASE("gamma sampler is deterministic", "[sampling]") {
  CHECK(sample_gamma(2.0, 3.0, 1000, 5) == sample_gamma(2.0, 3.0, 1000, 5));
  CHECK(sample_gamma(2.0, 3.0, 1000, 5) != sample_gamma(2.0, 3.0, 1000, 6));
  Rng a(99);
  Rng b(99);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("uniform variates stay inside the open interval", "[sampling]") {
  Rng rng(3);
  double lo = 1.0;
  double hi = 0.0;
  for (int i = 0; i < 100'000; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
}

TEST_CASE("importance weights", "[sampling]") {
  SECTION("gamma = 1 gives exactly uniform weights") {
    const auto draws = sample_gamma(2.5, 1.5, 500, 21);
    const auto pool = sir_weights(draws, ParamTriple(2.5, 1.5, 1.0));
    REQUIRE(pool.weights.size() == 500);
    for (double w : pool.weights) CHECK(w == 1.0 / 500.0);
  }
  SECTION("weights are a probability vector") {
    const auto draws = sample_gamma(2.0, 3.0, 20'000, 22);
    const auto pool = sir_weights(draws, ParamTriple(2.0, 3.0, 2.0));
    CHECK(pool.draws.size() == pool.weights.size());
    CHECK(std::all_of(pool.weights.begin(), pool.weights.end(), [](double w) { return w >= 0.0; }));
    CHECK(std::abs(std::accumulate(pool.weights.begin(), pool.weights.end(), 0.0) - 1.0) <= 1e-12);
  }
  SECTION("log weight by hand for (2, 3, 2)") {
    for (double x : {0.05, 0.3, 0.9, 2.0}) {
      const double hand = std::lgamma(2.0) + std::log(2.0) - std::lgamma(1.0) + 3.0 * x - 9.0 * x * x;
      CHECK(sir_log_weight(x, ParamTriple(2, 3, 2)) == Catch::Approx(hand).epsilon(1e-13).margin(1e-14));
    }
  }
  SECTION("weight times proposal density is the target density") {
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
      const ParamTriple th(0.5 + 4.0 * rng.uniform(), 0.5 + 4.0 * rng.uniform(), 0.3 + 3.0 * rng.uniform());
      const double x = 0.01 + 3.0 * rng.uniform();
      const double lhs = sir_log_weight(x, th) + log_gamma_proposal(x, th.alpha(), th.beta());
      const double f = oracle::ggd_log_density(x, {th.alpha(), th.beta(), th.gamma()});
      // Relative agreement of the densities themselves.
      CHECK(std::abs(std::expm1(lhs - f)) <= 1e-10);
    }
  }
  SECTION("degenerate pool") {
    const std::vector<double> tiny = {1e300, 2e300};
    CHECK_THROWS_AS(sir_weights(tiny, ParamTriple(2.0, 3.0, 2.0)), DegenerateWeights);
  }
}

TEST_CASE("resampling without replacement", "[sampling]") {
  SECTION("uniform weights and I = J give a permutation") {
    WeightedPool pool;
    pool.draws = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0};
    pool.weights.assign(7, 1.0 / 7.0);
    const auto out = sir_resample(pool, 7, 31);
    CHECK(sorted(out) == pool.draws);
  }
  SECTION("a single positive weight") {
    WeightedPool pool;
    pool.draws = {1.0, 2.0, 3.0};
    pool.weights = {0.0, 1.0, 0.0};
    CHECK(sir_resample(pool, 1, 32) == std::vector<double>{2.0});
    CHECK_THROWS_AS(sir_resample(pool, 2, 32), DegenerateWeights);
  }
  SECTION("size error") {
    WeightedPool pool;
    pool.draws = {1.0, 2.0};
    pool.weights = {0.5, 0.5};
    CHECK_THROWS_AS(sir_resample(pool, 3, 33), SizeError);
  }
  SECTION("indices never repeat") {
    const auto draws = sample_gamma(2.0, 3.0, 5000, 34);
    const auto pool = sir_weights(draws, ParamTriple(2.0, 3.0, 2.0));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto idx = sir_resample_indices(pool, 1000, seed);
      CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == idx.size());
    }
  }
  SECTION("inclusion frequencies match the sequential draw") {
    const std::vector<double> w = {0.35, 0.25, 0.15, 0.12, 0.08, 0.05};
    // Inclusion probability of each item in two sequential renormalized draws.
    std::vector<double> inclusion(6, 0.0);
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        if (i == j) continue;
        const double p = w[i] * w[j] / (1.0 - w[i]);
        inclusion[i] += p;
        inclusion[j] += p;
      }
    }
    WeightedPool pool;
    pool.draws = {0, 1, 2, 3, 4, 5};
    pool.weights = w;
    const int reps = 10'000;
    std::vector<int> hits(6, 0);
    std::map<std::size_t, int> first_pick;
    for (int r = 0; r < reps; ++r) {
      const auto idx = sir_resample_indices(pool, 2, derive_seed(4040, r));
      ++hits[idx[0]];
      ++hits[idx[1]];
      ++first_pick[idx[0]];
    }
    for (std::size_t i = 0; i < 6; ++i) {
      const double p = inclusion[i];
      const double se = std::sqrt(p * (1.0 - p) / reps);
      CHECK(std::abs(hits[i] / double(reps) - p) <= 4.0 * se);
      const double se_first = std::sqrt(w[i] * (1.0 - w[i]) / reps);
      CHECK(std::abs(first_pick[i] / double(reps) - w[i]) <= 4.0 * se_first);
    }
  }
}

TEST_CASE("SIR configuration", "[sampling]") {
  SirConfig cfg;
  CHECK(cfg.ratio == 20);
  CHECK(cfg.validate());
  cfg.ratio = 9;
  CHECK_FALSE(cfg.validate());
  cfg.ratio = 0;
  CHECK_THROWS_AS(cfg.validate(), SizeError);
  cfg.ratio = 20;
  cfg.output_size = 0;
  CHECK_THROWS_AS(cfg.validate(), SizeError);
}

TEST_CASE("SIR output distribution", "[sampling]") {
  SECTION("gamma = 1 reproduces the Gamma law") {
    SirConfig cfg;
    cfg.target = ParamTriple(2.5, 1.5, 1.0);
    cfg.output_size = 10'000;
    const auto s = sample_ggd(cfg);
    REQUIRE(s.size() == 10'000);
    const double d = oracle::ks_statistic({s.observations().begin(), s.observations().end()},
                                          [](double x) { return gamma_cdf(x, 2.5, 1.5); });
    CHECK(d <= oracle::ks_critical(10'000, 1e-3));
  }
  SECTION("target (2, 3, 2)") {
    SirConfig cfg;
    cfg.output_size = 10'000;
    const auto s = sample_ggd(cfg);
    const std::vector<double> xs(s.observations().begin(), s.observations().end());
    const double mu = std::tgamma(1.5) / (3.0 * std::tgamma(1.0));
    const double var = std::tgamma(2.0) / (9.0 * std::tgamma(1.0)) - mu * mu;
    CHECK(std::abs(oracle::mean(xs) - mu) <= 3.0 * std::sqrt(var / 1e4));

    // Empirical CDF at ten quantiles of the quadrature CDF.
    const auto sx = sorted(xs);
    double worst = 0.0;
    for (int k = 1; k <= 10; ++k) {
      const double q = k / 11.0;
      const double xq = oracle::bisect([&](double x) { return numeric_cdf(x, cfg.target) - q; }, 1e-4, 5.0);
      const double ecdf =
          static_cast<double>(std::upper_bound(sx.begin(), sx.end(), xq) - sx.begin()) / sx.size();
      worst = std::max(worst, std::abs(ecdf - q));
    }
    CHECK(worst <= oracle::ks_critical(10'000, 1e-2));
  }
  SECTION("determinism") {
    SirConfig cfg;
    cfg.output_size = 500;
    const auto a = sample_ggd(cfg);
    const auto b = sample_ggd(cfg);
    CHECK(std::equal(a.observations().begin(), a.observations().end(), b.observations().begin()));
    cfg.seed = 1028;
    const auto c = sample_ggd(cfg);
    CHECK_FALSE(std::equal(a.observations().begin(), a.observations().end(), c.observations().begin()));
  }
}

TEST_CASE("larger pools approach the target", "[sampling]") {
  // Without-replacement resampling biases toward the proposal when the pool is
  // small relative to the output; average KS distance over seeds should fall.
  const ParamTriple target(2.0, 3.0, 2.0);
  const auto cdf = [&](double x) { return numeric_cdf(x, target); };
  std::vector<double> mean_ks;
  for (std::size_t ratio : {1u, 10u, 20u, 40u}) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      SirConfig cfg;
      cfg.target = target;
      cfg.output_size = 2000;
      cfg.ratio = ratio;
      cfg.seed = 500 + seed;
      const auto s = sample_ggd(cfg);
      total += oracle::ks_statistic({s.observations().begin(), s.observations().end()}, cdf);
    }
    mean_ks.push_back(total / 8.0);
  }
  CHECK(mean_ks[0] > mean_ks[1]);
  CHECK(mean_ks[1] > mean_ks[2]);
  // By ratio 20 the resampling bias is below the KS noise floor for I = 2000.
  CHECK(mean_ks[3] <= mean_ks[2] + 0.005);
}
