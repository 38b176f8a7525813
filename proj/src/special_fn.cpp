#include "ggd/special_fn.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <string>

#include "ggd/errors.hpp"

namespace ggd {

namespace {

// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + ": argument must be positive and finite, got " +
                      std::to_string(x));
  }
}

}  // namespace

void SeriesConfig::validate() const {
  if (truncation_terms < 1) {
    throw DomainError("SeriesConfig: truncation_terms must be >= 1");
  }
}

double digamma_series(double x, const SeriesConfig& cfg) {
  require_positive(x, "digamma_series");
  cfg.validate();
  // 1/(m+1) - 1/(m+x) == (x-1)/((m+1)(m+x)); this form has no cancellation
  // and vanishes identically at x == 1. Smallest terms are added first.
  const double shift = x - 1.0;
  CompensatedSum acc;
  for (std::size_t k = cfg.truncation_terms; k-- > 0;) {
    const double m = static_cast<double>(k);
    acc.add(shift / ((m + 1.0) * (m + x)));
  }
  return -kEulerMascheroni + acc.value();
}

double inverse_square_tail(double x, const SeriesConfig& cfg) {
  require_positive(x, "inverse_square_tail");
  cfg.validate();
  CompensatedSum acc;
  for (std::size_t k = cfg.truncation_terms; k-- > 0;) {
    const double d = static_cast<double>(k) + x;
    acc.add(1.0 / (d * d));
  }
  return acc.value();
}

double log_gamma(double x) {
  require_positive(x, "log_gamma");
  return boost::math::lgamma(x);
}

}  // namespace ggd
