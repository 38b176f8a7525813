#pragma once

#include "ggd/model.hpp"

namespace ggd::detail {

// Data-dependent pieces of the gamma curvature bound for a fixed beta and
// anchor gamma^(t):
//   exp_weight_sum = sum_i 4 exp(2 max(anchor log(beta x_i) - 1, 0)) I(x_i > 1/indicator_beta)
//   low_count      = sum_i I(x_i <= 1/indicator_beta)
// indicator_beta differs from beta only in compatibility runs that freeze the
// split at the starting beta.
struct DataBoundTerms {
  double exp_weight_sum = 0.0;
  double low_count = 0.0;
};

DataBoundTerms data_bound_terms(const Sample& s, double beta, double anchor_gamma,
                                double indicator_beta);

// n[-2/g^2 + 2 a g0/g^3 - (2+basel) a^2/g^4]
double smooth_bound_part(double n, double alpha, double gamma, const BoundConstants& k);

}  // namespace ggd::detail
