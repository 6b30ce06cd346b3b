#pragma once
// Degrees-of-freedom formula, the optimal number of antenna modes, and the
// analytic sum-DoF curve with its large-K reference.

#include <ostream>
#include <vector>

#include "bia/rational.hpp"

namespace bia {

// Sum DoF K*r / (r^2 - r + K) as an exact rational. Requires 1 <= r <= K.
Rational sum_dof_formula(int K, int r);

// Smallest r maximizing the sum DoF: the least r with r*(r+1) >= K.
// Integer search only, no floating point in the decision.
int optimal_r(int K);

// Reference implementation: exhaustive argmax over r in [1, K] with exact
// rational comparison, smallest r winning ties.
int optimal_r_bruteforce(int K);

// True iff the closed-form optimal_r(K) matches the exhaustive argmax.
bool verify_r_optimality(int K);

struct BoundsRow {
  int K = 0;
  int r_star = 0;
  long long dof_num = 0;
  long long dof_den = 0;
  double dof_decimal = 0.0;
  double sqrtK_over_2 = 0.0;
};

// One row per K in [K_min, K_max] at the optimal r.
std::vector<BoundsRow> outer_bound_curve(int K_min, int K_max);

// |dof(K) - sqrt(K)/2| / (sqrt(K)/2).
double asymptotic_gap(int K);

// Pinned CSV layout: K,r_star,dof_num,dof_den,dof_decimal,sqrtK_over_2.
void write_bounds_csv(std::ostream& os, const std::vector<BoundsRow>& rows,
                      const std::string& meta_comment);

}  // namespace bia
