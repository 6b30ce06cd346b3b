#include "bia/dof.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace bia {

Rational sum_dof_formula(int K, int r) {
  if (K < 1 || r < 1 || r > K) throw std::invalid_argument("sum_dof_formula: need 1 <= r <= K");
  return Rational::from_wide(int128(K) * r, int128(r) * r - r + K);
}

int optimal_r(int K) {
  if (K < 1) throw std::invalid_argument("optimal_r: K >= 1");
  int r = 1;
  while (static_cast<long long>(r) * (r + 1) < K) ++r;
  return r;
}

int optimal_r_bruteforce(int K) {
  if (K < 1) throw std::invalid_argument("optimal_r_bruteforce: K >= 1");
  int best_r = 1;
  Rational best = sum_dof_formula(K, 1);
  for (int r = 2; r <= K; ++r) {
    Rational v = sum_dof_formula(K, r);
    if (v > best) {
      best = v;
      best_r = r;
    }
  }
  return best_r;
}

bool verify_r_optimality(int K) { return optimal_r(K) == optimal_r_bruteforce(K); }

std::vector<BoundsRow> outer_bound_curve(int K_min, int K_max) {
  if (K_min < 1 || K_max < K_min) throw std::invalid_argument("outer_bound_curve: bad range");
  std::vector<BoundsRow> rows;
  rows.reserve(K_max - K_min + 1);
  for (int K = K_min; K <= K_max; ++K) {
    BoundsRow row;
    row.K = K;
    row.r_star = optimal_r(K);
    Rational dof = sum_dof_formula(K, row.r_star);
    row.dof_num = dof.num();
    row.dof_den = dof.den();
    row.dof_decimal = dof.to_double();
    row.sqrtK_over_2 = std::sqrt(static_cast<double>(K)) / 2.0;
    rows.push_back(row);
  }
  return rows;
}

double asymptotic_gap(int K) {
  Rational dof = sum_dof_formula(K, optimal_r(K));
  double ref = std::sqrt(static_cast<double>(K)) / 2.0;
  return std::abs(dof.to_double() - ref) / ref;
}

void write_bounds_csv(std::ostream& os, const std::vector<BoundsRow>& rows,
                      const std::string& meta_comment) {
  if (!meta_comment.empty()) os << "# " << meta_comment << "\n";
  os << "K,r_star,dof_num,dof_den,dof_decimal,sqrtK_over_2\n";
  char buf[128];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%lld,%lld,%.6g,%.6g\n", row.K, row.r_star,
                  row.dof_num, row.dof_den, row.dof_decimal, row.sqrtK_over_2);
    os << buf;
  }
}

}  // namespace bia
