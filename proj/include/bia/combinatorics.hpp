#pragma once
// Subset enumeration and binomial coefficients used by the scheme builder.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace bia {

using int128 = __int128;

// Exact C(n, k) in 128-bit arithmetic. Intermediate products stay exact
// because the running value is always a binomial coefficient times a factor
// below n. Throws on overflow past 127 bits (n <= 127 is always safe).
inline int128 binomial_wide(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  int128 result = 1;
  for (long long i = 1; i <= k; ++i) {
    int128 next = result * (n - k + i);
    if (next / (n - k + i) != result) throw std::overflow_error("binomial_wide");
    result = next / i;
  }
  return result;
}

// C(n, k) as int64; throws if the value does not fit.
inline long long binomial(long long n, long long k) {
  int128 v = binomial_wide(n, k);
  if (v > int128(0x7fffffffffffffffLL)) throw std::overflow_error("binomial");
  return static_cast<long long>(v);
}

// All r-subsets of {1,...,K} in lexicographic order.
inline std::vector<std::vector<int>> subsets_lex(int K, int r) {
  std::vector<std::vector<int>> out;
  if (r < 0 || r > K) return out;
  std::vector<int> cur(r);
  for (int i = 0; i < r; ++i) cur[i] = i + 1;
  while (true) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[i] == K - (r - 1 - i)) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < r; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

inline bool subset_contains(const std::vector<int>& Q, int p) {
  for (int q : Q)
    if (q == p) return true;
  return false;
}

}  // namespace bia
