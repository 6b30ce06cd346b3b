#pragma once
// Arithmetic and dense matrix rank over the prime field of order 2^61 - 1.
// Rank statements about integer matrices are certified in one direction:
// full rank mod p implies full rank over the rationals.

#include <cstdint>
#include <vector>

namespace bia {
namespace fp61 {

inline constexpr std::uint64_t kP = (std::uint64_t(1) << 61) - 1;

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((unsigned __int128)a * b % kP);
}

inline std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= kP ? s - kP : s;
}

inline std::uint64_t sub(std::uint64_t a, std::uint64_t b) {
  return a >= b ? a - b : a + kP - b;
}

inline std::uint64_t pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t acc = 1;
  base %= kP;
  while (exp) {
    if (exp & 1) acc = mul(acc, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return acc;
}

inline std::uint64_t inv(std::uint64_t a) { return pow(a, kP - 2); }

// Dense row-major matrix over F_p with in-place elimination rank.
class Mat {
 public:
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, 0) {}

  std::uint64_t& at(int r, int c) { return a_[std::size_t(r) * cols_ + c]; }
  std::uint64_t at(int r, int c) const { return a_[std::size_t(r) * cols_ + c]; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  // Gaussian elimination; destroys the contents.
  int rank_destructive() {
    int rank = 0;
    for (int c = 0; c < cols_ && rank < rows_; ++c) {
      int piv = -1;
      for (int r = rank; r < rows_; ++r) {
        if (at(r, c)) {
          piv = r;
          break;
        }
      }
      if (piv < 0) continue;
      if (piv != rank)
        for (int j = c; j < cols_; ++j) std::swap(at(piv, j), at(rank, j));
      std::uint64_t iv = inv(at(rank, c));
      for (int j = c; j < cols_; ++j) at(rank, j) = mul(at(rank, j), iv);
      for (int r = 0; r < rows_; ++r) {
        if (r == rank) continue;
        std::uint64_t f = at(r, c);
        if (!f) continue;
        for (int j = c; j < cols_; ++j) at(r, j) = sub(at(r, j), mul(f, at(rank, j)));
      }
      ++rank;
    }
    return rank;
  }

 private:
  int rows_, cols_;
  std::vector<std::uint64_t> a_;
};

// Rank of a set of column vectors (each of length n).
inline int rank_of_columns(const std::vector<std::vector<std::uint64_t>>& cols) {
  if (cols.empty()) return 0;
  int n = static_cast<int>(cols[0].size());
  Mat m(n, static_cast<int>(cols.size()));
  for (int c = 0; c < static_cast<int>(cols.size()); ++c)
    for (int r = 0; r < n; ++r) m.at(r, c) = cols[c][r] % kP;
  return m.rank_destructive();
}

}  // namespace fp61
}  // namespace bia
