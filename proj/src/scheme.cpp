#include "bia/scheme.hpp"

#include <algorithm>

namespace bia {

namespace {

void validate_params(int K, int r) {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (r < 1 || r > K) throw std::invalid_argument("r must satisfy 1 <= r <= K");
}

// Complement of Q in {1..K} as a 0/1 row.
std::vector<std::uint8_t> complement_row(int K, const std::vector<int>& Q) {
  std::vector<std::uint8_t> row(K, 1);
  for (int p : Q) row[p - 1] = 0;
  return row;
}

}  // namespace

int block_length(int K, int r) {
  validate_params(K, r);
  return static_cast<int>(binomial(K - 1, r) + static_cast<long long>(r) * binomial(K - 1, r - 1));
}

BinaryMatrix build_basis_matrix(const SchemeParams& params) {
  const int K = params.K;
  const int r = params.r;
  validate_params(K, r);

  BinaryMatrix F;
  // (r-1) copies of the all-ones-minus-identity block.
  for (int copy = 0; copy < r - 1; ++copy) {
    for (int i = 0; i < K; ++i) {
      std::vector<std::uint8_t> row(K, 1);
      row[i] = 0;
      F.push_back(std::move(row));
    }
  }

  if (params.pad_b) {
    // All weight-(K-r) rows, ordered lexicographically by support.
    for (const auto& support : subsets_lex(K, K - r)) {
      std::vector<std::uint8_t> row(K, 0);
      for (int p : support) row[p - 1] = 1;
      F.push_back(std::move(row));
    }
    return F;
  }

  const long long n = block_length(K, r);
  const long long b = n - static_cast<long long>(r - 1) * K;
  const long long need = binomial(K - 1, r - 1);
  if (b < need) {
    throw SchemeError("infeasible (K=" + std::to_string(K) + ", r=" + std::to_string(r) +
                      "): basis rows available b=" + std::to_string(b) +
                      " fall below the per-transmitter requirement C(K-1,r-1)=" +
                      std::to_string(need) + "; rerun with pad_b to take all C(K,K-r) rows");
  }

  // Complement indicators of the r-subsets in lex subset order; when b
  // exceeds C(K,r) the list cycles, repeating rows.
  const auto coalitions = subsets_lex(K, r);
  const long long num_coalitions = static_cast<long long>(coalitions.size());
  for (long long i = 0; i < b; ++i) {
    F.push_back(complement_row(K, coalitions[static_cast<std::size_t>(i % num_coalitions)]));
  }
  return F;
}

SwitchMatrix build_switch_matrix(const SchemeParams& params, const BinaryMatrix& F) {
  const int K = params.K;
  const int r = params.r;
  SwitchMatrix S = F;
  // Copy j in {2..r-1} announces itself on its diagonal; copy 1 and the
  // B rows keep the 0/1 pattern of F.
  for (int copy = 1; copy < r - 1; ++copy) {
    for (int i = 0; i < K; ++i) {
      S[static_cast<std::size_t>(copy) * K + i][i] = static_cast<std::uint8_t>(copy + 1);
    }
  }
  return S;
}

std::vector<std::uint8_t> coalition_shared_vector(const BinaryMatrix& F,
                                                  const std::vector<int>& Q) {
  const std::size_t n = F.size();
  const int K = n == 0 ? 0 : static_cast<int>(F[0].size());
  std::vector<std::uint8_t> v(n, 1);
  for (int p = 1; p <= K; ++p) {
    if (subset_contains(Q, p)) continue;
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::uint8_t>(v[i] & F[i][p - 1]);
  }
  return v;
}

std::vector<PrecoderSet> build_precoders(const SchemeParams& params, const BinaryMatrix& F) {
  const int K = params.K;
  const int r = params.r;
  std::vector<PrecoderSet> out(static_cast<std::size_t>(K));
  for (int p = 1; p <= K; ++p) {
    PrecoderSet& set = out[p - 1];
    set.tx = p;
    for (const auto& Q : subsets_lex(K, r)) {
      if (!subset_contains(Q, p)) continue;
      set.labels.push_back(Q);
      set.vectors.push_back(coalition_shared_vector(F, Q));
    }
  }
  return out;
}

Scheme build_scheme(int K, int r, bool pad_b) {
  validate_params(K, r);
  SchemeParams params{K, r, pad_b};
  Scheme s;
  s.K = K;
  s.r = r;
  s.padded = pad_b;
  s.F = build_basis_matrix(params);
  s.n = static_cast<int>(s.F.size());
  s.b = s.n - (r - 1) * K;
  s.S = build_switch_matrix(params, s.F);
  std::uint8_t max_mode = 0;
  for (const auto& row : s.S)
    for (std::uint8_t v : row) max_mode = std::max(max_mode, v);
  s.modes = 1 + static_cast<int>(max_mode);
  s.coalitions = subsets_lex(K, r);
  s.precoders = build_precoders(params, s.F);
  return s;
}

const std::vector<std::uint8_t>& Scheme::shared_vector(int ci) const {
  const auto& Q = coalitions[static_cast<std::size_t>(ci)];
  const PrecoderSet& owner = precoders[static_cast<std::size_t>(Q[0] - 1)];
  for (std::size_t j = 0; j < owner.labels.size(); ++j) {
    if (owner.labels[j] == Q) return owner.vectors[j];
  }
  throw std::logic_error("coalition missing from its first owner's label set");
}

int Scheme::coalition_index(const std::vector<int>& Q) const {
  for (std::size_t i = 0; i < coalitions.size(); ++i) {
    if (coalitions[i] == Q) return static_cast<int>(i);
  }
  return -1;
}

Rational per_user_dof(const Scheme& scheme) {
  return Rational(binomial(scheme.K - 1, scheme.r - 1), scheme.n);
}

Rational scheme_sum_dof(const Scheme& scheme) {
  return per_user_dof(scheme) * Rational(scheme.K);
}

}  // namespace bia
