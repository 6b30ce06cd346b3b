#pragma once
// Supersymbol construction for the K-user channel with mode-switching
// receivers: basis matrix F, per-receiver switching patterns S, and the
// per-transmitter precoder vector sets built from Hadamard products of
// F columns.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bia/combinatorics.hpp"
#include "bia/rational.hpp"

namespace bia {

using BinaryMatrix = std::vector<std::vector<std::uint8_t>>;  // n rows x K cols, entries 0/1
using SwitchMatrix = std::vector<std::vector<std::uint8_t>>;  // n rows x K cols, mode indices

struct SchemeParams {
  int K = 0;
  int r = 0;
  bool pad_b = false;
};

// Raised when (K, r) admits no construction in the requested mode.
struct SchemeError : std::runtime_error {
  explicit SchemeError(const std::string& what) : std::runtime_error(what) {}
};

struct PrecoderSet {
  int tx = 0;
  std::vector<std::vector<int>> labels;                 // r-subsets containing tx, lex order
  std::vector<std::vector<std::uint8_t>> vectors;       // one n-length 0/1 column per label
};

struct Scheme {
  int K = 0;
  int r = 0;
  int n = 0;       // supersymbol length
  int b = 0;       // number of B rows
  int modes = 0;   // mode alphabet size, 1 + max switching entry
  bool padded = false;
  BinaryMatrix F;
  SwitchMatrix S;
  std::vector<std::vector<int>> coalitions;  // all r-subsets of {1..K}, lex order
  std::vector<PrecoderSet> precoders;        // indexed by tx-1

  int symbols_per_user() const { return static_cast<int>(precoders.empty() ? 0 : precoders[0].vectors.size()); }
  // The vector shared by coalition index ci (taken from its first owner's set).
  const std::vector<std::uint8_t>& shared_vector(int ci) const;
  int coalition_index(const std::vector<int>& Q) const;
};

// n = C(K-1, r) + r*C(K-1, r-1).
int block_length(int K, int r);

// F = (r-1) stacked copies of the all-ones-minus-identity block followed by
// b rows of weight K-r. Default mode: complement indicators of the r-subsets
// in lexicographic subset order, cycled when b exceeds C(K, r); requires
// b >= C(K-1, r-1) (below that no transmitter can have independent vectors).
// pad_b mode: all C(K, K-r) weight-(K-r) rows in lexicographic support order,
// with n recomputed as (r-1)K + C(K, K-r).
BinaryMatrix build_basis_matrix(const SchemeParams& params);

// S equals F except that stacked copy j >= 2 carries mode value j on its
// diagonal; column p is receiver p's per-slot mode sequence.
SwitchMatrix build_switch_matrix(const SchemeParams& params, const BinaryMatrix& F);

// Per-transmitter vector sets; the vector for label Q is the entrywise
// product of the K-r columns of F outside Q, so all owners of Q store
// bit-identical copies.
std::vector<PrecoderSet> build_precoders(const SchemeParams& params, const BinaryMatrix& F);

// Entrywise product of the F columns outside Q (all-ones when r = K).
std::vector<std::uint8_t> coalition_shared_vector(const BinaryMatrix& F,
                                                  const std::vector<int>& Q);

Scheme build_scheme(int K, int r, bool pad_b);

// Per-user C(K-1,r-1)/n and the K-fold sum, from the scheme's actual n.
Rational per_user_dof(const Scheme& scheme);
Rational scheme_sum_dof(const Scheme& scheme);

}  // namespace bia
