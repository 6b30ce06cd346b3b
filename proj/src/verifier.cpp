#include "bia/verifier.hpp"

#include <algorithm>
#include <set>

#include "bia/combinatorics.hpp"
#include "bia/fp61.hpp"

namespace bia {

namespace {

bool all_of_vec(const std::vector<bool>& v) {
  return std::all_of(v.begin(), v.end(), [](bool b) { return b; });
}

// Lift a 0/1 vector into the field.
std::vector<std::uint64_t> lift(const std::vector<std::uint8_t>& v) {
  return std::vector<std::uint64_t>(v.begin(), v.end());
}

// Actual shared-vector count per coalition: vectors present, bit-identical,
// in every member's set. Equals 1 by construction, recomputed here so loaded
// schemes are measured rather than assumed.
std::vector<long long> intersection_counts(const Scheme& scheme) {
  std::vector<std::set<std::vector<std::uint8_t>>> tx_sets(static_cast<std::size_t>(scheme.K));
  for (const auto& ps : scheme.precoders) {
    tx_sets[ps.tx - 1] = {ps.vectors.begin(), ps.vectors.end()};
  }
  std::vector<long long> counts;
  counts.reserve(scheme.coalitions.size());
  for (const auto& Q : scheme.coalitions) {
    long long c = 0;
    for (const auto& v : tx_sets[Q[0] - 1]) {
      bool in_all = true;
      for (std::size_t j = 1; j < Q.size() && in_all; ++j) {
        in_all = tx_sets[Q[j] - 1].count(v) > 0;
      }
      if (in_all) ++c;
    }
    counts.push_back(c);
  }
  return counts;
}

// Per-seed rank conclusions, compared across seeds.
struct SeedVerdicts {
  std::vector<int> lemma3_ranks;
  std::vector<int> lemma4_ranks;
  std::vector<int> rx_ranks;  // desired, aligned, combined per receiver

  bool operator==(const SeedVerdicts& o) const {
    return lemma3_ranks == o.lemma3_ranks && lemma4_ranks == o.lemma4_ranks &&
           rx_ranks == o.rx_ranks;
  }
};

}  // namespace

bool VerificationReport::lemma2_all() const { return all_of_vec(lemma2_pass); }
bool VerificationReport::lemma3_all() const {
  return std::all_of(lemma3.begin(), lemma3.end(), [](const PairCheck& c) { return c.pass; });
}
bool VerificationReport::lemma4_all() const {
  return std::all_of(lemma4.begin(), lemma4.end(), [](const PairCheck& c) { return c.pass; });
}
bool VerificationReport::decodability_all() const {
  return std::all_of(receivers.begin(), receivers.end(),
                     [](const ReceiverReport& r) { return r.decodability_pass; });
}
bool VerificationReport::counting_all() const {
  return std::all_of(receivers.begin(), receivers.end(),
                     [](const ReceiverReport& r) { return r.counting_pass; });
}

bool check_structure(const Scheme& scheme, std::vector<std::string>& errors) {
  const auto fail = [&errors](const std::string& msg) { errors.push_back(msg); };
  const std::size_t n = static_cast<std::size_t>(scheme.n);
  const std::size_t K = static_cast<std::size_t>(scheme.K);

  if (scheme.K < 1 || scheme.r < 1 || scheme.r > scheme.K) fail("invalid (K, r)");
  if (scheme.F.size() != n) fail("F row count differs from n");
  if (scheme.S.size() != n) fail("S row count differs from n");
  for (std::size_t i = 0; i < scheme.F.size(); ++i) {
    if (scheme.F[i].size() != K) fail("F row " + std::to_string(i + 1) + " has wrong width");
    for (std::uint8_t v : scheme.F[i]) {
      if (v > 1) {
        fail("F row " + std::to_string(i + 1) + " is not binary");
        break;
      }
    }
  }
  for (std::size_t i = 0; i < scheme.S.size(); ++i) {
    if (scheme.S[i].size() != K) fail("S row " + std::to_string(i + 1) + " has wrong width");
    for (std::uint8_t v : scheme.S[i]) {
      if (static_cast<int>(v) >= scheme.modes) {
        fail("S row " + std::to_string(i + 1) + " exceeds the mode alphabet");
        break;
      }
    }
  }
  if (!errors.empty()) return false;

  const auto expected_coalitions = subsets_lex(scheme.K, scheme.r);
  if (scheme.coalitions != expected_coalitions) fail("coalition list is not in lex order");
  if (scheme.precoders.size() != K) fail("precoder set count differs from K");

  for (const auto& ps : scheme.precoders) {
    if (ps.tx < 1 || ps.tx > scheme.K) {
      fail("precoder set with out-of-range transmitter");
      continue;
    }
    std::vector<std::vector<int>> expected_labels;
    for (const auto& Q : expected_coalitions) {
      if (subset_contains(Q, ps.tx)) expected_labels.push_back(Q);
    }
    if (ps.labels != expected_labels) {
      fail("tx " + std::to_string(ps.tx) + ": labels are not the lex coalitions containing it");
      continue;
    }
    if (ps.vectors.size() != ps.labels.size()) {
      fail("tx " + std::to_string(ps.tx) + ": vector count differs from label count");
      continue;
    }
    for (std::size_t j = 0; j < ps.labels.size(); ++j) {
      if (ps.vectors[j].size() != n) {
        fail("tx " + std::to_string(ps.tx) + " vector " + std::to_string(j + 1) +
             ": wrong length");
        continue;
      }
      // The stored vector must be the entrywise product of the non-member
      // F columns; this ties every copy to F itself.
      const auto want = coalition_shared_vector(scheme.F, ps.labels[j]);
      if (ps.vectors[j] != want) {
        fail("tx " + std::to_string(ps.tx) + " vector " + std::to_string(j + 1) +
             ": differs from the product of non-member basis columns");
      }
    }
  }

  // Owner copies of each coalition vector must be bit-identical.
  for (const auto& Q : expected_coalitions) {
    const std::vector<std::uint8_t>* first = nullptr;
    for (int p : Q) {
      const PrecoderSet& ps = scheme.precoders[static_cast<std::size_t>(p - 1)];
      for (std::size_t j = 0; j < ps.labels.size(); ++j) {
        if (ps.labels[j] != Q) continue;
        if (!first) {
          first = &ps.vectors[j];
        } else if (*first != ps.vectors[j]) {
          fail("coalition copies differ across owners");
        }
      }
    }
  }
  return errors.empty();
}

std::vector<std::uint64_t> realize_column(const GenericChannelAssignment& ch,
                                          int p, int q, const SwitchMatrix& S,
                                          const std::vector<std::uint8_t>& v) {
  const std::size_t n = v.size();
  std::vector<std::uint64_t> col(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i]) col[i] = ch.value(p, q, S[i][static_cast<std::size_t>(p - 1)]);
  }
  return col;
}

VerificationReport verify_with_channels(const Scheme& scheme,
                                        const std::vector<GenericChannelAssignment>& channels) {
  if (channels.empty()) throw std::invalid_argument("at least one channel assignment required");

  VerificationReport rep;
  rep.K = scheme.K;
  rep.r = scheme.r;
  rep.n = scheme.n;
  rep.modes = scheme.modes;
  for (const auto& ch : channels) rep.seeds.push_back(ch.seed);

  rep.structure_pass = check_structure(scheme, rep.structure_errors);

  const long long d_formula = binomial(scheme.K - 1, scheme.r - 1);
  const long long aligned_target = binomial(scheme.K - 1, scheme.r);
  rep.total_rank_target = static_cast<int>(scheme.r * d_formula + aligned_target);

  // Channel-free checks.

  // Intra-transmitter independence: the raw 0/1 vectors of each transmitter
  // have full column rank (full rank in the field certifies full rank over
  // the rationals).
  rep.lemma2_pass.resize(static_cast<std::size_t>(scheme.K), false);
  for (const auto& ps : scheme.precoders) {
    std::vector<std::vector<std::uint64_t>> cols;
    cols.reserve(ps.vectors.size());
    for (const auto& v : ps.vectors) cols.push_back(lift(v));
    rep.lemma2_pass[ps.tx - 1] =
        fp61::rank_of_columns(cols) == static_cast<int>(ps.vectors.size());
  }

  // Counting inequality with measured per-coalition intersection sizes.
  const auto d_Q = intersection_counts(scheme);
  long long sum_di = 0;
  for (const auto& ps : scheme.precoders) sum_di += static_cast<long long>(ps.vectors.size());
  rep.receivers.resize(static_cast<std::size_t>(scheme.K));
  for (int q = 1; q <= scheme.K; ++q) {
    ReceiverReport& rr = rep.receivers[static_cast<std::size_t>(q - 1)];
    rr.rx = q;
    long long coalition_sum = 0;
    for (std::size_t ci = 0; ci < scheme.coalitions.size(); ++ci) {
      if (!subset_contains(scheme.coalitions[ci], q)) coalition_sum += d_Q[ci];
    }
    rr.counting_lhs = sum_di - static_cast<long long>(scheme.r - 1) * coalition_sum;
    rr.counting_slack = scheme.n - rr.counting_lhs;
    rr.counting_pass = rr.counting_lhs <= scheme.n;
  }

  // Channel-dependent checks, repeated per seed; conclusions must agree.
  SeedVerdicts first;
  for (std::size_t si = 0; si < channels.size(); ++si) {
    const GenericChannelAssignment& ch = channels[si];
    SeedVerdicts cur;

    std::vector<PairCheck> lemma3, lemma4;
    for (std::size_t ci = 0; ci < scheme.coalitions.size(); ++ci) {
      const auto& Q = scheme.coalitions[ci];
      const auto& v = scheme.shared_vector(static_cast<int>(ci));
      for (int p = 1; p <= scheme.K; ++p) {
        std::vector<std::vector<std::uint64_t>> cols;
        cols.reserve(Q.size());
        for (int q : Q) cols.push_back(realize_column(ch, p, q, scheme.S, v));
        const int rank = fp61::rank_of_columns(cols);
        if (subset_contains(Q, p)) {
          cur.lemma4_ranks.push_back(rank);
          lemma4.push_back({static_cast<int>(ci), p, rank, rank == scheme.r});
        } else {
          cur.lemma3_ranks.push_back(rank);
          lemma3.push_back({static_cast<int>(ci), p, rank, rank == 1});
        }
      }
    }

    std::vector<ReceiverReport> rx_local(static_cast<std::size_t>(scheme.K));
    for (int q = 1; q <= scheme.K; ++q) {
      ReceiverReport& rr = rx_local[static_cast<std::size_t>(q - 1)];
      const PrecoderSet& own = scheme.precoders[static_cast<std::size_t>(q - 1)];

      std::vector<std::vector<std::uint64_t>> desired;
      for (const auto& v : own.vectors) desired.push_back(realize_column(ch, q, q, scheme.S, v));

      // One aligned representative per outside coalition, from its
      // smallest-index member.
      std::vector<std::vector<std::uint64_t>> aligned;
      std::vector<int> aligned_ci;
      for (std::size_t ci = 0; ci < scheme.coalitions.size(); ++ci) {
        const auto& Q = scheme.coalitions[ci];
        if (subset_contains(Q, q)) continue;
        aligned.push_back(realize_column(ch, q, Q[0], scheme.S,
                                         scheme.shared_vector(static_cast<int>(ci))));
        aligned_ci.push_back(static_cast<int>(ci));
      }

      rr.desired_rank = fp61::rank_of_columns(desired);
      rr.aligned_rank = fp61::rank_of_columns(aligned);
      std::vector<std::vector<std::uint64_t>> combined = desired;
      combined.insert(combined.end(), aligned.begin(), aligned.end());
      rr.combined_rank = fp61::rank_of_columns(combined);

      const bool desired_ok = rr.desired_rank == static_cast<int>(desired.size()) &&
                              static_cast<long long>(desired.size()) == d_formula;
      const bool aligned_ok = rr.aligned_rank == static_cast<int>(aligned.size());
      const bool disjoint_ok = rr.combined_rank == rr.desired_rank + rr.aligned_rank;
      rr.decodability_pass = desired_ok && aligned_ok && disjoint_ok;

      if (!rr.decodability_pass) {
        // Localize: grow the aligned block column by column, then the
        // desired block on top of it; flag columns that add no dimension.
        std::vector<std::vector<std::uint64_t>> acc;
        int rank = 0;
        for (std::size_t j = 0; j < aligned.size(); ++j) {
          acc.push_back(aligned[j]);
          const int next = fp61::rank_of_columns(acc);
          if (next == rank) rr.dependent_aligned.push_back(aligned_ci[j]);
          rank = next;
        }
        for (std::size_t j = 0; j < desired.size(); ++j) {
          acc.push_back(desired[j]);
          const int next = fp61::rank_of_columns(acc);
          if (next == rank) rr.dependent_desired.push_back(static_cast<int>(j));
          rank = next;
        }
      }

      cur.rx_ranks.push_back(rr.desired_rank);
      cur.rx_ranks.push_back(rr.aligned_rank);
      cur.rx_ranks.push_back(rr.combined_rank);

      if (si == 0) {
        // Joint diagnostics on the first seed: desired plus every partner
        // copy, and the complete realized observation.
        std::vector<std::vector<std::uint64_t>> member = desired;
        std::vector<std::vector<std::uint64_t>> observation = desired;
        for (std::size_t ci = 0; ci < scheme.coalitions.size(); ++ci) {
          const auto& Q = scheme.coalitions[ci];
          const auto& v = scheme.shared_vector(static_cast<int>(ci));
          if (subset_contains(Q, q)) {
            for (int p : Q) {
              if (p == q) continue;
              auto col = realize_column(ch, q, p, scheme.S, v);
              member.push_back(col);
              observation.push_back(std::move(col));
            }
          } else {
            for (int p : Q) observation.push_back(realize_column(ch, q, p, scheme.S, v));
          }
        }
        rr.member_joint_rank = fp61::rank_of_columns(member);
        rr.observation_rank = fp61::rank_of_columns(observation);
      }
    }

    // Accounting: the member-group ranks at each receiver plus the aligned
    // block rank must add up to r*C(K-1,r-1) + C(K-1,r).
    for (const PairCheck& c : lemma4) {
      rx_local[static_cast<std::size_t>(c.rx - 1)].total_rank += c.rank;
    }
    for (auto& rr : rx_local) {
      rr.total_rank += rr.aligned_rank;
      rr.total_rank_pass = rr.total_rank == rep.total_rank_target;
    }

    if (si == 0) {
      first = cur;
      rep.lemma3 = std::move(lemma3);
      rep.lemma4 = std::move(lemma4);
      for (int q = 1; q <= scheme.K; ++q) {
        ReceiverReport& dst = rep.receivers[static_cast<std::size_t>(q - 1)];
        ReceiverReport& src = rx_local[static_cast<std::size_t>(q - 1)];
        dst.desired_rank = src.desired_rank;
        dst.aligned_rank = src.aligned_rank;
        dst.combined_rank = src.combined_rank;
        dst.decodability_pass = src.decodability_pass;
        dst.total_rank = src.total_rank;
        dst.total_rank_pass = src.total_rank_pass;
        dst.dependent_aligned = std::move(src.dependent_aligned);
        dst.dependent_desired = std::move(src.dependent_desired);
        dst.member_joint_rank = src.member_joint_rank;
        dst.observation_rank = src.observation_rank;
      }
    } else if (!(cur == first)) {
      rep.seeds_agree = false;
    }
  }

  bool totals_ok = std::all_of(rep.receivers.begin(), rep.receivers.end(),
                               [](const ReceiverReport& r) { return r.total_rank_pass; });
  rep.all_pass = rep.structure_pass && rep.seeds_agree && rep.lemma2_all() &&
                 rep.lemma3_all() && rep.lemma4_all() && rep.decodability_all() &&
                 rep.counting_all() && totals_ok;

  if (rep.all_pass) {
    rep.dof_sum = Rational(0);
    for (const auto& ps : scheme.precoders) {
      rep.dof_per_user.emplace_back(static_cast<long long>(ps.vectors.size()), scheme.n);
      rep.dof_sum = rep.dof_sum + rep.dof_per_user.back();
    }
  }
  return rep;
}

VerificationReport verify_scheme(const Scheme& scheme, int num_seeds,
                                 std::uint64_t master_seed) {
  if (num_seeds < 1) throw std::invalid_argument("num_seeds must be at least 1");
  std::vector<GenericChannelAssignment> channels;
  channels.reserve(static_cast<std::size_t>(num_seeds));
  for (int i = 0; i < num_seeds; ++i) {
    channels.push_back(make_generic_channel(scheme.K, scheme.modes,
                                            derive_seed(master_seed, static_cast<std::uint64_t>(i))));
  }
  return verify_with_channels(scheme, channels);
}

}  // namespace bia
