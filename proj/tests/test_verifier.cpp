#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "bia/channel.hpp"
#include "bia/dof.hpp"
#include "bia/fp61.hpp"
#include "bia/scheme.hpp"
#include "bia/scheme_io.hpp"
#include "bia/verifier.hpp"

namespace {

// Flip one bit of the coalition's shared vector in every owner's copy, so the
// mutation stays a (corrupted) shared vector rather than an owner mismatch.
bia::Scheme flip_shared_bit(bia::Scheme s, int ci, int bit) {
  const auto Q = s.coalitions[static_cast<std::size_t>(ci)];
  for (int p : Q) {
    auto& ps = s.precoders[static_cast<std::size_t>(p - 1)];
    for (std::size_t j = 0; j < ps.labels.size(); ++j) {
      if (ps.labels[j] == Q) ps.vectors[j][static_cast<std::size_t>(bit)] ^= 1;
    }
  }
  return s;
}

void set_owner_copy(bia::Scheme& s, int tx, const std::vector<int>& Q,
                    const std::vector<std::uint8_t>& v) {
  auto& ps = s.precoders[static_cast<std::size_t>(tx - 1)];
  for (std::size_t j = 0; j < ps.labels.size(); ++j) {
    if (ps.labels[j] == Q) ps.vectors[j] = v;
  }
}

}  // namespace

TEST_CASE("five-user scheme verifies with the expected rank profile") {
  const bia::Scheme s = bia::build_scheme(5, 2, false);
  const bia::VerificationReport rep = bia::verify_scheme(s, 3, 0);

  CHECK(rep.structure_pass);
  CHECK(rep.structure_errors.empty());
  CHECK(rep.lemma2_all());
  CHECK(rep.lemma3_all());
  CHECK(rep.lemma4_all());
  CHECK(rep.decodability_all());
  CHECK(rep.counting_all());
  CHECK(rep.seeds_agree);
  CHECK(rep.all_pass);
  CHECK(rep.seeds.size() == 3);
  CHECK(rep.total_rank_target == 14);

  REQUIRE(rep.lemma3.size() == 30);  // 10 coalitions x 3 outside receivers
  REQUIRE(rep.lemma4.size() == 20);  // 10 coalitions x 2 members
  for (const auto& c : rep.lemma3) CHECK(c.rank == 1);
  for (const auto& c : rep.lemma4) CHECK(c.rank == 2);

  REQUIRE(rep.receivers.size() == 5);
  for (const auto& rx : rep.receivers) {
    CHECK(rx.desired_rank == 4);
    CHECK(rx.aligned_rank == 6);
    CHECK(rx.combined_rank == 10);
    CHECK(rx.decodability_pass);
    CHECK(rx.counting_lhs == 14);
    CHECK(rx.counting_slack == 0);  // equality case
    CHECK(rx.counting_pass);
    CHECK(rx.total_rank == 14);
    CHECK(rx.total_rank_pass);
    CHECK(rx.dependent_aligned.empty());
    CHECK(rx.dependent_desired.empty());
    CHECK(rx.member_joint_rank == 8);
  }
  // One truncated B row leaves the last coalition pair short of a private
  // slot, which shows up as a rank-deficient observation at the receivers
  // outside it. The headline checks are unaffected by design.
  CHECK(rep.receivers[0].observation_rank == 13);
  CHECK(rep.receivers[1].observation_rank == 13);
  CHECK(rep.receivers[2].observation_rank == 13);
  CHECK(rep.receivers[3].observation_rank == 14);
  CHECK(rep.receivers[4].observation_rank == 14);

  REQUIRE(rep.dof_per_user.size() == 5);
  for (const auto& d : rep.dof_per_user) CHECK(d == bia::Rational(2, 7));
  CHECK(rep.dof_sum == bia::Rational(10, 7));
}

TEST_CASE("formula schemes verify across a parameter sweep") {
  for (int K = 2; K <= 12; ++K) {
    CAPTURE(K);
    const int r = bia::optimal_r(K);
    const bia::Scheme s = bia::build_scheme(K, r, false);
    const bia::VerificationReport rep = bia::verify_scheme(s, 3, 0);
    CHECK(rep.all_pass);
    CHECK(rep.total_rank_target == s.n);
    for (const auto& rx : rep.receivers) {
      CHECK(rx.counting_slack == 0);
      CHECK(rx.total_rank == s.n);
    }
    CHECK(rep.dof_sum == bia::sum_dof_formula(K, r));
  }
}

TEST_CASE("single-user scheme is trivially tight") {
  const bia::Scheme s = bia::build_scheme(1, 1, false);
  const bia::VerificationReport rep = bia::verify_scheme(s, 3, 7);
  CHECK(rep.all_pass);
  CHECK(rep.lemma3.empty());
  REQUIRE(rep.lemma4.size() == 1);
  CHECK(rep.lemma4[0].rank == 1);
  CHECK(rep.dof_sum == bia::Rational(1));
}

TEST_CASE("padded schemes verify with counting slack") {
  const bia::Scheme p4 = bia::build_scheme(4, 3, true);
  const bia::VerificationReport rep4 = bia::verify_scheme(p4, 3, 0);
  CHECK(rep4.all_pass);
  CHECK(rep4.total_rank_target == 10);  // 3*C(3,2) + C(3,3), below n = 12
  for (const auto& rx : rep4.receivers) {
    CHECK(rx.counting_lhs == 10);
    CHECK(rx.counting_slack == 2);
    CHECK(rx.total_rank == 10);
    CHECK(rx.total_rank_pass);
  }
  CHECK(rep4.dof_sum == bia::Rational(1));

  const bia::Scheme p5 = bia::build_scheme(5, 2, true);
  const bia::VerificationReport rep5 = bia::verify_scheme(p5, 3, 0);
  CHECK(rep5.all_pass);
  CHECK(p5.n == 15);
  CHECK(rep5.total_rank_target == 14);
  for (const auto& rx : rep5.receivers) CHECK(rx.counting_slack == 1);
  CHECK(rep5.dof_sum == bia::Rational(4, 3));
}

TEST_CASE("verdicts are invariant to rescaling a channel value") {
  const bia::Scheme s = bia::build_scheme(5, 2, false);
  const auto base = bia::make_generic_channel(5, s.modes, 42);
  auto scaled = base;
  // Rescale h(3, 2, mode 1) by an arbitrary nonzero field element.
  const std::size_t idx = ((3 - 1) * 5 + (2 - 1)) * static_cast<std::size_t>(s.modes) + 1;
  scaled.values[idx] = bia::fp61::mul(scaled.values[idx], 987654321ULL);

  const auto a = bia::verify_with_channels(s, {base});
  const auto b = bia::verify_with_channels(s, {scaled});
  CHECK(a.all_pass);
  CHECK(b.all_pass);
  REQUIRE(a.lemma3.size() == b.lemma3.size());
  for (std::size_t i = 0; i < a.lemma3.size(); ++i) CHECK(a.lemma3[i].rank == b.lemma3[i].rank);
  REQUIRE(a.lemma4.size() == b.lemma4.size());
  for (std::size_t i = 0; i < a.lemma4.size(); ++i) CHECK(a.lemma4[i].rank == b.lemma4[i].rank);
  for (std::size_t i = 0; i < a.receivers.size(); ++i) {
    CHECK(a.receivers[i].desired_rank == b.receivers[i].desired_rank);
    CHECK(a.receivers[i].aligned_rank == b.receivers[i].aligned_rank);
    CHECK(a.receivers[i].combined_rank == b.receivers[i].combined_rank);
    CHECK(a.receivers[i].total_rank == b.receivers[i].total_rank);
  }
}

TEST_CASE("degenerate channel draws trigger the cross-seed agreement failure") {
  const bia::Scheme s = bia::build_scheme(5, 2, false);
  bia::GenericChannelAssignment ones;
  ones.K = 5;
  ones.modes = s.modes;
  ones.seed = 0;
  ones.values.assign(static_cast<std::size_t>(5) * 5 * s.modes, 1);

  const auto rep = bia::verify_with_channels(s, {bia::make_generic_channel(5, s.modes, 1), ones});
  CHECK_FALSE(rep.seeds_agree);
  CHECK_FALSE(rep.all_pass);
}

TEST_CASE("bit flips in a shared vector are always detected") {
  const bia::Scheme s = bia::build_scheme(5, 2, false);

  // Flip inside the first A copy: breaks both the stored-product identity
  // and the rank/alignment math.
  const auto m1 = bia::verify_scheme(flip_shared_bit(s, 0, 0), 3, 0);
  CHECK_FALSE(m1.structure_pass);
  CHECK_FALSE(m1.all_pass);

  // Clearing a vector's own B-row slot leaves every rank and counting check
  // satisfied; only the structural product identity catches it.
  const auto m2 = bia::verify_scheme(flip_shared_bit(s, 0, 5), 3, 0);
  CHECK_FALSE(m2.structure_pass);
  CHECK(m2.lemma2_all());
  CHECK(m2.lemma3_all());
  CHECK(m2.lemma4_all());
  CHECK(m2.decodability_all());
  CHECK(m2.counting_all());
  CHECK_FALSE(m2.all_pass);

  // Flipping only one owner's copy is an owner mismatch.
  bia::Scheme uneven = s;
  auto v = s.shared_vector(0);
  v[0] ^= 1;
  set_owner_copy(uneven, 1, {1, 2}, v);
  const auto m3 = bia::verify_scheme(uneven, 3, 0);
  CHECK_FALSE(m3.structure_pass);
  CHECK_FALSE(m3.all_pass);
}

TEST_CASE("counting uses actual shared-set intersections") {
  // Give the owners of {4,5} unrelated private vectors: the coalition no
  // longer shares a dimension, so receivers outside it need more than n
  // dimensions and the counting inequality fails exactly there.
  bia::Scheme s = bia::build_scheme(5, 2, false);
  std::vector<std::uint8_t> e4(14, 0), e5(14, 0);
  e4[3] = 1;
  e5[4] = 1;
  set_owner_copy(s, 4, {4, 5}, e4);
  set_owner_copy(s, 5, {4, 5}, e5);

  const auto rep = bia::verify_scheme(s, 3, 0);
  CHECK_FALSE(rep.structure_pass);
  REQUIRE(rep.receivers.size() == 5);
  for (int rx = 1; rx <= 3; ++rx) {
    CHECK(rep.receivers[rx - 1].counting_lhs == 15);
    CHECK_FALSE(rep.receivers[rx - 1].counting_pass);
  }
  CHECK(rep.receivers[3].counting_lhs == 14);
  CHECK(rep.receivers[3].counting_pass);
  CHECK(rep.receivers[4].counting_lhs == 14);
  CHECK(rep.receivers[4].counting_pass);
  CHECK_FALSE(rep.all_pass);
}

TEST_CASE("structure check pinpoints malformed schemes") {
  std::vector<std::string> errors;

  bia::Scheme bad_mode = bia::build_scheme(5, 2, false);
  bad_mode.S[0][0] = 5;
  CHECK_FALSE(bia::check_structure(bad_mode, errors));
  CHECK_FALSE(errors.empty());

  errors.clear();
  bia::Scheme bad_f = bia::build_scheme(5, 2, false);
  bad_f.F[2][1] = 2;
  CHECK_FALSE(bia::check_structure(bad_f, errors));
  CHECK_FALSE(errors.empty());

  errors.clear();
  bia::Scheme bad_labels = bia::build_scheme(5, 2, false);
  std::swap(bad_labels.precoders[0].labels[0], bad_labels.precoders[0].labels[1]);
  std::swap(bad_labels.precoders[0].vectors[0], bad_labels.precoders[0].vectors[1]);
  CHECK_FALSE(bia::check_structure(bad_labels, errors));
  CHECK_FALSE(errors.empty());

  errors.clear();
  CHECK(bia::check_structure(bia::build_scheme(5, 2, false), errors));
  CHECK(errors.empty());
}

TEST_CASE("verification rejects bad seed counts and loads round-trip") {
  const bia::Scheme s = bia::build_scheme(3, 2, false);
  CHECK_THROWS_AS((void)bia::verify_scheme(s, 0, 1), std::invalid_argument);

  // A serialized and reloaded scheme verifies identically.
  const bia::Json j = bia::scheme_to_json(s, 5);
  const bia::Scheme back = bia::scheme_from_json(j);
  const auto a = bia::verify_scheme(s, 2, 11);
  const auto b = bia::verify_scheme(back, 2, 11);
  CHECK(a.all_pass);
  CHECK(b.all_pass);
  CHECK(a.dof_sum == b.dof_sum);
  for (std::size_t i = 0; i < a.receivers.size(); ++i)
    CHECK(a.receivers[i].total_rank == b.receivers[i].total_rank);
}

TEST_CASE("report serialization carries the verdict") {
  const bia::Scheme s = bia::build_scheme(5, 2, false);
  const auto rep = bia::verify_scheme(s, 3, 0);

  const bia::Json j = bia::report_to_json(rep);
  CHECK(j.at("all_pass").get<bool>());
  CHECK(j.at("structure").at("pass").get<bool>());
  CHECK(j.at("lemma2").at("pass").get<bool>());
  CHECK(j.at("lemma3").at("pass").get<bool>());
  CHECK(j.at("lemma4").at("pass").get<bool>());
  CHECK(j.at("receivers").size() == 5);
  CHECK(j.at("achieved_dof").at("sum").at("num").get<long long>() == 10);
  CHECK(j.at("achieved_dof").at("sum").at("den").get<long long>() == 7);
  CHECK(j.at("tool").at("name").get<std::string>() == "biakit");

  const std::string csv = bia::report_to_csv(rep);
  CHECK(csv.rfind("# biakit", 0) == 0);
  CHECK(csv.find("all_pass=1") != std::string::npos);
  CHECK(csv.find("counting_pass") != std::string::npos);

  // Failure reports must not claim achieved DoF.
  const auto bad = bia::verify_scheme(flip_shared_bit(s, 0, 0), 2, 0);
  const bia::Json jb = bia::report_to_json(bad);
  CHECK_FALSE(jb.at("all_pass").get<bool>());
  CHECK_FALSE(jb.contains("achieved_dof"));
}
