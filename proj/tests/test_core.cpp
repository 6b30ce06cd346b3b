#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <sstream>

#include "bia/channel.hpp"
#include "bia/combinatorics.hpp"
#include "bia/dof.hpp"
#include "bia/fp61.hpp"
#include "bia/rational.hpp"
#include "bia/scheme.hpp"
#include "bia/scheme_io.hpp"

namespace {

// Column k of F as a 0/1 string, matching how the transposed matrix is
// usually printed.
std::string column_string(const bia::BinaryMatrix& F, int k) {
  std::string s;
  for (const auto& row : F) s += static_cast<char>('0' + row[static_cast<std::size_t>(k - 1)]);
  return s;
}

std::string vector_string(const std::vector<std::uint8_t>& v) {
  std::string s;
  for (std::uint8_t b : v) s += static_cast<char>('0' + b);
  return s;
}

const std::vector<std::uint8_t>& shared_of(const bia::Scheme& s, std::vector<int> Q) {
  const int ci = s.coalition_index(Q);
  REQUIRE(ci >= 0);
  return s.shared_vector(ci);
}

}  // namespace

TEST_CASE("binomial values and bounds") {
  CHECK(bia::binomial(0, 0) == 1);
  CHECK(bia::binomial(5, 2) == 10);
  CHECK(bia::binomial(4, 2) == 6);
  CHECK(bia::binomial(11, 3) == 165);
  CHECK(bia::binomial(5, 6) == 0);
  CHECK(bia::binomial(63, 31) == bia::binomial(63, 32));
  CHECK(bia::binomial(64, 32) == 1832624140942590534LL);
  CHECK_THROWS_AS((void)bia::binomial(70, 35), std::overflow_error);

  // The wide version carries what int64 cannot.
  const bia::int128 wide = bia::binomial_wide(70, 35);
  CHECK(wide == bia::binomial_wide(69, 34) + bia::binomial_wide(69, 35));
  CHECK(wide == 2 * bia::binomial_wide(69, 34));
  CHECK(bia::binomial_wide(64, 32) == bia::int128(1832624140942590534LL));
}

TEST_CASE("subset enumeration is lexicographic") {
  const auto subsets = bia::subsets_lex(5, 2);
  REQUIRE(subsets.size() == 10);
  CHECK(subsets.front() == std::vector<int>{1, 2});
  CHECK(subsets[1] == std::vector<int>{1, 3});
  CHECK(subsets.back() == std::vector<int>{4, 5});
  for (std::size_t i = 1; i < subsets.size(); ++i) CHECK(subsets[i - 1] < subsets[i]);

  CHECK(bia::subsets_lex(4, 0) == std::vector<std::vector<int>>{{}});
  CHECK(bia::subsets_lex(3, 3).size() == 1);
  CHECK(bia::subset_contains({2, 4}, 4));
  CHECK_FALSE(bia::subset_contains({2, 4}, 3));
}

TEST_CASE("rational arithmetic is exact and reduced") {
  const bia::Rational a(4, 14);
  CHECK(a.num() == 2);
  CHECK(a.den() == 7);
  CHECK(a.str() == "2/7");
  CHECK((a * bia::Rational(5)).str() == "10/7");
  CHECK(bia::Rational(1, 2) + bia::Rational(1, 3) == bia::Rational(5, 6));
  CHECK(bia::Rational(-4, -6) == bia::Rational(2, 3));
  CHECK(bia::Rational(1, -2) < bia::Rational(0));
  CHECK(bia::Rational(10, 7) > bia::Rational(6, 5));
  CHECK_THROWS_AS(bia::Rational(1, 0), std::domain_error);

  // from_wide reduces before narrowing.
  const bia::int128 big = bia::int128(1) << 80;
  CHECK(bia::Rational::from_wide(big, big * 3) == bia::Rational(1, 3));
}

TEST_CASE("field rank backend") {
  using namespace bia::fp61;
  CHECK(mul(kP - 1, kP - 1) == 1);  // (-1)^2
  CHECK(mul(inv(12345), 12345) == 1);
  CHECK(add(kP - 1, 1) == 0);

  Mat m(3, 3);
  for (int i = 0; i < 3; ++i) m.at(i, i) = 7;
  CHECK(m.rank_destructive() == 3);

  // Rank 2: third column equals the sum of the first two.
  std::vector<std::vector<std::uint64_t>> cols = {
      {1, 0, 5}, {0, 1, 3}, {1, 1, 8}};
  CHECK(rank_of_columns(cols) == 2);
  CHECK(rank_of_columns({}) == 0);
}

TEST_CASE("channel assignments are deterministic and nonzero") {
  const auto a = bia::make_generic_channel(4, 3, 99);
  const auto b = bia::make_generic_channel(4, 3, 99);
  const auto c = bia::make_generic_channel(4, 3, 100);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  for (auto v : a.values) {
    CHECK(v != 0);
    CHECK(v < bia::fp61::kP);
  }
  CHECK(bia::derive_seed(1, 0) != bia::derive_seed(1, 1));
  CHECK(bia::derive_seed(1, 0) != bia::derive_seed(2, 0));
}

TEST_CASE("sum DoF formula and optimal r") {
  CHECK(bia::sum_dof_formula(5, 2) == bia::Rational(10, 7));
  CHECK(bia::sum_dof_formula(3, 2) == bia::Rational(6, 5));
  CHECK(bia::sum_dof_formula(1, 1) == bia::Rational(1));
  CHECK(bia::sum_dof_formula(2, 1) == bia::Rational(1));
  CHECK(bia::sum_dof_formula(42, 6) == bia::Rational(7, 2));

  CHECK(bia::optimal_r(1) == 1);
  CHECK(bia::optimal_r(2) == 1);
  CHECK(bia::optimal_r(3) == 2);
  CHECK(bia::optimal_r(5) == 2);
  CHECK(bia::optimal_r(6) == 2);
  CHECK(bia::optimal_r(7) == 3);
  CHECK(bia::optimal_r(42) == 6);
  CHECK(bia::optimal_r(10000) == 100);

  for (int K : {1, 2, 3, 5, 7, 12, 13, 42, 100, 757}) CHECK(bia::verify_r_optimality(K));
}

TEST_CASE("DoF curve properties") {
  // Unimodal in r for fixed K: nondecreasing up to r*, nonincreasing after.
  for (int K = 1; K <= 200; ++K) {
    const int rs = bia::optimal_r(K);
    for (int r = 2; r <= K; ++r) {
      const bia::Rational prev = bia::sum_dof_formula(K, r - 1);
      const bia::Rational cur = bia::sum_dof_formula(K, r);
      if (r <= rs)
        CHECK(cur >= prev);
      else
        CHECK(cur <= prev);
    }
  }

  const auto rows = bia::outer_bound_curve(2, 50);
  REQUIRE(rows.size() == 49);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(bia::Rational(rows[i].dof_num, rows[i].dof_den) >=
          bia::Rational(rows[i - 1].dof_num, rows[i - 1].dof_den));
  }
  for (const auto& row : rows) {
    CHECK(bia::Rational(row.dof_num, row.dof_den) >= bia::Rational(1));
    if (row.K >= 3) CHECK(bia::Rational(row.dof_num, row.dof_den) >= bia::Rational(6, 5));
  }

  CHECK(bia::asymptotic_gap(100) > bia::asymptotic_gap(1000));
  CHECK(bia::asymptotic_gap(1000) > bia::asymptotic_gap(10000));
  CHECK(bia::asymptotic_gap(10000) < 0.01);

  std::ostringstream os;
  bia::write_bounds_csv(os, rows, "meta");
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "# meta");
  std::getline(is, line);
  CHECK(line == "K,r_star,dof_num,dof_den,dof_decimal,sqrtK_over_2");
  int data_lines = 0;
  while (std::getline(is, line)) ++data_lines;
  CHECK(data_lines == 49);
}

TEST_CASE("block length") {
  CHECK(bia::block_length(5, 2) == 14);
  CHECK(bia::block_length(4, 2) == 9);
  CHECK(bia::block_length(3, 2) == 5);
  CHECK(bia::block_length(7, 3) == 65);
  CHECK(bia::block_length(1, 1) == 1);
  CHECK_THROWS_AS((void)bia::block_length(3, 4), std::invalid_argument);
}

TEST_CASE("five-user construction matches the golden matrices") {
  const bia::Scheme s = bia::build_scheme(5, 2, false);
  CHECK(s.n == 14);
  CHECK(s.b == 9);
  CHECK(s.modes == 2);
  CHECK(s.S == s.F);  // single repeated block, no higher modes

  CHECK(column_string(s.F, 1) == "01111000011111");
  CHECK(column_string(s.F, 2) == "10111011100011");
  CHECK(column_string(s.F, 3) == "11011101101100");
  CHECK(column_string(s.F, 4) == "11101110110101");
  CHECK(column_string(s.F, 5) == "11110111011010");

  CHECK(vector_string(shared_of(s, {1, 2})) == "11000100000000");
  CHECK(vector_string(shared_of(s, {1, 3})) == "10100010000000");
  CHECK(vector_string(shared_of(s, {1, 4})) == "10010001000000");
  CHECK(vector_string(shared_of(s, {1, 5})) == "10001000100000");
  CHECK(vector_string(shared_of(s, {2, 3})) == "01100000010000");
  CHECK(vector_string(shared_of(s, {2, 4})) == "01010000001000");
  CHECK(vector_string(shared_of(s, {2, 5})) == "01001000000100");
  CHECK(vector_string(shared_of(s, {3, 4})) == "00110000000010");
  CHECK(vector_string(shared_of(s, {3, 5})) == "00101000000001");
  // The lexicographically last pair is the one whose B row fell to the
  // truncation; its vector lives in the repeated block only.
  CHECK(vector_string(shared_of(s, {4, 5})) == "00011000000000");

  // Owner copies are bit-identical.
  for (std::size_t ci = 0; ci < s.coalitions.size(); ++ci) {
    const auto& Q = s.coalitions[ci];
    const auto& v = s.shared_vector(static_cast<int>(ci));
    for (int p : Q) {
      const auto& ps = s.precoders[static_cast<std::size_t>(p - 1)];
      for (std::size_t j = 0; j < ps.labels.size(); ++j) {
        if (ps.labels[j] == Q) CHECK(ps.vectors[j] == v);
      }
    }
  }

  CHECK(bia::per_user_dof(s) == bia::Rational(2, 7));
  CHECK(bia::scheme_sum_dof(s) == bia::Rational(10, 7));
}

TEST_CASE("padded four-user construction matches the golden example") {
  const bia::Scheme s = bia::build_scheme(4, 3, true);
  CHECK(s.n == 12);
  CHECK(s.b == 4);
  CHECK(s.modes == 3);

  CHECK(column_string(s.F, 1) == "011101111000");
  CHECK(column_string(s.F, 2) == "101110110100");
  CHECK(column_string(s.F, 3) == "110111010010");
  CHECK(column_string(s.F, 4) == "111011100001");

  const auto col = [&s](int k) {
    std::vector<int> out;
    for (const auto& row : s.S) out.push_back(row[static_cast<std::size_t>(k - 1)]);
    return out;
  };
  CHECK(col(1) == std::vector<int>{0, 1, 1, 1, 2, 1, 1, 1, 1, 0, 0, 0});
  CHECK(col(2) == std::vector<int>{1, 0, 1, 1, 1, 2, 1, 1, 0, 1, 0, 0});
  CHECK(col(3) == std::vector<int>{1, 1, 0, 1, 1, 1, 2, 1, 0, 0, 1, 0});
  CHECK(col(4) == std::vector<int>{1, 1, 1, 0, 1, 1, 1, 2, 0, 0, 0, 1});

  CHECK(bia::scheme_sum_dof(s) == bia::Rational(1));
}

TEST_CASE("degenerate and small constructions") {
  const bia::Scheme k1 = bia::build_scheme(1, 1, false);
  CHECK(k1.n == 1);
  CHECK(k1.precoders[0].vectors.size() == 1);
  CHECK(k1.precoders[0].vectors[0] == std::vector<std::uint8_t>{1});  // empty product

  const bia::Scheme k2 = bia::build_scheme(2, 1, false);
  CHECK(k2.n == 2);
  CHECK(k2.modes == 2);
  CHECK(k2.F == bia::BinaryMatrix{{0, 1}, {1, 0}});
  CHECK(k2.S == k2.F);
  CHECK(vector_string(shared_of(k2, {1})) == "10");
  CHECK(vector_string(shared_of(k2, {2})) == "01");

  // r = 1 emits exactly the weight-(K-1) rows.
  const bia::Scheme r1 = bia::build_scheme(4, 1, false);
  CHECK(r1.n == 4);
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      CHECK(static_cast<int>(r1.F[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) ==
            (i == k ? 0 : 1));
    }
  }
}

TEST_CASE("infeasible parameter pairs are rejected, padding lifts them") {
  CHECK_THROWS_AS((void)bia::build_scheme(4, 3, false), bia::SchemeError);
  CHECK_THROWS_AS((void)bia::build_scheme(3, 3, false), bia::SchemeError);
  CHECK_THROWS_AS((void)bia::build_scheme(2, 2, false), bia::SchemeError);
  CHECK_THROWS_AS((void)bia::build_scheme(5, 4, false), bia::SchemeError);
  CHECK_THROWS_AS((void)bia::build_scheme(0, 1, false), std::invalid_argument);
  CHECK_THROWS_AS((void)bia::build_scheme(3, 4, false), std::invalid_argument);

  for (auto [K, r] : {std::pair{4, 3}, {3, 3}, {2, 2}, {5, 4}}) {
    const bia::Scheme s = bia::build_scheme(K, r, true);
    CHECK(s.n == (r - 1) * K + bia::binomial(K, K - r));
  }
}

TEST_CASE("B rows cycle when the formula length exceeds the subset count") {
  // K=7, r=3: 51 B rows over 35 coalitions, so the list wraps.
  const bia::Scheme s = bia::build_scheme(7, 3, false);
  CHECK(s.n == 65);
  CHECK(s.b == 51);
  const int base = (s.r - 1) * s.K;
  for (int i = 35; i < s.b; ++i) {
    CHECK(s.F[static_cast<std::size_t>(base + i)] ==
          s.F[static_cast<std::size_t>(base + i - 35)]);
  }
  // First B row is the complement of the first coalition {1,2,3}.
  CHECK(s.F[static_cast<std::size_t>(base)] ==
        std::vector<std::uint8_t>{0, 0, 0, 1, 1, 1, 1});
}

TEST_CASE("construction is deterministic") {
  const bia::Scheme a = bia::build_scheme(6, 2, false);
  const bia::Scheme b = bia::build_scheme(6, 2, false);
  CHECK(a.F == b.F);
  CHECK(a.S == b.S);
  for (int p = 0; p < 6; ++p) CHECK(a.precoders[p].vectors == b.precoders[p].vectors);
}

TEST_CASE("scheme JSON round-trips bit-exactly") {
  const bia::Scheme s = bia::build_scheme(5, 2, false);
  const bia::Json j = bia::scheme_to_json(s, 271828);
  std::uint64_t seed = 0;
  const bia::Scheme back = bia::scheme_from_json(j, &seed);
  CHECK(seed == 271828);
  CHECK(back.K == s.K);
  CHECK(back.r == s.r);
  CHECK(back.n == s.n);
  CHECK(back.modes == s.modes);
  CHECK(back.padded == s.padded);
  CHECK(back.F == s.F);
  CHECK(back.S == s.S);
  for (int p = 0; p < 5; ++p) {
    CHECK(back.precoders[p].labels == s.precoders[p].labels);
    CHECK(back.precoders[p].vectors == s.precoders[p].vectors);
  }
  CHECK(bia::scheme_to_json(back, 271828).dump(2) == j.dump(2));

  const bia::Scheme padded = bia::build_scheme(4, 3, true);
  const bia::Json jp = bia::scheme_to_json(padded, 0);
  CHECK(bia::scheme_to_json(bia::scheme_from_json(jp), 0).dump(2) == jp.dump(2));
}

TEST_CASE("malformed scheme documents are refused") {
  CHECK_THROWS_AS((void)bia::scheme_from_json(bia::Json::array()), bia::SchemeFileError);
  bia::Json j = bia::scheme_to_json(bia::build_scheme(2, 1, false), 0);
  j.erase("F");
  CHECK_THROWS_AS((void)bia::scheme_from_json(j), bia::SchemeFileError);
  bia::Json j2 = bia::scheme_to_json(bia::build_scheme(2, 1, false), 0);
  j2["params"]["r"] = 0;
  CHECK_THROWS_AS((void)bia::scheme_from_json(j2), bia::SchemeFileError);
  CHECK_THROWS_AS((void)bia::load_scheme("/nonexistent/path.json"), bia::SchemeFileError);
}
