#include <gtest/gtest.h>

#include <random>

#include "k3carpet/io.hpp"
#include "oracles.hpp"

using namespace k3;

TEST(MatrixText, RoundTrip) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dense = oracle::random_matrix(rng, 1 + trial % 5, 1 + trial % 7, -1000, 1000, 0.4);
    const auto m = SparseIntMatrix::from_dense(dense, dense[0].size());
    EXPECT_EQ(matrix_from_text(matrix_to_text(m)), m);
  }
  const SparseIntMatrix empty(3, 0);
  EXPECT_EQ(matrix_from_text(matrix_to_text(empty)), empty);
}

TEST(MatrixText, Format) {
  const auto m = SparseIntMatrix::from_dense({{0, 5}, {-2, 0}});
  EXPECT_EQ(matrix_to_text(m), "2 2 2\n1 2 5\n2 1 -2\n");
  EXPECT_EQ(matrix_from_text("\n2 2 1\n\n2 2 123456789012345678901234567890\n").at(1, 1),
            Integer("123456789012345678901234567890"));
}

TEST(MatrixText, Rejects) {
  EXPECT_THROW(matrix_from_text(""), ParameterError);
  EXPECT_THROW(matrix_from_text("2 2"), ParameterError);
  EXPECT_THROW(matrix_from_text("2 2 1\n3 1 1\n"), ParameterError);
  EXPECT_THROW(matrix_from_text("2 2 1\n1 1 x\n"), ParameterError);
  EXPECT_THROW(matrix_from_text("2 2 2\n1 1 1\n"), ParameterError);
  EXPECT_THROW(matrix_from_text("2 2 1\n1 1 1\n1 2 1\n"), ParameterError);
}

TEST(BettiText, Layout) {
  BettiTable t;
  t.set(0, 0, 1);
  t.set(1, 2, 3);
  t.set(2, 4, 3);
  t.set(3, 6, 1);
  EXPECT_EQ(betti_to_text(t), "   0 1 2 3\n0: 1 . . .\n1: . 3 . .\n2: . . 3 .\n3: . . . 1\n");
}

TEST(BettiJson, RoundTrip) {
  BettiTable t;
  t.set(0, 0, 1);
  t.set(2, 3, 1155);
  const auto j = betti_to_json(t);
  EXPECT_EQ(betti_from_json(j), t);
  EXPECT_EQ(j["rows"][1][2], 1155);
  EXPECT_THROW(betti_from_json(Json::object()), ParameterError);
}

TEST(Json, BasisAndSnf) {
  const auto j = basis_to_json(carpet_generators({2, 2, 2, 1}));
  EXPECT_EQ(j["count"], 3);
  EXPECT_EQ(j["lead_terms"][1], "x2*y0");
  EXPECT_EQ(j["params"]["genus"], 5);
  const auto snf = smith_normal_form(SparseIntMatrix::from_dense({{2, 0}, {0, 6}}));
  const auto s = snf_to_json(snf);
  EXPECT_EQ(s["invariant_factors"][1], "6");
  EXPECT_EQ(s["product"]["text"], "2^2*3");
  EXPECT_EQ(snf_to_text(snf), "rank: 2\ninvariant_factors: 2 6\nproduct: 2^2*3\n");
}

TEST(Json, GreenReport) {
  const auto rep = green_report(CarpetParams{3, 3, 2, 1});
  const auto j = green_to_json(rep);
  EXPECT_EQ(j["det"]["prime_powers"]["2"], 4);
  EXPECT_EQ(j["exceptional_primes"][0], 2);
  EXPECT_EQ(j["matrix_shape"][0], 9);
  EXPECT_NE(green_to_text(rep).find("det: 2^4\n"), std::string::npos);
}
