#include <gtest/gtest.h>

#include <random>

#include "k3carpet/linalg.hpp"
#include "oracles.hpp"

using namespace k3;

namespace {

DenseIntMatrix to_library(const oracle::Dense& m) { return m; }

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

TEST(Snf, Anchors) {
  const auto snf = smith_normal_form(SparseIntMatrix::from_dense({{2, 0}, {0, 3}}));
  EXPECT_EQ(snf.invariant_factors, (std::vector<Integer>{1, 6}));
  EXPECT_EQ(snf.rank, 2u);
  const auto z = smith_normal_form(SparseIntMatrix::from_dense({{0, 0}, {0, 0}}));
  EXPECT_TRUE(z.invariant_factors.empty());
  EXPECT_EQ(z.rank, 0u);
  const auto d = smith_normal_form(SparseIntMatrix::from_dense({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}));
  EXPECT_EQ(d.invariant_factors, (std::vector<Integer>{2, 6, 12}));
}

TEST(Snf, ProductAndRankDeficiency) {
  const auto m = SparseIntMatrix::from_dense({{2, 0}, {0, 3}});
  EXPECT_EQ(invariant_factor_product(m).to_string(), "2*3");
  const auto deficient = SparseIntMatrix::from_dense({{1, 2}, {2, 4}});
  EXPECT_THROW(invariant_factor_product(deficient), RankDeficiencyError);
  EXPECT_EQ(nonzero_invariant_factor_product(smith_normal_form(deficient)).to_string(), "1");
}

TEST(Snf, EmptyMatrices) {
  EXPECT_EQ(smith_normal_form(SparseIntMatrix(0, 0)).rank, 0u);
  EXPECT_EQ(smith_normal_form(SparseIntMatrix(3, 0)).rank, 0u);
  EXPECT_EQ(invariant_factor_product(SparseIntMatrix(4, 0)).to_string(), "1");
  EXPECT_EQ(rank_mod_p(SparseIntMatrix(0, 5), 7), 0u);
}

TEST(Snf, AgreesWithMinorGcdsOnRandomMatrices) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    const std::size_t r = dim(rng), c = dim(rng);
    const auto dense = oracle::random_matrix(rng, r, c, -6, 6, 0.6);
    const auto snf = smith_normal_form(SparseIntMatrix::from_dense(to_library(dense), c));
    const auto expect = oracle::invariant_factors_by_minors(dense);
    EXPECT_EQ(snf.invariant_factors, expect) << "trial " << trial;
    for (std::size_t k = 1; k < snf.invariant_factors.size(); ++k)
      EXPECT_EQ(snf.invariant_factors[k] % snf.invariant_factors[k - 1], 0);
  }
}

TEST(Snf, SquareDeterminantMatchesProduct) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const auto dense = oracle::random_matrix(rng, 5, 5, -9, 9, 0.8);
    const Integer det = oracle::cofactor_det(dense);
    const auto snf = smith_normal_form(SparseIntMatrix::from_dense(to_library(dense)));
    if (det == 0) {
      EXPECT_LT(snf.rank, 5u);
      continue;
    }
    Integer prod = 1;
    for (const auto& d : snf.invariant_factors) prod *= d;
    EXPECT_EQ(prod, det < 0 ? Integer(-det) : det);
    EXPECT_EQ(oracle::rational_det(dense), det);
  }
}

TEST(Rank, RationalAndModularAgreeWithOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 9);
    const std::size_t r = dim(rng), c = dim(rng);
    auto dense = oracle::random_matrix(rng, r, c, -3, 3, 0.5);
    // Make some rows dependent.
    if (r > 2) dense[r - 1] = dense[0];
    const auto m = SparseIntMatrix::from_dense(to_library(dense), c);
    std::vector<std::vector<oracle::Rat>> q(r, std::vector<oracle::Rat>(c));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) q[i][j] = oracle::Rat(dense[i][j]);
    const std::size_t rank = oracle::rational_rank(q);
    EXPECT_EQ(rank_rational(m), rank);
    EXPECT_EQ(rank_over(m, 0), rank);
    // Over F_p the rank drops exactly when p divides the last invariant factor chain.
    const auto inv = oracle::invariant_factors_by_minors(dense);
    for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
      std::size_t expect = 0;
      for (const auto& d : inv) expect += (d % p != 0);
      EXPECT_EQ(rank_mod_p(m, p), expect);
    }
  }
}

TEST(Rank, ModPRejectsLargeModulus) {
  EXPECT_THROW(rank_mod_p(SparseIntMatrix::from_dense({{1}}), (std::uint64_t{1} << 33) + 1), Error);
}

TEST(Factorize, SmallAndLarge) {
  EXPECT_EQ(factorize(Integer(720)).to_string(), "2^4*3^2*5");
  EXPECT_EQ(factorize(Integer(1)).to_string(), "1");
  EXPECT_THROW(factorize(Integer(0)), Error);
  const Integer big = Integer(1000003) * Integer(1000033);
  const auto f = factorize(big);
  EXPECT_FALSE(f.fully_factored());
  EXPECT_EQ(f.value(), big);
  Integer pow2 = 1;
  for (int k = 0; k < 266; ++k) pow2 *= 2;
  EXPECT_EQ(factorize(pow2 * 14348907).to_string(), "2^266*3^15");
}

TEST(SparseMatrix, Basics) {
  const DenseIntMatrix d{{1, 0, 2}, {0, 0, -3}};
  const auto m = SparseIntMatrix::from_dense(d);
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_EQ(m.nnz(), 3u);
  EXPECT_EQ(m.at(1, 2), -3);
  EXPECT_EQ(m.to_dense(), d);
  const auto sub = m.submatrix({1}, {0, 2});
  EXPECT_EQ(sub.to_dense(), (DenseIntMatrix{{0, -3}}));
  const auto t = SparseIntMatrix::from_dense({{1}, {1}, {1}});
  EXPECT_EQ((m * t).to_dense(), (DenseIntMatrix{{3}, {-3}}));
  EXPECT_EQ(m.submatrix(all_indices(2), all_indices(3)), m);
  EXPECT_THROW(SparseIntMatrix(1, 1, {MatrixEntry{2, 0, 1}}), Error);
}
