#include <gtest/gtest.h>

#include "k3carpet/carpet.hpp"
#include "k3carpet/schreyer.hpp"
#include "k3carpet/strands.hpp"
#include "oracles.hpp"

using namespace k3;

namespace {

std::size_t total_nnz(const StrandComplex& S, int i) { return S.map(i).nnz(); }

}  // namespace

TEST(Strand, ShapesMatchBettiTable) {
  const auto F = schreyer_resolve(carpet_generators({4, 3, 2, 1}));
  const auto t = F.betti_table();
  for (int k : internal_degrees(F)) {
    const auto S = constant_strand(F, k);
    EXPECT_EQ(S.degree, k);
    for (int i = 0; i <= F.length(); ++i) {
      EXPECT_EQ(S.rank(i), t.at(i, k));
      if (i >= 1) {
        EXPECT_EQ(S.map(i).rows(), S.rank(i - 1));
        EXPECT_EQ(S.map(i).cols(), S.rank(i));
      }
    }
  }
}

TEST(Strand, ComposesToZero) {
  const auto F = schreyer_resolve(carpet_generators({4, 4, 2, 1}));
  for (int k : internal_degrees(F)) {
    const auto S = constant_strand(F, k);
    for (int i = 2; i <= S.top(); ++i) EXPECT_TRUE((S.map(i - 1) * S.map(i)).is_zero()) << k << ' ' << i;
  }
}

TEST(Strand, EntriesAreConstantTerms) {
  const auto F = schreyer_resolve(carpet_generators({3, 3, 2, 1}));
  const int k = 4;
  const auto S = constant_strand(F, k);
  for (int i = 1; i <= S.top(); ++i) {
    const auto D = S.map(i);
    for (const auto& e : D.entries()) {
      const auto row = S.generators[static_cast<std::size_t>(i - 1)][e.row];
      const auto col = S.generators[static_cast<std::size_t>(i)][e.col];
      const Polynomial p = F.entry(i, row, col);
      EXPECT_EQ(p.constant_coefficient(), e.value);
    }
  }
}

TEST(Strand, BlocksAreLossless) {
  for (auto [a, b] : std::vector<std::pair<int, int>>{{3, 3}, {4, 3}, {4, 4}}) {
    const auto F = schreyer_resolve(carpet_generators({a, b, 2, 1}));
    for (int k : internal_degrees(F)) {
      const auto S = constant_strand(F, k);
      const auto dec = block_decompose(S);
      for (int i = 0; i <= S.top(); ++i) {
        std::size_t gens = 0, nnz = 0;
        for (const auto& [md, blk] : dec.blocks) {
          gens += blk.rank(i);
          if (i >= 1) nnz += blk.map(i).nnz();
        }
        EXPECT_EQ(gens, S.rank(i));
        if (i >= 1) {
          EXPECT_EQ(nnz, total_nnz(S, i));
        }
      }
      for (std::uint64_t c : {0u, 2u, 3u})
        for (int i = 0; i <= S.top(); ++i)
          EXPECT_EQ(strand_homology_dim(S, i, c), strand_homology_dim_unblocked(S, i, c));
    }
  }
}

TEST(Strand, BlockRanksMatchOracle) {
  const auto F = schreyer_resolve(carpet_generators({3, 3, 2, 1}));
  for (int k : internal_degrees(F))
    for (const auto& [md, blk] : block_decompose(constant_strand(F, k)).blocks)
      for (int i = 1; i < static_cast<int>(blk.maps.size()); ++i) {
        const auto dense = blk.map(i).to_dense();
        std::vector<std::vector<oracle::Rat>> q;
        for (const auto& r : dense) {
          std::vector<oracle::Rat> row;
          for (const auto& v : r) row.emplace_back(v);
          q.push_back(std::move(row));
        }
        EXPECT_EQ(rank_over(blk.map(i), 0), oracle::rational_rank(q));
      }
}

TEST(MinimalTables, SmallestCarpetIsCompleteIntersection) {
  // Three quadrics in P^5: the Koszul complex.
  const auto t = minimal_betti_table(CarpetParams{2, 2, 2, 1}, 0);
  BettiTable koszul;
  koszul.set(0, 0, 1);
  koszul.set(1, 2, 3);
  koszul.set(2, 4, 3);
  koszul.set(3, 6, 1);
  EXPECT_EQ(t, koszul);
}

TEST(MinimalTables, GorensteinDuality) {
  for (auto [a, b] : std::vector<std::pair<int, int>>{{3, 2}, {3, 3}, {4, 3}})
    for (std::uint64_t c : {0u, 2u}) {
      const auto t = minimal_betti_table(CarpetParams{a, b, 2, 1}, c);
      const int n = a + b - 1;
      for (const auto& [k, v] : t.entries()) EXPECT_EQ(t.at(n - k.first, n + 3 - k.second), v) << a << b << c;
    }
}

TEST(MinimalTables, FourGonalFormula) {
  for (auto [a, b] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 3}})
    for (std::uint64_t c : {0u, 2u}) {
      const auto t = minimal_betti_table(CarpetParams{a, b, 0, 1}, c);
      for (int i = 1; i <= a + b - 2; ++i) EXPECT_EQ(t.at(i, i + 1), oracle::four_gonal_linear(a, b, i)) << a << b << i;
    }
}

TEST(MinimalTables, SeveralFieldsAtOnce) {
  const auto F = schreyer_resolve(carpet_generators({3, 3, 2, 1}));
  const auto many = minimal_betti_tables(F, {0, 2, 3});
  EXPECT_EQ(many.at(0), minimal_betti_table(F, 0));
  EXPECT_EQ(many.at(2), minimal_betti_table(F, 2));
  EXPECT_EQ(many.at(3), minimal_betti_table(F, 3));
  // X(3,3) fails Green's vanishing only in characteristic 2.
  EXPECT_EQ(many.at(0).at(3, 4), 0u);
  EXPECT_GT(many.at(2).at(3, 4), 0u);
  EXPECT_EQ(many.at(3).at(3, 4), 0u);
}

TEST(MinimalTables, CharacteristicValidated) {
  const auto F = schreyer_resolve(carpet_generators({2, 2, 2, 1}));
  EXPECT_THROW(minimal_betti_table(F, 4), ParameterError);
  EXPECT_THROW(strand_homology_dim(constant_strand(F, 2), 1, 9), ParameterError);
}
