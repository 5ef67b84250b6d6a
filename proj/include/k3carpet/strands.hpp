#pragma once

// Constant strands of a Schreyer resolution, their decomposition by fine
// degree, and strand homology over Q and F_p.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "k3carpet/budget.hpp"
#include "k3carpet/errors.hpp"
#include "k3carpet/linalg.hpp"
#include "k3carpet/schreyer.hpp"

namespace k3 {

/// Scalar parts of the differentials between generators of internal degree k.
/// Position i holds the degree-k generators of F_i; maps[i] is D_i: i -> i-1.
struct StrandComplex {
  int degree = 0;
  std::vector<std::vector<std::uint32_t>> generators;  ///< indices into F_i
  std::vector<std::vector<Multidegree>> multidegrees;  ///< parallel to generators
  std::vector<SparseIntMatrix> maps;                   ///< maps[0] is the zero map F_0 -> 0

  int top() const { return static_cast<int>(generators.size()) - 1; }
  std::size_t rank(int i) const {
    return i < 0 || i > top() ? 0 : generators[static_cast<std::size_t>(i)].size();
  }
  /// D_i, or an empty matrix of the right shape outside the stored range.
  SparseIntMatrix map(int i) const {
    if (i >= 1 && i <= top()) return maps[static_cast<std::size_t>(i)];
    return SparseIntMatrix(rank(i - 1), rank(i));
  }
  /// Positions i with beta_{i,k} > 0.
  std::vector<int> support() const {
    std::vector<int> out;
    for (int i = 0; i <= top(); ++i)
      if (rank(i) > 0) out.push_back(i);
    return out;
  }
};

inline StrandComplex constant_strand(const FreeResolution& F, int k) {
  StrandComplex S;
  S.degree = k;
  const int len = F.length();
  S.generators.resize(static_cast<std::size_t>(len + 1));
  S.multidegrees.resize(static_cast<std::size_t>(len + 1));
  std::vector<std::vector<std::int64_t>> local(static_cast<std::size_t>(len + 1));
  for (int i = 0; i <= len; ++i) {
    const auto& gens = F.level(i).generators;
    auto& loc = local[static_cast<std::size_t>(i)];
    loc.assign(gens.size(), -1);
    for (std::size_t g = 0; g < gens.size(); ++g)
      if (static_cast<int>(gens[g].degree) == k) {
        loc[g] = static_cast<std::int64_t>(S.generators[static_cast<std::size_t>(i)].size());
        S.generators[static_cast<std::size_t>(i)].push_back(static_cast<std::uint32_t>(g));
        S.multidegrees[static_cast<std::size_t>(i)].push_back(gens[g].multidegree);
      }
  }
  S.maps.resize(static_cast<std::size_t>(len + 1));
  S.maps[0] = SparseIntMatrix(0, S.rank(0));
  for (int i = 1; i <= len; ++i) {
    std::vector<MatrixEntry> entries;
    const auto& cols = S.generators[static_cast<std::size_t>(i)];
    const auto& row_local = local[static_cast<std::size_t>(i - 1)];
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (const auto& t : F.level(i).columns[cols[c]]) {
        if (!t.mono.is_one()) continue;
        // A constant entry links generators of equal degree by homogeneity.
        if (row_local[t.row] < 0) throw InvariantViolation("constant entry between different internal degrees");
        entries.push_back(MatrixEntry{static_cast<std::size_t>(row_local[t.row]), c, t.coef});
      }
    S.maps[static_cast<std::size_t>(i)] = SparseIntMatrix(S.rank(i - 1), S.rank(i), std::move(entries));
  }
  return S;
}

/// Internal degrees that occur in F.
inline std::vector<int> internal_degrees(const FreeResolution& F) {
  std::vector<int> out;
  for (int i = 0; i <= F.length(); ++i)
    for (const auto& g : F.level(i).generators) out.push_back(static_cast<int>(g.degree));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Restriction of a strand to the generators of one fine degree.
struct StrandBlock {
  Multidegree multidegree;
  std::vector<std::vector<std::size_t>> indices;  ///< per position, local strand indices
  std::vector<SparseIntMatrix> maps;              ///< maps[i] : position i -> i-1

  std::size_t rank(int i) const {
    return i < 0 || i >= static_cast<int>(indices.size()) ? 0 : indices[static_cast<std::size_t>(i)].size();
  }
  SparseIntMatrix map(int i) const {
    if (i >= 1 && i < static_cast<int>(maps.size())) return maps[static_cast<std::size_t>(i)];
    return SparseIntMatrix(rank(i - 1), rank(i));
  }
};

struct BlockDecomposition {
  std::map<Multidegree, StrandBlock> blocks;
};

/// Partition by exact fine degree; throws if an entry links two blocks.
inline BlockDecomposition block_decompose(const StrandComplex& S) {
  const int top = S.top();
  if (static_cast<int>(S.multidegrees.size()) != top + 1) throw PreconditionError("strand lacks multidegree data");
  BlockDecomposition out;
  // position within its block, per strand position
  std::vector<std::vector<std::size_t>> slot(static_cast<std::size_t>(top + 1));
  for (int i = 0; i <= top; ++i) {
    const auto& mds = S.multidegrees[static_cast<std::size_t>(i)];
    if (mds.size() != S.rank(i)) throw PreconditionError("strand lacks multidegree data");
    slot[static_cast<std::size_t>(i)].resize(mds.size());
    for (std::size_t g = 0; g < mds.size(); ++g) {
      auto& blk = out.blocks[mds[g]];
      blk.multidegree = mds[g];
      blk.indices.resize(static_cast<std::size_t>(top + 1));
      auto& idx = blk.indices[static_cast<std::size_t>(i)];
      slot[static_cast<std::size_t>(i)][g] = idx.size();
      idx.push_back(g);
    }
  }
  std::map<Multidegree, std::vector<std::vector<MatrixEntry>>> pending;
  for (int i = 1; i <= top; ++i) {
    const auto& row_md = S.multidegrees[static_cast<std::size_t>(i - 1)];
    const auto& col_md = S.multidegrees[static_cast<std::size_t>(i)];
    for (const auto& e : S.maps[static_cast<std::size_t>(i)].entries()) {
      if (row_md[e.row] != col_md[e.col]) throw InvariantViolation("strand entry crosses fine-degree blocks");
      auto& lists = pending[col_md[e.col]];
      lists.resize(static_cast<std::size_t>(top + 1));
      lists[static_cast<std::size_t>(i)].push_back(MatrixEntry{slot[static_cast<std::size_t>(i - 1)][e.row],
                                                               slot[static_cast<std::size_t>(i)][e.col], e.value});
    }
  }
  for (auto& [md, blk] : out.blocks) {
    blk.maps.resize(static_cast<std::size_t>(top + 1));
    auto it = pending.find(md);
    for (int i = 1; i <= top; ++i) {
      std::vector<MatrixEntry> entries;
      if (it != pending.end()) entries = std::move(it->second[static_cast<std::size_t>(i)]);
      blk.maps[static_cast<std::size_t>(i)] = SparseIntMatrix(blk.rank(i - 1), blk.rank(i), std::move(entries));
    }
    blk.maps[0] = SparseIntMatrix(0, blk.rank(0));
  }
  return out;
}

namespace detail {

inline void check_characteristic(std::uint64_t characteristic) {
  if (characteristic != 0 && !is_prime(characteristic))
    throw ParameterError("characteristic must be 0 or a prime, got " + std::to_string(characteristic));
}

}  // namespace detail

/// dim H_i of one block over Q or F_p.
inline std::size_t block_homology_dim(const StrandBlock& B, int i, std::uint64_t characteristic) {
  detail::check_characteristic(characteristic);
  const std::size_t beta = B.rank(i);
  if (beta == 0) return 0;
  const std::size_t r_out = rank_over(B.map(i), characteristic);
  const std::size_t r_in = rank_over(B.map(i + 1), characteristic);
  return beta - r_out - r_in;
}

/// dim H_i(S (x) field) = beta - rank D_i - rank D_{i+1}, summed over blocks.
inline std::size_t strand_homology_dim(const StrandComplex& S, int i, std::uint64_t characteristic) {
  detail::check_characteristic(characteristic);
  if (S.rank(i) == 0) return 0;
  std::size_t total = 0;
  for (const auto& [md, blk] : block_decompose(S).blocks) total += block_homology_dim(blk, i, characteristic);
  return total;
}

/// Homology of the unsplit strand; reference for the block computation.
inline std::size_t strand_homology_dim_unblocked(const StrandComplex& S, int i, std::uint64_t characteristic) {
  detail::check_characteristic(characteristic);
  const std::size_t beta = S.rank(i);
  if (beta == 0) return 0;
  return beta - rank_over(S.map(i), characteristic) - rank_over(S.map(i + 1), characteristic);
}

/// Homology dimensions of all strands over several fields at once; each
/// block map is ranked once per field.
inline std::map<std::uint64_t, BettiTable> minimal_betti_tables(const FreeResolution& F,
                                                                const std::vector<std::uint64_t>& characteristics,
                                                                const Budget& budget = Budget::unlimited()) {
  for (auto c : characteristics) detail::check_characteristic(c);
  std::map<std::uint64_t, BettiTable> out;
  for (auto c : characteristics) out[c];
  for (int k : internal_degrees(F)) {
    budget.check("strand homology");
    const StrandComplex S = constant_strand(F, k);
    const auto blocks = block_decompose(S);
    for (const auto& [md, blk] : blocks.blocks) {
      budget.check("strand homology");
      const int top = static_cast<int>(blk.indices.size()) - 1;
      for (auto c : characteristics) {
        std::vector<std::size_t> ranks(static_cast<std::size_t>(top + 2), 0);
        for (int i = 1; i <= top; ++i) {
          const auto& m = blk.maps[static_cast<std::size_t>(i)];
          ranks[static_cast<std::size_t>(i)] = m.is_zero() ? 0 : rank_over(m, c);
        }
        for (int i = 0; i <= top; ++i) {
          const std::size_t beta = blk.rank(i);
          if (beta == 0) continue;
          const std::size_t used = ranks[static_cast<std::size_t>(i)] + ranks[static_cast<std::size_t>(i + 1)];
          if (used > beta) throw InvariantViolation("strand maps do not compose to zero");
          if (used < beta) out[c].add(i, k, beta - used);
        }
      }
    }
  }
  return out;
}

inline BettiTable minimal_betti_table(const FreeResolution& F, std::uint64_t characteristic,
                                      const Budget& budget = Budget::unlimited()) {
  return minimal_betti_tables(F, {characteristic}, budget).at(characteristic);
}

inline BettiTable minimal_betti_table(const CarpetParams& params, std::uint64_t characteristic,
                                      const Budget& budget = Budget::unlimited()) {
  detail::check_characteristic(characteristic);
  return minimal_betti_table(schreyer_resolve(carpet_generators(params), budget), characteristic, budget);
}

}  // namespace k3
