#pragma once

// Green's conjecture decision for X_e(a,b): the map D_a of the constant
// strand of degree a+1, its invariant factors, and the exceptional primes.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3carpet/budget.hpp"
#include "k3carpet/carpet.hpp"
#include "k3carpet/linalg.hpp"
#include "k3carpet/schreyer.hpp"
#include "k3carpet/strands.hpp"

namespace k3 {

struct GreenReport {
  CarpetParams params;
  int strand_degree = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t rank_over_Q = 0;
  bool holds_over_Q = false;
  /// Product of the nonzero invariant factors of D_a; the determinant when
  /// D_a has full column rank.
  FactoredInteger det_product;
  std::vector<std::uint64_t> exceptional_primes;
  std::size_t block_count = 0;
  std::map<std::uint64_t, BettiTable> per_prime_tables;

  int genus() const { return params.genus(); }
  int clifford_index() const { return params.clifford_index(); }
};

struct GreenOptions {
  bool tables = false;  ///< minimal tables over Q and every exceptional prime
  Budget budget = Budget::unlimited();
  /// Primes checked to be non-exceptional when absent from the product.
  std::vector<std::uint64_t> control_primes = {7, 11, 13, 32003};
};

/// Green matrix D_a in degree a+1 of a resolution.
inline SparseIntMatrix green_matrix(const FreeResolution& F, int a) {
  return constant_strand(F, a + 1).map(a);
}

inline GreenReport green_report(const FreeResolution& F, const CarpetParams& params,
                                const GreenOptions& opts = GreenOptions{}) {
  params.validate();
  GreenReport rep;
  rep.params = params;
  rep.strand_degree = params.a + 1;
  const StrandComplex S = constant_strand(F, rep.strand_degree);
  const SparseIntMatrix D = S.map(params.a);
  rep.rows = D.rows();
  rep.cols = D.cols();
  const BlockDecomposition blocks = block_decompose(S);
  for (const auto& [md, blk] : blocks.blocks) {
    const SparseIntMatrix& B = blk.maps.size() > static_cast<std::size_t>(params.a)
                                   ? blk.maps[static_cast<std::size_t>(params.a)]
                                   : SparseIntMatrix();
    if (B.cols() == 0) continue;
    opts.budget.check("Smith normal form");
    ++rep.block_count;
    const SnfResult snf = smith_normal_form(B);
    rep.rank_over_Q += snf.rank;
    rep.det_product *= nonzero_invariant_factor_product(snf);
  }
  rep.holds_over_Q = rep.rank_over_Q == rep.cols;
  rep.exceptional_primes = rep.det_product.primes();
  if (!rep.det_product.fully_factored())
    throw InvariantViolation("determinant product has an unfactored cofactor " +
                             rep.det_product.unfactored_cofactor.str());

  // Both characterizations of exceptional primes must agree.
  for (auto p : rep.exceptional_primes)
    if (p < (std::uint64_t{1} << 32) && rank_mod_p(D, p) >= rep.rank_over_Q)
      throw InvariantViolation("prime " + std::to_string(p) + " divides the product but keeps the rank");
  for (auto p : opts.control_primes)
    if (!std::binary_search(rep.exceptional_primes.begin(), rep.exceptional_primes.end(), p) &&
        rank_mod_p(D, p) != rep.rank_over_Q)
      throw InvariantViolation("prime " + std::to_string(p) + " drops the rank but misses the product");

  if (opts.tables) {
    std::vector<std::uint64_t> chars{0};
    for (auto p : rep.exceptional_primes) chars.push_back(p);
    rep.per_prime_tables = minimal_betti_tables(F, chars, opts.budget);
  }
  return rep;
}

inline GreenReport green_report(const CarpetParams& params, const GreenOptions& opts = GreenOptions{}) {
  params.validate();
  const FreeResolution F = schreyer_resolve(carpet_generators(params), opts.budget);
  return green_report(F, params, opts);
}

/// Minimal Betti table over Q (p = 0) or F_p.
inline BettiTable char_p_betti(const CarpetParams& params, std::uint64_t p,
                               const Budget& budget = Budget::unlimited()) {
  return minimal_betti_table(params, p, budget);
}

struct ScanRow {
  CarpetParams params;
  bool holds_over_Q = false;
  FactoredInteger det_product;
  std::vector<std::uint64_t> exceptional_primes;
  /// Exceptional primes with p >= (g-1)/2, g = a+b+1.
  std::vector<std::uint64_t> flagged_primes;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  bool truncated = false;
};

/// Green reports over a grid; stops with a truncation marker when the budget
/// runs out. Nothing is asserted about the outcome.
inline ScanResult conjecture_scan(const std::vector<CarpetParams>& grid, const Budget& budget = Budget::unlimited()) {
  ScanResult out;
  GreenOptions opts;
  opts.budget = budget;
  for (const auto& params : grid) {
    try {
      budget.check("scan");
      const GreenReport rep = green_report(params, opts);
      ScanRow row{params, rep.holds_over_Q, rep.det_product, rep.exceptional_primes, {}};
      const std::uint64_t g = static_cast<std::uint64_t>(params.genus());
      for (auto p : rep.exceptional_primes)
        if (2 * p >= g - 1) row.flagged_primes.push_back(p);
      out.rows.push_back(std::move(row));
    } catch (const BudgetExceeded&) {
      out.truncated = true;
      break;
    }
  }
  return out;
}

/// a = b in [a_min, a_max] with a fixed e.
inline std::vector<CarpetParams> diagonal_grid(int a_min, int a_max, long e1 = 2, long e2 = 1) {
  std::vector<CarpetParams> grid;
  for (int a = a_min; a <= a_max; ++a) grid.push_back(CarpetParams{a, a, e1, e2});
  return grid;
}

}  // namespace k3
