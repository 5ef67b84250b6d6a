#pragma once

// Exact integer linear algebra: sparse integer matrices, Smith normal form,
// ranks over Q and F_p, and trial-division factorization of the results.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "k3carpet/errors.hpp"
#include "k3carpet/ring.hpp"

namespace k3 {

using DenseIntMatrix = std::vector<std::vector<Integer>>;

struct MatrixEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  Integer value;
};

/// Sparse integer matrix with entries kept sorted by (row, col).
class SparseIntMatrix {
 public:
  SparseIntMatrix() = default;
  SparseIntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  /// Builds from unordered triplets; duplicates are summed, zeros dropped.
  SparseIntMatrix(std::size_t rows, std::size_t cols, std::vector<MatrixEntry> entries)
      : rows_(rows), cols_(cols) {
    for (const auto& e : entries)
      if (e.row >= rows || e.col >= cols) throw ParameterError("matrix entry index out of range");
    std::sort(entries.begin(), entries.end(), [](const MatrixEntry& l, const MatrixEntry& r) {
      return std::tie(l.row, l.col) < std::tie(r.row, r.col);
    });
    for (auto& e : entries) {
      if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
        entries_.back().value += e.value;
      } else {
        entries_.push_back(std::move(e));
      }
    }
    std::erase_if(entries_, [](const MatrixEntry& e) { return e.value == 0; });
  }

  static SparseIntMatrix from_dense(const DenseIntMatrix& dense, std::size_t cols_if_empty = 0) {
    const std::size_t rows = dense.size();
    const std::size_t cols = rows ? dense.front().size() : cols_if_empty;
    std::vector<MatrixEntry> entries;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (dense[r][c] != 0) entries.push_back({r, c, dense[r][c]});
    return SparseIntMatrix(rows, cols, std::move(entries));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }
  const std::vector<MatrixEntry>& entries() const { return entries_; }

  Integer at(std::size_t r, std::size_t c) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(r, c),
                               [](const MatrixEntry& e, const std::pair<std::size_t, std::size_t>& k) {
                                 return std::tie(e.row, e.col) < std::tie(k.first, k.second);
                               });
    if (it != entries_.end() && it->row == r && it->col == c) return it->value;
    return 0;
  }

  DenseIntMatrix to_dense() const {
    DenseIntMatrix out(rows_, std::vector<Integer>(cols_));
    for (const auto& e : entries_) out[e.row][e.col] = e.value;
    return out;
  }

  /// Rows and columns picked (and reordered) by index lists.
  SparseIntMatrix submatrix(const std::vector<std::size_t>& row_idx, const std::vector<std::size_t>& col_idx) const {
    std::vector<std::ptrdiff_t> row_pos(rows_, -1), col_pos(cols_, -1);
    for (std::size_t k = 0; k < row_idx.size(); ++k) row_pos[row_idx[k]] = static_cast<std::ptrdiff_t>(k);
    for (std::size_t k = 0; k < col_idx.size(); ++k) col_pos[col_idx[k]] = static_cast<std::ptrdiff_t>(k);
    std::vector<MatrixEntry> sub;
    for (const auto& e : entries_) {
      if (row_pos[e.row] < 0 || col_pos[e.col] < 0) continue;
      sub.push_back({static_cast<std::size_t>(row_pos[e.row]), static_cast<std::size_t>(col_pos[e.col]), e.value});
    }
    return SparseIntMatrix(row_idx.size(), col_idx.size(), std::move(sub));
  }

  friend SparseIntMatrix operator*(const SparseIntMatrix& l, const SparseIntMatrix& r) {
    if (l.cols_ != r.rows_) throw DimensionError("matrix product shape mismatch");
    std::vector<std::vector<const MatrixEntry*>> by_row(r.rows_);
    for (const auto& e : r.entries_) by_row[e.row].push_back(&e);
    std::vector<MatrixEntry> out;
    for (const auto& e : l.entries_)
      for (const MatrixEntry* f : by_row[e.col]) out.push_back({e.row, f->col, e.value * f->value});
    return SparseIntMatrix(l.rows_, r.cols_, std::move(out));
  }

  friend bool operator==(const SparseIntMatrix& l, const SparseIntMatrix& r) {
    if (l.rows_ != r.rows_ || l.cols_ != r.cols_ || l.entries_.size() != r.entries_.size()) return false;
    for (std::size_t k = 0; k < l.entries_.size(); ++k) {
      const auto& a = l.entries_[k];
      const auto& b = r.entries_[k];
      if (a.row != b.row || a.col != b.col || a.value != b.value) return false;
    }
    return true;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<MatrixEntry> entries_;
};

/// Invariant factors d_1 | d_2 | ... | d_r (all positive).
struct SnfResult {
  std::vector<Integer> invariant_factors;
  std::size_t rank = 0;
};

/// Absolute value written as a product of prime powers times a cofactor that
/// trial division could not split (1 when fully factored).
struct FactoredInteger {
  std::map<std::uint64_t, unsigned> prime_powers;
  Integer unfactored_cofactor = 1;

  bool fully_factored() const { return unfactored_cofactor == 1; }

  Integer value() const {
    Integer v = unfactored_cofactor;
    for (const auto& [p, e] : prime_powers) v *= boost::multiprecision::pow(Integer(p), e);
    return v;
  }

  std::vector<std::uint64_t> primes() const {
    std::vector<std::uint64_t> out;
    for (const auto& [p, e] : prime_powers) out.push_back(p);
    return out;
  }

  FactoredInteger& operator*=(const FactoredInteger& o) {
    for (const auto& [p, e] : o.prime_powers) prime_powers[p] += e;
    unfactored_cofactor *= o.unfactored_cofactor;
    return *this;
  }

  /// `2^4*3^6`, or `1` for the empty product.
  std::string to_string() const {
    std::string out;
    for (const auto& [p, e] : prime_powers) {
      if (!out.empty()) out += '*';
      out += std::to_string(p);
      if (e != 1) out += '^' + std::to_string(e);
    }
    if (unfactored_cofactor != 1) {
      if (!out.empty()) out += '*';
      out += unfactored_cofactor.str();
    }
    return out.empty() ? "1" : out;
  }

  friend bool operator==(const FactoredInteger&, const FactoredInteger&) = default;
};

inline constexpr std::uint64_t kDefaultFactorBound = 1'000'000;

/// Trial division by every candidate up to `bound`.
inline FactoredInteger factorize(Integer n, std::uint64_t bound = kDefaultFactorBound) {
  if (n < 1) throw ParameterError("factorize needs n >= 1");
  FactoredInteger out;
  auto strip = [&](std::uint64_t d) {
    while (n % d == 0) {
      n /= d;
      ++out.prime_powers[d];
    }
  };
  strip(2);
  std::uint64_t d = 3;
  for (; d <= bound && n > 1 && Integer(d) * d <= n; d += 2) strip(d);
  if (n > 1) {
    if (Integer(d) * d > n) {
      // No factor below sqrt(n): n itself is prime.
      ++out.prime_powers[static_cast<std::uint64_t>(n)];
    } else {
      out.unfactored_cofactor = n;
    }
  }
  return out;
}

namespace detail {

inline Integer abs_value(const Integer& v) { return v < 0 ? Integer(-v) : v; }

/// Puts a list of nonzero diagonal entries into divisibility-chain form.
inline std::vector<Integer> normalize_diagonal(std::vector<Integer> diag) {
  for (auto& d : diag) d = abs_value(d);
  std::vector<Integer> units, rest;
  for (auto& d : diag) (d == 1 ? units : rest).push_back(std::move(d));
  for (std::size_t i = 0; i < rest.size(); ++i) {
    for (std::size_t j = i + 1; j < rest.size(); ++j) {
      if (rest[j] % rest[i] == 0) continue;
      Integer g = boost::multiprecision::gcd(rest[i], rest[j]);
      Integer l = rest[i] / g * rest[j];
      rest[i] = std::move(g);
      rest[j] = std::move(l);
    }
  }
  // The pass leaves rest[i] | rest[j] for i < j, with any new units first.
  std::vector<Integer> out = std::move(units);
  for (auto& d : rest) out.push_back(std::move(d));
  return out;
}

}  // namespace detail

/// Smith normal form by the smallest-pivot strategy: pick the nonzero entry
/// of least absolute value (lowest row, then column), clear its row and
/// column with division-with-remainder steps, repeat on the remainders.
inline SnfResult smith_normal_form(const SparseIntMatrix& m) {
  DenseIntMatrix a = m.to_dense();
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<Integer> diag;
  std::size_t t = 0;
  auto find_min = [&](std::size_t r0, std::size_t c0) -> std::optional<std::pair<std::size_t, std::size_t>> {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    Integer best_abs;
    for (std::size_t r = r0; r < rows; ++r)
      for (std::size_t c = c0; c < cols; ++c) {
        if (a[r][c] == 0) continue;
        Integer v = detail::abs_value(a[r][c]);
        if (!best || v < best_abs) {
          best = {r, c};
          best_abs = std::move(v);
          if (best_abs == 1) return best;
        }
      }
    return best;
  };
  while (t < rows && t < cols) {
    auto pivot = find_min(t, t);
    if (!pivot) break;
    while (true) {
      std::swap(a[t], a[pivot->first]);
      if (pivot->second != t)
        for (std::size_t r = 0; r < rows; ++r) std::swap(a[r][t], a[r][pivot->second]);
      const Integer p = a[t][t];
      bool clean = true;
      for (std::size_t r = t + 1; r < rows; ++r) {
        if (a[r][t] == 0) continue;
        const Integer q = a[r][t] / p;
        if (q != 0)
          for (std::size_t c = t; c < cols; ++c)
            if (a[t][c] != 0) a[r][c] -= q * a[t][c];
        if (a[r][t] != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < cols; ++c) {
        if (a[t][c] == 0) continue;
        const Integer q = a[t][c] / p;
        if (q != 0)
          for (std::size_t r = t; r < rows; ++r)
            if (a[r][t] != 0) a[r][c] -= q * a[r][t];
        if (a[t][c] != 0) clean = false;
      }
      if (clean) break;
      // Some remainder is smaller than the pivot: move it into place.
      std::optional<std::pair<std::size_t, std::size_t>> next;
      Integer next_abs;
      auto consider = [&](std::size_t r, std::size_t c) {
        if (a[r][c] == 0) return;
        Integer v = detail::abs_value(a[r][c]);
        if (!next || v < next_abs) {
          next = {r, c};
          next_abs = std::move(v);
        }
      };
      for (std::size_t r = t + 1; r < rows; ++r) consider(r, t);
      for (std::size_t c = t + 1; c < cols; ++c) consider(t, c);
      pivot = next;
    }
    diag.push_back(a[t][t]);
    ++t;
  }
  SnfResult out;
  out.invariant_factors = detail::normalize_diagonal(std::move(diag));
  out.rank = out.invariant_factors.size();
  return out;
}

/// Factored product of all nonzero invariant factors, with no rank check.
inline FactoredInteger nonzero_invariant_factor_product(const SnfResult& snf,
                                                        std::uint64_t bound = kDefaultFactorBound) {
  FactoredInteger out;
  for (const auto& d : snf.invariant_factors)
    if (d != 1) out *= factorize(d, bound);
  return out;
}

/// |product of invariant factors| for a map of full column rank over Q.
inline FactoredInteger invariant_factor_product(const SparseIntMatrix& m,
                                                std::uint64_t bound = kDefaultFactorBound) {
  const SnfResult snf = smith_normal_form(m);
  if (snf.rank < m.cols())
    throw RankDeficiencyError("matrix has rank " + std::to_string(snf.rank) + " < " + std::to_string(m.cols()) +
                              " columns over Q");
  return nonzero_invariant_factor_product(snf, bound);
}

/// Rank over F_p by fraction-free elimination (rows scaled by the pivot
/// instead of divided by it). Requires p < 2^32.
inline std::size_t rank_mod_p(const SparseIntMatrix& m, std::uint64_t p) {
  if (!is_prime(p)) throw ParameterError("rank_mod_p needs a prime, got " + std::to_string(p));
  if (p >= (std::uint64_t{1} << 32)) throw ParameterError("modulus must be below 2^32");
  const std::size_t rows = m.rows(), cols = m.cols();
  if (rows == 0 || cols == 0) return 0;
  std::vector<std::vector<std::uint64_t>> a(rows, std::vector<std::uint64_t>(cols, 0));
  for (const auto& e : m.entries()) a[e.row][e.col] = static_cast<std::uint64_t>(reduce_mod(e.value, p));
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[rank], a[piv]);
    const std::uint64_t pv = a[rank][c];
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const std::uint64_t f = a[r][c];
      if (f == 0) continue;
      auto& row = a[r];
      const auto& prow = a[rank];
      for (std::size_t k = c; k < cols; ++k) {
        // row <- pv*row - f*prow  (mod p)
        row[k] = (pv * row[k] % p + (p - f) * prow[k] % p) % p;
      }
    }
    ++rank;
  }
  return rank;
}

/// Rank over Q by Bareiss fraction-free elimination.
inline std::size_t rank_rational(DenseIntMatrix a) {
  const std::size_t rows = a.size();
  if (rows == 0) return 0;
  const std::size_t cols = a.front().size();
  std::size_t rank = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[rank], a[piv]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t k = c + 1; k < cols; ++k)
        a[r][k] = (a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) / prev;
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

inline std::size_t rank_rational(const SparseIntMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return rank_rational(m.to_dense());
}

/// Rank over Q (characteristic 0) or over F_p.
inline std::size_t rank_over(const SparseIntMatrix& m, std::uint64_t characteristic) {
  return characteristic == 0 ? rank_rational(m) : rank_mod_p(m, characteristic);
}

}  // namespace k3
