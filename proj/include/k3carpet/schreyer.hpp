#pragma once

// Schreyer resolutions over Z of ideals given by a Groebner basis with
// lead coefficient +1. Generators carry their lead monomial and the product
// of their name, which fixes the induced module order: a term w*e_h sits at
// the monomial w*T(h), and equal monomials are broken by the larger index.

#include <algorithm>
#include <climits>
#include <cstdint>
#include <map>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "k3carpet/budget.hpp"
#include "k3carpet/carpet.hpp"
#include "k3carpet/errors.hpp"
#include "k3carpet/groebner.hpp"
#include "k3carpet/ring.hpp"

namespace k3 {

/// One basis element of a free module in the resolution.
struct ResolutionGenerator {
  std::uint32_t parent = 0;  ///< index in the previous level whose colon ideal produced it
  Monomial lead;             ///< lead monomial of its image
  Monomial total;            ///< product of the monomials of its name
  unsigned degree = 0;       ///< internal degree = deg total
  Multidegree multidegree;   ///< fine degree of total
};

/// Summand coef * mono * e_row of a differential column.
struct ResolutionTerm {
  Integer coef;
  Monomial mono;
  std::uint32_t row = 0;
};

struct ResolutionLevel {
  std::vector<ResolutionGenerator> generators;
  /// Image of each generator in the previous level, in descending module order.
  std::vector<std::vector<ResolutionTerm>> columns;
};

/// beta_{i,j}: homological index i, internal degree j.
class BettiTable {
 public:
  std::uint64_t at(int i, int j) const {
    auto it = entries_.find({i, j});
    return it == entries_.end() ? 0 : it->second;
  }
  void set(int i, int j, std::uint64_t v) {
    if (v == 0)
      entries_.erase({i, j});
    else
      entries_[{i, j}] = v;
  }
  void add(int i, int j, std::uint64_t v = 1) { set(i, j, at(i, j) + v); }

  const std::map<std::pair<int, int>, std::uint64_t>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  int max_index() const {
    int m = 0;
    for (const auto& [k, v] : entries_) m = std::max(m, k.first);
    return m;
  }
  /// Largest j - i with a nonzero entry.
  int max_row() const {
    int m = 0;
    for (const auto& [k, v] : entries_) m = std::max(m, k.second - k.first);
    return m;
  }
  /// Entries beta_{i,i+r} for i = 0..max_index().
  std::vector<std::uint64_t> row(int r) const {
    std::vector<std::uint64_t> out(static_cast<std::size_t>(max_index() + 1));
    for (int i = 0; i <= max_index(); ++i) out[static_cast<std::size_t>(i)] = at(i, i + r);
    return out;
  }
  std::uint64_t total(int i) const {
    std::uint64_t s = 0;
    for (const auto& [k, v] : entries_)
      if (k.first == i) s += v;
    return s;
  }

  friend bool operator==(const BettiTable&, const BettiTable&) = default;

 private:
  std::map<std::pair<int, int>, std::uint64_t> entries_;
};

class FreeResolution {
 public:
  FreeResolution() = default;
  FreeResolution(Ring ring, std::vector<ResolutionLevel> levels) : ring_(std::move(ring)), levels_(std::move(levels)) {
    while (levels_.size() > 1 && levels_.back().generators.empty()) levels_.pop_back();
  }

  const Ring& ring() const { return ring_; }
  /// Index of the last nonzero module.
  int length() const { return static_cast<int>(levels_.size()) - 1; }
  const ResolutionLevel& level(int i) const { return levels_.at(static_cast<std::size_t>(i)); }
  std::size_t rank(int i) const {
    return i < 0 || i > length() ? 0 : levels_[static_cast<std::size_t>(i)].generators.size();
  }

  /// Sequence of lead monomials from level 1 up to this generator.
  std::vector<Monomial> name(int i, std::size_t g) const {
    std::vector<Monomial> out;
    for (int l = i; l >= 1; --l) {
      const auto& gen = level(l).generators.at(g);
      out.push_back(gen.lead);
      g = gen.parent;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  BettiTable betti_table() const {
    BettiTable t;
    for (int i = 0; i <= length(); ++i)
      for (const auto& g : level(i).generators) t.add(i, static_cast<int>(g.degree));
    return t;
  }

  /// Entry (row, col) of d_i : F_i -> F_{i-1} as a polynomial.
  Polynomial entry(int i, std::size_t row, std::size_t col) const {
    std::vector<Term> terms;
    for (const auto& t : level(i).columns.at(col))
      if (t.row == row) terms.push_back(Term{t.mono, t.coef});
    return Polynomial::from_terms(ring_, std::move(terms));
  }

  /// Image of e_col under d_i as (row, polynomial) pairs sorted by row.
  std::vector<std::pair<std::size_t, Polynomial>> column(int i, std::size_t col) const {
    std::map<std::size_t, std::vector<Term>> by_row;
    for (const auto& t : level(i).columns.at(col)) by_row[t.row].push_back(Term{t.mono, t.coef});
    std::vector<std::pair<std::size_t, Polynomial>> out;
    for (auto& [r, terms] : by_row) out.emplace_back(r, Polynomial::from_terms(ring_, std::move(terms)));
    return out;
  }

  std::size_t term_count() const {
    std::size_t n = 0;
    for (const auto& l : levels_)
      for (const auto& c : l.columns) n += c.size();
    return n;
  }

 private:
  Ring ring_;
  std::vector<ResolutionLevel> levels_;
};

namespace detail {

/// int64 arithmetic that throws CoefficientOverflow instead of wrapping.
struct CheckedInt64 {
  using type = std::int64_t;
  static type add(type x, type y) {
    type r;
    if (__builtin_add_overflow(x, y, &r)) throw CoefficientOverflow();
    return r;
  }
  static type mul(type x, type y) {
    type r;
    if (__builtin_mul_overflow(x, y, &r)) throw CoefficientOverflow();
    return r;
  }
  static type neg(type x) {
    if (x == INT64_MIN) throw CoefficientOverflow();
    return -x;
  }
  static type from(const Integer& c) {
    if (c > INT64_MAX || c < INT64_MIN) throw CoefficientOverflow();
    return static_cast<type>(c);
  }
  static Integer to_integer(type x) { return Integer(x); }
  static bool is_zero(type x) { return x == 0; }
  static bool is_one(type x) { return x == 1; }
};

struct BigCoefficients {
  using type = Integer;
  static type add(const type& x, const type& y) { return x + y; }
  static type mul(const type& x, const type& y) { return x * y; }
  static type neg(const type& x) { return -x; }
  static type from(const Integer& c) { return c; }
  static Integer to_integer(const type& x) { return x; }
  static bool is_zero(const type& x) { return x == 0; }
  static bool is_one(const type& x) { return x == 1; }
};

template <class C>
struct EngineLevel {
  using Coef = typename C::type;
  std::vector<ResolutionGenerator> gens;
  std::vector<std::uint32_t> col_start{0};
  std::vector<Coef> coef;
  std::vector<Monomial> mono;   // multiplier w of the term w*e_row
  std::vector<Monomial> total;  // w * T(row)
  std::vector<std::uint32_t> row;
  /// Generators of the next level with parent k occupy [child_begin[k], child_end[k]).
  std::vector<std::uint32_t> child_begin, child_end;

  std::uint32_t column_size(std::size_t g) const { return col_start[g + 1] - col_start[g]; }
};

template <class C>
class SchreyerEngine {
 public:
  using Coef = typename C::type;

  SchreyerEngine(const Ring& ring, const Budget& budget) : ring_(ring), budget_(budget) {}

  std::vector<EngineLevel<C>> run(const GeneratorBasis& basis) {
    const std::size_t n = ring_.nvars();
    EngineLevel<C> zero;
    zero.gens.push_back(ResolutionGenerator{0, Monomial(n), Monomial(n), 0, Multidegree{}});
    zero.child_begin = {0};
    zero.child_end = {static_cast<std::uint32_t>(basis.size())};
    levels_.push_back(std::move(zero));

    EngineLevel<C> first;
    for (const auto& f : basis.generators()) {
      const Monomial& l = f.lead_monomial();
      first.gens.push_back(ResolutionGenerator{0, l, l, l.degree(), ring_.multidegree(l)});
      for (const auto& t : f.terms()) {
        first.coef.push_back(C::from(t.coef));
        first.mono.push_back(t.mono);
        first.total.push_back(t.mono);
        first.row.push_back(0);
      }
      first.col_start.push_back(static_cast<std::uint32_t>(first.coef.size()));
    }
    levels_.push_back(std::move(first));

    while (!levels_.back().gens.empty()) {
      budget_.check("resolution");
      next_level();
    }
    levels_.pop_back();
    return std::move(levels_);
  }

 private:
  struct Stream {
    Coef coef;
    Monomial w;
    std::uint32_t gen;
    std::uint32_t pos;
  };
  struct HeapItem {
    Monomial key;
    std::uint32_t row;
    std::uint32_t stream;
    bool operator<(const HeapItem& o) const {
      if (key != o.key) return key < o.key;
      return row < o.row;
    }
  };

  /// Produces level L+1 from the last level L.
  void next_level() {
    EngineLevel<C>& cur = levels_.back();
    const EngineLevel<C>& prev = levels_[levels_.size() - 2];
    const std::size_t count = cur.gens.size();
    EngineLevel<C> next;
    cur.child_begin.assign(count, 0);
    cur.child_end.assign(count, 0);
    for (std::size_t k = 0; k < count; ++k) {
      const ResolutionGenerator& g = cur.gens[k];
      std::vector<Monomial> quotients;
      for (std::uint32_t h = prev.child_begin[g.parent]; h < k; ++h)
        quotients.push_back(cur.gens[h].lead / gcd(cur.gens[h].lead, g.lead));
      std::vector<Monomial> colon = MonomialIdeal::minimalize(std::move(quotients));
      std::sort(colon.begin(), colon.end(), [](const Monomial& l, const Monomial& r) {
        if (l.degree() != r.degree()) return l.degree() < r.degree();
        return l > r;
      });
      cur.child_begin[k] = static_cast<std::uint32_t>(next.gens.size());
      for (const auto& m : colon) {
        const Monomial t = m * g.total;
        next.gens.push_back(ResolutionGenerator{static_cast<std::uint32_t>(k), m, t, t.degree(), ring_.multidegree(t)});
      }
      cur.child_end[k] = static_cast<std::uint32_t>(next.gens.size());
    }
    for (std::size_t k = 0; k < next.gens.size(); ++k) {
      if ((k & 255) == 0) budget_.check("resolution");
      reduce(next.gens[k], cur, prev, next);
    }
    levels_.push_back(std::move(next));
  }

  /// Computes d(e) for a new generator e with lead m*e_g by reducing m*d(e_g)
  /// to zero; the recorded quotients give the remaining terms of d(e).
  void reduce(const ResolutionGenerator& e, const EngineLevel<C>& cur, const EngineLevel<C>& prev,
              EngineLevel<C>& out) {
    const std::uint32_t g = e.parent;
    out.coef.push_back(C::from(Integer(1)));
    out.mono.push_back(e.lead);
    out.total.push_back(e.total);
    out.row.push_back(g);

    streams_.clear();
    heap_ = {};
    auto push = [&](std::uint32_t s) {
      const Stream& st = streams_[s];
      const std::uint32_t idx = cur.col_start[st.gen] + st.pos;
      heap_.push(HeapItem{st.w * cur.total[idx], cur.row[idx], s});
    };
    streams_.push_back(Stream{C::from(Integer(1)), e.lead, g, 0});
    push(0);
    bool first = true;
    while (!heap_.empty()) {
      const Monomial key = heap_.top().key;
      const std::uint32_t row = heap_.top().row;
      Coef sum = C::from(Integer(0));
      while (!heap_.empty() && heap_.top().row == row && heap_.top().key == key) {
        const std::uint32_t s = heap_.top().stream;
        heap_.pop();
        Stream& st = streams_[s];
        sum = C::add(sum, C::mul(st.coef, cur.coef[cur.col_start[st.gen] + st.pos]));
        if (++st.pos < cur.column_size(st.gen)) push(s);
      }
      if (C::is_zero(sum)) continue;
      std::uint32_t reducer = UINT32_MAX;
      for (std::uint32_t h = prev.child_begin[row]; h < prev.child_end[row]; ++h) {
        if (first && h == g) continue;
        if (cur.gens[h].total.divides(key)) {
          reducer = h;
          break;
        }
      }
      if (reducer == UINT32_MAX) throw InvariantViolation("syzygy reduction left a nonzero remainder");
      first = false;
      const Coef q = C::neg(sum);
      const Monomial w = key / cur.gens[reducer].total;
      out.coef.push_back(q);
      out.mono.push_back(w);
      out.total.push_back(key);
      out.row.push_back(reducer);
      if (cur.column_size(reducer) > 1) {
        streams_.push_back(Stream{q, w, reducer, 1});
        push(static_cast<std::uint32_t>(streams_.size() - 1));
      }
    }
    out.col_start.push_back(static_cast<std::uint32_t>(out.coef.size()));
  }

  Ring ring_;
  Budget budget_;
  std::vector<EngineLevel<C>> levels_;
  std::vector<Stream> streams_;
  std::priority_queue<HeapItem> heap_;
};

template <class C>
FreeResolution assemble(const Ring& ring, std::vector<EngineLevel<C>> raw) {
  std::vector<ResolutionLevel> levels;
  levels.reserve(raw.size());
  for (auto& lv : raw) {
    ResolutionLevel out;
    out.generators = std::move(lv.gens);
    if (lv.col_start.size() > 1) {
      out.columns.resize(out.generators.size());
      for (std::size_t g = 0; g < out.generators.size(); ++g) {
        auto& col = out.columns[g];
        col.reserve(lv.col_start[g + 1] - lv.col_start[g]);
        for (std::uint32_t k = lv.col_start[g]; k < lv.col_start[g + 1]; ++k)
          col.push_back(ResolutionTerm{C::to_integer(lv.coef[k]), lv.mono[k], lv.row[k]});
      }
    }
    levels.push_back(std::move(out));
  }
  return FreeResolution(ring, std::move(levels));
}

inline FreeResolution run_schreyer(const GeneratorBasis& basis, const Budget& budget) {
  const Ring& ring = basis.ring();
  if (ring.modulus != 0) throw DomainError("resolutions are computed over the integers");
  for (const auto& f : basis.generators())
    if (f.lead_coefficient() != 1) throw UnsupportedBasisError("lead coefficient must be +1: " + f.to_string());
  try {
    SchreyerEngine<CheckedInt64> engine(ring, budget);
    return assemble<CheckedInt64>(ring, engine.run(basis));
  } catch (const CoefficientOverflow&) {
    SchreyerEngine<BigCoefficients> engine(ring, budget);
    return assemble<BigCoefficients>(ring, engine.run(basis));
  }
}

}  // namespace detail

/// Schreyer resolution of P/I for a Groebner basis sorted by degree, then by
/// descending lead term. The basis is certified first unless told otherwise.
inline FreeResolution schreyer_resolve(const GeneratorBasis& basis, const Budget& budget = Budget::unlimited(),
                                       bool certify = true) {
  if (certify && !buchberger_certify(basis)) throw PreconditionError("basis is not a Groebner basis");
  return detail::run_schreyer(basis, budget);
}

/// Schreyer resolution of a monomial ideal; generators are sorted like a basis.
inline FreeResolution resolve_monomial(const Ring& ring, const std::vector<Monomial>& gens,
                                       const Budget& budget = Budget::unlimited()) {
  std::vector<Polynomial> polys;
  for (const auto& m : MonomialIdeal::minimalize(gens)) polys.push_back(Polynomial::monomial(ring, m));
  return detail::run_schreyer(GeneratorBasis(ring, std::move(polys)), budget);
}

inline FreeResolution resolve_monomial(const Ring& ring, const MonomialIdeal& ideal,
                                       const Budget& budget = Budget::unlimited()) {
  return resolve_monomial(ring, ideal.generators(), budget);
}

inline BettiTable betti_table(const FreeResolution& F) { return F.betti_table(); }

/// True iff no differential entry has a nonzero constant term.
inline bool minimality_check(const FreeResolution& F) {
  for (int i = 1; i <= F.length(); ++i)
    for (const auto& col : F.level(i).columns)
      for (const auto& t : col)
        if (t.mono.is_one()) return false;
  return true;
}

/// d_{i-1} d_i = 0 over Z for every i.
inline bool verify_d_squared_zero(const FreeResolution& F) {
  for (int i = 2; i <= F.length(); ++i) {
    const auto& upper = F.level(i);
    const auto& lower = F.level(i - 1);
    for (const auto& col : upper.columns) {
      std::map<std::pair<Monomial, std::uint32_t>, Integer> acc;
      for (const auto& t : col)
        for (const auto& s : lower.columns[t.row]) {
          auto& c = acc[{t.mono * s.mono, s.row}];
          c += t.coef * s.coef;
        }
      for (const auto& [k, v] : acc)
        if (v != 0) return false;
    }
  }
  return true;
}

/// Every term w*e_row of d(e_col) has deg w + deg(row) = deg(col), in the
/// standard and in the fine grading; internal degrees match name products.
inline bool verify_homogeneity(const FreeResolution& F) {
  const Ring& ring = F.ring();
  for (int i = 1; i <= F.length(); ++i) {
    const auto& lv = F.level(i);
    const auto& lower = F.level(i - 1);
    for (std::size_t g = 0; g < lv.generators.size(); ++g) {
      const auto& gen = lv.generators[g];
      Monomial prod(ring.nvars());
      for (const auto& m : F.name(i, g)) prod = prod * m;
      if (prod != gen.total || gen.degree != prod.degree() || gen.multidegree != ring.multidegree(prod)) return false;
      for (const auto& t : lv.columns[g]) {
        const auto& r = lower.generators[t.row];
        if (t.mono.degree() + r.degree != gen.degree) return false;
        if (ring.multidegree(t.mono) + r.multidegree != gen.multidegree) return false;
      }
    }
  }
  return true;
}

/// Corollary values at one homological index p.
struct ClosedFormBetti {
  std::int64_t linear_long = 0;        ///< beta_{p,p+1}, long sum
  std::int64_t linear_simplified = 0;  ///< beta_{p,p+1}, simplified form
  std::int64_t quadratic = 0;          ///< beta_{p,p+2}
  std::int64_t cubic = 0;              ///< beta_{p,p+3}
};

inline ClosedFormBetti closed_form_betti(int a, int b, int p) {
  if (b < 2 || a < b) throw ParameterError("closed forms need a >= b >= 2");
  if (p < 0 || p > a + b - 1) throw ParameterError("homological index out of range");
  auto C = [](long n, long k) { return static_cast<std::int64_t>(binomial(n, k)); };
  ClosedFormBetti r;
  if (1 <= p && p <= a + b - 2) {
    std::int64_t s = p * C(a, p + 1);
    for (int j = 0; j <= b - 2; ++j) s += (a - 2) * C(a + j - 1, p - 1) + C(a + j - 2, p - 1);
    for (int j = 1; j <= b - 2; ++j) s += j * C(a + j - 2, p - 1);
    s += (b - 2) * C(a - 2 + b - 1, p - 1) + C(b - 2, p - 1);
    r.linear_long = s;
    r.linear_simplified = C(a - 2, p - 1) + C(b - 2, p - 1) + p * C(a + b - 1, p + 1) - 2 * C(a + b - 3, p - 1);
  }
  if (2 <= p && p <= a + b - 1) {
    std::int64_t s = 0;
    for (int j = 0; j <= b - 2; ++j) s += C(a + j - 2, p - 2);
    for (int j = 1; j <= b - 2; ++j) s += j * C(a + j - 2, p - 2);
    s += (b - 2) * C(a - 2 + b - 1, p - 2);
    for (int q = 0; q <= p - 2; ++q)
      s += C(b - 2, q) * ((p - q - 1) * C(a, p - q) + (a - p + q + 1) * C(a, p - q - 2) + C(a - 2, p - q - 4));
    r.quadratic = s;
  }
  if (3 <= p && p <= a + b - 1) r.cubic = C(a + b - 4, p - 3);
  return r;
}

/// Whole table from the closed forms; the two linear-strand forms must agree.
inline BettiTable closed_form_table(int a, int b) {
  BettiTable t;
  t.set(0, 0, 1);
  for (int p = 0; p <= a + b - 1; ++p) {
    const auto v = closed_form_betti(a, b, p);
    if (v.linear_long != v.linear_simplified)
      throw InvariantViolation("long and simplified linear-strand formulas disagree");
    t.set(p, p + 1, static_cast<std::uint64_t>(v.linear_long));
    t.set(p, p + 2, static_cast<std::uint64_t>(v.quadratic));
    t.set(p, p + 3, static_cast<std::uint64_t>(v.cubic));
  }
  return t;
}

/// f(a) = a*C(2a-1, a+1) - 2*C(2a-3, a-1), the size of the Green matrix of X(a,a).
inline std::uint64_t green_matrix_size(int a) {
  return static_cast<std::uint64_t>(a) * binomial(2 * a - 1, a + 1) - 2 * binomial(2 * a - 3, a - 1);
}

}  // namespace k3
