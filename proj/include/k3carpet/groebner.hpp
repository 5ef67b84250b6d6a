#pragma once

// Division with unit leads, Buchberger certification and completion,
// monomial ideals, colon sequences and artinian reductions.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "k3carpet/carpet.hpp"
#include "k3carpet/errors.hpp"
#include "k3carpet/ring.hpp"

namespace k3 {

namespace detail {

inline void require_unit_leads(const GeneratorBasis& basis) {
  for (const auto& g : basis.generators())
    if (!g.has_unit_lead()) throw UnsupportedBasisError("basis element with non-unit lead: " + g.to_string());
}

inline Integer reduce_coefficient(Integer c, std::uint64_t p) { return p == 0 ? c : reduce_mod(c, p); }

}  // namespace detail

/// Remainder of f on division by a basis whose lead coefficients are units.
inline Polynomial normal_form(const Polynomial& f, const GeneratorBasis& basis) {
  detail::require_unit_leads(basis);
  if (!(f.ring() == basis.ring())) throw DomainError("polynomial and basis live in different rings");
  const std::uint64_t p = f.ring().modulus;
  std::map<Monomial, Integer, std::greater<>> work;
  for (const auto& t : f.terms()) work.emplace(t.mono, t.coef);
  std::vector<Term> rest;
  while (!work.empty()) {
    auto it = work.begin();
    const Monomial m = it->first;
    Integer c = std::move(it->second);
    work.erase(it);
    const Polynomial* divisor = nullptr;
    for (const auto& g : basis.generators())
      if (g.lead_monomial().divides(m)) {
        divisor = &g;
        break;
      }
    if (divisor == nullptr) {
      rest.push_back(Term{m, std::move(c)});
      continue;
    }
    // c*m - q*w*g cancels the lead; over Z the lead is +-1, mod p it is inverted.
    const Integer& lc = divisor->lead_coefficient();
    Integer q = p == 0 ? c * lc : detail::reduce_coefficient(c * Polynomial::mod_inverse(lc, p), p);
    const Monomial w = m / divisor->lead_monomial();
    const auto& terms = divisor->terms();
    for (std::size_t k = 1; k < terms.size(); ++k) {
      const Monomial u = w * terms[k].mono;
      Integer delta = detail::reduce_coefficient(-q * terms[k].coef, p);
      auto [pos, inserted] = work.emplace(u, delta);
      if (!inserted) {
        pos->second = detail::reduce_coefficient(pos->second + delta, p);
        if (pos->second == 0) work.erase(pos);
      } else if (pos->second == 0) {
        work.erase(pos);
      }
    }
  }
  return Polynomial::from_terms(f.ring(), std::move(rest));
}

/// lcm/in(f)*f/lc(f) - lcm/in(g)*g/lc(g).
inline Polynomial s_polynomial(const Polynomial& f, const Polynomial& g) {
  const Monomial l = lcm(f.lead_monomial(), g.lead_monomial());
  const std::uint64_t p = f.ring().modulus;
  auto scale = [&](const Polynomial& h) {
    const Integer& c = h.lead_coefficient();
    return p == 0 ? c : Polynomial::mod_inverse(c, p);
  };
  return f.times(l / f.lead_monomial(), scale(f)) - g.times(l / g.lead_monomial(), scale(g));
}

struct BuchbergerResult {
  bool certified = true;
  std::size_t pairs_checked = 0;
  std::size_t pairs_skipped = 0;  ///< coprime leads (product criterion)
  std::optional<std::pair<std::size_t, std::size_t>> failing_pair;
  Polynomial failing_remainder;
};

/// All S-pairs ordered by (degree of lcm, i, j); stops at the first failure.
inline BuchbergerResult buchberger_report(const GeneratorBasis& basis) {
  detail::require_unit_leads(basis);
  struct Pair {
    unsigned degree;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  const auto& leads = basis.lead_terms();
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) pairs.push_back({lcm(leads[i], leads[j]).degree(), i, j});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& l, const Pair& r) {
    return std::tie(l.degree, l.i, l.j) < std::tie(r.degree, r.i, r.j);
  });
  BuchbergerResult res;
  for (const auto& pr : pairs) {
    if (leads[pr.i].coprime(leads[pr.j])) {
      ++res.pairs_skipped;
      continue;
    }
    ++res.pairs_checked;
    Polynomial r = normal_form(s_polynomial(basis[pr.i], basis[pr.j]), basis);
    if (!r.is_zero()) {
      res.certified = false;
      res.failing_pair = std::make_pair(pr.i, pr.j);
      res.failing_remainder = std::move(r);
      return res;
    }
  }
  return res;
}

inline bool buchberger_certify(const GeneratorBasis& basis) { return buchberger_report(basis).certified; }

/// Buchberger completion over F_p, returning the reduced Groebner basis.
inline GeneratorBasis buchberger_complete(const std::vector<Polynomial>& gens, std::uint64_t p) {
  if (!is_prime(p)) throw ParameterError("completion needs a prime modulus");
  if (gens.empty()) throw ParameterError("empty generator list");
  const Ring ring = gens.front().ring().with_modulus(p);
  std::vector<Polynomial> g;
  for (const auto& f : gens) {
    Polynomial r = f.reduce_mod(p);
    if (!r.is_zero()) g.push_back(r.normalized());
  }
  std::vector<std::pair<std::size_t, std::size_t>> pending;
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) pending.emplace_back(i, j);
  while (!pending.empty()) {
    const auto [i, j] = pending.back();
    pending.pop_back();
    if (g[i].lead_monomial().coprime(g[j].lead_monomial())) continue;
    Polynomial r = normal_form(s_polynomial(g[i], g[j]), GeneratorBasis(ring, g));
    if (r.is_zero()) continue;
    g.push_back(r.normalized());
    for (std::size_t k = 0; k + 1 < g.size(); ++k) pending.emplace_back(k, g.size() - 1);
  }
  // Minimalize and inter-reduce.
  std::vector<Polynomial> minimal;
  for (std::size_t k = 0; k < g.size(); ++k) {
    bool redundant = false;
    for (std::size_t l = 0; l < g.size() && !redundant; ++l) {
      if (l == k || !g[l].lead_monomial().divides(g[k].lead_monomial())) continue;
      redundant = g[l].lead_monomial() != g[k].lead_monomial() || l < k;
    }
    if (!redundant) minimal.push_back(g[k]);
  }
  std::vector<Polynomial> reduced;
  for (std::size_t k = 0; k < minimal.size(); ++k) {
    std::vector<Polynomial> others;
    for (std::size_t l = 0; l < minimal.size(); ++l)
      if (l != k) others.push_back(minimal[l]);
    const Polynomial& f = minimal[k];
    std::vector<Term> tail(f.terms().begin() + 1, f.terms().end());
    Polynomial rest = others.empty() ? Polynomial::from_terms(ring, tail)
                                     : normal_form(Polynomial::from_terms(ring, tail), GeneratorBasis(ring, others));
    reduced.push_back(Polynomial::monomial(ring, f.lead_monomial()) + rest);
  }
  return GeneratorBasis(ring, std::move(reduced));
}

/// Monomial ideal stored by its minimal generators in descending order.
class MonomialIdeal {
 public:
  MonomialIdeal() = default;
  explicit MonomialIdeal(std::vector<Monomial> gens) : gens_(minimalize(std::move(gens))) {}

  static std::vector<Monomial> minimalize(std::vector<Monomial> gens) {
    std::sort(gens.begin(), gens.end(), [](const Monomial& l, const Monomial& r) {
      if (l.degree() != r.degree()) return l.degree() < r.degree();
      return l > r;
    });
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    std::vector<Monomial> out;
    for (const auto& m : gens) {
      // Divisors have degree <= deg m and therefore appear earlier.
      if (std::none_of(out.begin(), out.end(), [&](const Monomial& g) { return g.divides(m); })) out.push_back(m);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
  }

  const std::vector<Monomial>& generators() const { return gens_; }
  std::size_t size() const { return gens_.size(); }
  bool empty() const { return gens_.empty(); }

  bool contains(const Monomial& m) const {
    return std::any_of(gens_.begin(), gens_.end(), [&](const Monomial& g) { return g.divides(m); });
  }

  /// (this) : m
  MonomialIdeal colon(const Monomial& m) const {
    std::vector<Monomial> q;
    q.reserve(gens_.size());
    for (const auto& g : gens_) q.push_back(g / gcd(g, m));
    return MonomialIdeal(std::move(q));
  }

  MonomialIdeal operator+(const MonomialIdeal& other) const {
    std::vector<Monomial> all = gens_;
    all.insert(all.end(), other.gens_.begin(), other.gens_.end());
    return MonomialIdeal(std::move(all));
  }

  friend bool operator==(const MonomialIdeal& l, const MonomialIdeal& r) { return l.gens_ == r.gens_; }

 private:
  std::vector<Monomial> gens_;
};

inline MonomialIdeal initial_ideal(const GeneratorBasis& basis) { return MonomialIdeal(basis.lead_terms()); }

/// Entry k is (leads_0, ..., leads_{k-1}) : leads_k.
inline std::vector<MonomialIdeal> colon_sequence(const std::vector<Monomial>& leads) {
  std::vector<MonomialIdeal> out;
  out.reserve(leads.size());
  for (std::size_t k = 0; k < leads.size(); ++k) {
    std::vector<Monomial> q;
    for (std::size_t h = 0; h < k; ++h) q.push_back(leads[h] / gcd(leads[h], leads[k]));
    out.emplace_back(std::move(q));
  }
  return out;
}

/// The initial ideal listing of the carpet when e = (2,1): x_i x_j
/// (1 <= i <= j <= a-1), y_i y_j (1 <= i <= j <= b-1), and x_{i+2} y_j
/// (j <= b-2) or x_{i+2} y_0^2 (b = 1), or x_1^2 y_0^2 (a = b = 1).
inline MonomialIdeal expected_initial_ideal(int a, int b) {
  const Ring ring(a, b);
  std::vector<Monomial> gens;
  for (int i = 1; i <= a - 1; ++i)
    for (int j = i; j <= a - 1; ++j) gens.push_back(ring.xm(i) * ring.xm(j));
  for (int i = 1; i <= b - 1; ++i)
    for (int j = i; j <= b - 1; ++j) gens.push_back(ring.ym(i) * ring.ym(j));
  if (b >= 2) {
    for (int i = 0; i <= a - 2; ++i)
      for (int j = 0; j <= b - 2; ++j) gens.push_back(ring.xm(i + 2) * ring.ym(j));
  } else if (a >= 2) {
    for (int i = 0; i <= a - 2; ++i) gens.push_back(ring.xm(i + 2) * ring.ym(0, 2));
  } else {
    gens.push_back(ring.xm(1, 2) * ring.ym(0, 2));
  }
  return MonomialIdeal(std::move(gens));
}

struct HilbertProfile {
  std::vector<std::uint64_t> values;
  std::uint64_t length_total = 0;
  bool artinian = true;
  friend bool operator==(const HilbertProfile&, const HilbertProfile&) = default;
};

/// A linear form that is either a variable or v - w for two variables.
struct LinearForm {
  std::size_t var = 0;
  std::optional<std::size_t> minus_var;

  static LinearForm variable(std::size_t v) { return {v, std::nullopt}; }
  static LinearForm difference(std::size_t v, std::size_t w) { return {v, w}; }

  /// Converts a polynomial of one of the two supported shapes.
  static LinearForm from_polynomial(const Polynomial& f) {
    const auto& t = f.terms();
    auto var_of = [](const Monomial& m) -> std::size_t {
      for (std::size_t v = 0; v < m.size(); ++v)
        if (m.exponent(v) == 1) return v;
      return m.size();
    };
    if (!f.is_homogeneous() || f.degree() != 1 || t.empty() || t.size() > 2)
      throw ParameterError("linear form must be a variable or a difference of two variables");
    if (t.size() == 1) {
      if (t[0].coef != 1 && t[0].coef != -1) throw ParameterError("linear form must have unit coefficient");
      return variable(var_of(t[0].mono));
    }
    if (t[0].coef + t[1].coef != 0 || (t[0].coef != 1 && t[0].coef != -1))
      throw ParameterError("binomial linear form must be +-(v - w)");
    return difference(var_of(t[0].mono), var_of(t[1].mono));
  }
};

/// Hilbert function of k[vars]/(J + forms) for a monomial ideal J, where each
/// form kills a variable or identifies two. Counting stops at the first
/// empty degree; a non-artinian quotient is reported as such.
inline HilbertProfile monomial_quotient_hilbert(const MonomialIdeal& ideal, std::size_t nvars,
                                                const std::vector<LinearForm>& forms) {
  // Union-find style substitution: killed variables map to nullopt, identified
  // pairs map the smaller variable (larger index) onto the larger one.
  std::vector<std::optional<std::size_t>> image(nvars);
  for (std::size_t v = 0; v < nvars; ++v) image[v] = v;
  auto resolve = [&](std::size_t v) -> std::optional<std::size_t> {
    std::optional<std::size_t> cur = v;
    while (cur && image[*cur] != cur) cur = image[*cur];
    return cur;
  };
  for (const auto& f : forms) {
    if (f.var >= nvars || (f.minus_var && *f.minus_var >= nvars)) throw ParameterError("variable out of range");
    auto rv = resolve(f.var);
    if (!f.minus_var) {
      if (rv) image[*rv] = std::nullopt;
      continue;
    }
    auto rw = resolve(*f.minus_var);
    if (rv == rw) continue;
    if (!rv || !rw) {
      // v = w with one side already zero kills the other.
      if (rv) image[*rv] = std::nullopt;
      if (rw) image[*rw] = std::nullopt;
      continue;
    }
    const std::size_t keep = std::min(*rv, *rw), drop = std::max(*rv, *rw);
    image[drop] = keep;
  }
  std::vector<std::size_t> survivors;
  for (std::size_t v = 0; v < nvars; ++v)
    if (resolve(v) == std::optional<std::size_t>(v)) survivors.push_back(v);
  std::vector<Monomial> mapped;
  for (const auto& g : ideal.generators()) {
    Monomial m(nvars);
    bool zero = false;
    for (std::size_t v = 0; v < nvars && !zero; ++v) {
      const unsigned e = g.exponent(v);
      if (e == 0) continue;
      auto r = resolve(v);
      if (!r) {
        zero = true;
        break;
      }
      m.set_exponent(*r, m.exponent(*r) + e);
    }
    if (zero) {
      // The generator becomes 0 after substitution only if some factor is
      // killed, which makes it a multiple of a killed variable: no constraint.
      continue;
    }
    mapped.push_back(m);
  }
  const MonomialIdeal target(std::move(mapped));
  HilbertProfile prof;
  for (std::size_t v : survivors) {
    bool has_power = std::any_of(target.generators().begin(), target.generators().end(), [&](const Monomial& g) {
      return g.exponent(v) == g.degree();
    });
    if (!has_power) {
      prof.artinian = false;
      return prof;
    }
  }
  std::vector<Monomial> layer{Monomial(nvars)};
  if (target.contains(layer.front())) layer.clear();
  while (!layer.empty()) {
    prof.values.push_back(layer.size());
    prof.length_total += layer.size();
    std::set<Monomial> next;
    for (const auto& m : layer)
      for (std::size_t v : survivors) {
        Monomial u = m * Monomial::variable(nvars, v);
        if (!target.contains(u)) next.insert(u);
      }
    layer.assign(next.begin(), next.end());
  }
  return prof;
}

/// The three forms x_0, x_a - y_0, y_b.
inline std::vector<LinearForm> carpet_linear_forms(const Ring& ring) {
  return {LinearForm::variable(ring.x(0)), LinearForm::difference(ring.x(ring.a), ring.y(0)),
          LinearForm::variable(ring.y(ring.b))};
}

inline HilbertProfile artinian_hilbert(const GeneratorBasis& basis) {
  const Ring& ring = basis.ring();
  return monomial_quotient_hilbert(initial_ideal(basis), ring.nvars(), carpet_linear_forms(ring));
}

struct LemmaAbCertificate {
  bool holds = false;
  HilbertProfile profile;
  std::uint64_t expected_degree = 0;
};

/// Artinian length of P/(in g_1..in g_m, l_1..l_d) against the expected
/// degree; a non-artinian quotient fails.
inline LemmaAbCertificate lemma_ab_certificate(const GeneratorBasis& basis, const std::vector<LinearForm>& forms,
                                               std::uint64_t expected_degree) {
  LemmaAbCertificate cert;
  cert.expected_degree = expected_degree;
  cert.profile = monomial_quotient_hilbert(initial_ideal(basis), basis.ring().nvars(), forms);
  cert.holds = cert.profile.artinian && cert.profile.length_total <= expected_degree;
  return cert;
}

/// Expected degree 2(a+b) of X_e(a,b).
inline LemmaAbCertificate lemma_ab_certificate(const GeneratorBasis& basis, const std::vector<LinearForm>& forms) {
  const Ring& ring = basis.ring();
  return lemma_ab_certificate(basis, forms, static_cast<std::uint64_t>(2 * (ring.a + ring.b)));
}

}  // namespace k3
