#pragma once

// Defining equations of the K3 carpets X(a,b) and of the degenerate K3
// surfaces X_e(a,b): scroll minors, the bilinear/cubic/quartic forms Q_{i,j},
// the canonical map on mixed minors, rank-3 witnesses, resonance minors.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3carpet/errors.hpp"
#include "k3carpet/linalg.hpp"
#include "k3carpet/ring.hpp"

namespace k3 {

/// a >= b >= 1 and the pair e = (e1, e2); e = (2,1) is the carpet.
struct CarpetParams {
  int a = 2;
  int b = 2;
  long e1 = 2;
  long e2 = 1;

  void validate() const {
    if (a < 1 || b < 1) throw ParameterError("need a, b >= 1");
    if (a < b) throw ParameterError("convention a >= b violated");
    if (static_cast<std::size_t>(a + b + 2) > kMaxVariables) throw ParameterError("a + b too large");
  }
  bool is_carpet() const { return e1 == 2 && e2 == 1; }
  Ring ring() const { return Ring(a, b); }
  /// Sectional genus of the hyperplane section ribbon.
  int genus() const { return a + b + 1; }
  int clifford_index() const { return b; }

  friend bool operator==(const CarpetParams&, const CarpetParams&) = default;
};

inline std::uint64_t binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (long i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

/// Basis sorted by degree, then by descending order of lead terms, with
/// unit lead coefficients normalized to +1.
class GeneratorBasis {
 public:
  GeneratorBasis() = default;
  GeneratorBasis(const Ring& ring, std::vector<Polynomial> gens, std::optional<CarpetParams> params = std::nullopt)
      : ring_(ring), params_(params) {
    for (auto& g : gens) {
      if (g.is_zero()) continue;
      if (!(g.ring() == ring)) throw DomainError("generator from another ring");
      generators_.push_back(g.has_unit_lead() ? g.normalized() : std::move(g));
    }
    std::stable_sort(generators_.begin(), generators_.end(), [](const Polynomial& l, const Polynomial& r) {
      if (l.degree() != r.degree()) return l.degree() < r.degree();
      return l.lead_monomial() > r.lead_monomial();
    });
    for (const auto& g : generators_) lead_terms_.push_back(g.lead_monomial());
  }

  const Ring& ring() const { return ring_; }
  const std::optional<CarpetParams>& params() const { return params_; }
  const std::vector<Polynomial>& generators() const { return generators_; }
  const std::vector<Monomial>& lead_terms() const { return lead_terms_; }
  std::size_t size() const { return generators_.size(); }
  const Polynomial& operator[](std::size_t i) const { return generators_[i]; }

  bool has_unit_leads() const {
    return std::all_of(generators_.begin(), generators_.end(), [](const Polynomial& g) { return g.has_unit_lead(); });
  }

  /// Same generators without entry i.
  GeneratorBasis without(std::size_t i) const {
    std::vector<Polynomial> rest;
    for (std::size_t k = 0; k < generators_.size(); ++k)
      if (k != i) rest.push_back(generators_[k]);
    return GeneratorBasis(ring_, std::move(rest), params_);
  }

  /// Generators reduced mod p.
  GeneratorBasis reduce_mod(std::uint64_t p) const {
    std::vector<Polynomial> red;
    for (const auto& g : generators_) red.push_back(g.reduce_mod(p));
    return GeneratorBasis(ring_.with_modulus(p), std::move(red), params_);
  }

 private:
  Ring ring_;
  std::optional<CarpetParams> params_;
  std::vector<Polynomial> generators_;
  std::vector<Monomial> lead_terms_;
};

namespace detail {

/// top_u * bot_v - top_v * bot_u.
inline Polynomial det2(const Polynomial& top_u, const Polynomial& top_v, const Polynomial& bot_u,
                       const Polynomial& bot_v) {
  return top_u * bot_v - top_v * bot_u;
}

/// All 2x2 minors of a 2-row matrix given by its rows, columns u < v.
inline std::vector<Polynomial> two_by_two_minors(const std::vector<Polynomial>& top,
                                                 const std::vector<Polynomial>& bottom) {
  std::vector<Polynomial> out;
  for (std::size_t u = 0; u < top.size(); ++u)
    for (std::size_t v = u + 1; v < top.size(); ++v) out.push_back(det2(top[u], top[v], bottom[u], bottom[v]));
  return out;
}

}  // namespace detail

/// 2x2 minors of the catalecticant matrix (x_0..x_{a-1} / x_1..x_a).
inline std::vector<Polynomial> mx_minors(const Ring& ring) {
  std::vector<Polynomial> top, bot;
  for (int i = 0; i < ring.a; ++i) {
    top.push_back(Polynomial::x(ring, i));
    bot.push_back(Polynomial::x(ring, i + 1));
  }
  return detail::two_by_two_minors(top, bot);
}

inline std::vector<Polynomial> my_minors(const Ring& ring) {
  std::vector<Polynomial> top, bot;
  for (int j = 0; j < ring.b; ++j) {
    top.push_back(Polynomial::y(ring, j));
    bot.push_back(Polynomial::y(ring, j + 1));
  }
  return detail::two_by_two_minors(top, bot);
}

/// Q_{i,j} = x_{i+2} y_j - e1 x_{i+1} y_{j+1} + e2 x_i y_{j+2}.
inline Polynomial bilinear_form(const Ring& ring, int i, int j, long e1, long e2) {
  using P = Polynomial;
  return P::x(ring, i + 2) * P::y(ring, j) - Integer(e1) * (P::x(ring, i + 1) * P::y(ring, j + 1)) +
         Integer(e2) * (P::x(ring, i) * P::y(ring, j + 2));
}

/// Generators of I_e = I_2(MX) + I_2(MY) + J_e, which form a Groebner basis.
inline GeneratorBasis carpet_generators(const CarpetParams& params) {
  params.validate();
  const Ring ring = params.ring();
  using P = Polynomial;
  std::vector<Polynomial> gens = mx_minors(ring);
  for (auto& m : my_minors(ring)) gens.push_back(std::move(m));
  const int a = params.a, b = params.b;
  if (b >= 2) {
    for (int i = 0; i <= a - 2; ++i)
      for (int j = 0; j <= b - 2; ++j) gens.push_back(bilinear_form(ring, i, j, params.e1, params.e2));
  } else if (a >= 2) {
    const P y00 = P::y(ring, 0) * P::y(ring, 0);
    const P y01 = P::y(ring, 0) * P::y(ring, 1);
    const P y11 = P::y(ring, 1) * P::y(ring, 1);
    for (int i = 0; i <= a - 2; ++i)
      gens.push_back(P::x(ring, i + 2) * y00 - Integer(params.e1) * (P::x(ring, i + 1) * y01) +
                     Integer(params.e2) * (P::x(ring, i) * y11));
  } else {
    const P x11 = P::x(ring, 1) * P::x(ring, 1);
    const P x01 = P::x(ring, 0) * P::x(ring, 1);
    const P x00 = P::x(ring, 0) * P::x(ring, 0);
    const P y00 = P::y(ring, 0) * P::y(ring, 0);
    const P y01 = P::y(ring, 0) * P::y(ring, 1);
    const P y11 = P::y(ring, 1) * P::y(ring, 1);
    gens.push_back(x11 * y00 - Integer(params.e1) * (x01 * y01) + Integer(params.e2) * (x00 * y11));
  }
  return GeneratorBasis(ring, std::move(gens), params);
}

/// Number of generators C(a,2) + C(b,2) + (a-1)(b-1) for a, b >= 2.
inline std::uint64_t expected_generator_count(int a, int b) { return binomial(a + b - 1, 2); }

/// All 2x2 minors of M_t = (x_0..x_{a-1} y_0..y_{b-1} / x_1..x_a t*y_1..t*y_b),
/// column pairs u < v in column order.
inline std::vector<Polynomial> scroll_matrix_minors(int a, int b, long t) {
  if (a < 1 || b < 1) throw ParameterError("need a, b >= 1");
  const Ring ring(a, b);
  std::vector<Polynomial> top, bot;
  for (int i = 0; i < a; ++i) {
    top.push_back(Polynomial::x(ring, i));
    bot.push_back(Polynomial::x(ring, i + 1));
  }
  for (int j = 0; j < b; ++j) {
    top.push_back(Polynomial::y(ring, j));
    bot.push_back(Integer(t) * Polynomial::y(ring, j + 1));
  }
  return detail::two_by_two_minors(top, bot);
}

/// det(x_i y_j / x_{i+1} y_{j+1}).
inline Polynomial mixed_minor(const Ring& ring, int i, int j) {
  return detail::det2(Polynomial::x(ring, i), Polynomial::y(ring, j), Polynomial::x(ring, i + 1),
                      Polynomial::y(ring, j + 1));
}

/// Image x_0^{q-i-j} x_1^{i+j} (q = a+b-2) of the mixed minor (i, j) under
/// the canonical surjection I(S) -> omega_R.
inline Monomial alpha_of_mixed_minor(int i, int j, const CarpetParams& params) {
  params.validate();
  if (!params.is_carpet()) throw ParameterError("the canonical map is defined for e = (2,1)");
  if (params.a + params.b < 2) throw ParameterError("need a + b >= 2");
  if (i < 0 || i > params.a - 1 || j < 0 || j > params.b - 1) throw ParameterError("mixed minor index out of range");
  const Ring ring = params.ring();
  const int q = params.a + params.b - 2;
  return ring.xm(0, static_cast<unsigned>(q - i - j)) * ring.xm(1, static_cast<unsigned>(i + j));
}

/// Dimension count for the kernel of alpha on the quadrics of I(S).
struct AlphaKernelReport {
  std::size_t quadrics_of_scroll = 0;  ///< dim I(S)_2
  std::size_t image_rank = 0;          ///< rank of alpha on I(S)_2
  std::size_t kernel_dimension = 0;
  std::size_t generator_span = 0;      ///< dim of the span of the degree-2 carpet generators
  bool generators_in_kernel = false;
  bool kernel_equals_generator_span() const {
    return generators_in_kernel && generator_span == kernel_dimension;
  }
};

/// Degree-2 linear algebra over Q: alpha kills the MX and MY minors and sends
/// the mixed minor (i,j) to p_{i+j}. Each minor becomes the vector
/// (coefficients in P_2 | alpha-image coordinates); a generator g lies in the
/// kernel iff (g | 0) is in the span of these vectors.
inline AlphaKernelReport alpha_kernel_check(int a, int b) {
  const CarpetParams params{a, b, 2, 1};
  params.validate();
  if (a < 2 || b < 2) throw ParameterError("alpha kernel check needs a, b >= 2");
  const Ring ring = params.ring();
  const std::size_t n = ring.nvars();
  std::vector<Monomial> quad_monos;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u; v < n; ++v)
      quad_monos.push_back(Monomial::variable(n, u) * Monomial::variable(n, v));
  const std::size_t q = static_cast<std::size_t>(a + b - 2);
  const std::size_t width = quad_monos.size() + q + 1;
  auto coeff_row = [&](const Polynomial& f) {
    std::vector<Integer> row(width);
    for (const auto& t : f.terms()) {
      auto it = std::find(quad_monos.begin(), quad_monos.end(), t.mono);
      if (it == quad_monos.end()) throw PreconditionError("not a quadric: " + f.to_string());
      row[static_cast<std::size_t>(it - quad_monos.begin())] = t.coef;
    }
    return row;
  };
  DenseIntMatrix minors;
  DenseIntMatrix alpha_part;
  for (auto& m : mx_minors(ring)) {
    minors.push_back(coeff_row(m));
    alpha_part.push_back(std::vector<Integer>(q + 1));
  }
  for (auto& m : my_minors(ring)) {
    minors.push_back(coeff_row(m));
    alpha_part.push_back(std::vector<Integer>(q + 1));
  }
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) {
      auto row = coeff_row(mixed_minor(ring, i, j));
      // p_l = x_0^{q-l} x_1^l is recorded by l.
      row[quad_monos.size() + static_cast<std::size_t>(i + j)] = 1;
      std::vector<Integer> image(q + 1);
      image[static_cast<std::size_t>(i + j)] = 1;
      minors.push_back(std::move(row));
      alpha_part.push_back(std::move(image));
    }
  AlphaKernelReport rep;
  {
    DenseIntMatrix only_quadrics = minors;
    for (auto& r : only_quadrics)
      for (std::size_t k = quad_monos.size(); k < width; ++k) r[k] = 0;
    rep.quadrics_of_scroll = rank_rational(only_quadrics);
  }
  rep.image_rank = rank_rational(alpha_part);
  rep.kernel_dimension = rep.quadrics_of_scroll - rep.image_rank;
  const std::size_t base_rank = rank_rational(minors);
  DenseIntMatrix gens;
  const GeneratorBasis basis = carpet_generators(params);
  for (const auto& g : basis.generators())
    if (g.degree() == 2) gens.push_back(coeff_row(g));
  rep.generator_span = rank_rational(gens);
  DenseIntMatrix combined = minors;
  for (auto& g : gens) combined.push_back(g);
  rep.generators_in_kernel = rank_rational(combined) == base_rank;
  return rep;
}

/// Images under alpha of the relations among the minors of every 2x3
/// submatrix with two x-columns and one y-column or one x-column and two
/// y-columns. Each must vanish modulo I(S).
inline std::vector<Polynomial> alpha_relation_images(int a, int b) {
  const CarpetParams params{a, b, 2, 1};
  params.validate();
  const Ring ring = params.ring();
  const int q = a + b - 2;
  auto p = [&](int l) {
    return Polynomial::monomial(ring, ring.xm(0, static_cast<unsigned>(q - l)) * ring.xm(1, static_cast<unsigned>(l)));
  };
  using P = Polynomial;
  std::vector<Polynomial> out;
  for (int i = 0; i < a; ++i)
    for (int j = i + 1; j < a; ++j)
      for (int s = 0; s < b; ++s) {
        out.push_back(P::x(ring, i) * p(j + s) - P::x(ring, j) * p(i + s));
        out.push_back(P::x(ring, i + 1) * p(j + s) - P::x(ring, j + 1) * p(i + s));
      }
  for (int i = 0; i < a; ++i)
    for (int s = 0; s < b; ++s)
      for (int t = s + 1; t < b; ++t) {
        out.push_back(P::y(ring, t) * p(i + s) - P::y(ring, s) * p(i + t));
        out.push_back(P::y(ring, t + 1) * p(i + s) - P::y(ring, s + 1) * p(i + t));
      }
  return out;
}

/// det((x_i+y_j, x_{i+1}+y_{j+1}) / (x_{i+1}+y_{j+1}, x_{i+2}+y_{j+2})).
inline Polynomial rank3_witness(int i, int j, const CarpetParams& params) {
  params.validate();
  if (params.a < 2 || params.b < 2) throw ParameterError("rank-3 witnesses need a, b >= 2");
  if (!params.is_carpet()) throw ParameterError("rank-3 witnesses are defined for e = (2,1)");
  if (i < 0 || i > params.a - 2 || j < 0 || j > params.b - 2) throw ParameterError("witness index out of range");
  const Ring ring = params.ring();
  using P = Polynomial;
  const P z0 = P::x(ring, i) + P::y(ring, j);
  const P z1 = P::x(ring, i + 1) + P::y(ring, j + 1);
  const P z2 = P::x(ring, i + 2) + P::y(ring, j + 2);
  return z0 * z2 - z1 * z1;
}

/// Rank of the symmetric Gram matrix of a quadratic form. Works with 2*Gram
/// so everything stays integral; rejects characteristic 2.
inline std::size_t quadric_rank(const Polynomial& q) {
  const Ring& ring = q.ring();
  if (ring.modulus == 2) throw DomainError("quadric rank is not supported in characteristic 2");
  if (q.is_zero()) return 0;
  if (!q.is_homogeneous() || q.degree() != 2) throw ParameterError("quadric_rank needs a homogeneous quadric");
  const std::size_t n = ring.nvars();
  DenseIntMatrix gram(n, std::vector<Integer>(n));
  for (const auto& t : q.terms()) {
    std::vector<std::size_t> vars;
    for (std::size_t v = 0; v < n; ++v)
      for (unsigned e = 0; e < t.mono.exponent(v); ++e) vars.push_back(v);
    if (vars[0] == vars[1]) {
      gram[vars[0]][vars[0]] += 2 * t.coef;
    } else {
      gram[vars[0]][vars[1]] += t.coef;
      gram[vars[1]][vars[0]] += t.coef;
    }
  }
  const auto m = SparseIntMatrix::from_dense(gram);
  return ring.modulus == 0 ? rank_rational(m) : rank_mod_p(m, ring.modulus);
}

/// Sign of the y-block in the second row of the resonance matrix.
enum class ResonanceSign { negated_y, plain_y };

/// 2x2 minors of (x_0..x_{a-k} y_0..y_{b-k} / x_k..x_a s*y_k..s*y_b) with
/// s = -1 (the k = 2 form) or s = +1 (the general-k form).
inline std::vector<Polynomial> resonance_minors(const CarpetParams& params, int k, ResonanceSign sign) {
  params.validate();
  if (k < 1) throw ParameterError("resonance order must be >= 1");
  if (params.a < k + 1 || params.b < k + 1) throw ParameterError("resonance minors need a, b >= k+1");
  const Ring ring = params.ring();
  const Integer s = sign == ResonanceSign::negated_y ? -1 : 1;
  std::vector<Polynomial> top, bot;
  for (int i = 0; i <= params.a - k; ++i) {
    top.push_back(Polynomial::x(ring, i));
    bot.push_back(Polynomial::x(ring, i + k));
  }
  for (int j = 0; j <= params.b - k; ++j) {
    top.push_back(Polynomial::y(ring, j));
    bot.push_back(s * Polynomial::y(ring, j + k));
  }
  return detail::two_by_two_minors(top, bot);
}

}  // namespace k3
