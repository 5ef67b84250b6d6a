#pragma once

// Exact polynomial arithmetic in P = k[x_0..x_a, y_0..y_b] over the integers
// or over a prime field, with graded reverse lexicographic order
// x_0 > ... > x_a > y_0 > ... > y_b and the fine Z^3 grading
// deg x_i = (1,0,i), deg y_j = (0,1,j).

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "k3carpet/errors.hpp"

namespace k3 {

using Integer = boost::multiprecision::cpp_int;

inline constexpr std::size_t kMaxVariables = 32;

/// Dense exponent vector, eight bits per variable, packed into four words so
/// that order comparisons and divisibility run word-at-a-time.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : nvars_(static_cast<std::uint8_t>(nvars)) {
    if (nvars > kMaxVariables) throw DimensionError("too many variables");
  }

  static Monomial variable(std::size_t nvars, std::size_t index, unsigned exponent = 1) {
    Monomial m(nvars);
    m.set_exponent(index, exponent);
    return m;
  }

  static Monomial from_exponents(const std::vector<unsigned>& exps) {
    Monomial m(exps.size());
    for (std::size_t i = 0; i < exps.size(); ++i) m.set_exponent(i, exps[i]);
    return m;
  }

  std::size_t size() const { return nvars_; }
  unsigned degree() const { return degree_; }
  bool is_one() const { return degree_ == 0; }

  unsigned exponent(std::size_t i) const {
    return static_cast<unsigned>((words_[i >> 3] >> ((i & 7) * 8)) & 0xffu);
  }

  void set_exponent(std::size_t i, unsigned e) {
    if (i >= nvars_) throw DimensionError("variable index out of range");
    if (e > 255) throw DomainError("exponent exceeds 255");
    const unsigned old = exponent(i);
    const unsigned shift = (i & 7) * 8;
    words_[i >> 3] = (words_[i >> 3] & ~(std::uint64_t{0xff} << shift)) |
                     (std::uint64_t{e} << shift);
    degree_ = static_cast<std::uint16_t>(degree_ - old + e);
  }

  std::vector<unsigned> exponents() const {
    std::vector<unsigned> out(nvars_);
    for (std::size_t i = 0; i < nvars_; ++i) out[i] = exponent(i);
    return out;
  }

  /// Product. Exponents stay below 128 in every computation this library
  /// performs; the slow path handles the rest.
  friend Monomial operator*(const Monomial& l, const Monomial& r) {
    Monomial out(l.nvars_);
    std::uint64_t high = 0;
    for (std::size_t w = 0; w < 4; ++w) high |= l.words_[w] | r.words_[w];
    if ((high & kHighBits) == 0) {
      for (std::size_t w = 0; w < 4; ++w) out.words_[w] = l.words_[w] + r.words_[w];
      out.degree_ = static_cast<std::uint16_t>(l.degree_ + r.degree_);
      return out;
    }
    for (std::size_t i = 0; i < l.nvars_; ++i) out.set_exponent(i, l.exponent(i) + r.exponent(i));
    return out;
  }

  Monomial& operator*=(const Monomial& r) { return *this = *this * r; }

  /// True iff this monomial divides `other`.
  bool divides(const Monomial& other) const {
    if (degree_ > other.degree_) return false;
    std::uint64_t high = 0;
    for (std::size_t w = 0; w < 4; ++w) high |= words_[w] | other.words_[w];
    if ((high & kHighBits) == 0) {
      for (std::size_t w = 0; w < 4; ++w) {
        if ((((other.words_[w] | kHighBits) - words_[w]) & kHighBits) != kHighBits) return false;
      }
      return true;
    }
    for (std::size_t i = 0; i < nvars_; ++i)
      if (exponent(i) > other.exponent(i)) return false;
    return true;
  }

  /// Exact quotient; the divisor must divide this monomial.
  Monomial operator/(const Monomial& divisor) const {
    Monomial out(nvars_);
    for (std::size_t w = 0; w < 4; ++w) out.words_[w] = words_[w] - divisor.words_[w];
    out.degree_ = static_cast<std::uint16_t>(degree_ - divisor.degree_);
    return out;
  }

  friend Monomial lcm(const Monomial& l, const Monomial& r) {
    Monomial out(l.nvars_);
    for (std::size_t i = 0; i < l.nvars_; ++i) out.set_exponent(i, std::max(l.exponent(i), r.exponent(i)));
    return out;
  }

  friend Monomial gcd(const Monomial& l, const Monomial& r) {
    Monomial out(l.nvars_);
    for (std::size_t i = 0; i < l.nvars_; ++i) out.set_exponent(i, std::min(l.exponent(i), r.exponent(i)));
    return out;
  }

  bool coprime(const Monomial& other) const {
    for (std::size_t w = 0; w < 4; ++w) {
      // A shared variable shows up as two nonzero bytes at the same position.
      std::uint64_t a = words_[w], b = other.words_[w];
      for (; a != 0 && b != 0; a >>= 8, b >>= 8)
        if ((a & 0xff) && (b & 0xff)) return false;
    }
    return true;
  }

  /// Graded reverse lexicographic comparison; caller guarantees equal sizes.
  friend std::strong_ordering operator<=>(const Monomial& l, const Monomial& r) {
    if (l.degree_ != r.degree_) return l.degree_ <=> r.degree_;
    for (std::size_t w = 4; w-- > 0;) {
      const std::uint64_t diff = l.words_[w] ^ r.words_[w];
      if (diff == 0) continue;
      const unsigned byte = (63u - static_cast<unsigned>(std::countl_zero(diff))) / 8u;
      const unsigned el = static_cast<unsigned>((l.words_[w] >> (byte * 8)) & 0xffu);
      const unsigned er = static_cast<unsigned>((r.words_[w] >> (byte * 8)) & 0xffu);
      // The last differing variable decides; the smaller exponent there wins.
      return er <=> el;
    }
    return std::strong_ordering::equal;
  }

  friend bool operator==(const Monomial& l, const Monomial& r) {
    return l.words_ == r.words_ && l.nvars_ == r.nvars_;
  }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ nvars_;
    for (auto w : words_) h = (h ^ w) * 0x100000001b3ull + (h >> 29);
    return static_cast<std::size_t>(h);
  }

 private:
  static constexpr std::uint64_t kHighBits = 0x8080808080808080ull;
  std::array<std::uint64_t, 4> words_{};
  std::uint16_t degree_ = 0;
  std::uint8_t nvars_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Checked comparison in the graded reverse lexicographic order.
inline std::strong_ordering compare_monomials(const Monomial& m1, const Monomial& m2) {
  if (m1.size() != m2.size()) throw DimensionError("monomials from rings of different dimension");
  return m1 <=> m2;
}

/// The triple (d1, d2, d3) of the fine grading.
struct Multidegree {
  int dx = 0;
  int dy = 0;
  int weight = 0;

  Multidegree& operator+=(const Multidegree& o) {
    dx += o.dx;
    dy += o.dy;
    weight += o.weight;
    return *this;
  }
  friend Multidegree operator+(Multidegree l, const Multidegree& r) { return l += r; }
  friend Multidegree operator-(const Multidegree& l, const Multidegree& r) {
    return {l.dx - r.dx, l.dy - r.dy, l.weight - r.weight};
  }
  friend auto operator<=>(const Multidegree&, const Multidegree&) = default;
  int total() const { return dx + dy; }
};

inline std::ostream& operator<<(std::ostream& os, const Multidegree& d) {
  return os << '(' << d.dx << ',' << d.dy << ',' << d.weight << ')';
}

/// Shape of the ambient ring plus its coefficient domain (modulus 0 means Z).
struct Ring {
  int a = 1;
  int b = 1;
  std::uint64_t modulus = 0;

  Ring() = default;
  Ring(int a_, int b_, std::uint64_t modulus_ = 0) : a(a_), b(b_), modulus(modulus_) {
    if (a < 0 || b < 0) throw ParameterError("ring needs a, b >= 0");
    if (nvars() > kMaxVariables) throw ParameterError("ring has too many variables");
  }

  std::size_t nvars() const { return static_cast<std::size_t>(a + b + 2); }
  std::size_t x(int i) const {
    if (i < 0 || i > a) throw ParameterError("x index out of range");
    return static_cast<std::size_t>(i);
  }
  std::size_t y(int j) const {
    if (j < 0 || j > b) throw ParameterError("y index out of range");
    return static_cast<std::size_t>(a + 1 + j);
  }
  bool is_x(std::size_t v) const { return v <= static_cast<std::size_t>(a); }

  std::string variable_name(std::size_t v) const {
    if (is_x(v)) return "x" + std::to_string(v);
    return "y" + std::to_string(v - static_cast<std::size_t>(a) - 1);
  }

  Monomial one() const { return Monomial(nvars()); }
  Monomial xm(int i, unsigned e = 1) const { return Monomial::variable(nvars(), x(i), e); }
  Monomial ym(int j, unsigned e = 1) const { return Monomial::variable(nvars(), y(j), e); }

  Multidegree multidegree(const Monomial& m) const {
    if (m.size() != nvars()) throw DimensionError("monomial does not belong to this ring");
    Multidegree d;
    for (int i = 0; i <= a; ++i) {
      const int e = static_cast<int>(m.exponent(static_cast<std::size_t>(i)));
      d.dx += e;
      d.weight += i * e;
    }
    for (int j = 0; j <= b; ++j) {
      const int e = static_cast<int>(m.exponent(static_cast<std::size_t>(a + 1 + j)));
      d.dy += e;
      d.weight += j * e;
    }
    return d;
  }

  Ring with_modulus(std::uint64_t p) const { return Ring(a, b, p); }

  friend bool operator==(const Ring&, const Ring&) = default;
};

inline std::string to_string(const Monomial& m, const Ring& ring) {
  if (m.is_one()) return "1";
  std::string out;
  for (std::size_t v = 0; v < m.size(); ++v) {
    const unsigned e = m.exponent(v);
    if (e == 0) continue;
    if (!out.empty()) out += '*';
    out += ring.variable_name(v);
    if (e > 1) out += '^' + std::to_string(e);
  }
  return out;
}

/// Reduces an integer into [0, p).
inline Integer reduce_mod(const Integer& c, std::uint64_t p) {
  Integer r = c % p;
  if (r < 0) r += p;
  return r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

struct Term {
  Monomial mono;
  Integer coef;
};

/// Sparse polynomial; terms strictly decreasing in the monomial order, no
/// zero coefficients, coefficients in [0, p) when a modulus is attached.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(const Ring& ring) : ring_(ring) {}

  static Polynomial from_terms(const Ring& ring, std::vector<Term> terms) {
    Polynomial p(ring);
    std::sort(terms.begin(), terms.end(),
              [](const Term& l, const Term& r) { return l.mono > r.mono; });
    for (auto& t : terms) {
      if (t.mono.size() != ring.nvars()) throw DimensionError("term from another ring");
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coef += t.coef;
      } else {
        p.terms_.push_back(std::move(t));
      }
    }
    p.normalize_coefficients();
    return p;
  }

  static Polynomial monomial(const Ring& ring, const Monomial& m, Integer c = 1) {
    return from_terms(ring, {Term{m, std::move(c)}});
  }
  static Polynomial constant(const Ring& ring, Integer c) {
    return monomial(ring, ring.one(), std::move(c));
  }
  static Polynomial x(const Ring& ring, int i) { return monomial(ring, ring.xm(i)); }
  static Polynomial y(const Ring& ring, int j) { return monomial(ring, ring.ym(j)); }

  const Ring& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  const Term& lead_term() const {
    if (terms_.empty()) throw PreconditionError("zero polynomial has no lead term");
    return terms_.front();
  }
  const Monomial& lead_monomial() const { return lead_term().mono; }
  const Integer& lead_coefficient() const { return lead_term().coef; }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree());
    return d;
  }

  bool is_homogeneous() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [&](const Term& t) { return t.mono.degree() == terms_.front().mono.degree(); });
  }

  bool is_multihomogeneous() const {
    if (terms_.empty()) return true;
    const auto d = ring_.multidegree(terms_.front().mono);
    return std::all_of(terms_.begin(), terms_.end(),
                       [&](const Term& t) { return ring_.multidegree(t.mono) == d; });
  }

  /// Coefficient of the degree-0 term.
  Integer constant_coefficient() const {
    if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coef;
    return 0;
  }

  Integer coefficient(const Monomial& m) const {
    for (const auto& t : terms_)
      if (t.mono == m) return t.coef;
    return 0;
  }

  /// Image under the residue map Z -> Z/p.
  Polynomial reduce_mod(std::uint64_t p) const {
    if (!is_prime(p)) throw ParameterError("modulus must be prime");
    if (ring_.modulus != 0 && ring_.modulus != p) throw DomainError("polynomial already has another modulus");
    Polynomial out(ring_.with_modulus(p));
    out.terms_ = terms_;
    out.normalize_coefficients();
    return out;
  }

  Polynomial operator-() const {
    Polynomial out = *this;
    for (auto& t : out.terms_) t.coef = -t.coef;
    out.normalize_coefficients();
    return out;
  }

  friend Polynomial operator+(const Polynomial& l, const Polynomial& r) { return combine(l, r, false); }
  friend Polynomial operator-(const Polynomial& l, const Polynomial& r) { return combine(l, r, true); }
  Polynomial& operator+=(const Polynomial& r) { return *this = *this + r; }
  Polynomial& operator-=(const Polynomial& r) { return *this = *this - r; }

  friend Polynomial operator*(const Polynomial& l, const Polynomial& r) {
    check_compatible(l, r);
    std::vector<Term> out;
    out.reserve(l.size() * r.size());
    for (const auto& s : l.terms_)
      for (const auto& t : r.terms_) out.push_back(Term{s.mono * t.mono, s.coef * t.coef});
    return from_terms(l.ring_, std::move(out));
  }
  Polynomial& operator*=(const Polynomial& r) { return *this = *this * r; }

  friend Polynomial operator*(const Integer& c, const Polynomial& p) {
    Polynomial out = p;
    for (auto& t : out.terms_) t.coef *= c;
    out.normalize_coefficients();
    return out;
  }

  Polynomial times(const Monomial& m, const Integer& c = 1) const {
    Polynomial out = *this;
    for (auto& t : out.terms_) {
      t.mono = t.mono * m;
      t.coef *= c;
    }
    out.normalize_coefficients();
    return out;
  }

  /// Multiplies by -1 (over Z) or by the inverse of the lead coefficient
  /// (over Z/p) so that the lead coefficient becomes 1 when it is a unit.
  Polynomial normalized() const {
    if (terms_.empty()) return *this;
    if (ring_.modulus == 0) return terms_.front().coef < 0 ? -*this : *this;
    const Integer inv = mod_inverse(terms_.front().coef, ring_.modulus);
    return inv * *this;
  }

  /// Whether the lead coefficient is invertible in the coefficient domain.
  bool has_unit_lead() const {
    if (terms_.empty()) return false;
    const auto& c = terms_.front().coef;
    if (ring_.modulus == 0) return c == 1 || c == -1;
    return c != 0;
  }

  friend bool operator==(const Polynomial& l, const Polynomial& r) {
    if (!(l.ring_ == r.ring_) || l.terms_.size() != r.terms_.size()) return false;
    for (std::size_t i = 0; i < l.terms_.size(); ++i)
      if (!(l.terms_[i].mono == r.terms_[i].mono) || l.terms_[i].coef != r.terms_[i].coef) return false;
    return true;
  }

  std::string to_string() const;

  static Integer mod_inverse(const Integer& c, std::uint64_t p) {
    Integer a = ::k3::reduce_mod(c, p);
    if (a == 0) throw DomainError("zero has no inverse");
    // Fermat: a^(p-2) mod p.
    return boost::multiprecision::powm(a, Integer(p - 2), Integer(p));
  }

 private:
  static void check_compatible(const Polynomial& l, const Polynomial& r) {
    if (l.ring_.nvars() != r.ring_.nvars() || l.ring_.a != r.ring_.a)
      throw DimensionError("polynomials from rings of different shape");
    if (l.ring_.modulus != r.ring_.modulus) throw DomainError("polynomials with different moduli");
  }

  static Polynomial combine(const Polynomial& l, const Polynomial& r, bool subtract) {
    check_compatible(l, r);
    Polynomial out(l.ring_);
    out.terms_.reserve(l.size() + r.size());
    std::size_t i = 0, j = 0;
    while (i < l.size() || j < r.size()) {
      if (j == r.size() || (i < l.size() && l.terms_[i].mono > r.terms_[j].mono)) {
        out.terms_.push_back(l.terms_[i++]);
      } else if (i == l.size() || r.terms_[j].mono > l.terms_[i].mono) {
        Term t = r.terms_[j++];
        if (subtract) t.coef = -t.coef;
        out.terms_.push_back(std::move(t));
      } else {
        Integer c = l.terms_[i].coef;
        if (subtract) c -= r.terms_[j].coef; else c += r.terms_[j].coef;
        out.terms_.push_back(Term{l.terms_[i].mono, std::move(c)});
        ++i;
        ++j;
      }
    }
    out.normalize_coefficients();
    return out;
  }

  void normalize_coefficients() {
    if (ring_.modulus != 0)
      for (auto& t : terms_) t.coef = ::k3::reduce_mod(t.coef, ring_.modulus);
    std::erase_if(terms_, [](const Term& t) { return t.coef == 0; });
  }

  Ring ring_;
  std::vector<Term> terms_;
};

inline std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    Integer c = t.coef;
    bool negative = c < 0;
    if (negative) c = -c;
    if (negative) {
      out += '-';
    } else if (k > 0) {
      out += '+';
    }
    if (t.mono.is_one()) {
      out += c.str();
    } else {
      if (c != 1) out += c.str() + '*';
      out += ::k3::to_string(t.mono, ring_);
    }
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

/// Parses the `+`/`-`/`*`/`^` text syntax, e.g. `x2*y0-2*x1*y1+x0*y2`.
inline Polynomial parse_polynomial(const Ring& ring, std::string_view text) {
  std::vector<Term> terms;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  auto read_uint = [&]() -> std::string {
    std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (start == pos) throw ParameterError("expected a number in polynomial text");
    return std::string(text.substr(start, pos - start));
  };
  skip_ws();
  if (text.substr(pos) == "0") return Polynomial(ring);
  while (pos < text.size()) {
    skip_ws();
    int sign = 1;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') sign = -1;
      ++pos;
    } else if (!terms.empty()) {
      throw ParameterError("expected + or - between terms");
    }
    Term term{ring.one(), Integer(sign)};
    while (true) {
      skip_ws();
      if (pos >= text.size()) throw ParameterError("dangling operator in polynomial text");
      const char c = text[pos];
      if (c >= '0' && c <= '9') {
        term.coef *= Integer(read_uint());
      } else if (c == 'x' || c == 'y') {
        ++pos;
        const int idx = std::stoi(read_uint());
        unsigned e = 1;
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          e = static_cast<unsigned>(std::stoul(read_uint()));
        }
        const std::size_t v = c == 'x' ? ring.x(idx) : ring.y(idx);
        term.mono = term.mono * Monomial::variable(ring.nvars(), v, e);
      } else {
        throw ParameterError(std::string("unexpected character in polynomial text: ") + c);
      }
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    terms.push_back(std::move(term));
    skip_ws();
  }
  return Polynomial::from_terms(ring, std::move(terms));
}

}  // namespace k3

template <>
struct std::hash<k3::Monomial> {
  std::size_t operator()(const k3::Monomial& m) const noexcept { return m.hash(); }
};
