#pragma once

// Text and JSON forms of matrices, Betti tables, bases and reports.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "k3carpet/carpet.hpp"
#include "k3carpet/errors.hpp"
#include "k3carpet/groebner.hpp"
#include "k3carpet/linalg.hpp"
#include "k3carpet/pipeline.hpp"
#include "k3carpet/schreyer.hpp"

namespace k3 {

using Json = nlohmann::ordered_json;

// Sparse matrix text: "rows cols nnz", then nnz lines "r c v", 1-based,
// sorted by (r, c).

inline void write_matrix(std::ostream& os, const SparseIntMatrix& m) {
  os << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  for (const auto& e : m.entries()) os << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value.str() << '\n';
}

inline std::string matrix_to_text(const SparseIntMatrix& m) {
  std::ostringstream os;
  write_matrix(os, m);
  return os.str();
}

inline SparseIntMatrix read_matrix(std::istream& is) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line))
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    return false;
  };
  if (!next_line()) throw ParameterError("matrix: missing header");
  std::size_t rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> rows >> cols >> nnz) || (hs >> extra)) throw ParameterError("matrix: bad header '" + line + "'");
  }
  std::vector<MatrixEntry> entries;
  entries.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!next_line()) throw ParameterError("matrix: expected " + std::to_string(nnz) + " entries");
    std::istringstream ls(line);
    std::size_t r = 0, c = 0;
    std::string v, extra;
    if (!(ls >> r >> c >> v) || (ls >> extra)) throw ParameterError("matrix: bad entry '" + line + "'");
    if (r < 1 || r > rows || c < 1 || c > cols) throw ParameterError("matrix: index out of range '" + line + "'");
    Integer value;
    try {
      value = Integer(v);
    } catch (const std::exception&) {
      throw ParameterError("matrix: bad value '" + v + "'");
    }
    entries.push_back(MatrixEntry{r - 1, c - 1, std::move(value)});
  }
  if (next_line()) throw ParameterError("matrix: trailing data");
  return SparseIntMatrix(rows, cols, std::move(entries));
}

inline SparseIntMatrix matrix_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_matrix(is);
}

/// Column i, row j - i, '.' for zero.
inline std::string betti_to_text(const BettiTable& t) {
  const int cols = t.max_index() + 1;
  const int rows = t.max_row() + 1;
  std::vector<std::vector<std::string>> cells(static_cast<std::size_t>(rows + 1));
  cells[0].push_back("");
  for (int i = 0; i < cols; ++i) cells[0].push_back(std::to_string(i));
  for (int r = 0; r < rows; ++r) {
    auto& line = cells[static_cast<std::size_t>(r + 1)];
    line.push_back(std::to_string(r) + ":");
    for (int i = 0; i < cols; ++i) {
      const auto v = t.at(i, i + r);
      line.push_back(v == 0 ? "." : std::to_string(v));
    }
  }
  std::vector<std::size_t> width(static_cast<std::size_t>(cols + 1), 0);
  for (const auto& line : cells)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  std::string out;
  for (const auto& line : cells) {
    std::string s;
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c > 0) s += ' ';
      s += std::string(width[c] - line[c].size(), ' ') + line[c];
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    out += s + '\n';
  }
  return out;
}

inline Json betti_to_json(const BettiTable& t) {
  Json entries = Json::array();
  for (const auto& [k, v] : t.entries()) entries.push_back(Json{{"i", k.first}, {"j", k.second}, {"value", v}});
  Json rows = Json::array();
  if (!t.empty())
    for (int r = 0; r <= t.max_row(); ++r) rows.push_back(t.row(r));
  return Json{{"entries", entries}, {"rows", rows}};
}

inline BettiTable betti_from_json(const Json& j) {
  BettiTable t;
  if (!j.contains("entries") || !j.at("entries").is_array()) throw ParameterError("betti json: missing entries");
  for (const auto& e : j.at("entries")) {
    const auto v = e.at("value").get<std::uint64_t>();
    if (v == 0) throw ParameterError("betti json: zero entry");
    t.set(e.at("i").get<int>(), e.at("j").get<int>(), v);
  }
  return t;
}

inline Json params_to_json(const CarpetParams& p) {
  return Json{{"a", p.a}, {"b", p.b}, {"e", {p.e1, p.e2}}, {"genus", p.genus()}, {"clifford_index", p.clifford_index()}};
}

inline Json basis_to_json(const GeneratorBasis& basis) {
  const Ring& ring = basis.ring();
  Json gens = Json::array(), leads = Json::array();
  for (const auto& g : basis.generators()) gens.push_back(g.to_string());
  for (const auto& m : basis.lead_terms()) leads.push_back(to_string(m, ring));
  Json out;
  if (basis.params()) out["params"] = params_to_json(*basis.params());
  out["count"] = basis.size();
  out["generators"] = gens;
  out["lead_terms"] = leads;
  return out;
}

inline Json factored_to_json(const FactoredInteger& f) {
  Json pp = Json::object();
  for (const auto& [p, e] : f.prime_powers) pp[std::to_string(p)] = e;
  return Json{{"text", f.to_string()},
              {"prime_powers", pp},
              {"unfactored_cofactor", f.unfactored_cofactor.str()},
              {"fully_factored", f.fully_factored()}};
}

inline Json green_to_json(const GreenReport& r) {
  Json out{{"params", params_to_json(r.params)},
           {"strand_degree", r.strand_degree},
           {"matrix_shape", {r.rows, r.cols}},
           {"rank_over_Q", r.rank_over_Q},
           {"holds_over_Q", r.holds_over_Q},
           {"det", factored_to_json(r.det_product)},
           {"exceptional_primes", r.exceptional_primes},
           {"blocks", r.block_count}};
  if (!r.per_prime_tables.empty()) {
    Json tables = Json::object();
    for (const auto& [p, t] : r.per_prime_tables) tables[std::to_string(p)] = betti_to_json(t);
    out["per_prime_tables"] = tables;
  }
  return out;
}

inline std::string primes_to_text(const std::vector<std::uint64_t>& ps) {
  std::string s = "[";
  for (std::size_t k = 0; k < ps.size(); ++k) s += (k ? ", " : "") + std::to_string(ps[k]);
  return s + "]";
}

inline std::string green_to_text(const GreenReport& r) {
  std::ostringstream os;
  os << "a: " << r.params.a << "\nb: " << r.params.b << "\ne: " << r.params.e1 << ',' << r.params.e2
     << "\ngenus: " << r.genus() << "\nclifford_index: " << r.clifford_index()
     << "\nstrand_degree: " << r.strand_degree << "\nmatrix_shape: " << r.rows << 'x' << r.cols
     << "\nrank_over_Q: " << r.rank_over_Q << "\nholds_over_Q: " << (r.holds_over_Q ? "true" : "false")
     << "\ndet: " << r.det_product.to_string() << "\nexceptional_primes: " << primes_to_text(r.exceptional_primes)
     << '\n';
  for (const auto& [p, t] : r.per_prime_tables) os << "table p=" << p << ":\n" << betti_to_text(t);
  return os.str();
}

inline Json scan_to_json(const ScanResult& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows)
    rows.push_back(Json{{"params", params_to_json(r.params)},
                        {"holds_over_Q", r.holds_over_Q},
                        {"det", r.det_product.to_string()},
                        {"exceptional_primes", r.exceptional_primes},
                        {"flagged_primes", r.flagged_primes}});
  return Json{{"rows", rows}, {"truncated", s.truncated}};
}

inline std::string scan_to_text(const ScanResult& s) {
  std::ostringstream os;
  for (const auto& r : s.rows)
    os << "a=" << r.params.a << " b=" << r.params.b << " e=" << r.params.e1 << ',' << r.params.e2
       << " det=" << r.det_product.to_string() << " exceptional=" << primes_to_text(r.exceptional_primes)
       << " flagged=" << primes_to_text(r.flagged_primes) << '\n';
  if (s.truncated) os << "truncated: budget exceeded\n";
  return os.str();
}

inline Json snf_to_json(const SnfResult& snf) {
  Json factors = Json::array();
  for (const auto& d : snf.invariant_factors) factors.push_back(d.str());
  return Json{{"rank", snf.rank},
              {"invariant_factors", factors},
              {"product", factored_to_json(nonzero_invariant_factor_product(snf))}};
}

inline std::string snf_to_text(const SnfResult& snf) {
  std::ostringstream os;
  os << "rank: " << snf.rank << "\ninvariant_factors:";
  for (const auto& d : snf.invariant_factors) os << ' ' << d.str();
  os << "\nproduct: " << nonzero_invariant_factor_product(snf).to_string() << '\n';
  return os.str();
}

}  // namespace k3
