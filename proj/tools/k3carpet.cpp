// k3carpet: command-line front end.
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid parameters,
// 3 budget exceeded, 4 invariant or certificate failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "k3carpet/k3carpet.hpp"

namespace {

enum Exit { kOk = 0, kIo = 1, kInvalid = 2, kBudget = 3, kInvariant = 4 };

struct RunConfig {
  std::string command;
  int a = 2;
  int b = 2;
  std::vector<long> e{2, 1};
  std::uint64_t characteristic = 0;
  std::optional<int> degree;
  std::string format = "text";
  std::optional<double> budget_seconds;
  std::optional<std::string> matrix_out;
  std::string input;
  bool tables = false;

  k3::CarpetParams params() const {
    if (e.size() != 2) throw k3::ParameterError("--e takes two integers e1,e2");
    k3::CarpetParams p{a, b, e[0], e[1]};
    p.validate();
    return p;
  }
  k3::Budget budget() const { return budget_seconds ? k3::Budget::seconds(*budget_seconds) : k3::Budget::unlimited(); }
  bool json() const { return format == "json"; }

  k3::Json to_json() const {
    k3::Json j{{"command", command}, {"a", a}, {"b", b}, {"e", e}, {"char", characteristic}, {"format", format}};
    j["degree"] = degree ? k3::Json(*degree) : k3::Json(nullptr);
    j["budget"] = budget_seconds ? k3::Json(*budget_seconds) : k3::Json(nullptr);
    return j;
  }
};

void emit(const RunConfig& cfg, k3::Json body, const std::string& text) {
  if (cfg.json()) {
    k3::Json out{{"config", cfg.to_json()}};
    for (auto& [k, v] : body.items()) out[k] = v;
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << text;
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open " + path);
  f << content;
  if (!f) throw std::ios_base::failure("cannot write " + path);
}

/// Strand maps of degree k written as PATH.D<i>.
std::vector<std::string> dump_strand(const k3::StrandComplex& S, const std::string& path) {
  std::vector<std::string> written;
  for (int i = 1; i <= S.top(); ++i) {
    const auto m = S.map(i);
    if (m.rows() == 0 && m.cols() == 0) continue;
    const std::string name = path + ".D" + std::to_string(i);
    write_file(name, k3::matrix_to_text(m));
    written.push_back(name);
  }
  return written;
}

int cmd_ideal(const RunConfig& cfg) {
  const auto basis = k3::carpet_generators(cfg.params());
  std::string text;
  for (const auto& g : basis.generators()) text += g.to_string() + '\n';
  emit(cfg, k3::basis_to_json(basis), text);
  return kOk;
}

int cmd_certify(const RunConfig& cfg) {
  const auto params = cfg.params();
  const auto budget = cfg.budget();
  const auto basis = k3::carpet_generators(params);
  std::vector<std::pair<std::string, bool>> checks;
  checks.emplace_back("buchberger", k3::buchberger_certify(basis));
  const auto prof = k3::artinian_hilbert(basis);
  const auto n = static_cast<std::uint64_t>(params.a + params.b - 1);
  const auto degree = static_cast<std::uint64_t>(2 * (params.a + params.b));
  bool hilbert_ok = prof.artinian && prof.length_total == degree;
  if (params.b >= 2) hilbert_ok = hilbert_ok && prof.values == std::vector<std::uint64_t>{1, n, n, 1};
  checks.emplace_back("artinian_hilbert", hilbert_ok);
  const auto F = k3::schreyer_resolve(basis, budget, false);
  checks.emplace_back("d_squared_zero", k3::verify_d_squared_zero(F));
  checks.emplace_back("homogeneity", k3::verify_homogeneity(F));
  const auto G = k3::resolve_monomial(basis.ring(), k3::initial_ideal(basis), budget);
  checks.emplace_back("initial_ideal_minimal", k3::minimality_check(G));
  checks.emplace_back("lead_term_betti", G.betti_table() == F.betti_table());
  if (params.b >= 2) checks.emplace_back("closed_form", F.betti_table() == k3::closed_form_table(params.a, params.b));
  if (params.is_carpet())
    checks.emplace_back("initial_ideal_listing",
                        k3::initial_ideal(basis) == k3::expected_initial_ideal(params.a, params.b));

  bool all = true;
  std::string text;
  k3::Json list = k3::Json::object();
  for (const auto& [name, ok] : checks) {
    all = all && ok;
    text += (ok ? "PASS " : "FAIL ") + name + '\n';
    list[name] = ok;
  }
  emit(cfg, k3::Json{{"params", k3::params_to_json(params)}, {"checks", list}, {"all_passed", all}}, text);
  return all ? kOk : kInvariant;
}

int cmd_resolve(const RunConfig& cfg) {
  const auto params = cfg.params();
  const auto F = k3::schreyer_resolve(k3::carpet_generators(params), cfg.budget());
  if (!k3::verify_d_squared_zero(F)) throw k3::InvariantViolation("d*d != 0");
  const auto table = F.betti_table();
  k3::Json body{{"params", k3::params_to_json(params)}, {"betti", k3::betti_to_json(table)}};
  std::string text = k3::betti_to_text(table);
  if (cfg.matrix_out) {
    if (!cfg.degree) throw k3::ParameterError("--matrix-out needs --degree");
    body["matrices"] = dump_strand(k3::constant_strand(F, *cfg.degree), *cfg.matrix_out);
  }
  emit(cfg, body, text);
  return kOk;
}

int cmd_strand(const RunConfig& cfg) {
  const auto params = cfg.params();
  if (!cfg.degree) throw k3::ParameterError("strand needs --degree");
  const auto F = k3::schreyer_resolve(k3::carpet_generators(params), cfg.budget());
  const auto S = k3::constant_strand(F, *cfg.degree);
  k3::Json positions = k3::Json::array();
  std::ostringstream text;
  text << "degree: " << S.degree << "\nchar: " << cfg.characteristic << '\n';
  for (int i : S.support()) {
    const auto h = k3::strand_homology_dim(S, i, cfg.characteristic);
    positions.push_back(k3::Json{{"i", i}, {"rank", S.rank(i)}, {"homology", h}});
    text << "F_" << i << ": rank " << S.rank(i) << ", homology " << h << '\n';
  }
  k3::Json body{{"params", k3::params_to_json(params)}, {"degree", S.degree}, {"positions", positions}};
  if (cfg.matrix_out) body["matrices"] = dump_strand(S, *cfg.matrix_out);
  emit(cfg, body, text.str());
  return kOk;
}

int cmd_green(const RunConfig& cfg) {
  const auto params = cfg.params();
  k3::GreenOptions opts;
  opts.budget = cfg.budget();
  opts.tables = cfg.tables;
  const auto F = k3::schreyer_resolve(k3::carpet_generators(params), opts.budget);
  const auto rep = k3::green_report(F, params, opts);
  if (cfg.matrix_out) write_file(*cfg.matrix_out, k3::matrix_to_text(k3::green_matrix(F, params.a)));
  emit(cfg, k3::green_to_json(rep), k3::green_to_text(rep));
  return kOk;
}

int cmd_betti(const RunConfig& cfg) {
  const auto params = cfg.params();
  const auto table = k3::char_p_betti(params, cfg.characteristic, cfg.budget());
  emit(cfg, k3::Json{{"params", k3::params_to_json(params)}, {"betti", k3::betti_to_json(table)}},
       k3::betti_to_text(table));
  return kOk;
}

int cmd_scan(const RunConfig& cfg) {
  if (cfg.e.size() != 2) throw k3::ParameterError("--e takes two integers e1,e2");
  if (cfg.a < 1) throw k3::ParameterError("--a must be >= 1");
  const auto res = k3::conjecture_scan(k3::diagonal_grid(2, cfg.a, cfg.e[0], cfg.e[1]), cfg.budget());
  emit(cfg, k3::scan_to_json(res), k3::scan_to_text(res));
  return res.truncated ? kBudget : kOk;
}

int cmd_snf(const RunConfig& cfg) {
  k3::SparseIntMatrix m;
  if (cfg.input.empty() || cfg.input == "-") {
    m = k3::read_matrix(std::cin);
  } else {
    std::ifstream f(cfg.input);
    if (!f) throw std::ios_base::failure("cannot open " + cfg.input);
    m = k3::read_matrix(f);
  }
  const auto snf = k3::smith_normal_form(m);
  emit(cfg, k3::snf_to_json(snf), k3::snf_to_text(snf));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Defining ideals, Schreyer resolutions and Green's conjecture checks for K3 carpets"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--a", cfg.a, "scroll parameter a (a >= b)");
    sub->add_option("--b", cfg.b, "scroll parameter b");
    sub->add_option("--e", cfg.e, "pair e1,e2 (default 2,1: the carpet)")->delimiter(',')->expected(2);
    sub->add_option("--char", cfg.characteristic, "0 or a prime");
    sub->add_option("--degree", cfg.degree, "internal degree of a strand");
    sub->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--budget", cfg.budget_seconds, "wall-clock budget in seconds");
    sub->add_option("--matrix-out", cfg.matrix_out, "write strand matrices here");
  };

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Command commands[] = {
      {"ideal", "print the Groebner basis of I_e(a,b)", cmd_ideal},
      {"certify", "check the Groebner, Hilbert, minimality and closed-form certificates", cmd_certify},
      {"resolve", "Betti table of the Schreyer resolution", cmd_resolve},
      {"strand", "shape and homology of one constant strand", cmd_strand},
      {"green", "Green matrix determinant and exceptional primes", cmd_green},
      {"betti", "minimal Betti table over Q or F_p", cmd_betti},
      {"scan", "Green reports for a = b = 2..A", cmd_scan},
      {"snf", "Smith normal form of a matrix file", cmd_snf},
  };
  const Command* chosen = nullptr;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub);
    if (std::string(c.name) == "green") sub->add_flag("--tables", cfg.tables, "add minimal tables for Q and each exceptional prime");
    if (std::string(c.name) == "snf") sub->add_option("input", cfg.input, "matrix file, '-' for stdin");
    sub->callback([&chosen, &cfg, &c] {
      chosen = &c;
      cfg.command = c.name;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    return chosen->run(cfg);
  } catch (const k3::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (cfg.json()) std::cout << k3::Json{{"config", cfg.to_json()}, {"truncated", true}}.dump(2) << '\n';
    return kBudget;
  } catch (const k3::InvariantViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvariant;
  } catch (const k3::Error& e) {
    // Parameter, domain, dimension and precondition errors.
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
}
