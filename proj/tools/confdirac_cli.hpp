#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "confdirac/confdirac.hpp"

namespace confdirac::cli {

enum ExitCode : int { ok = 0, domain_error = 2, claim_violation = 3, non_convergence = 4 };

using Cell = std::variant<std::int64_t, double, std::string, bool>;

/// Header plus rows; rendered as CSV or as a JSON array of objects with the same field names.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table: row width mismatch");
    rows.push_back(std::move(row));
  }
};

/// 17 significant digits, scientific, locale independent.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

inline std::string format_cell(const Cell& c) {
  struct {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  } visitor;
  return std::visit(visitor, c);
}

inline void write_csv(const Table& t, std::ostream& out) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

inline void write_json(const Table& t, std::ostream& out) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit([&](const auto& v) { obj[t.columns[i]] = v; }, row[i]);
    }
    doc.push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

/// A failed physics claim (scan found a solution it should not have).
struct ClaimViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string format = "csv";
  std::string output;

  double mass = 1.0;
  double lambda = 0.5;
  double mu = 1e-4;
  std::optional<double> nu;
  int kappa0 = -1;
  int n = 1;
  std::optional<int> kappa;
  std::optional<int> n_max;
  int N_max = 10;

  std::string family = "coulomb";
  int states = 1;
  double M = 20.0;
  std::optional<double> r0;
  std::optional<double> A;
  bool with_coulomb = false;
  std::string dump_wavefunction;

  std::size_t points = 20000;
  std::string spacing = "log";
  std::optional<double> r_min;
  std::optional<double> r_max;
};

namespace detail {

inline void validate_common(const RunConfig& c) {
  if (!(c.mass > 0.0)) throw DomainError("--mass must be positive");
  if (c.format != "csv" && c.format != "json") throw DomainError("--format must be csv or json");
  if (c.points < 1000) throw DomainError("--points must be >= 1000");
}

inline RadialGrid grid_for(const RunConfig& c, RadialGrid automatic) {
  if (c.r_min) automatic.r_min = *c.r_min;
  if (c.r_max) automatic.r_max = *c.r_max;
  automatic.count = c.points;
  automatic.spacing = c.spacing == "linear" ? Spacing::linear : Spacing::logarithmic;
  automatic.validate();
  return automatic;
}

inline int lowest_n(int kappa) { return kappa < 0 ? -kappa : kappa + 1; }

inline Table cmd_energy(const RunConfig& c) {
  if (c.lambda < 0.0) throw DomainError("--lambda must be >= 0");
  Table t{{"n", "kappa", "E_dirac", "E_schrodinger", "E_preserved"}, {}};
  std::vector<std::pair<int, int>> levels;
  if (c.n_max) {
    if (*c.n_max < 1) throw DomainError("--n-max must be >= 1");
    for (int n = 1; n <= *c.n_max; ++n) {
      for (int k : enumerate_kappa(n)) levels.emplace_back(n, k);
    }
  } else {
    levels.emplace_back(c.n, c.kappa.value_or(-c.n));
  }
  for (auto [n, k] : levels) {
    HydrogenicState::make(n, k);
    const double e = dirac_coulomb_energy(n, k, c.lambda, c.mass);
    const double preserved = (k == -n) ? e : std::numeric_limits<double>::quiet_NaN();
    t.add({std::int64_t{n}, std::int64_t{k}, e, schrodinger_energy(n, c.lambda, c.mass), preserved});
  }
  return t;
}

inline Table cmd_shift(const RunConfig& c) {
  Table t{{"n", "kappa", "total", "term_linear", "term_spin_orbit", "term_kinetic", "preserved"},
          {}};
  const int n_max = c.n_max.value_or(3);
  if (n_max < 1) throw DomainError("--n-max must be >= 1");
  for (int n = 1; n <= n_max; ++n) {
    for (int k : enumerate_kappa(n)) {
      const auto s = first_order_shift(n, k, c.kappa0, c.lambda, c.mu, c.mass);
      const bool preserved = k == c.kappa0 && n == -c.kappa0;
      t.add({std::int64_t{n}, std::int64_t{k}, s.total, s.term_linear, s.term_spin_orbit,
             s.term_kinetic, preserved});
    }
  }
  return t;
}

inline Table cmd_scan(const RunConfig& c) {
  const auto report = preservation_scan(c.n_max.value_or(50), c.N_max);
  Table t{{"n", "kappa", "N", "physical"}, {}};
  for (const auto& s : report.solutions) {
    t.add({std::int64_t{s.n}, std::int64_t{s.kappa}, std::int64_t{s.N}, s.physical});
  }
  if (!report.matches_claim()) {
    throw ClaimViolation("scan: integer solutions beyond kappa = +-n, N = 1 or failed sign "
                         "opposition (" + std::to_string(report.sign_violations) + " points)");
  }
  return t;
}

inline Table cmd_ansatz(const RunConfig& c) {
  auto p = build_ansatz(c.lambda, c.mu, c.kappa0, c.mass);
  if (c.nu) p = p.with_nu(*c.nu);
  const auto dev = p.consistency_deviations();
  const auto quad = normalization_integral(p);
  const double residual = radial_residual(p, ansatz_grid(p, c.points));
  Table t{{"lambda", "mu", "nu", "kappa0", "b", "a", "alpha2", "gamma", "energy", "norm",
           "dev_a_over_m_plus_E", "dev_kappa_minus_b", "dev_alpha2_over_mu_minus_nu",
           "dev_m_minus_E_over_a", "dev_lambda_over_kappa_plus_b", "dev_mu_plus_nu_over_alpha2",
           "norm_defect", "residual", "pure_coulomb"},
          {}};
  t.add({c.lambda, c.mu, p.nu(), std::int64_t{c.kappa0}, p.b, p.a, p.alpha2, p.gamma, p.energy,
         p.norm, dev[0], dev[1], dev[2], dev[3], dev[4], dev[5], std::abs(quad.value - 1.0),
         residual, p.pure_coulomb()});
  return t;
}

struct Dump {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline Table solve_table() {
  return {{"family", "n", "kappa", "nodes", "energy", "reference", "deviation", "residual",
           "converged"},
          {}};
}

inline void dump_dirac(Dump& d, int index, const BoundState& s) {
  if (d.columns.empty()) d.columns = {"state", "r", "f", "g"};
  for (std::size_t i = 0; i < s.state.size(); ++i) {
    d.rows.push_back({static_cast<double>(index), s.state.r[i], s.state.f[i], s.state.g[i]});
  }
}

inline Table cmd_solve(const RunConfig& c, Dump* dump) {
  if (c.states < 1) throw DomainError("--states must be >= 1");
  Table t = solve_table();
  const double m = c.mass;
  if (c.family == "coulomb" || c.family == "coulomb+linear") {
    const bool linear = c.family == "coulomb+linear";
    if (linear && !(c.mu >= 0.0)) {
      throw DomainError("--mu must be >= 0 (a negative scalar slope does not confine)");
    }
    const int kappa = c.kappa.value_or(c.kappa0);
    const double nu = linear ? c.nu.value_or(nu_fine_tuned(c.mu, c.lambda, c.kappa0)) : 0.0;
    const auto potential = linear ? PotentialSpec::coulomb_linear(c.lambda, c.mu, nu)
                                  : PotentialSpec::coulomb(c.lambda);
    for (int i = 0; i < c.states; ++i) {
      const int n = lowest_n(kappa) + i;
      const int nodes = n - decompose_kappa(kappa).ell - 1;
      double reference = dirac_coulomb_energy(n, kappa, c.lambda, m);
      if (linear) reference += first_order_shift(n, kappa, c.kappa0, c.lambda, c.mu, m).total;
      const auto grid = grid_for(c, dirac_grid(potential, kappa, m, reference, c.points));
      const double width = 1e-6 * c.lambda * c.lambda * m + std::abs(reference -
                           dirac_coulomb_energy(n, kappa, c.lambda, m));
      const auto s = find_bound_state_near(potential, kappa, m, grid, reference, nodes, width);
      t.add({c.family, std::int64_t{n}, std::int64_t{kappa}, std::int64_t{s.nodes_f}, s.energy,
             reference, s.energy - reference, s.residual, s.converged});
      if (dump) dump_dirac(*dump, i, s);
    }
    return t;
  }
  if (c.family == "bag") {
    const double r0 = c.r0.value_or(5.0 / (c.lambda * m));
    const double A = c.A.value_or(m);
    const auto bag = bag_model_case(A, r0, c.M, c.lambda, c.kappa0, m, c.points);
    PotentialSpec potential{[lam = c.lambda](double r) { return -lam / r; }, bag.v1, bag.v2,
                            c.lambda};
    const auto grid = grid_for(c, dirac_grid(potential, c.kappa0, m, bag.energy, c.points));
    const auto s = find_bound_state_near(potential, c.kappa0, m, grid, bag.energy, 0,
                                         1e-6 * c.lambda * c.lambda * m);
    t.add({c.family, std::int64_t{-c.kappa0}, std::int64_t{c.kappa0}, std::int64_t{s.nodes_f},
           s.energy, bag.energy, s.energy - bag.energy, s.residual, s.converged});
    if (dump) dump_dirac(*dump, 0, s);
    return t;
  }
  if (c.family == "antiparticle-linear") {
    if (c.states > 20) throw DomainError("--states must be <= 20 for this family");
    const auto eff = antiparticle_effective(c.mu, c.lambda, c.kappa0, m);
    const auto airy = antiparticle_spectrum_airy(c.mu, m, c.states);
    const double slope = eff.leading_slope;
    const double coulomb = c.with_coulomb ? eff.coulomb : 0.0;
    const SchrodingerPotential v{[slope, coulomb](double r) { return slope * r + coulomb / r; },
                                 -coulomb};
    const double length = std::cbrt(1.0 / (2.0 * m * slope));
    for (int i = 0; i < c.states; ++i) {
      const auto grid = grid_for(c, schrodinger_grid(v, 0, m, airy[i], length, c.points));
      const double width = 0.05 * (airy[0] - m);
      const auto s = solve_schrodinger_radial_near(v, 0, m, grid, airy[i], i, width);
      t.add({c.family, std::int64_t{i + 1}, std::int64_t{-1}, std::int64_t{s.nodes}, s.energy,
             airy[i], s.energy - airy[i], s.residual, s.converged});
      if (dump) {
        if (dump->columns.empty()) dump->columns = {"state", "r", "u"};
        for (std::size_t k = 0; k < s.r.size(); ++k) {
          dump->rows.push_back({static_cast<double>(i), s.r[k], s.u[k]});
        }
      }
    }
    return t;
  }
  throw DomainError("--family must be coulomb, coulomb+linear, bag or antiparticle-linear");
}

inline void write_dump(const Dump& d, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < d.columns.size(); ++i) f << (i ? "," : "") << d.columns[i];
  f << '\n';
  for (const auto& row : d.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      f << (i ? "," : "") << (i == 0 ? std::to_string(static_cast<int>(row[i])) : format_double(row[i]));
    }
    f << '\n';
  }
}

inline const char* seed_defaults_text() {
  return "energy --lambda 0.5 --n 1 --kappa -1 --mass 1 --format csv\n"
         "energy --lambda 0.5 --n 2 --kappa -1 --mass 1 --format csv\n"
         "shift --lambda 0.1 --mu 1e-6 --kappa0 -1 --n-max 3 --mass 1 --format csv\n"
         "scan --n-max 50 --N-max 10 --format csv\n"
         "solve --family coulomb --lambda 0.5 --kappa -1 --states 3 --mass 1 --points 20000 "
         "--spacing log --format csv\n"
         "solve --family coulomb+linear --lambda 0.5 --mu 1e-4 --kappa0 -1 --mass 1 "
         "--points 20000 --spacing log --format csv\n"
         "solve --family bag --M 20 --lambda 0.5 --kappa0 -1 --A 1 --r0 10 --mass 1 "
         "--points 20000 --spacing log --format csv\n"
         "solve --family antiparticle-linear --mu 0.5 --states 3 --mass 1 --points 20000 "
         "--spacing log --format csv\n"
         "ansatz --lambda 0.5 --mu 1e-4 --kappa0 -1 --mass 1 --points 20000 --format csv\n";
}

}  // namespace detail

/// Runs one invocation; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirac bound states with Coulomb plus linear confinement: energies, first-order "
               "shifts, preservation checks and radial solves. Tables go to stdout as CSV "
               "(17 significant digits) or JSON."};
  app.require_subcommand(0, 1);
  RunConfig c;
  bool seed = false;
  app.add_flag("--seed-defaults", seed, "Print complete flag sets for the reference scenarios");

  auto common = [&](CLI::App* s) {
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--output", c.output, "Write the table to this file instead of stdout");
    s->add_option("--mass", c.mass, "Particle mass m");
  };
  auto grid = [&](CLI::App* s) {
    s->add_option("--points", c.points, "Grid points");
    s->add_option("--spacing", c.spacing, "log or linear")->check(CLI::IsMember({"log", "linear"}));
    s->add_option("--r-min", c.r_min, "Innermost radius (default 1e-6 of the natural length)");
    s->add_option("--r-max", c.r_max, "Outermost radius (default: tail decayed by ~1e-15)");
  };

  auto* energy = app.add_subcommand(
      "energy", "Coulomb reference energies. Columns: n,kappa,E_dirac,E_schrodinger,E_preserved");
  common(energy);
  energy->add_option("--lambda", c.lambda, "Coulomb coupling");
  energy->add_option("--n", c.n, "Principal quantum number");
  energy->add_option("--kappa", c.kappa, "Dirac quantum number (default -n)");
  energy->add_option("--n-max", c.n_max, "Tabulate every level with n <= n-max");

  auto* shift = app.add_subcommand(
      "shift", "First-order confinement shifts. Columns: n,kappa,total,term_linear,"
               "term_spin_orbit,term_kinetic,preserved");
  common(shift);
  shift->add_option("--lambda", c.lambda, "Coulomb coupling");
  shift->add_option("--mu", c.mu, "Scalar confinement slope");
  shift->add_option("--kappa0", c.kappa0, "Reference kappa of the tuned time-like slope");
  shift->add_option("--n-max", c.n_max, "Largest n (default 3)");

  auto* scan = app.add_subcommand(
      "scan", "Integer uniqueness scan. Columns: n,kappa,N,physical. Exit 3 if the claim fails");
  common(scan);
  scan->add_option("--n-max", c.n_max, "Largest n (default 50)");
  scan->add_option("--N-max", c.N_max, "Largest N (default 10)");

  auto* solve = app.add_subcommand(
      "solve", "Numerical bound states. Columns: family,n,kappa,nodes,energy,reference,deviation,"
               "residual,converged. reference: Dirac-Coulomb energy (coulomb, bag), plus the "
               "first-order shift (coulomb+linear), Airy levels (antiparticle-linear)");
  common(solve);
  grid(solve);
  solve->add_option("--family", c.family, "coulomb | coulomb+linear | bag | antiparticle-linear")
      ->check(CLI::IsMember({"coulomb", "coulomb+linear", "bag", "antiparticle-linear"}));
  solve->add_option("--lambda", c.lambda, "Coulomb coupling");
  solve->add_option("--mu", c.mu, "Scalar confinement slope");
  solve->add_option("--nu", c.nu, "Time-like slope (default: tuned to kappa0)");
  solve->add_option("--kappa0", c.kappa0, "Reference kappa");
  solve->add_option("--kappa", c.kappa, "Solved kappa (default kappa0)");
  solve->add_option("--states", c.states, "Number of levels, lowest first");
  solve->add_option("--M", c.M, "Wall exponent of the bag family");
  solve->add_option("--r0", c.r0, "Wall radius of the bag family (default 5/(lambda m))");
  solve->add_option("--A", c.A, "Wall strength of the bag family (default m), must be > 0");
  solve->add_flag("--with-coulomb", c.with_coulomb, "antiparticle-linear: add +lambda/r");
  solve->add_option("--dump-wavefunction", c.dump_wavefunction, "Write sampled r,f,g to a file");

  auto* ansatz = app.add_subcommand(
      "ansatz", "Closed-form state report: parameters, gamma consistency, norm and residual");
  common(ansatz);
  ansatz->add_option("--lambda", c.lambda, "Coulomb coupling");
  ansatz->add_option("--mu", c.mu, "Scalar confinement slope (>= 0)");
  ansatz->add_option("--kappa0", c.kappa0, "Reference kappa (< 0)");
  ansatz->add_option("--nu", c.nu, "Override the tuned time-like slope");
  ansatz->add_option("--points", c.points, "Grid points for the residual");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : domain_error;
  }

  try {
    if (seed) {
      out << detail::seed_defaults_text();
      return ok;
    }
    detail::validate_common(c);
    Table table;
    detail::Dump dump;
    if (energy->parsed()) {
      table = detail::cmd_energy(c);
    } else if (shift->parsed()) {
      table = detail::cmd_shift(c);
    } else if (scan->parsed()) {
      table = detail::cmd_scan(c);
    } else if (solve->parsed()) {
      table = detail::cmd_solve(c, c.dump_wavefunction.empty() ? nullptr : &dump);
    } else if (ansatz->parsed()) {
      table = detail::cmd_ansatz(c);
    } else {
      err << app.help();
      return domain_error;
    }
    std::ostringstream text;
    if (c.format == "json") {
      write_json(table, text);
    } else {
      write_csv(table, text);
    }
    if (c.output.empty()) {
      out << text.str();
    } else {
      std::ofstream f(c.output, std::ios::binary);
      if (!f) throw DomainError("cannot open " + c.output + " for writing");
      f << text.str();
    }
    if (!c.dump_wavefunction.empty()) detail::write_dump(dump, c.dump_wavefunction);
    return ok;
  } catch (const ClaimViolation& e) {
    err << "error: " << e.what() << '\n';
    return claim_violation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return domain_error;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return non_convergence;
  }
}

}  // namespace confdirac::cli
