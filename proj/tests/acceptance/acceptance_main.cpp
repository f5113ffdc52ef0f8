// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "confdirac/confdirac.hpp"
#include "oracles.hpp"

using namespace confdirac;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct CommandResult {
  int status;
  std::string out;
};

CommandResult run_command(const std::string& args) {
  const std::string cmd = std::string("\"") + CONFDIRAC_CLI + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, {}};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

constexpr double m = 1.0;
constexpr std::array<double, 3> lambdas = {0.1, 0.3, 0.5};
constexpr std::array<int, 3> kappa0s = {-1, -2, -3};

BoundState preserved_level(double lambda, double mu, int kappa0) {
  const auto p = build_ansatz(lambda, mu, kappa0, m);
  const auto pot = PotentialSpec::coulomb_linear(lambda, mu, p.nu());
  const auto grid = dirac_grid(pot, kappa0, m, p.energy);
  return find_bound_state_near(pot, kappa0, m, grid, p.energy, 0, 1e-4);
}

void closed_form_preservation(Outcome& o) {
  double worst_res = 0.0, worst_e = 0.0;
  for (double lam : lambdas) {
    for (int k0 : kappa0s) {
      for (double mu : {1e-6, 1e-4, 1e-2}) {
        const auto p = build_ansatz(lam, mu, k0, m);
        worst_res = std::max(worst_res, radial_residual(p, ansatz_grid(p)));
        const double exact = m * std::sqrt(1.0 - lam * lam / (k0 * k0));
        worst_e = std::max(worst_e, std::abs(p.energy - exact) / exact);
      }
    }
  }
  o.detail << "max residual " << worst_res << ", max |E - m sqrt(1 - lambda^2/kappa0^2)|/E " << worst_e;
  o.require(worst_res <= 1e-10, "residual <= 1e-10");
  o.require(worst_e <= 4.0 * std::numeric_limits<double>::epsilon(), "energy to machine precision");
}

void numerical_preservation(Outcome& o) {
  double worst = 0.0, spread = 0.0;
  for (double lam : {0.3, 0.5}) {
    for (int k0 : {-1, -2}) {
      const double e0 = dirac_coulomb_energy(-k0, k0, lam, m);
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (double mu : {1e-5, 1e-4, 1e-3}) {
        const double e = preserved_level(lam, mu, k0).energy;
        worst = std::max(worst, std::abs(e - e0));
        lo = std::min(lo, e);
        hi = std::max(hi, e);
      }
      spread = std::max(spread, hi - lo);
    }
  }
  o.detail << "max |E - E_coulomb| " << worst << " m, spread over mu in [1e-5, 1e-3] " << spread << " m";
  o.require(worst <= 1e-8 * m, "energy within 1e-8 m");
  o.require(spread < 1e-8 * m, "spread below 1e-8 m");
}

void first_order_law(Outcome& o) {
  // lambda = 0.1: the leading-order law carries an O(lambda^2) error of its own
  const double lam = 0.1;
  const std::vector<double> mus = {1e-6, 5e-7, 2.5e-7};
  double worst = 0.0;
  int checked = 0;
  for (int n = 1; n <= 3; ++n) {
    for (int k : enumerate_kappa(n)) {
      if (n == -k && k == -1) continue;  // the preserved level itself
      const auto st = shift_convergence_study(n, k, -1, lam, m, mus);
      worst = std::max(worst, std::abs(st.limit_slope / st.predicted_slope - 1.0));
      ++checked;
    }
  }
  const double coeff = first_order_shift(2, -1, -1, lam, 1.0, m).total / (lam / m);
  o.detail << checked << " states at lambda " << lam << ", worst relative deviation " << worst
           << ", (2,-1) coefficient " << coeff;
  o.require(checked == 8, "all non-preserved n <= 3 states");
  o.require(worst <= 0.01, "within 1%");
  o.require(std::abs(coeff - 2.625) <= 1e-12, "coefficient 2.625");
}

void oracle_equivalence(Outcome& o) {
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    for (int k : enumerate_kappa(n)) {
      for (int k0 : kappa0s) {
        for (double lam : {0.1, 0.3, 0.6}) {
          const auto closed = first_order_shift(n, k, k0, lam, 1e-4, m);
          const auto terms = shift_terms_from_expectations(n, k, k0, lam, 1e-4, m);
          const double scale = std::abs(terms.term_linear) + std::abs(terms.term_kinetic);
          worst = std::max(worst, std::abs(closed.total - terms.total) / scale);
        }
      }
    }
  }
  double anti = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int k : enumerate_kappa(n)) {
      const int ell = decompose_kappa(k).ell;
      const double q = oracle::hydrogen_anticommutator(n, ell, 0.6, m);
      anti = std::max(anti, std::abs(q / expectation_anticomm_p2_r(n, k, 0.6, m) - 1.0));
    }
  }
  o.detail << "closed form vs assembly " << worst << " relative; <{p^2,r}> identity vs quadrature "
           << anti;
  o.require(worst <= 1e-12, "1e-12 relative");
  o.require(anti <= 1e-6, "anticommutator identity");
}

void uniqueness(Outcome& o) {
  const auto rep = preservation_scan(50, 10);
  bool only_trivial = true;
  for (const auto& s : rep.solutions) only_trivial = only_trivial && s.N == 1 && std::abs(s.kappa) == s.n;
  const auto cli = run_command("scan --n-max 50 --N-max 10");
  o.detail << rep.points_checked << " points, " << rep.solutions.size() << " solutions, "
           << rep.sign_violations << " sign violations, CLI exit " << cli.status;
  o.require(rep.solutions.size() == 100 && only_trivial, "only N=1, kappa=+-n");
  o.require(rep.sign_violations == 0, "sign opposition");
  o.require(cli.status == 0, "scan exits 0");
}

void normalization(Outcome& o) {
  double worst = 0.0;
  for (double lam : lambdas) {
    for (int k0 : kappa0s) {
      for (double mu : {1e-6, 1e-4, 1e-2}) {
        worst = std::max(worst, std::abs(normalization_integral(build_ansatz(lam, mu, k0, m)).value - 1.0));
      }
    }
  }
  o.detail << "max |norm - 1| " << worst;
  o.require(worst <= 1e-8, "1e-8");
}

void antiparticle(Outcome& o) {
  double worst = 0.0;
  for (double mu : {0.1, 0.5}) {
    const auto airy = antiparticle_spectrum_airy(mu, m, 5);
    const SchrodingerPotential v{[mu](double r) { return 2.0 * mu * r; }, 0.0};
    const double length = std::cbrt(1.0 / (4.0 * mu * m));
    for (int k = 0; k < 5; ++k) {
      const auto grid = schrodinger_grid(v, 0, m, airy[k], length);
      const auto s = solve_schrodinger_radial_near(v, 0, m, grid, airy[k], k, 0.05 * (airy[0] - m));
      worst = std::max(worst, std::abs((s.energy - m) / (airy[k] - m) - 1.0));
    }
  }
  const double mu = 0.5, lam = 1e-3;
  const auto airy = antiparticle_spectrum_airy(mu, m, 1);
  const double length = std::cbrt(1.0 / (4.0 * mu * m));
  const SchrodingerPotential linear{[mu](double r) { return 2.0 * mu * r; }, 0.0};
  const SchrodingerPotential core{[mu, lam](double r) { return 2.0 * mu * r + lam / r; }, -lam};
  const auto grid = schrodinger_grid(linear, 0, m, airy[0], length);
  const auto a = solve_schrodinger_radial_near(linear, 0, m, grid, airy[0], 0, 0.1);
  const auto b = solve_schrodinger_radial_near(core, 0, m, grid, airy[0], 0, 0.1);
  std::vector<double> w(a.r.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = a.u[i] * a.u[i] / a.r[i];
  const double predicted = lam * integrate_on_grid(grid, a.r, w);
  const double shift = b.energy - a.energy;
  o.detail << "max Airy deviation " << worst << "; +lambda/r shift " << shift << " vs quadrature "
           << predicted;
  o.require(worst <= 1e-6, "Airy 1e-6");
  o.require(shift > 0.0 && predicted > 0.0, "positive shift");
  o.require(std::abs(shift / predicted - 1.0) <= 1e-2, "first-order shift");
}

void rescaling(Outcome& o) {
  double h_err = 0.0, pointwise = 0.0;
  for (double lam : {0.1, 0.5}) {
    for (int k0 : {-1, -2, -3}) {
      const double mu = 1e-3;
      const auto coulomb = build_ansatz(lam, 0.0, k0, m);
      const auto confined = build_ansatz(lam, mu, k0, m);
      RadialFunction v1 = [mu](double r) { return mu * r; };
      RadialFunction v2 = [nu = confined.nu()](double r) { return nu * r; };
      const auto grid = ansatz_grid(confined);
      const auto p = h_profile(v1, v2, grid, Branch::minus);
      double largest = 1.0, err = 0.0;
      for (std::size_t i = 0; i < p.r.size(); ++i) {
        const double exact = -0.5 * confined.alpha2 * (p.r[i] * p.r[i] - p.r[0] * p.r[0]);
        err = std::max(err, std::abs(p.h[i] - exact));
        largest = std::max(largest, std::abs(exact));
      }
      h_err = std::max(h_err, err / largest);
      const auto s = build_rescaled_state(sample_ansatz(coulomb, p.r), p);
      for (std::size_t i = 0; i < s.size(); ++i) {
        const auto x = evaluate_spinor(confined, s.r[i]);
        if (std::abs(x.f) < 1e-8 * confined.norm) continue;
        pointwise = std::max({pointwise, std::abs(s.f[i] / x.f - 1.0), std::abs(s.g[i] / x.g - 1.0)});
      }
    }
  }
  const double lam = 0.5;
  const double e0 = dirac_coulomb_energy(1, -1, lam, m);
  double bag_e = 0.0, bag_res = 0.0;
  for (double M : {20.0, 1000.0}) {
    const auto bag = bag_model_case(1.0, 5.0 / lam, M, lam, -1, m);
    PotentialSpec pot{[lam](double r) { return -lam / r; }, bag.v1, bag.v2, lam};
    const auto grid = dirac_grid(pot, -1, m, bag.energy);
    const double e = find_bound_state_near(pot, -1, m, grid, bag.energy, 0, 1e-6).energy;
    bag_e = std::max({bag_e, std::abs(e - e0), std::abs(bag.energy - e0)});
    bag_res = std::max(bag_res, bag.residual);
  }
  o.detail << "h vs -alpha^2 r^2/2 " << h_err << "; rescaled vs closed form " << pointwise
           << "; bag M=20,1000 |dE| " << bag_e << " m, residual " << bag_res;
  o.require(h_err <= 1e-10, "h profile 1e-10");
  o.require(pointwise <= 1e-8, "pointwise 1e-8");
  o.require(bag_e <= 1e-8 * m, "bag energy 1e-8 m");
  o.require(bag_res <= 1e-8, "bag residual 1e-8");
}

void negative_control(Outcome& o) {
  const double lam = 0.5, mu = 1e-3;
  const double e = dirac_coulomb_energy(2, -1, lam, m);
  const auto pot = PotentialSpec::coulomb(lam);
  const auto grid = dirac_grid(pot, -1, m, e);
  const auto s = find_bound_state_near(pot, -1, m, grid, e, 1, 1e-4);
  RadialFunction v1 = [mu](double r) { return mu * r; };
  const auto v2 = fine_tune_v2(v1, std::sqrt((m - e) / (m + e)));
  const auto rep = check_ratio_condition(s.state.f, s.state.g, v1, v2, s.state.r, Branch::minus);
  const auto rescaled = build_rescaled_state(s.state, h_profile(v1, v2, grid, Branch::minus));
  PotentialSpec perturbed{[lam](double r) { return -lam / r; }, v1, v2, lam};
  const double residual = dirac_residual(perturbed, -1, e, m, rescaled, 1e-6);
  o.detail << "2S constancy defect " << rep.constancy_defect << ", rescaled residual " << residual;
  o.require(rep.constancy_defect > 0.1, "defect > 0.1");
  o.require(residual > 1e-6, "residual test fails");
}

void determinism(Outcome& o) {
  const auto seeds = run_command("--seed-defaults");
  std::istringstream in(seeds.out);
  std::string line;
  int scenarios = 0, mismatched = 0, failed = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::string json = line;
    if (const auto at = json.find("--format csv"); at != std::string::npos) {
      json.replace(at, 12, "--format json");
    }
    for (const auto& args : {line, json}) {
      const auto a = run_command(args);
      const auto b = run_command(args);
      ++scenarios;
      if (a.status != 0 || a.out.empty()) ++failed;
      if (a.status != b.status || a.out != b.out) ++mismatched;
    }
  }
  o.detail << scenarios << " runs, " << mismatched << " differing, " << failed << " failing";
  o.require(seeds.status == 0 && scenarios >= 16, "seed scenarios listed");
  o.require(mismatched == 0, "byte-identical output");
  o.require(failed == 0, "every scenario succeeds");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"closed-form preservation", closed_form_preservation},
      {"numerical preservation", numerical_preservation},
      {"first-order shift law", first_order_law},
      {"oracle equivalence", oracle_equivalence},
      {"uniqueness scan", uniqueness},
      {"normalization", normalization},
      {"antiparticle spectrum", antiparticle},
      {"rescaling transform", rescaling},
      {"negative control", negative_control},
      {"determinism", determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << index << " (" << name
              << "): " << o.detail.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
