// Copyright 2026 The hlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: hlearn_acceptance <path-to-hlearn-cli> <scratch-dir>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hlearn/hlearn.hpp"
#include "hlearn/oracle_inspector.hpp"
#include "hlearn/report.hpp"

using namespace hlearn;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_dir;
int g_failures = 0;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void report(int id, bool ok, const std::string& detail) {
  std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << detail << std::endl;
  if (!ok) ++g_failures;
}

std::string fmt(double v) { return format_double(v); }

int run_cli(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = "\"" + g_cli + "\" " + args + " > \"" + stdout_file.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const fs::path& p) { return Json::parse(slurp(p)); }

// Least-squares slope of log t_tot against log(1/eps).
double fit_slope(const std::vector<double>& eps, const std::vector<double>& cost) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double x = std::log(1.0 / eps[i]), y = std::log(cost[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

struct SweepRows {
  std::vector<double> eps, t_tot;
  std::vector<int> heisenberg, sql, success;
};

SweepRows read_sweep(const fs::path& p) {
  SweepRows rows;
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() < 8) continue;
    rows.eps.push_back(std::stod(f[0]));
    rows.t_tot.push_back(std::stod(f[1]));
    rows.heisenberg.push_back(std::stoi(f[5]));
    rows.sql.push_back(std::stoi(f[6]));
    rows.success.push_back(std::stoi(f[7]));
  }
  return rows;
}

SparseHamiltonian scaled_to_linf(SparseHamiltonian h, double target) {
  return h * (target / h.max_abs());
}

void criterion_1() {
  Stopwatch sw;
  CheckSpec spec;
  spec.name = "long_time_exact";
  spec.T_values = {0.05, 1.0};
  const CheckReport r = run_check(spec);
  const double deviation = r.max_violation + 1e-10;  // the check subtracts its 1e-10 tolerance
  const double secs = sw.seconds();
  report(1, r.pass && deviation <= 1e-10 && r.trials == 200 && secs < 10.0,
         "max Frobenius deviation " + fmt(deviation) + " over " + std::to_string(r.trials) + " instances, " +
             fmt(secs) + " s");
}

void criterion_2_3() {
  Stopwatch sw;
  bool all = true;
  std::string failed;
  CheckReport span;
  for (const auto& name : check_names()) {
    CheckSpec spec;
    spec.name = name;
    spec.trials = 200;
    spec.slack = 1e-9;
    const CheckReport r = run_check(spec);
    std::cout << "  check " << name << " max_violation " << fmt(r.max_violation) << " skipped " << r.skipped
              << (r.pass ? " pass" : " FAIL") << "\n";
    if (!r.pass) {
      all = false;
      failed += " " + name;
    }
    if (name == "span_4m") span = r;
  }
  const double secs = sw.seconds();
  report(2, all && secs < 120.0,
         std::to_string(check_names().size()) + " checks, slack 1e-9, 200 trials each, " + fmt(secs) + " s" +
             (failed.empty() ? "" : ", failed:" + failed));
  report(3, span.pass && span.span_size_ok && span.max_offspan <= 1e-10 && span.skipped < span.trials,
         "span sizes within 4^m: " + std::string(span.span_size_ok ? "yes" : "no") + ", max off-span mass " +
             fmt(span.max_offspan) + ", skipped " + std::to_string(span.skipped) + "/" +
             std::to_string(span.trials));
}

void criterion_4() {
  int ok = 0;
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng rng(derive_seed(4, {trial}));
    const unsigned n = 1 + static_cast<unsigned>(uniform_below(rng, 3));
    const std::size_t labels = (std::size_t{1} << (2 * n)) - 1;
    const std::size_t m = std::min<std::size_t>(1 + uniform_below(rng, 3), labels);
    const double eps = 0.01 * std::pow(10.0, uniform01(rng));
    const SparseHamiltonian a = scaled_to_linf(random_sparse_hamiltonian(n, m, rng(), 1.0), eps * (0.2 + 0.8 * uniform01(rng)));
    const CoefficientEstimate est =
        sparse_ham_learn(known_evolution(a), m, eps, 0.05, rng(), ProbeSettings{AccessMode::exact, 0.0});
    const double err = linf_distance(est.estimate, a);
    worst = std::max(worst, err / eps);
    ok += err <= eps / 8;
  }
  report(4, ok >= 95, std::to_string(ok) + "/100 within eps/8, worst error " + fmt(worst) + " eps");
}

void criterion_5() {
  int ok = 0;
  bool formulas = true;
  double worst = 0.0, max_copies = 0.0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng rng(derive_seed(5, {trial}));
    const unsigned n = 2;
    const std::size_t m = 1 + uniform_below(rng, 2);
    const double T = 0.05 + 0.95 * uniform01(rng);
    const RegimeParams p = regime_params(m, n, T, 0, Regime::log_sparse);
    const double eps = p.literal_eta_sw / (1.0 + 7.0 * uniform01(rng));
    // Synthetic W on at most s labels, scaled inside both norm promises.
    const std::size_t labels = std::min<std::size_t>(p.s, 15);
    SparseHamiltonian w = random_sparse_hamiltonian(n, 1 + uniform_below(rng, labels), rng(), 1.0);
    const double fro = coefficient_norms(w).l2, op = hermitian_operator_norm(to_dense(w));
    w = w * ((0.2 + 0.7 * uniform01(rng)) * std::min(p.c_f * eps / fro, p.c_inf * eps / op));
    const IntegerEvolResult r =
        integer_evol_learn(known_generator_access(w, 2.0 * std::numbers::pi * uniform01(rng)), p.s, p.c_f, p.c_inf,
                           p.c, eps, 0.05, rng(), ProbeSettings{AccessMode::exact, 0.0});
    const auto t_expected = static_cast<std::uint64_t>(std::floor(p.c / (10.0 * p.c_f * p.c_inf * eps)));
    const double td = static_cast<double>(t_expected);
    const double dt_expected = p.c_f * p.c_inf * td * td * eps * eps;
    formulas = formulas && r.t == t_expected && std::abs(r.delta_t - dt_expected) <= 1e-12 * dt_expected;
    max_copies = std::max(max_copies, r.copies);
    const double err = coefficient_norms(w - r.estimate).l2;
    worst = std::max(worst, err / (p.c * eps));
    ok += err <= p.c * eps;
  }
  report(5, ok >= 95 && formulas,
         std::to_string(ok) + "/100 within c eps (exact amplitudes; nominal copies up to " + fmt(max_copies) +
             "), worst " + fmt(worst) + " c eps, t and delta_t " + (formulas ? "match" : "DO NOT match"));
}

void criterion_6() {
  int ok = 0;
  double worst = 0.0;
  const double eps = 0.1;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng rng(derive_seed(6, {trial}));
    const SparseHamiltonian a = random_sparse_hamiltonian(2, 2, rng(), 1.0);
    SparseHamiltonian d = random_sparse_hamiltonian(2, 1 + uniform_below(rng, 2), rng(), 1.0);
    d = scaled_to_linf(d, eps);
    const SparseHamiltonian base = a - d;
    EvolutionOracle oracle(a, 1.0);
    const RegimeParams p = regime_params(2, 2, 1.0, 0, Regime::log_sparse);
    const CoefficientEstimate est = sql_learn(oracle, base, 2, eps, p, 0.05, rng(), ProbeSettings{AccessMode::exact, 0.0});
    const double err = linf_distance(est.estimate, d);
    worst = std::max(worst, err);
    ok += err <= eps / 4 && oracle.ledger().t_min >= 1.0 && oracle.violations() == 0;
  }
  report(6, ok >= 95, std::to_string(ok) + "/100 within eps/4 = 0.025, worst error " + fmt(worst));
}

double literal_eta_sw(std::size_t m, unsigned n, double T) {
  return regime_params(m, n, T, 0, Regime::log_sparse).literal_eta_sw;
}

void criterion_7() {
  const double eps = 1.0 / 64;
  struct Case {
    unsigned n;
    std::size_t m;
    std::uint64_t seed;
  };
  bool all = true;
  double slowest = 0.0;
  int runs = 0;
  for (const Case& c : {Case{1, 1, 1}, Case{1, 2, 2}, Case{2, 1, 3}, Case{2, 2, 4}, Case{2, 2, 5}}) {
    const fs::path ham = g_dir / ("c7_" + std::to_string(runs) + ".txt");
    const fs::path out = g_dir / ("c7_" + std::to_string(runs) + ".json");
    run_cli("gen --n " + std::to_string(c.n) + " --m " + std::to_string(c.m) + " --seed " + std::to_string(c.seed) +
                " --out \"" + ham.string() + "\"",
            g_dir / "c7_gen.log");
    // rho lifts the switch threshold to 2^-5, so only the last round is Heisenberg.
    const double rho = 1.01 * (2.0 * eps) / literal_eta_sw(c.m, c.n, 1.0);
    Stopwatch sw;
    const int code = run_cli("learn --in \"" + ham.string() + "\" --m " + std::to_string(c.m) +
                                 " --T 1 --epsilon " + fmt(eps) + " --rho " + fmt(rho) + " --seed " +
                                 std::to_string(c.seed) + " --out \"" + out.string() + "\"",
                             g_dir / "c7_learn.log");
    const double secs = sw.seconds();
    slowest = std::max(slowest, secs);
    const Json j = read_json(out);
    bool heis = false, sql = false;
    for (const auto& it : j["iterations"]) (it["branch"] == "heisenberg" ? heis : sql) = true;
    const bool ok = code == 0 && j["final_error"].get<double>() <= eps && j["halving_ok"].get<bool>() &&
                    j["ledger"]["t_min"].get<double>() == 1.0 && j["violations"].get<std::uint64_t>() == 0 &&
                    j["params"]["rho"].get<double>() == rho && heis && sql && secs < 300.0;
    std::cout << "  learn n=" << c.n << " m=" << c.m << " seed=" << c.seed << " rho=" << fmt(rho)
              << " final_error=" << fmt(j["final_error"].get<double>()) << " halving="
              << j["halving_ok"].get<bool>() << " t_min=" << fmt(j["ledger"]["t_min"].get<double>())
              << " violations=" << j["violations"].get<std::uint64_t>() << " " << fmt(secs) << " s"
              << (ok ? "" : " FAIL") << "\n";
    all = all && ok;
    ++runs;
  }
  report(7, all, std::to_string(runs) + " runs at T=1, eps=2^-6, both branches, slowest " + fmt(slowest) + " s");
}

struct SlopePair {
  int exit_h = -1, exit_s = -1;
  bool pure = false;
  double heisenberg = NAN, sql = NAN;
};

// Heisenberg-only and forced-SQL sweeps of one generated instance.
SlopePair sweep_slopes(unsigned n, std::size_t m, double T, std::uint64_t seed) {
  const std::string eps_list = "0.0625,0.03125,0.015625,0.0078125,0.00390625,0.001953125";
  const std::string tag = "c8_s" + std::to_string(seed);
  const fs::path ham = g_dir / (tag + ".txt");
  run_cli("gen --n " + std::to_string(n) + " --m " + std::to_string(m) + " --seed " + std::to_string(seed) +
              " --out \"" + ham.string() + "\"",
          g_dir / (tag + "_gen.log"));
  // rho puts the switch threshold just above 1 so every round is Heisenberg.
  const double rho = 1.01 / literal_eta_sw(m, n, T);
  const fs::path heis_csv = g_dir / (tag + "_heisenberg.csv"), sql_csv = g_dir / (tag + "_sql.csv");
  const std::string common = "sweep --in \"" + ham.string() + "\" --m " + std::to_string(m) + " --T " + fmt(T) +
                             " --epsilons " + eps_list + " --seed " + std::to_string(seed) + " --mode exact";
  SlopePair out;
  out.exit_h = run_cli(common + " --rho " + fmt(rho) + " --out \"" + heis_csv.string() + "\"", g_dir / (tag + "_h.log"));
  out.exit_s = run_cli(common + " --sql-only --out \"" + sql_csv.string() + "\"", g_dir / (tag + "_s.log"));
  const SweepRows h = read_sweep(heis_csv), s = read_sweep(sql_csv);
  out.pure = h.eps.size() == 6 && s.eps.size() == 6;
  for (std::size_t i = 0; out.pure && i < 6; ++i) {
    out.pure = h.sql[i] == 0 && h.heisenberg[i] > 0 && s.heisenberg[i] == 0 && h.success[i] == 1 && s.success[i] == 1;
  }
  if (out.pure) {
    out.heisenberg = fit_slope(h.eps, h.t_tot);
    out.sql = fit_slope(s.eps, s.t_tot);
  }
  return out;
}

// Random instances at fixed (n, m, T, rho) scatter in the six-point window
// because support sizes jump between rounds; the verdict pools them with
// per-instance intercepts, which on a shared epsilon grid is the mean slope.
void criterion_8() {
  Stopwatch sw;
  const double T = 0.05;
  const std::uint64_t instances = 8;
  bool runs_ok = true;
  double sum_h = 0.0, sum_s = 0.0;
  std::ostringstream per_seed;
  for (std::uint64_t seed = 1; seed <= instances; ++seed) {
    const SlopePair r = sweep_slopes(2, 2, T, seed);
    runs_ok = runs_ok && r.exit_h == 0 && r.exit_s == 0 && r.pure;
    sum_h += r.heisenberg;
    sum_s += r.sql;
    per_seed << "  seed " << seed << ": Heisenberg slope " << fmt(r.heisenberg) << ", forced-SQL slope " << fmt(r.sql)
             << "\n";
  }
  std::cout << per_seed.str();
  const double pooled_h = sum_h / static_cast<double>(instances), pooled_s = sum_s / static_cast<double>(instances);
  const double secs = sw.seconds();
  const bool ok = runs_ok && pooled_h >= 0.8 && pooled_h <= 1.3 && pooled_s >= 1.7 && pooled_s <= 2.3 && secs < 900.0;
  report(8, ok,
         "n=2 m=2 T=0.05, " + std::to_string(instances) + " instances pooled: Heisenberg slope " + fmt(pooled_h) +
             ", forced-SQL slope " + fmt(pooled_s) + ", all runs succeeded: " + (runs_ok ? "yes" : "no") + ", " +
             fmt(secs) + " s");
}

void criterion_9() {
  const int trials = 200;
  const double delta = 0.1, eps = 0.05;
  const double limit = delta + 3.0 * std::sqrt(delta * (1.0 - delta) / trials);
  int fail_linf = 0, fail_l2 = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(9, {static_cast<std::uint64_t>(trial)}));
    const SparseHamiltonian a = random_sparse_hamiltonian(2, 2, rng(), 1.0);
    const double t = 0.2 + 1.3 * uniform01(rng);
    const StateAccess state =
        choi_amplitudes(expm_i(a, t), ProbeSettings{AccessMode::sampled, 0.0}, rng());
    const PauliExpansion truth = detail::phase_corrected(to_expansion(state));
    const TomographyResult linf = sparse_tomo_linf(state, 4, eps, delta, rng());
    const TomographyResult l2 = sparse_tomo_l2(state, 4, eps, delta, rng());
    fail_linf += linf_distance(linf.coefficients, truth) > eps;
    fail_l2 += coefficient_norms(l2.coefficients - truth).l2 > eps;
  }
  const double r1 = static_cast<double>(fail_linf) / trials, r2 = static_cast<double>(fail_l2) / trials;
  report(9, r1 <= limit && r2 <= limit,
         "failure rates linf " + fmt(r1) + ", l2 " + fmt(r2) + " over " + std::to_string(trials) +
             " sampled trials (limit " + fmt(limit) + ")");
}

void criterion_10() {
  const fs::path ham = g_dir / "c10.txt";
  run_cli("gen --n 2 --m 2 --seed 10 --out \"" + ham.string() + "\"", g_dir / "c10_gen.log");
  const std::vector<std::pair<std::string, std::string>> commands{
      {"learn", "learn --in \"" + ham.string() + "\" --m 2 --T 1 --epsilon 0.0625 --rho 20000 --mode sampled --seed 10"},
      {"learn_noisy", "learn --in \"" + ham.string() + "\" --m 2 --T 1 --epsilon 0.125 --mode noisy:0.001 --seed 11"},
      {"sweep", "sweep --in \"" + ham.string() + "\" --m 2 --T 0.5 --epsilons 0.25,0.125,0.0625,0.03125 --mode sampled --seed 12"},
      {"verify", "verify --trials 30 --seed 13"},
  };
  bool all = true;
  std::string detail;
  for (const auto& [name, args] : commands) {
    std::string reports[2], outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = g_dir / ("c10_" + name + "_" + std::to_string(rep) + ".out");
      const fs::path log = g_dir / ("c10_" + name + "_" + std::to_string(rep) + ".log");
      run_cli(args + " --out \"" + out.string() + "\"", log);
      reports[rep] = slurp(out);
      outputs[rep] = slurp(log);
    }
    const bool same = !reports[0].empty() && reports[0] == reports[1] && outputs[0] == outputs[1];
    detail += " " + name + (same ? "=identical" : "=DIFFERENT");
    all = all && same;
  }
  report(10, all, "repeated runs:" + detail);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: hlearn_acceptance <hlearn-cli> <scratch-dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_dir = argv[2];
  fs::create_directories(g_dir);
  try {
    criterion_1();
    criterion_2_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
  } catch (const std::exception& e) {
    std::cout << "acceptance aborted: " << e.what() << std::endl;
    return 1;
  }
  std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criteria failed")
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}
