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

// Command-line front end: gen, learn, sweep, verify.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hlearn/hlearn.hpp"
#include "hlearn/oracle_inspector.hpp"
#include "hlearn/report.hpp"

namespace {

constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

hlearn::ProbeSettings parse_mode(const std::string& text) {
  hlearn::ProbeSettings p;
  if (text == "exact") return p;
  if (text == "sampled") {
    p.mode = hlearn::AccessMode::sampled;
    return p;
  }
  const std::string prefix = "noisy:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    try {
      std::size_t used = 0;
      p.noise_sigma = std::stod(rest, &used);
      if (used != rest.size() || !(p.noise_sigma >= 0.0)) throw std::invalid_argument(rest);
    } catch (const std::exception&) {
      throw UsageError("invalid noise level in --mode " + text);
    }
    return p;
  }
  throw UsageError("--mode must be exact, noisy:<sigma> or sampled");
}

std::string num(double v) { return std::isfinite(v) ? hlearn::format_double(v) : std::string("nan"); }

void write_text(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw hlearn::Error("cannot write " + *path);
  out << text;
  if (!out) throw hlearn::Error("failed writing " + *path);
}

struct LearnArgs {
  unsigned n = 2;
  std::size_t m = 1;
  double T = 1.0;
  int K = 2;
  std::string regime = "log";
  double rho = 1.0;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::string mode = "exact";
  std::optional<std::string> in;
  std::optional<std::string> out;
  bool sql_only = false;
};

void add_run_options(CLI::App* cmd, LearnArgs& a) {
  cmd->add_option("--n", a.n, "qubit count when generating the hidden Hamiltonian")->check(CLI::Range(1u, 8u));
  cmd->add_option("--m", a.m, "sparsity promise")->required()->check(CLI::Range(std::size_t{1}, std::size_t{16}));
  cmd->add_option("--T", a.T, "minimum evolution time")->check(CLI::PositiveNumber);
  cmd->add_option("--K", a.K, "poly regime exponent")->check(CLI::Range(2, 16));
  cmd->add_option("--regime", a.regime, "log or poly")->check(CLI::IsMember({"log", "poly"}));
  cmd->add_option("--rho", a.rho, "constant relaxation factor (>= 1)")->check(CLI::Range(1.0, 1e12));
  cmd->add_option("--delta", a.delta, "failure probability")->check(CLI::Range(1e-12, 0.999));
  cmd->add_option("--seed", a.seed, "random seed")->required();
  cmd->add_option("--mode", a.mode, "exact | noisy:<sigma> | sampled");
  cmd->add_option("--in", a.in, "hidden Hamiltonian file")->check(CLI::ExistingFile);
  cmd->add_option("--out", a.out, "report path (stdout if omitted)");
  cmd->add_flag("--sql-only", a.sql_only, "force the standard-quantum-limit branch");
}

hlearn::SparseHamiltonian load_hidden(const LearnArgs& a) {
  if (a.in) return hlearn::read_hamiltonian_file(*a.in);
  return hlearn::random_sparse_hamiltonian(a.n, a.m, a.seed, 1.0);
}

struct RunOutcome {
  hlearn::LearnReport report;
  bool success = false;
};

RunOutcome run_learn(const LearnArgs& a, const hlearn::SparseHamiltonian& hidden, double eps) {
  const hlearn::Regime regime = a.regime == "log" ? hlearn::Regime::log_sparse : hlearn::Regime::poly_sparse;
  if (regime == hlearn::Regime::poly_sparse && (a.K > 3 || a.m > 4)) {
    throw UsageError("poly regime runs are limited to K <= 3 and m <= 4");
  }
  if (hidden.support_size() > a.m) throw UsageError("hidden Hamiltonian has more than m terms");
  const hlearn::ProbeSettings probe = parse_mode(a.mode);
  const auto params = hlearn::regime_params(a.m, hidden.num_qubits(), a.T, a.K, regime, a.rho);
  hlearn::EvolutionOracle oracle(hidden, a.T);
  hlearn::LearnOptions opts;
  opts.probe = probe;
  opts.policy = a.sql_only ? hlearn::BranchPolicy::sql_only : hlearn::BranchPolicy::automatic;
  opts.true_error = [&oracle](const hlearn::SparseHamiltonian& est) {
    return hlearn::linf_distance(hlearn::OracleInspector::hidden(oracle), est);
  };
  RunOutcome out{hlearn::main_learn(oracle, a.m, eps, params, a.delta, a.seed, opts), false};
  out.success = out.report.final_error <= eps && out.report.ledger.t_min == a.T && out.report.violations == 0;
  return out;
}

/// Least-squares slope of log(y) against log(x).
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = k * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  return (k * sxy - sx * sy) / den;
}

int cmd_gen(unsigned n, std::size_t m, std::uint64_t seed, double cap, const std::optional<std::string>& out) {
  const auto h = hlearn::random_sparse_hamiltonian(n, m, seed, cap);
  const auto norms = hlearn::coefficient_norms(h);
  std::ostringstream text;
  text << "# n=" << n << " m=" << m << " seed=" << seed << "\n";
  hlearn::write_hamiltonian(text, h);
  write_text(out, text.str());
  std::ostream& summary = out ? std::cout : std::cerr;
  summary << "supp_P " << h.support_size() << "\nl1 " << num(norms.l1) << "\nl2 " << num(norms.l2) << "\nlinf "
          << num(norms.linf) << "\noperator " << num(hlearn::hamiltonian_operator_norm(h)) << "\n";
  return 0;
}

int cmd_learn(const LearnArgs& a, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw UsageError("--epsilon must lie in (0, 1)");
  const auto hidden = load_hidden(a);
  const RunOutcome run = run_learn(a, hidden, eps);
  write_text(a.out, hlearn::to_json(run.report).dump(2) + "\n");
  if (!run.success) {
    std::cerr << "learn: final error " << num(run.report.final_error) << " vs epsilon " << num(eps)
              << ", t_min " << num(run.report.ledger.t_min) << "\n";
  }
  return run.success ? 0 : 1;
}

int cmd_sweep(const LearnArgs& a, std::vector<double> eps_list) {
  if (eps_list.size() < 4) throw UsageError("sweep needs at least 4 epsilon values");
  for (double e : eps_list) {
    if (!(e > 0.0 && e < 1.0)) throw UsageError("every epsilon must lie in (0, 1)");
  }
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
  const auto hidden = load_hidden(a);
  std::ostringstream csv;
  csv << "epsilon,t_tot,t_min,queries,final_error,heisenberg_iters,sql_iters,success\n";
  std::vector<double> inv_all, t_all, inv_h, t_h;
  bool all_ok = true;
  // Each point owns its oracle, so the runs share nothing mutable.
  std::vector<std::future<RunOutcome>> pending;
  for (double eps : eps_list) {
    pending.push_back(std::async(std::launch::async, [&a, &hidden, eps] { return run_learn(a, hidden, eps); }));
  }
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const double eps = eps_list[i];
    const RunOutcome run = pending[i].get();
    int heis = 0, sql = 0;
    for (const auto& it : run.report.iterations) (it.heisenberg ? heis : sql) += 1;
    const auto& l = run.report.ledger;
    csv << num(eps) << ',' << num(l.t_tot) << ',' << num(l.t_min) << ',' << num(l.queries) << ','
        << num(run.report.final_error) << ',' << heis << ',' << sql << ',' << (run.success ? 1 : 0) << '\n';
    all_ok = all_ok && run.success;
    inv_all.push_back(1.0 / eps);
    t_all.push_back(l.t_tot);
    if (sql == 0) {
      inv_h.push_back(1.0 / eps);
      t_h.push_back(l.t_tot);
    }
  }
  const auto slope = loglog_slope(inv_all, t_all);
  const auto slope_h = loglog_slope(inv_h, t_h);
  csv << "# slope " << (slope ? num(*slope) : "nan") << "\n";
  csv << "# heisenberg-slope " << (slope_h ? num(*slope_h) : "nan") << " points " << inv_h.size() << "\n";
  write_text(a.out, csv.str());
  if (a.out) {
    std::cout << "slope " << (slope ? num(*slope) : "nan") << "\nheisenberg-slope "
              << (slope_h ? num(*slope_h) : "nan") << "\n";
  }
  return all_ok ? 0 : 1;
}

struct VerifyArgs {
  std::vector<std::string> checks;
  int trials = 200;
  std::uint64_t seed = 1;
  double slack = 1e-9;
  double bound_scale = 1.0;
  std::optional<std::string> out;
};

int cmd_verify(const VerifyArgs& v) {
  std::vector<std::string> names = v.checks.empty() ? hlearn::check_names() : v.checks;
  const auto known = hlearn::check_names();
  for (const auto& name : names) {
    if (std::find(known.begin(), known.end(), name) == known.end()) throw UsageError("unknown check '" + name + "'");
  }
  hlearn::Json reports = hlearn::Json::array();
  bool all = true;
  std::ostringstream table;
  table << "check              trials  skipped  max_violation            pass\n";
  for (const auto& name : names) {
    hlearn::CheckSpec spec;
    spec.name = name;
    spec.trials = v.trials;
    spec.seed = v.seed;
    spec.slack = v.slack;
    spec.bound_scale = v.bound_scale;
    const hlearn::CheckReport r = hlearn::run_check(spec);
    all = all && r.pass;
    reports.push_back(hlearn::to_json(r));
    std::string row = name;
    row.resize(19, ' ');
    std::string trials = std::to_string(r.trials);
    trials.resize(8, ' ');
    std::string skipped = std::to_string(r.skipped);
    skipped.resize(9, ' ');
    std::string viol = num(r.max_violation);
    viol.resize(25, ' ');
    table << row << trials << skipped << viol << (r.pass ? "yes" : "NO") << '\n';
  }
  const hlearn::Json doc{{"schema", hlearn::kReportSchema},
                         {"seed", v.seed},
                         {"slack", v.slack},
                         {"bound_scale", v.bound_scale},
                         {"checks", reports},
                         {"pass", all}};
  if (v.out) {
    write_text(v.out, doc.dump(2) + "\n");
    std::cout << table.str();
  } else {
    std::cout << table.str() << doc.dump(2) << "\n";
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian learning under a minimum evolution time"};
  app.require_subcommand(1);

  unsigned gen_n = 2;
  std::size_t gen_m = 2;
  std::uint64_t gen_seed = 0;
  double gen_cap = 1.0;
  std::optional<std::string> gen_out;
  auto* gen = app.add_subcommand("gen", "generate a random sparse Hamiltonian");
  gen->add_option("--n", gen_n, "qubit count")->required()->check(CLI::Range(1u, 8u));
  gen->add_option("--m", gen_m, "number of terms")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "random seed")->required();
  gen->add_option("--norm-cap", gen_cap, "operator norm cap")->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "output file (stdout if omitted)");

  LearnArgs learn_args;
  double learn_eps = 0.1;
  auto* learn = app.add_subcommand("learn", "run the learner against a hidden Hamiltonian");
  add_run_options(learn, learn_args);
  learn->add_option("--epsilon", learn_eps, "target l-infinity accuracy")->required();

  LearnArgs sweep_args;
  std::vector<double> sweep_eps;
  auto* sweep = app.add_subcommand("sweep", "total evolution time versus accuracy");
  add_run_options(sweep, sweep_args);
  sweep->add_option("--epsilons", sweep_eps, "comma-separated accuracies")->required()->delimiter(',');

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "run the numerical inequality checks");
  verify->add_option("--check", verify_args.checks, "check name (repeatable; default all)");
  verify->add_option("--trials", verify_args.trials, "trials per check")->check(CLI::Range(1, 1000000));
  verify->add_option("--seed", verify_args.seed, "random seed");
  verify->add_option("--slack", verify_args.slack, "allowed violation")->check(CLI::NonNegativeNumber);
  verify->add_option("--bound-scale", verify_args.bound_scale, "multiplier on every bound (negative control)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--out", verify_args.out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*gen) {
      const std::size_t labels = (std::size_t{1} << (2 * gen_n)) - 1;
      if (gen_m > labels) throw UsageError("--m exceeds the number of non-identity labels");
      return cmd_gen(gen_n, gen_m, gen_seed, gen_cap, gen_out);
    }
    if (*learn) return cmd_learn(learn_args, learn_eps);
    if (*sweep) return cmd_sweep(sweep_args, sweep_eps);
    if (*verify) return cmd_verify(verify_args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const hlearn::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsageError;
  } catch (const hlearn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsageError;
}
