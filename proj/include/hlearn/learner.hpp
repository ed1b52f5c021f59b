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

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hlearn/control_emulation.hpp"
#include "hlearn/dense.hpp"
#include "hlearn/errors.hpp"
#include "hlearn/oracle.hpp"
#include "hlearn/pauli_polynomial.hpp"
#include "hlearn/random.hpp"
#include "hlearn/tomography.hpp"
#include "hlearn/truncation.hpp"

namespace hlearn {

enum class Regime { log_sparse, poly_sparse };

inline const char* regime_name(Regime r) { return r == Regime::log_sparse ? "log" : "poly"; }

struct RegimeParams {
  Regime regime = Regime::log_sparse;
  std::size_t m = 1;
  double T = 1.0;
  int K = 0;
  std::size_t s = 0;
  double c_f = 0.0;     // relaxed: literal / sqrt(rho)
  double c_inf = 0.0;   // relaxed: literal / sqrt(rho)
  double c = 0.0;
  double eta_sw = 0.0;  // c / (10 c_F c_inf), so rho times the literal value
  double rho = 1.0;
  double literal_c_f = 0.0;
  double literal_c_inf = 0.0;
  double literal_eta_sw = 0.0;
  /// Poly regime only: T exceeds m^{-1/K} / (16e).
  bool time_warning = false;
};

inline RegimeParams regime_params(std::size_t m, unsigned n, double T, int K, Regime regime, double rho = 1.0) {
  if (m < 1) throw DomainError("regime_params: m must be at least 1");
  if (!(T > 0.0)) throw DomainError("regime_params: T must be positive");
  if (!(rho >= 1.0)) throw DomainError("regime_params: rho must be at least 1");
  const double labels = std::pow(4.0, n) - 1.0;
  if (static_cast<double>(m) > labels) throw RegimeError("regime_params: m exceeds the number of Pauli labels");
  RegimeParams p;
  p.regime = regime;
  p.m = m;
  p.T = T;
  p.rho = rho;
  const double md = static_cast<double>(m);
  if (regime == Regime::log_sparse) {
    if (m > 16) throw RegimeError("regime_params: log regime needs 4^m to be representable (m <= 16)");
    p.s = std::size_t{1} << (2 * m);
    p.literal_c_f = 2.0 * std::numbers::pi * std::sqrt(md) * T;
    p.literal_c_inf = 2.0 * std::numbers::pi * md * T;
  } else {
    if (K < 2) throw RegimeError("regime_params: poly regime needs K >= 2");
    p.K = K;
    const int k = K - 1;
    p.s = static_cast<std::size_t>(k * std::pow(2.0 * md, k));
    p.literal_c_f = 2.0 * std::sqrt(md);
    p.literal_c_inf = 2.0 * md;
    p.time_warning = T > std::pow(md, -1.0 / K) / (16.0 * std::numbers::e) * (1.0 + 1e-12);
  }
  p.c = 1.0 / (256.0 * std::sqrt(md));
  p.literal_eta_sw = p.c / (10.0 * p.literal_c_f * p.literal_c_inf);
  p.c_f = p.literal_c_f / std::sqrt(rho);
  p.c_inf = p.literal_c_inf / std::sqrt(rho);
  p.eta_sw = p.c / (10.0 * p.c_f * p.c_inf);
  return p;
}

/// Source of one copy of e^{-iAt} plus the cost of repeating it.
struct EvolutionProvider {
  std::function<DenseOperator(double t)> prepare;
  std::function<void(double copies)> repeat;
};

/// Provider backed by a known Hamiltonian; free of oracle cost.
inline EvolutionProvider known_evolution(const SparseHamiltonian& a) {
  const DenseOperator ad = to_dense(a);
  return EvolutionProvider{[ad](double t) { return expm_i(ad, t); }, [](std::uint64_t) {}};
}

struct CoefficientEstimate {
  SparseHamiltonian estimate;
  double t = 0.0;
  double accuracy = 0.0;
  double copies = 0.0;
};

/// l-infinity learning of an m-sparse A with ||A||_linf <= eps from e^{-iAt},
/// t = 1/(32 m eps). `support_bound` caps the recovered support (default m).
inline CoefficientEstimate sparse_ham_learn(const EvolutionProvider& provider, std::size_t m, double eps, double delta,
                                            std::uint64_t seed, ProbeSettings probe = {},
                                            std::size_t support_bound = 0, const TomographyConfig& cfg = {}) {
  if (m < 1 || !(eps > 0.0)) throw DomainError("sparse_ham_learn: need m >= 1 and eps > 0");
  const double md = static_cast<double>(m);
  CoefficientEstimate out{SparseHamiltonian(1), 1.0 / (32.0 * md * eps), 0.0, 0};
  out.accuracy = 3.0 * md * out.t * out.t * eps * eps;
  const DenseOperator u = provider.prepare(out.t);
  out.estimate = SparseHamiltonian(u.n);
  const StateAccess state = choi_amplitudes(u, probe, derive_seed(seed, {0x7368u}));
  const std::size_t s = (support_bound == 0 ? m : support_bound) + 1;
  const TomographyResult tomo =
      sparse_tomo_linf(state, s, out.accuracy, delta, derive_seed(seed, {0x7369u}), cfg);
  for (const auto& [label, beta] : tomo.coefficients.terms()) {
    if (!label.is_identity()) out.estimate.set(label, -beta.imag() / out.t);
  }
  out.copies = tomo.copies;
  provider.repeat(out.copies - 1);
  return out;
}

/// Standard-quantum-limit learning of A - A_0 from evolutions of duration T
/// and T + t, t = 1/(16 sqrt m).
inline CoefficientEstimate sql_learn(EvolutionOracle& oracle, const SparseHamiltonian& base, std::size_t m, double eps,
                                     const RegimeParams& params, double delta, std::uint64_t seed,
                                     ProbeSettings probe = {}, const TomographyConfig& cfg = {}) {
  if (m < 1 || !(eps > 0.0)) throw DomainError("sql_learn: need m >= 1 and eps > 0");
  const double md = static_cast<double>(m);
  const double T = oracle.min_time();
  CoefficientEstimate out{SparseHamiltonian(base.num_qubits()), 1.0 / (16.0 * std::sqrt(md)), 0.0, 0};
  const double t = out.t;
  out.accuracy = std::sqrt(md) * eps * t * t;
  const DenseOperator back_T = expm_i(base, -T);
  const DenseOperator back_Tt = expm_i(base, -(T + t));

  auto learn = [&](double duration, const DenseOperator& back, std::uint64_t tag) {
    const DenseOperator u = oracle.query_evolution(duration) * back;
    const StateAccess state = choi_amplitudes(u, probe, derive_seed(seed, {tag, 0}));
    const TomographyResult tomo =
        sparse_tomo_l2(state, params.s, out.accuracy / 2.0, delta / 2.0, derive_seed(seed, {tag, 1}), false, cfg);
    const double copies = tomo.copies;
    QueryRecipe recipe;
    recipe.add(duration, 1);
    oracle.record_repeats(recipe, copies - 1);
    out.copies += copies;
    return to_dense(tomo.coefficients);
  };
  const DenseOperator est_T = learn(T, back_T, 0x71u);
  const DenseOperator est_Tt = learn(T + t, back_Tt, 0x72u);
  const DenseOperator fwd = expm_i(base, T);
  const DenseOperator short_time = back_T * est_T.adjoint() * est_Tt * fwd;
  const PauliExpansion coeffs = pauli_decompose(short_time);
  const Complex ref = std::conj(coeffs.coefficient(PauliLabel::identity(base.num_qubits())));
  for (const auto& [label, value] : coeffs.terms()) {
    if (!label.is_identity()) out.estimate.set(label, -(ref * value).imag() / t);
  }
  return out;
}

enum class BranchPolicy { automatic, sql_only };

struct LearnOptions {
  ProbeSettings probe;
  TomographyConfig tomography;
  BranchPolicy policy = BranchPolicy::automatic;
  /// Harness-supplied true-error probe (l-infinity distance to the hidden H).
  std::function<double(const SparseHamiltonian&)> true_error;
};

struct IterationRecord {
  int j = 0;
  double eta = 0.0;
  double t_j = 0.0;
  std::uint64_t n_j = 0;
  bool heisenberg = false;
  std::uint64_t t_w = 0;  // integer evolution time, Heisenberg branch only
  double true_error = std::numeric_limits<double>::quiet_NaN();
  double t_tot_delta = 0.0;
  double queries_delta = 0.0;
};

struct LearnReport {
  RegimeParams params;
  double epsilon = 0.0;
  double delta = 0.0;
  int J = 0;
  std::vector<IterationRecord> iterations;
  SparseHamiltonian estimate{1};
  QueryLedger ledger;
  std::uint64_t violations = 0;
  double final_error = std::numeric_limits<double>::quiet_NaN();
  /// Recorded errors satisfy ||H - H_{j+1}|| <= eta_j / 2 (needs the true-error probe).
  bool halving_ok = false;
  bool support_exceeds_m = false;
};

/// The halving iteration: J = ceil(log2(1/eps)) rounds, each learning the
/// residual H - H_j to eta_j / 4 and projecting onto m-sparse, norm <= 1.
inline LearnReport main_learn(EvolutionOracle& oracle, std::size_t m, double eps, const RegimeParams& params,
                              double delta, std::uint64_t seed, const LearnOptions& options = {}) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("main_learn: eps must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("main_learn: delta must lie in (0, 1)");
  if (m < 1) throw DomainError("main_learn: m must be at least 1");
  const unsigned n = oracle.num_qubits();
  const double md = static_cast<double>(m);
  LearnReport report;
  report.params = params;
  report.epsilon = eps;
  report.delta = delta;
  report.J = static_cast<int>(std::ceil(std::log2(1.0 / eps) - 1e-12));
  const double delta_each = delta / (2.0 * report.J);
  SparseHamiltonian current(n);
  report.halving_ok = static_cast<bool>(options.true_error);
  for (int j = 0; j < report.J; ++j) {
    IterationRecord rec;
    rec.j = j;
    rec.eta = std::ldexp(1.0, -j);
    rec.t_j = 1.0 / (32.0 * md * rec.eta);
    rec.n_j = static_cast<std::uint64_t>(std::ceil(1.0 / (2.0 * std::sqrt(md) * rec.eta) - 1e-12));
    rec.heisenberg = options.policy == BranchPolicy::automatic && rec.eta <= params.eta_sw;
    const QueryLedger before = oracle.ledger();
    const std::uint64_t iter_seed = derive_seed(seed, {0x6974u, static_cast<std::uint64_t>(j)});
    SparseHamiltonian update(n);
    if (rec.heisenberg) {
      const IntegerEvolResult w = integer_evol_learn(correction_access(oracle, current), params.s, params.c_f,
                                                     params.c_inf, params.c, rec.eta, delta_each,
                                                     derive_seed(iter_seed, {1}), options.probe,
                                                     options.tomography);
      rec.t_w = w.t;
      const DenseOperator correction = expm_i(w.estimate, -1.0);
      QueryRecipe recipe;
      const SparseHamiltonian known = current;
      EvolutionProvider provider;
      provider.prepare = [&](double t) {
        return residual_unitary(oracle, known, correction, t, rec.n_j, &recipe);
      };
      provider.repeat = [&](double copies) { oracle.record_repeats(recipe, copies); };
      update = sparse_ham_learn(provider, m, rec.eta, delta_each, derive_seed(iter_seed, {2}), options.probe,
                                2 * m, options.tomography)
                   .estimate;
    } else {
      update = sql_learn(oracle, current, m, rec.eta, params, delta_each, derive_seed(iter_seed, {3}), options.probe,
                         options.tomography)
                   .estimate;
    }
    current = truncate_sparse_bounded(current + update, m, 1.0);
    const QueryLedger& after = oracle.ledger();
    rec.t_tot_delta = after.t_tot - before.t_tot;
    rec.queries_delta = after.queries - before.queries;
    if (options.true_error) {
      rec.true_error = options.true_error(current);
      if (!(rec.true_error <= rec.eta / 2.0)) report.halving_ok = false;
    }
    report.iterations.push_back(rec);
  }
  report.estimate = current;
  report.ledger = oracle.ledger();
  report.violations = oracle.violations();
  report.support_exceeds_m = current.support_size() > m;
  if (options.true_error) report.final_error = options.true_error(current);
  return report;
}

}  // namespace hlearn
