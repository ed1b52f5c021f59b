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

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hlearn/dense.hpp"
#include "hlearn/errors.hpp"
#include "hlearn/pauli_polynomial.hpp"

namespace hlearn {

/// Resource counters for evolution under the unknown Hamiltonian.
struct QueryLedger {
  double t_tot = 0.0;
  double t_min = std::numeric_limits<double>::infinity();  // +inf until the first query
  double queries = 0.0;  // nominal budgets can exceed any integer type
};

/// Oracle usage needed to prepare one copy of a probe state: `count` queries of
/// each listed duration.
struct QueryRecipe {
  std::vector<std::pair<double, std::uint64_t>> items;

  void add(double duration, std::uint64_t count) { items.emplace_back(duration, count); }
  void append(const QueryRecipe& other) { items.insert(items.end(), other.items.begin(), other.items.end()); }
};

/// Black-box access to e^{-iHt} for t >= T. The Hamiltonian itself never leaves
/// this object; only unitaries and the ledger do.
class EvolutionOracle {
 public:
  EvolutionOracle(SparseHamiltonian hidden, double min_time) : hidden_(std::move(hidden)), min_time_(min_time) {
    if (!(min_time_ > 0.0) || !std::isfinite(min_time_)) throw DomainError("minimum evolution time must be positive");
    const DenseOperator h = to_dense(hidden_);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.m);
    if (std::max(std::abs(es.eigenvalues().minCoeff()), std::abs(es.eigenvalues().maxCoeff())) > 1.0 + 1e-9) {
      throw DomainError("hidden Hamiltonian must have operator norm at most 1");
    }
    eigvals_ = es.eigenvalues();
    eigvecs_ = es.eigenvectors();
  }

  EvolutionOracle(const EvolutionOracle&) = delete;
  EvolutionOracle& operator=(const EvolutionOracle&) = delete;

  unsigned num_qubits() const { return hidden_.num_qubits(); }
  double min_time() const { return min_time_; }
  const QueryLedger& ledger() const { return ledger_; }
  std::uint64_t violations() const { return violations_; }

  /// e^{-iHt}; one query of duration t.
  DenseOperator query_evolution(double t) {
    charge(t, 1);
    return evolve(t);
  }

  /// (e^{iH_j T} e^{-iHT})^q; q queries of duration T. Evolution under the
  /// known H_j is free.
  DenseOperator correction_adjoint_power(const SparseHamiltonian& known, std::uint64_t q) {
    if (q < 1) throw DomainError("correction_adjoint_power: q must be at least 1");
    if (known.num_qubits() != num_qubits()) throw DimensionError("correction_adjoint_power: qubit count mismatch");
    charge(min_time_, q);
    const DenseOperator step = expm_i(known, -min_time_) * evolve(min_time_);
    Matrix result = Matrix::Identity(step.dim(), step.dim());
    Matrix base = step.m;
    for (std::uint64_t e = q; e != 0; e >>= 1) {
      if (e & 1) result = result * base;
      if (e > 1) base = base * base;
    }
    return DenseOperator(num_qubits(), std::move(result));
  }

  /// Charges `copies` further repetitions of a probe recipe whose unitary was
  /// already obtained once through the query methods.
  void record_repeats(const QueryRecipe& recipe, double copies) {
    if (copies <= 0.0) return;
    for (const auto& [duration, count] : recipe.items) charge(duration, static_cast<double>(count) * copies);
  }

 private:
  friend class OracleInspector;

  // Single gate for every use of the hidden dynamics.
  void charge(double t, double count) {
    if (!(t >= min_time_)) {
      ++violations_;
      throw MinimumTimeViolation("evolution time " + std::to_string(t) + " is below the minimum " +
                                 std::to_string(min_time_));
    }
    if (count <= 0.0) return;
    ledger_.t_tot += t * count;
    ledger_.t_min = std::min(ledger_.t_min, t);
    ledger_.queries += count;
  }

  DenseOperator evolve(double t) const {
    const Eigen::VectorXcd phases = (eigvals_.cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
    return DenseOperator(num_qubits(), eigvecs_ * phases.asDiagonal() * eigvecs_.adjoint());
  }

  SparseHamiltonian hidden_;
  double min_time_;
  Eigen::VectorXd eigvals_;
  Matrix eigvecs_;
  QueryLedger ledger_;
  std::uint64_t violations_ = 0;
};

}  // namespace hlearn
