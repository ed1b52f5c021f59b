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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "hlearn/dense.hpp"
#include "hlearn/errors.hpp"
#include "hlearn/pauli_polynomial.hpp"
#include "hlearn/random.hpp"

namespace hlearn {

struct TruncationConfig {
  int bisection_steps = 48;
  int feasibility_steps = 400;
};

namespace detail {

/// Finds h in the box |h - center| <= radius with ||sum h_x P_x|| <= cap
/// using Polyak-step projected subgradient descent. Returns false if none was found.
inline bool feasible_in_box(const std::vector<Matrix>& paulis, const std::vector<double>& center,
                            double radius, double cap, int steps, std::vector<double>& out) {
  const std::size_t k = center.size();
  std::vector<double> h = out;
  for (std::size_t i = 0; i < k; ++i) h[i] = std::clamp(h[i], center[i] - radius, center[i] + radius);
  const double target = cap * (1.0 - 1e-9);
  for (int it = 0; it < steps; ++it) {
    Matrix m = Matrix::Zero(paulis[0].rows(), paulis[0].cols());
    for (std::size_t i = 0; i < k; ++i) m += h[i] * paulis[i];
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const auto& ev = es.eigenvalues();
    const Eigen::Index last = ev.size() - 1;
    const bool top = std::abs(ev(last)) >= std::abs(ev(0));
    const double f = top ? std::abs(ev(last)) : std::abs(ev(0));
    if (f <= target) {
      out = h;
      return true;
    }
    const Eigen::VectorXcd v = es.eigenvectors().col(top ? last : 0);
    const double sign = (top ? ev(last) : ev(0)) >= 0.0 ? 1.0 : -1.0;
    std::vector<double> g(k);
    double gg = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      g[i] = sign * (v.adjoint() * paulis[i] * v)(0, 0).real();
      gg += g[i] * g[i];
    }
    if (gg <= 0.0) return false;
    const double step = (f - target) / gg;
    for (std::size_t i = 0; i < k; ++i) {
      h[i] = std::clamp(h[i] - step * g[i], center[i] - radius, center[i] + radius);
    }
  }
  return false;
}

}  // namespace detail

/// Projection onto k-sparse Hamiltonians with operator norm at most c, in
/// coefficient l-infinity distance.
///
/// The support is the k largest |coefficients| (ties broken by label order).
/// If that restriction violates the norm bound, the kept coefficients are moved
/// by the smallest uniform radius (found by bisection) that admits a feasible
/// point; the uniformly rescaled restriction is the fallback upper bound.
inline SparseHamiltonian truncate_sparse_bounded(const SparseHamiltonian& h, std::size_t k, double c,
                                                 const TruncationConfig& cfg = {}) {
  if (!(c > 0.0)) throw DomainError("truncate_sparse_bounded: c must be positive");
  const unsigned n = h.num_qubits();
  std::vector<std::pair<PauliLabel, double>> terms(h.terms().begin(), h.terms().end());
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.second) > std::abs(b.second); });
  const double dropped = terms.size() > k ? std::abs(terms[k].second) : 0.0;
  if (terms.size() > k) terms.resize(k);

  SparseHamiltonian kept(n);
  for (const auto& [label, value] : terms) kept.set(label, value);
  const double norm = hamiltonian_operator_norm(kept);
  if (norm <= c) return kept;

  std::vector<Matrix> paulis;
  std::vector<double> center;
  for (const auto& [label, value] : terms) {
    paulis.push_back(to_dense(label).m);
    center.push_back(value);
  }
  const double scale = c / norm * (1.0 - 1e-12);
  std::vector<double> best(center.size());
  double hi = 0.0;
  for (std::size_t i = 0; i < center.size(); ++i) {
    best[i] = center[i] * scale;
    hi = std::max(hi, std::abs(center[i] - best[i]));
  }
  // Below the dropped magnitude the l-infinity distance no longer improves.
  double lo = 0.0;
  std::vector<double> trial = best;
  if (dropped > 0.0 && dropped < hi &&
      detail::feasible_in_box(paulis, center, dropped, c, cfg.feasibility_steps, trial)) {
    best = trial;
  } else {
    lo = std::min(dropped, hi);
    for (int step = 0; step < cfg.bisection_steps && hi - lo > 1e-13 * std::max(1.0, hi); ++step) {
      const double mid = 0.5 * (lo + hi);
      trial = best;
      if (detail::feasible_in_box(paulis, center, mid, c, cfg.feasibility_steps, trial)) {
        hi = mid;
        best = trial;
      } else {
        lo = mid;
      }
    }
  }
  SparseHamiltonian out(n);
  for (std::size_t i = 0; i < terms.size(); ++i) out.set(terms[i].first, best[i]);
  return out;
}

}  // namespace hlearn
