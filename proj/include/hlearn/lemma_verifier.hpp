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
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hlearn/bch.hpp"
#include "hlearn/control_emulation.hpp"
#include "hlearn/dense.hpp"
#include "hlearn/errors.hpp"
#include "hlearn/f2_span.hpp"
#include "hlearn/hamiltonian_io.hpp"
#include "hlearn/pauli_polynomial.hpp"
#include "hlearn/random.hpp"
#include "hlearn/tomography.hpp"
#include "hlearn/truncation.hpp"

namespace hlearn {

struct CheckSpec {
  std::string name;
  std::vector<unsigned> n_values{1, 2, 3};
  std::vector<std::size_t> m_values{1, 2, 3};
  std::vector<double> T_values{0.05, 0.5, 1.0};
  double eps_min = 1e-3;
  double eps_max = 0.3;
  int trials = 200;
  std::uint64_t seed = 1;
  double slack = 1e-9;
  /// Multiplies every right-hand side; values below 1 tamper with the bounds.
  double bound_scale = 1.0;
};

struct CheckReport {
  std::string name;
  int trials = 0;
  int skipped = 0;
  double max_violation = -std::numeric_limits<double>::infinity();
  bool pass = false;
  std::string worst_instance;
  /// span_4m only: largest off-span coefficient mass and span-size excess.
  double max_offspan = 0.0;
  bool span_size_ok = true;
};

namespace verify_detail {

struct Instance {
  unsigned n = 1;
  std::size_t m = 1;
  double T = 1.0;
  double eps = 0.1;
  SparseHamiltonian h{1};
  SparseHamiltonian hj{1};
};

inline std::string describe(const Instance& in) {
  std::ostringstream out;
  out << "n=" << in.n << " m=" << in.m << " T=" << format_double(in.T) << " eps=" << format_double(in.eps) << " H={";
  bool first = true;
  for (const auto& [l, v] : in.h.terms()) {
    out << (first ? "" : ",") << l.to_string() << ':' << format_double(v);
    first = false;
  }
  out << "} Hj={";
  first = true;
  for (const auto& [l, v] : in.hj.terms()) {
    out << (first ? "" : ",") << l.to_string() << ':' << format_double(v);
    first = false;
  }
  out << '}';
  return out.str();
}

template <class T>
const T& pick(const std::vector<T>& values, Rng& rng) {
  return values[uniform_below(rng, values.size())];
}

/// Random perturbation with up to `labels` non-identity terms in [-amp, amp].
inline SparseHamiltonian random_perturbation(unsigned n, std::size_t labels, double amp, Rng& rng) {
  SparseHamiltonian d(n);
  const std::uint64_t total = (std::uint64_t{1} << (2 * n)) - 1;
  const std::size_t count = 1 + uniform_below(rng, labels);
  for (std::size_t i = 0; i < count; ++i) {
    const auto label = PauliLabel::from_index(n, 1 + uniform_below(rng, total));
    d.add(label, amp * (2.0 * uniform01(rng) - 1.0));
  }
  return d;
}

/// H with ||H|| <= 1 and H_j = top-m(H + D), |D| <= eps/2, so ||H - H_j||_linf <= eps.
inline Instance draw_instance(const CheckSpec& spec, Rng& rng) {
  Instance in;
  in.n = pick(spec.n_values, rng);
  const std::size_t labels = (std::size_t{1} << (2 * in.n)) - 1;
  in.m = std::min(pick(spec.m_values, rng), labels);
  in.T = pick(spec.T_values, rng);
  in.eps = spec.eps_min * std::pow(spec.eps_max / spec.eps_min, uniform01(rng));
  in.h = random_sparse_hamiltonian(in.n, in.m, rng(), 1.0);
  const SparseHamiltonian b = in.h + random_perturbation(in.n, in.m, in.eps / 2.0, rng);
  in.hj = truncate_sparse_bounded(b, in.m, std::numeric_limits<double>::infinity());
  return in;
}

inline Matrix haar_unitary(unsigned n, Rng& rng) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) g(r, c) = Complex(standard_normal(rng), standard_normal(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < dim; ++c) {
    const Complex d = r(c, c);
    if (std::abs(d) > 0.0) q.col(c) *= d / std::abs(d);
  }
  return q;
}

inline double nfro(const Matrix& m) { return m.norm() / std::sqrt(static_cast<double>(m.rows())); }

inline double opnorm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

struct Tracker {
  CheckReport report;
  void observe(double violation, const std::string& instance) {
    if (violation > report.max_violation) {
      report.max_violation = violation;
      report.worst_instance = instance;
    }
  }
};

using CheckFn = std::function<void(const CheckSpec&, Rng&, Tracker&)>;

inline void check_duhamel(const CheckSpec& spec, Rng& rng, Tracker& tr) {
  Instance in = draw_instance(spec, rng);
  // A third of the trials compare against an unrelated Hamiltonian, one in
  // twenty against itself.
  const std::uint64_t mode = uniform_below(rng, 60);
  if (mode < 20) in.hj = random_sparse_hamiltonian(in.n, in.m, rng(), 1.0);
  if (mode >= 57) in.hj = in.h;
  const double t = 2.0 * (1.0 - uniform01(rng));
  const Matrix x = to_dense(in.h).m;
  const Matrix y = to_dense(in.hj).m;
  const Matrix v = expm_i(DenseOperator(in.n, x), t).m * expm_i(DenseOperator(in.n, y), -t).m;
  const Matrix id = Matrix::Identity(v.rows(), v.cols());
  const double s = spec.bound_scale;
  const double v_op = opnorm(v - id) - s * t * opnorm(x - y);
  const double v_f = nfro(v - id) - s * t * nfro(x - y);
  tr.observe(std::max(v_op, v_f), describe(in) + " t=" + format_double(t));
}

inline void check_log_norm(const CheckSpec& spec, Rng& rng, Tracker& tr) {
  const unsigned n = pick(spec.n_values, rng);
  Matrix u;
  std::string what;
  if (uniform_below(rng, 2) == 0) {
    u = haar_unitary(n, rng);
    what = "haar n=" + std::to_string(n);
  } else {
    const std::size_t labels = (std::size_t{1} << (2 * n)) - 1;
    const std::size_t m = std::min(pick(spec.m_values, rng), labels);
    const double t = 4.0 * uniform01(rng);
    const SparseHamiltonian h = random_sparse_hamiltonian(n, m, rng(), 1.0);
    u = expm_i(h, t).m;
    what = "exp n=" + std::to_string(n) + " t=" + format_double(t);
  }
  const TracelessLog log = traceless_log(DenseOperator(n, u));
  const Matrix id = Matrix::Identity(u.rows(), u.cols());
  const double s = spec.bound_scale * std::numbers::pi;
  const double v_op = opnorm(log.generator.m) - s * opnorm(id - u);
  const double v_f = nfro(log.generator.m) - s * nfro(id - u);
  tr.observe(std::max(v_op, v_f), what);
}

inline void check_span_4m(const CheckSpec& spec, Rng& rng, Tracker& tr) {
  const Instance in = draw_instance(spec, rng);
  const TracelessLog log = dense_correction_generator(in.h, in.hj, in.T);
  if (log.branch_warning || opnorm(log.generator.m) >= std::numbers::pi - 1e-6) {
    ++tr.report.skipped;
    return;
  }
  std::vector<PauliLabel> labels;
  for (const auto& [l, v] : in.h.terms()) labels.push_back(l);
  for (const auto& [l, v] : in.hj.terms()) labels.push_back(l);
  const SpanBasis span = f2_span(in.n, labels);
  const std::size_t m_eff = std::max(in.h.support_size(), in.hj.support_size());
  const std::uint64_t bound = std::uint64_t{1} << (2 * m_eff);
  const bool size_ok = span.size() <= bound;
  double off = 0.0;
  const std::uint64_t labels_total = std::uint64_t{1} << (2 * in.n);
  for (std::uint64_t index = 0; index < labels_total; ++index) {
    const PauliLabel l = PauliLabel::from_index(in.n, index);
    if (!span.contains(l)) off += std::norm(pauli_coefficient(log.generator, l));
  }
  off = std::sqrt(off);
  tr.report.max_offspan = std::max(tr.report.max_offspan, off);
  tr.report.span_size_ok = tr.report.span_size_ok && size_ok;
  const double violation = size_ok ? off - spec.bound_scale * 1e-10 : 1.0;
  tr.observe(violation, describe(in));
}

inline void check_bch_degree(const CheckSpec& spec, Rng& rng, Tracker& tr) {
  const Instance in = draw_instance(spec, rng);
  const Complex i(0.0, 1.0);
  const PauliExpansion x = to_expansion(in.h) * (-i * in.T);
  const PauliExpansion y = to_expansion(in.hj) * (i * in.T);
  const double big_m = in.T * std::max(hamiltonian_operator_norm(in.h), hamiltonian_operator_norm(in.hj));
  const double sum_f = coefficient_norms(x + y).l2;
  double worst = -std::numeric_limits<double>::infinity();
  for (int r = 1; r <= 4; ++r) {
    const double lhs = coefficient_norms(bch_term(x, y, r)).l2;
    const double rhs = bch_degree_constant(r) * std::pow(big_m, r - 1) * sum_f;
    worst = std::max(worst, lhs - spec.bound_scale * rhs);
  }
  tr.observe(worst, describe(in));
}

inline void check_bch_tail(const CheckSpec& spec, Rng& rng, Tracker& tr) {
  const Instance in = draw_instance(spec, rng);
  const double cap = std::max({1.0, hamiltonian_operator_norm(in.h), hamiltonian_operator_norm(in.hj)});
  const double ratio = 4.0 * in.T * std::numbers::e * cap;
  if (ratio >= 1.0) {
    ++tr.report.skipped;
    return;
  }
  const Matrix w = dense_correction_generator(in.h, in.hj, in.T).generator.m;
  const double diff_f = coefficient_norms(in.h - in.hj).l2;
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 4; ++k) {
    const BchTruncation trunc = bch_truncated_generator(in.h, in.hj, in.T, k);
    const double lhs = nfro(w - to_dense(trunc.generator).m);
    const double rhs = std::pow(ratio, k + 1) * diff_f;
    worst = std::max(worst, lhs - spec.bound_scale * rhs);
  }
  tr.observe(worst, describe(in));
}

inline void check_trotter(const CheckSpec& spec, Rng& rng, Tracker& tr) {
  Instance in = draw_instance(spec, rng);
  const bool commuting = uniform_below(rng, 10) == 0;
  if (commuting) in.hj = in.h * (1.0 - in.eps);
  const double t = 2.0 * (1.0 - uniform01(rng));
  const std::uint64_t steps = 1 + uniform_below(rng, 20);
  const double dt = t / static_cast<double>(steps);
  const Matrix step = expm_i(in.h, dt).m * expm_i(in.hj, -dt).m;
  Matrix prod = Matrix::Identity(step.rows(), step.cols());
  for (std::uint64_t k = 0; k < steps; ++k) prod = prod * step;
  const Matrix target = expm_i(in.h - in.hj, t).m;
  const double lhs = nfro(prod - target);
  const double rhs = t * t / static_cast<double>(steps) *
                     std::min(hamiltonian_operator_norm(in.h), hamiltonian_operator_norm(in.hj)) *
                     coefficient_norms(in.h - in.hj).l2;
  tr.observe(lhs - spec.bound_scale * rhs, describe(in) + " t=" + format_double(t) + " N=" + std::to_string(steps));
}

inline void check_long_time_exact(const CheckSpec& spec, Rng& rng, Tracker& tr) {
  const Instance in = draw_instance(spec, rng);
  const double tau = 1.0 - uniform01(rng);
  const Matrix lhs = expm_i(in.h, tau).m * expm_i(in.hj, -tau).m;
  const Matrix c = expm_i(in.h, -in.T).m * expm_i(in.hj, in.T).m;
  const Matrix rhs = expm_i(in.h, in.T + tau).m * c * expm_i(in.hj, -(in.T + tau)).m;
  tr.observe(nfro(lhs - rhs) - spec.bound_scale * 1e-10, describe(in) + " tau=" + format_double(tau));
}

inline void check_trunc_stability(const CheckSpec& spec, Rng& rng, Tracker& tr) {
  Instance in = draw_instance(spec, rng);
  const double c = std::vector<double>{0.5, 1.0, 2.0}[uniform_below(rng, 3)];
  in.h = random_sparse_hamiltonian(in.n, in.m, rng(), c);
  in.hj = in.h + random_perturbation(in.n, 2 * in.m, in.eps, rng);
  const SparseHamiltonian out = truncate_sparse_bounded(in.hj, in.m, c);
  const double lhs = linf_distance(in.h, out);
  const double rhs = 2.0 * linf_distance(in.h, in.hj);
  double violation = lhs - spec.bound_scale * rhs;
  if (out.support_size() > in.m || hamiltonian_operator_norm(out) > c * (1.0 + 1e-12)) violation = 1.0;
  tr.observe(violation, describe(in) + " c=" + format_double(c));
}

inline void check_power_growth(const CheckSpec& spec, Rng& rng, Tracker& tr) {
  const Instance in = draw_instance(spec, rng);
  const PauliExpansion a = to_expansion(in.h);
  const double a_inf = in.h.max_abs();
  const Matrix ad = to_dense(in.h).m;
  Matrix dense_power = ad;
  double worst = -std::numeric_limits<double>::infinity();
  for (unsigned k = 2; k <= 3; ++k) {
    dense_power = dense_power * ad;
    const PauliExpansion ak = power(a, k);
    const double mismatch = nfro(to_dense(ak).m - dense_power);
    const double lhs = ak.max_abs();
    const double rhs = std::pow(static_cast<double>(in.m), k - 1) * std::pow(a_inf, k);
    worst = std::max(worst, lhs - spec.bound_scale * rhs);
    if (mismatch > 1e-10) worst = std::max(worst, mismatch);
  }
  tr.observe(worst, describe(in));
}

inline void check_first_order(const CheckSpec& spec, Rng& rng, Tracker& tr) {
  Instance in = draw_instance(spec, rng);
  // Rescale so that ||A||_linf <= eps.
  const double a_inf = in.h.max_abs();
  const SparseHamiltonian a = in.h * (in.eps * (1.0 - 0.5 * uniform01(rng)) / a_inf);
  const double md = static_cast<double>(a.support_size());
  const double t = (1.0 - uniform01(rng)) / (md * in.eps);
  const Eigen::VectorXcd psi = choi_vector(expm_i(a, t));
  double err_inf = 0.0;
  double err_sq = 0.0;
  for (Eigen::Index idx = 0; idx < psi.size(); ++idx) {
    const PauliLabel label = PauliLabel::from_index(in.n, static_cast<std::uint64_t>(idx));
    Complex expected = label.is_identity() ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
    if (!label.is_identity()) expected -= Complex(0.0, t * a.coefficient(label));
    const double e = std::abs(psi(idx) - expected);
    err_inf = std::max(err_inf, e);
    err_sq += e * e;
  }
  const CoefficientNorms norms = coefficient_norms(a);
  const double rhs_inf = md * t * t * in.eps * in.eps;
  const double rhs_f = t * t * norms.l2 * hamiltonian_operator_norm(a);
  const double v = std::max(err_inf - spec.bound_scale * rhs_inf, std::sqrt(err_sq) - spec.bound_scale * rhs_f);
  in.h = a;
  tr.observe(v, describe(in) + " t=" + format_double(t));
}

inline void check_table1_norms(const CheckSpec& spec, Rng& rng, Tracker& tr) {
  Instance in = draw_instance(spec, rng);
  const double md = static_cast<double>(in.m);
  const bool poly = uniform_below(rng, 2) == 1;
  double rhs_f, rhs_op;
  std::string extra;
  if (poly) {
    const int K = 2 + static_cast<int>(uniform_below(rng, 2));
    const double cap = std::max({1.0, hamiltonian_operator_norm(in.h), hamiltonian_operator_norm(in.hj)});
    in.T = std::pow(md, -1.0 / K) / (16.0 * std::numbers::e * cap);
    rhs_f = std::sqrt(md) * in.eps;
    rhs_op = md * in.eps;
    extra = " poly K=" + std::to_string(K);
  } else {
    rhs_f = 2.0 * std::numbers::pi * in.T * std::sqrt(md) * in.eps;
    rhs_op = 2.0 * std::numbers::pi * in.T * md * in.eps;
    extra = " log";
  }
  const Matrix w = dense_correction_generator(in.h, in.hj, in.T).generator.m;
  const double v = std::max(nfro(w) - spec.bound_scale * rhs_f, opnorm(w) - spec.bound_scale * rhs_op);
  tr.observe(v, describe(in) + extra);
}

inline const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> checks{
      {"duhamel", check_duhamel},
      {"log_norm", check_log_norm},
      {"span_4m", check_span_4m},
      {"bch_degree", check_bch_degree},
      {"bch_tail", check_bch_tail},
      {"trotter", check_trotter},
      {"long_time_exact", check_long_time_exact},
      {"trunc_stability", check_trunc_stability},
      {"power_growth", check_power_growth},
      {"first_order", check_first_order},
      {"table1_norms", check_table1_norms},
  };
  return checks;
}

}  // namespace verify_detail

/// Names of all registered checks, in registry order.
inline std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : verify_detail::registry()) out.push_back(name);
  return out;
}

inline CheckReport run_check(const CheckSpec& spec) {
  const auto& reg = verify_detail::registry();
  auto it = reg.find(spec.name);
  if (it == reg.end()) throw DomainError("unknown check '" + spec.name + "'");
  if (spec.trials < 1) throw DomainError("run_check: trials must be at least 1");
  verify_detail::Tracker tr;
  tr.report.name = spec.name;
  for (int trial = 0; trial < spec.trials; ++trial) {
    Rng rng(derive_seed(spec.seed, {name_hash(spec.name), static_cast<std::uint64_t>(trial)}));
    it->second(spec, rng, tr);
    ++tr.report.trials;
  }
  if (tr.report.skipped == tr.report.trials) tr.report.max_violation = 0.0;
  tr.report.pass = tr.report.max_violation <= spec.slack;
  return tr.report;
}

}  // namespace hlearn
