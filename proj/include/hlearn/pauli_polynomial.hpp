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
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <string>
#include <type_traits>
#include <utility>

#include "hlearn/errors.hpp"
#include "hlearn/pauli.hpp"

namespace hlearn {

/// Coefficients with magnitude below this are not stored.
inline constexpr double kCoefficientFloor = 1e-14;

template <class Scalar>
inline constexpr bool kIsRealScalar = std::is_same_v<Scalar, double>;

/// A finite linear combination of n-qubit Pauli operators.
///
/// With real coefficients this is a traceless Hermitian operator: the identity
/// label is rejected and zero coefficients are never stored. With complex
/// coefficients it holds an arbitrary operator, e.g. the Pauli expansion of a
/// unitary. Terms are kept in label order so iteration is deterministic.
template <class Scalar>
class PauliPolynomial {
 public:
  using scalar_type = Scalar;
  using Terms = std::map<PauliLabel, Scalar>;

  explicit PauliPolynomial(unsigned n = 1) : n_(n) {
    if (n == 0 || n > kMaxLabelQubits) {
      throw DimensionError("qubit count must be in 1.." + std::to_string(kMaxLabelQubits));
    }
  }

  PauliPolynomial(unsigned n, std::initializer_list<std::pair<PauliLabel, Scalar>> terms)
      : PauliPolynomial(n) {
    for (const auto& [label, value] : terms) add(label, value);
  }

  /// Builds from string labels, e.g. {{"XZ", 0.25}, {"YI", -0.1}}.
  static PauliPolynomial from_strings(
      std::initializer_list<std::pair<std::string_view, Scalar>> terms) {
    if (terms.size() == 0) throw DomainError("from_strings needs at least one term");
    const auto n = static_cast<unsigned>(terms.begin()->first.size());
    PauliPolynomial out(n);
    for (const auto& [text, value] : terms) out.add(PauliLabel::from_string(text), value);
    return out;
  }

  unsigned num_qubits() const { return n_; }
  const Terms& terms() const { return terms_; }
  std::size_t support_size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  Scalar coefficient(const PauliLabel& label) const {
    auto it = terms_.find(label);
    return it == terms_.end() ? Scalar{} : it->second;
  }

  bool contains(const PauliLabel& label) const { return terms_.count(label) != 0; }

  /// Accumulates value onto the label's coefficient.
  void add(const PauliLabel& label, Scalar value) {
    check_label(label);
    auto [it, inserted] = terms_.try_emplace(label, Scalar{});
    it->second += value;
    if (std::abs(it->second) < kCoefficientFloor) terms_.erase(it);
  }

  /// Overwrites the label's coefficient.
  void set(const PauliLabel& label, Scalar value) {
    check_label(label);
    if (std::abs(value) < kCoefficientFloor) {
      terms_.erase(label);
    } else {
      terms_[label] = value;
    }
  }

  void erase(const PauliLabel& label) { terms_.erase(label); }

  PauliPolynomial& operator+=(const PauliPolynomial& other) {
    check_same_n(other);
    for (const auto& [label, value] : other.terms_) add(label, value);
    return *this;
  }

  PauliPolynomial& operator-=(const PauliPolynomial& other) {
    check_same_n(other);
    for (const auto& [label, value] : other.terms_) add(label, -value);
    return *this;
  }

  PauliPolynomial& operator*=(Scalar factor) {
    PauliPolynomial out(n_);
    for (const auto& [label, value] : terms_) out.set(label, value * factor);
    *this = std::move(out);
    return *this;
  }

  friend PauliPolynomial operator+(PauliPolynomial a, const PauliPolynomial& b) { return a += b; }
  friend PauliPolynomial operator-(PauliPolynomial a, const PauliPolynomial& b) { return a -= b; }
  friend PauliPolynomial operator*(PauliPolynomial a, Scalar s) { return a *= s; }
  friend PauliPolynomial operator*(Scalar s, PauliPolynomial a) { return a *= s; }
  friend PauliPolynomial operator-(PauliPolynomial a) { return a *= Scalar{-1}; }

  friend bool operator==(const PauliPolynomial&, const PauliPolynomial&) = default;

  /// Largest coefficient magnitude (the coefficient l-infinity norm).
  double max_abs() const {
    double out = 0.0;
    for (const auto& [label, value] : terms_) out = std::max(out, static_cast<double>(std::abs(value)));
    return out;
  }

  void check_same_n(const PauliPolynomial& other) const {
    if (other.n_ != n_) {
      throw DimensionError("Pauli polynomials act on " + std::to_string(n_) + " and " +
                           std::to_string(other.n_) + " qubits");
    }
  }

 private:
  void check_label(const PauliLabel& label) const {
    if (label.n != n_) {
      throw DimensionError("label " + label.to_string() + " does not act on " +
                           std::to_string(n_) + " qubits");
    }
    if constexpr (kIsRealScalar<Scalar>) {
      if (label.is_identity()) {
        throw DomainError("a SparseHamiltonian is traceless; identity term rejected");
      }
    }
  }

  unsigned n_;
  Terms terms_;
};

/// Real-coefficient traceless Hamiltonian, sum_x alpha_x P_x.
using SparseHamiltonian = PauliPolynomial<double>;
/// Complex-coefficient Pauli expansion of an arbitrary operator.
using PauliExpansion = PauliPolynomial<std::complex<double>>;

struct CoefficientNorms {
  double l1 = 0.0;
  double l2 = 0.0;  // equals the normalized Frobenius norm
  double linf = 0.0;
};

template <class Scalar>
CoefficientNorms coefficient_norms(const PauliPolynomial<Scalar>& p) {
  CoefficientNorms out;
  double sum_sq = 0.0;
  for (const auto& [label, value] : p.terms()) {
    const double mag = std::abs(value);
    out.l1 += mag;
    sum_sq += mag * mag;
    out.linf = std::max(out.linf, mag);
  }
  out.l2 = std::sqrt(sum_sq);
  return out;
}

/// Coefficient l-infinity distance between two polynomials.
template <class Scalar>
double linf_distance(const PauliPolynomial<Scalar>& a, const PauliPolynomial<Scalar>& b) {
  return coefficient_norms(a - b).linf;
}

inline PauliExpansion to_expansion(const SparseHamiltonian& h) {
  PauliExpansion out(h.num_qubits());
  for (const auto& [label, value] : h.terms()) out.set(label, value);
  return out;
}

/// Real part of a Pauli expansion as a Hamiltonian; the identity term is dropped.
inline SparseHamiltonian hermitian_part_coefficients(const PauliExpansion& p) {
  SparseHamiltonian out(p.num_qubits());
  for (const auto& [label, value] : p.terms()) {
    if (!label.is_identity()) out.set(label, value.real());
  }
  return out;
}

/// Operator product computed term by term in the Pauli algebra.
inline PauliExpansion multiply(const PauliExpansion& a, const PauliExpansion& b) {
  a.check_same_n(b);
  PauliExpansion out(a.num_qubits());
  for (const auto& [la, va] : a.terms()) {
    for (const auto& [lb, vb] : b.terms()) {
      const PauliProduct prod = pauli_mul(la, lb);
      out.add(prod.label, prod.phase_factor() * va * vb);
    }
  }
  return out;
}

/// [a, b] = ab - ba. Only anticommuting label pairs contribute, each 2 P_x P_y.
inline PauliExpansion commutator(const PauliExpansion& a, const PauliExpansion& b) {
  a.check_same_n(b);
  PauliExpansion out(a.num_qubits());
  for (const auto& [la, va] : a.terms()) {
    for (const auto& [lb, vb] : b.terms()) {
      if (commutes(la, lb)) continue;
      const PauliProduct prod = pauli_mul(la, lb);
      out.add(prod.label, 2.0 * prod.phase_factor() * va * vb);
    }
  }
  return out;
}

/// a^k by repeated Pauli convolution; a^0 is the identity.
inline PauliExpansion power(const PauliExpansion& a, unsigned k) {
  PauliExpansion out(a.num_qubits());
  out.set(PauliLabel::identity(a.num_qubits()), 1.0);
  for (unsigned i = 0; i < k; ++i) out = multiply(out, a);
  return out;
}

}  // namespace hlearn
