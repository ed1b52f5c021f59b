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

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>

#include "hlearn/errors.hpp"
#include "hlearn/pauli.hpp"
#include "hlearn/pauli_polynomial.hpp"

namespace hlearn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Tolerances and caps for the dense kernels.
struct DenseConfig {
  unsigned max_qubits = 8;
  double hermitian_tol = 1e-12;
  double unitary_tol = 1e-10;
  /// Eigenphases this close to +-pi raise the branch warning of traceless_log.
  double branch_margin = 1e-6;
};

inline constexpr DenseConfig kDenseDefaults{};

/// A 2^n x 2^n complex matrix acting on n qubits.
struct DenseOperator {
  unsigned n = 1;
  Matrix m;

  DenseOperator() = default;
  DenseOperator(unsigned qubits, Matrix matrix) : n(qubits), m(std::move(matrix)) {
    const auto dim = Eigen::Index{1} << n;
    if (m.rows() != dim || m.cols() != dim) {
      throw DimensionError("matrix is " + std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()) + ", expected dimension " +
                           std::to_string(dim));
    }
  }

  static DenseOperator identity(unsigned n) {
    const auto dim = Eigen::Index{1} << n;
    return DenseOperator(n, Matrix::Identity(dim, dim));
  }

  Eigen::Index dim() const { return m.rows(); }

  DenseOperator adjoint() const { return DenseOperator(n, m.adjoint()); }

  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
    check_same(a, b);
    return DenseOperator(a.n, a.m * b.m);
  }
  friend DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
    check_same(a, b);
    return DenseOperator(a.n, a.m + b.m);
  }
  friend DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
    check_same(a, b);
    return DenseOperator(a.n, a.m - b.m);
  }
  friend DenseOperator operator*(Complex s, const DenseOperator& a) { return DenseOperator(a.n, s * a.m); }

  static void check_same(const DenseOperator& a, const DenseOperator& b) {
    if (a.n != b.n) throw DimensionError("dense operators act on different qubit counts");
  }
};

inline double normalized_frobenius(const DenseOperator& a) {
  return a.m.norm() / std::sqrt(static_cast<double>(a.dim()));
}

/// Spectral norm (largest singular value).
inline double operator_norm(const DenseOperator& a) {
  if (a.dim() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a.m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

/// Spectral norm of a Hermitian matrix via its eigenvalues.
inline double hermitian_operator_norm(const DenseOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

/// ||M - M^dagger|| measured in the (unnormalized) Frobenius norm, which
/// upper-bounds the spectral norm.
inline bool is_hermitian(const DenseOperator& a, double tol = kDenseDefaults.hermitian_tol) {
  return (a.m - a.m.adjoint()).norm() <= tol * std::max(1.0, a.m.norm());
}

inline bool is_unitary(const DenseOperator& a, double tol = kDenseDefaults.unitary_tol) {
  const Matrix gram = a.m.adjoint() * a.m;
  return (gram - Matrix::Identity(a.dim(), a.dim())).norm() <= tol * std::sqrt(static_cast<double>(a.dim()));
}

inline void require_unitary(const DenseOperator& a, const char* where) {
  if (!is_unitary(a)) throw DomainError(std::string(where) + ": input is not unitary");
}

inline void require_hermitian(const DenseOperator& a, const char* where) {
  if (!is_hermitian(a)) throw DomainError(std::string(where) + ": input is not Hermitian");
}

namespace detail {

inline void check_dense_cap(unsigned n, const DenseConfig& cfg) {
  if (n > cfg.max_qubits) {
    throw DimensionError("dense backend is capped at " + std::to_string(cfg.max_qubits) +
                         " qubits, got " + std::to_string(n));
  }
}

/// <k xor a| P_x |k> = i^{a.b} (-1)^{b.k}.
inline Complex pauli_entry(const PauliLabel& label, std::uint64_t col) {
  const int exponent = std::popcount(label.x & label.z) + 2 * (std::popcount(label.z & col) & 1);
  switch (exponent % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace detail

/// Dense matrix of sum_x c_x P_x.
template <class Scalar>
DenseOperator to_dense(const PauliPolynomial<Scalar>& p, const DenseConfig& cfg = kDenseDefaults) {
  const unsigned n = p.num_qubits();
  detail::check_dense_cap(n, cfg);
  const auto dim = std::uint64_t{1} << n;
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& [label, value] : p.terms()) {
    const Complex c(value);
    for (std::uint64_t col = 0; col < dim; ++col) {
      m(static_cast<Eigen::Index>(col ^ label.x), static_cast<Eigen::Index>(col)) +=
          c * detail::pauli_entry(label, col);
    }
  }
  return DenseOperator(n, std::move(m));
}

inline DenseOperator to_dense(const PauliLabel& label, const DenseConfig& cfg = kDenseDefaults) {
  PauliExpansion p(label.n);
  p.set(label, 1.0);
  return to_dense(p, cfg);
}

/// tr(P_x^dagger M) / 2^n, without the coefficient floor.
inline Complex pauli_coefficient(const DenseOperator& a, const PauliLabel& label) {
  if (label.n != a.n) throw DimensionError("pauli_coefficient: qubit count mismatch");
  const auto dim = std::uint64_t{1} << a.n;
  Complex acc = 0.0;
  for (std::uint64_t col = 0; col < dim; ++col) {
    acc += std::conj(detail::pauli_entry(label, col)) *
           a.m(static_cast<Eigen::Index>(col ^ label.x), static_cast<Eigen::Index>(col));
  }
  return acc / static_cast<double>(dim);
}

/// Coefficients over all 4^n labels (zeros dropped).
inline PauliExpansion pauli_decompose(const DenseOperator& a) {
  const auto dim = std::uint64_t{1} << a.n;
  PauliExpansion out(a.n);
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t z = 0; z < dim; ++z) {
      const PauliLabel label{a.n, x, z};
      out.set(label, pauli_coefficient(a, label));
    }
  }
  return out;
}

/// e^{-iHt} through the spectral decomposition of a Hermitian H.
inline DenseOperator expm_i(const DenseOperator& h, double t) {
  require_hermitian(h, "expm_i");
  const Matrix sym = 0.5 * (h.m + h.m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
  return DenseOperator(h.n, es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
}

template <class Scalar>
DenseOperator expm_i(const PauliPolynomial<Scalar>& h, double t) {
  return expm_i(to_dense(h), t);
}

/// Phase-invariant distance min_phi ||U - e^{i phi} V||_F (normalized Frobenius).
inline double unitary_distance(const DenseOperator& u, const DenseOperator& v) {
  DenseOperator::check_same(u, v);
  require_unitary(u, "unitary_distance");
  require_unitary(v, "unitary_distance");
  // The optimal phase aligns tr(V^dagger U); evaluating the residual directly
  // avoids the cancellation in sqrt(2 - 2|tr| / d).
  const Complex overlap = (v.m.adjoint() * u.m).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (u.m - phase * v.m).norm() / std::sqrt(static_cast<double>(u.dim()));
}

struct TracelessLog {
  DenseOperator generator;  // W, traceless Hermitian
  double mean_phase = 0.0;  // e^{-iW} = e^{i mean_phase} U
  bool branch_warning = false;
};

/// Traceless Hermitian W with e^{-iW} = e^{i phi} U.
///
/// U = sum_j e^{-i theta_j} |psi_j><psi_j| with theta_j in (-pi, pi]; W subtracts
/// the mean phase. The Schur form of a unitary is diagonal, so its unitary
/// factor supplies an orthonormal eigenbasis even for degenerate spectra.
inline TracelessLog traceless_log(const DenseOperator& u, const DenseConfig& cfg = kDenseDefaults) {
  require_unitary(u, "traceless_log");
  Eigen::ComplexSchur<Matrix> schur(u.m);
  const Matrix& q = schur.matrixU();
  const Matrix& t = schur.matrixT();
  const auto dim = u.dim();
  Eigen::VectorXd theta(dim);
  bool warn = false;
  for (Eigen::Index j = 0; j < dim; ++j) {
    double th = -std::arg(t(j, j));
    if (th <= -std::numbers::pi) th = std::numbers::pi;
    if (std::numbers::pi - std::abs(th) < cfg.branch_margin) warn = true;
    theta(j) = th;
  }
  const double mean = theta.mean();
  const Eigen::VectorXd centered = theta.array() - mean;
  Matrix w = q * centered.cast<Complex>().asDiagonal() * q.adjoint();
  w = 0.5 * (w + w.adjoint());
  return TracelessLog{DenseOperator(u.n, std::move(w)), mean, warn};
}

}  // namespace hlearn
