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
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "hlearn/dense.hpp"
#include "hlearn/errors.hpp"
#include "hlearn/pauli_polynomial.hpp"
#include "hlearn/random.hpp"

namespace hlearn {

enum class AccessMode { exact, sampled };

/// How probe states are read out: exact amplitudes (optionally perturbed by
/// complex Gaussian noise of scale noise_sigma) or simulated measurements.
struct ProbeSettings {
  AccessMode mode = AccessMode::exact;
  double noise_sigma = 0.0;
};

struct TomographyConfig {
  double c_hh = 16.0;
  double c_tomo = 8.0;
  /// Heavy hitters keep x when the empirical frequency reaches this fraction
  /// of threshold^2; 0.625 sits midway between 1 and 1/4.
  double keep_fraction = 0.625;
};

/// A pure state over Pauli labels, |psi> = sum_x beta_x |x>, indexed by
/// PauliLabel::index().
class StateAccess {
 public:
  StateAccess(unsigned n, Eigen::VectorXcd amplitudes, ProbeSettings settings, std::uint64_t seed)
      : n_(n), amps_(std::move(amplitudes)), settings_(settings) {
    if (amps_.size() != (Eigen::Index{1} << (2 * n_))) throw DimensionError("state has wrong dimension");
    if (settings_.mode == AccessMode::exact && settings_.noise_sigma > 0.0) {
      Rng rng(derive_seed(seed, {0x6e6f6973u}));
      const double s = settings_.noise_sigma / std::sqrt(2.0);
      for (Eigen::Index i = 0; i < amps_.size(); ++i) {
        const double re = standard_normal(rng);
        const double im = standard_normal(rng);
        amps_(i) += Complex(s * re, s * im);
      }
    }
    const double norm = amps_.norm();
    if (!(norm > 0.0)) throw DomainError("state has zero norm");
    if (settings_.noise_sigma == 0.0 && std::abs(norm - 1.0) > 1e-10) {
      throw DomainError("state is not normalized");
    }
    amps_ /= norm;
  }

  unsigned num_qubits() const { return n_; }
  AccessMode mode() const { return settings_.mode; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Complex amplitude(const PauliLabel& x) const { return amps_(static_cast<Eigen::Index>(x.index())); }
  double probability(const PauliLabel& x) const { return std::norm(amplitude(x)); }

  /// Global phase applied to every amplitude (test hook for phase invariance).
  StateAccess with_phase(double phi) const {
    StateAccess out = *this;
    out.amps_ *= std::polar(1.0, phi);
    return out;
  }

 private:
  unsigned n_;
  Eigen::VectorXcd amps_;
  ProbeSettings settings_;
};

/// Choi amplitudes beta_x = tr(P_x^dagger U) / 2^n of a unitary.
inline Eigen::VectorXcd choi_vector(const DenseOperator& u) {
  require_unitary(u, "choi_amplitudes");
  const unsigned n = u.n;
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim * dim));
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t z = 0; z < dim; ++z) {
      const PauliLabel label{n, x, z};
      Complex acc = 0.0;
      for (std::uint64_t col = 0; col < dim; ++col) {
        acc += std::conj(detail::pauli_entry(label, col)) *
               u.m(static_cast<Eigen::Index>(col ^ x), static_cast<Eigen::Index>(col));
      }
      out(static_cast<Eigen::Index>(label.index())) = acc / static_cast<double>(dim);
    }
  }
  return out;
}

inline StateAccess choi_amplitudes(const DenseOperator& u, ProbeSettings settings = {}, std::uint64_t seed = 0) {
  return StateAccess(u.n, choi_vector(u), settings, seed);
}

inline PauliExpansion to_expansion(const StateAccess& access) {
  PauliExpansion out(access.num_qubits());
  const auto& a = access.amplitudes();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.set(PauliLabel::from_index(access.num_qubits(), static_cast<std::uint64_t>(i)), a(i));
  }
  return out;
}

struct HeavyHitters {
  std::vector<PauliLabel> labels;  // ascending label order
  std::vector<double> frequency;   // empirical (or exact) probability per label
  double copies = 0.0;
};

namespace detail {

/// Integer shot count for a sampled run; refuses budgets that cannot be drawn.
inline std::uint64_t drawable_shots(double nominal) {
  if (!(nominal >= 0.0) || nominal > 0x1p60) {
    throw DomainError("sampled tomography budget is not representable (" + std::to_string(nominal) + " copies)");
  }
  return static_cast<std::uint64_t>(nominal);
}

}  // namespace detail

inline double heavy_hitter_samples(double threshold, double delta, const TomographyConfig& cfg) {
  const double inv = 1.0 / (threshold * threshold);
  return std::ceil(cfg.c_hh * inv * std::log((inv + 1.0) / delta));
}

/// Shots per measurement basis of restricted tomography on k labels.
inline double restricted_shots(std::size_t k, double accuracy, double delta, const TomographyConfig& cfg) {
  const double kk = static_cast<double>(std::max<std::size_t>(k, 1));
  return std::ceil(cfg.c_tomo * kk * std::log(4.0 * kk / delta) / (accuracy * accuracy));
}

/// Bases used by restricted tomography: the computational basis, plus four
/// phase-shifted Fourier bases when k > 1.
inline double restricted_bases(std::size_t k) { return k > 1 ? 5.0 : 1.0; }

namespace detail {

/// Multinomial counts over all basis states via sequential binomials.
inline std::vector<std::uint64_t> sample_counts(const StateAccess& access, std::uint64_t shots, Rng& rng) {
  const auto& a = access.amplitudes();
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(a.size()), 0);
  double remaining_mass = 1.0;
  std::uint64_t remaining = shots;
  for (Eigen::Index i = 0; i < a.size() && remaining > 0; ++i) {
    const double p = std::norm(a(i));
    if (p <= 0.0) continue;
    const double q = std::clamp(p / remaining_mass, 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> bin(remaining, q);
    const std::uint64_t c = q >= 1.0 ? remaining : bin(rng);
    counts[static_cast<std::size_t>(i)] = c;
    remaining -= c;
    remaining_mass = std::max(0.0, remaining_mass - p);
    if (remaining_mass <= 0.0) break;
  }
  return counts;
}

}  // namespace detail

/// Labels whose weight |beta_x|^2 reaches keep_fraction * threshold^2.
inline HeavyHitters heavy_hitters(const StateAccess& access, double threshold, double delta, std::uint64_t seed,
                                  const TomographyConfig& cfg = {}) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("heavy_hitters: threshold must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("heavy_hitters: delta must lie in (0, 1)");
  HeavyHitters out;
  out.copies = heavy_hitter_samples(threshold, delta, cfg);
  const double cut = cfg.keep_fraction * threshold * threshold;
  const unsigned n = access.num_qubits();
  const auto& a = access.amplitudes();
  if (access.mode() == AccessMode::exact) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double p = std::norm(a(i));
      if (p >= cut) {
        out.labels.push_back(PauliLabel::from_index(n, static_cast<std::uint64_t>(i)));
        out.frequency.push_back(p);
      }
    }
  } else {
    Rng rng(derive_seed(seed, {0x6868u}));
    const auto counts = detail::sample_counts(access, detail::drawable_shots(out.copies), rng);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const double f = static_cast<double>(counts[i]) / out.copies;
      if (counts[i] > 0 && f >= cut) {
        out.labels.push_back(PauliLabel::from_index(n, i));
        out.frequency.push_back(f);
      }
    }
  }
  // Index order is (z, x) major; present labels in label order.
  std::vector<std::size_t> order(out.labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return out.labels[i] < out.labels[j]; });
  HeavyHitters sorted;
  sorted.copies = out.copies;
  for (std::size_t i : order) {
    sorted.labels.push_back(out.labels[i]);
    sorted.frequency.push_back(out.frequency[i]);
  }
  return sorted;
}

struct RestrictedEstimate {
  PauliExpansion coefficients;
  double copies = 0.0;
};

/// Amplitudes on `support`, correct up to one global phase.
///
/// Sampled mode measures a computational-basis batch for the moduli and takes
/// the most frequent label as reference r. It then measures the support in
/// the Fourier basis after a phase e^{i theta} on r, theta in {0, pi, pi/2,
/// -pi/2}. Differences of opposite-phase outcome frequencies are linear in
/// conj(beta_r) beta_x (the quadratic terms cancel), so an inverse transform
/// recovers every coefficient from five bases in total.
inline RestrictedEstimate restricted_tomography(const StateAccess& access, const std::vector<PauliLabel>& support,
                                                double accuracy, double delta, std::uint64_t seed,
                                                const TomographyConfig& cfg = {}) {
  if (!(accuracy > 0.0)) throw DomainError("restricted_tomography: accuracy must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("restricted_tomography: delta must lie in (0, 1)");
  const unsigned n = access.num_qubits();
  RestrictedEstimate out{PauliExpansion(n), 0};
  if (support.empty()) return out;
  const std::size_t k = support.size();
  const double nominal_shots = restricted_shots(k, accuracy, delta, cfg);
  out.copies = nominal_shots * restricted_bases(k);
  if (access.mode() == AccessMode::exact) {
    for (const auto& x : support) out.coefficients.set(x, access.amplitude(x));
    return out;
  }
  const std::uint64_t shots = detail::drawable_shots(nominal_shots);
  Rng rng(derive_seed(seed, {0x7274u}));
  const double n_shots = static_cast<double>(shots);
  // Outcome frequencies of k support outcomes; the remaining mass is lumped.
  auto draw = [&](const std::vector<double>& probs) {
    std::vector<double> freq(probs.size());
    double remaining_mass = 1.0;
    std::uint64_t remaining = shots;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      const double q = remaining_mass > 0.0 ? std::clamp(probs[i] / remaining_mass, 0.0, 1.0) : 0.0;
      std::binomial_distribution<std::uint64_t> bin(remaining, q);
      const std::uint64_t c = bin(rng);
      freq[i] = static_cast<double>(c) / n_shots;
      remaining -= c;
      remaining_mass = std::max(0.0, remaining_mass - probs[i]);
    }
    return freq;
  };
  std::vector<double> moduli(k);
  for (std::size_t i = 0; i < k; ++i) moduli[i] = access.probability(support[i]);
  const std::vector<double> freq = draw(moduli);
  const std::size_t ref = static_cast<std::size_t>(std::max_element(freq.begin(), freq.end()) - freq.begin());
  const double ref_mod = std::sqrt(freq[ref]);
  out.coefficients.set(support[ref], ref_mod);
  if (k == 1 || ref_mod <= 0.0) return out;

  // Position 0 holds the reference, positions 1..k-1 the other labels.
  std::vector<std::size_t> slot;
  slot.push_back(ref);
  for (std::size_t i = 0; i < k; ++i)
    if (i != ref) slot.push_back(i);
  const double kd = static_cast<double>(k);
  auto omega = [&](std::size_t power) { return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(power % k) / kd); };
  std::vector<Complex> amp(k);
  for (std::size_t p = 0; p < k; ++p) amp[p] = access.amplitude(support[slot[p]]);
  auto fourier_freq = [&](Complex ref_phase) {
    std::vector<double> probs(k);
    for (std::size_t j = 0; j < k; ++j) {
      Complex acc = ref_phase * amp[0];
      for (std::size_t p = 1; p < k; ++p) acc += omega(j * p) * amp[p];
      probs[j] = std::norm(acc) / kd;
    }
    return draw(probs);
  };
  const Complex ii(0.0, 1.0);
  const auto f0 = fourier_freq(1.0), fpi = fourier_freq(-1.0), fp = fourier_freq(ii), fm = fourier_freq(-ii);
  // G_j estimates conj(beta_r) sum_p omega^{jp} beta_p over p >= 1.
  std::vector<Complex> g(k);
  for (std::size_t j = 0; j < k; ++j) g[j] = kd / 4.0 * Complex(f0[j] - fpi[j], fp[j] - fm[j]);
  for (std::size_t p = 1; p < k; ++p) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += std::conj(omega(j * p)) * g[j];
    out.coefficients.set(support[slot[p]], acc / kd / ref_mod);
  }
  return out;
}

struct TomographyResult {
  PauliExpansion coefficients;
  std::vector<PauliLabel> support;
  double delta = 0.0;
  double copies = 0.0;
};

namespace detail {

/// Keeps at most `cap` labels of highest frequency, always retaining `keep`.
inline std::vector<PauliLabel> cap_support(const HeavyHitters& hh, std::size_t cap, const PauliLabel* keep) {
  std::vector<std::size_t> order(hh.labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return hh.frequency[i] > hh.frequency[j]; });
  std::vector<PauliLabel> out;
  if (keep) out.push_back(*keep);
  for (std::size_t i : order) {
    if (out.size() >= cap) break;
    if (keep && hh.labels[i] == *keep) continue;
    out.push_back(hh.labels[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline PauliExpansion phase_corrected(const PauliExpansion& est) {
  const Complex ref = std::conj(est.coefficient(PauliLabel::identity(est.num_qubits())));
  PauliExpansion out(est.num_qubits());
  for (const auto& [label, value] : est.terms()) out.set(label, ref * value);
  return out;
}

inline TomographyResult sparse_tomography(const StateAccess& access, std::size_t cap, double threshold, double eps,
                                          double delta, std::uint64_t seed, bool phase_fix,
                                          const TomographyConfig& cfg) {
  if (!(eps > 0.0)) throw DomainError("sparse tomography: accuracy must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("sparse tomography: delta must lie in (0, 1)");
  const double thr = std::min(threshold, 0.999);
  const HeavyHitters hh = heavy_hitters(access, thr, delta / 3.0, derive_seed(seed, {1}), cfg);
  const PauliLabel id = PauliLabel::identity(access.num_qubits());
  auto support = cap_support(hh, std::max<std::size_t>(cap, 1), phase_fix ? &id : nullptr);
  const RestrictedEstimate est =
      restricted_tomography(access, support, eps / 20.0, delta / 3.0, derive_seed(seed, {2}), cfg);
  TomographyResult out{phase_fix ? phase_corrected(est.coefficients) : est.coefficients, support, delta,
                       hh.copies + est.copies};
  return out;
}

}  // namespace detail

/// l-infinity sparse pure-state tomography with the conj(beta_0) phase fix.
inline TomographyResult sparse_tomo_linf(const StateAccess& access, std::size_t s, double eps, double delta,
                                         std::uint64_t seed, const TomographyConfig& cfg = {}) {
  return detail::sparse_tomography(access, s, 0.75 * eps, eps, delta, seed, true, cfg);
}

/// l2 sparse pure-state tomography. Without the phase fix the output is
/// accurate only up to a global phase.
inline TomographyResult sparse_tomo_l2(const StateAccess& access, std::size_t s, double eps, double delta,
                                       std::uint64_t seed, bool phase_fix = true, const TomographyConfig& cfg = {}) {
  const double sd = static_cast<double>(std::max<std::size_t>(s, 1));
  return detail::sparse_tomography(access, 2 * std::max<std::size_t>(s, 1), eps / (2.0 * std::sqrt(sd)), eps, delta,
                                   seed, phase_fix, cfg);
}

/// Writes "label,count" rows of a computational-basis transcript.
inline void write_sample_transcript(std::ostream& out, const StateAccess& access, std::uint64_t shots,
                                    std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x7478u}));
  const auto counts = detail::sample_counts(access, shots, rng);
  out << "label,count\n";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0) out << PauliLabel::from_index(access.num_qubits(), i).to_string() << ',' << counts[i] << '\n';
  }
}

}  // namespace hlearn
