/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qitelab/pauli.hpp"
#include "qitelab/state.hpp"

namespace qitelab {

enum class TemplateKind { TwoQubitSingleStep, ThreeQubitSingleStep };

std::string to_string(TemplateKind kind);

/// Shallow single-step circuit.
///
/// two_qubit_single_step prepares exp(-i (theta/2)(X0Y1 - X1Y0)) |initial>.
/// three_qubit_single_step prepares
///   exp(-i (theta1/2)(X0Y1 - X1Y0)) exp(-i (theta2/2)(X0Z1Y2 - X2Z1Y0)) |initial>.
struct CircuitTemplate {
  TemplateKind kind = TemplateKind::TwoQubitSingleStep;
  std::string initial_label = "10";
  std::vector<double> angles{0.0};
  /// Logical CNOTs in the circuit; the two-qubit template always has one.
  std::size_t cnot_count_base = 1;

  std::size_t qubit_count() const {
    return kind == TemplateKind::TwoQubitSingleStep ? 2 : 3;
  }

  static CircuitTemplate two_qubit(std::string initial, double theta);
  static CircuitTemplate three_qubit(std::string initial, double theta1,
                                     double theta2,
                                     std::size_t cnot_count_base = 4);

  void validate() const;
};

/// Pooled generators used by the templates, in template order.
PauliSum two_qubit_generator();                  // X0Y1 - X1Y0
std::vector<PauliSum> three_qubit_generators();  // {X0Y1 - X1Y0, X0Z1Y2 - X2Z1Y0}

/// p01 = P(read 0 | prepared 1), p10 = P(read 1 | prepared 0).
struct ReadoutError {
  double p01 = 0.0;
  double p10 = 0.0;
};

struct NoiseModel {
  std::vector<ReadoutError> readout; // one entry per qubit; empty = none
  double cnot_depolarizing = 0.0;
  /// Physical CNOTs per logical CNOT; odd so the added pairs cancel.
  std::size_t replication_factor = 1;

  static NoiseModel uniform(std::size_t qubit_count, double p01, double p10,
                            double cnot_depolarizing,
                            std::size_t replication_factor = 1);

  bool has_readout_noise() const;
  NoiseModel with_replication(std::size_t r) const;
  void validate(std::size_t qubit_count) const;
};

/// Sampled estimate of one Pauli string.
struct ExpectationEstimate {
  PauliString observable;
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t shots = 0;
  /// Outcome label (qubit 0 first) -> count, in the rotated measurement basis.
  std::map<std::string, std::uint64_t> raw_counts;
};

/// Ideal state produced by a template.
QuantumState prepare_state(const CircuitTemplate &circuit);

/// Gate-level noisy simulation. Each logical CNOT is applied
/// `replication_factor` times and every physical CNOT is followed by a
/// two-qubit depolarizing channel of strength `cnot_depolarizing` on its pair.
/// Readout noise is not applied here.
DensityMatrix noisy_density_simulation(const CircuitTemplate &circuit,
                                       const NoiseModel &noise);

/// rho -> (1 - eps) rho + eps Tr_{ab}[rho] (x) I_ab / 4.
DensityMatrix depolarize_pair(const DensityMatrix &rho, std::size_t qubit_a,
                              std::size_t qubit_b, double eps);

/// Measurement-basis probabilities for `observable`, before readout noise.
/// Entry k is the probability of basis index k after rotating X/Y to Z.
std::vector<double> rotated_probabilities(const DensityMatrix &rho,
                                          const PauliString &observable);

/// Applies independent per-qubit readout flips to an outcome distribution.
std::vector<double> apply_readout(const std::vector<double> &probabilities,
                                  const std::vector<ReadoutError> &readout);

/// Draws `shots` outcomes from `probabilities` and returns per-index counts.
std::vector<std::uint64_t> draw_counts(const std::vector<double> &probabilities,
                                       std::uint64_t shots, std::uint64_t seed);

/// Finite-shot estimate of <observable> on a fixed state.
ExpectationEstimate sample_pauli_expectation(const DensityMatrix &rho,
                                             const PauliString &observable,
                                             std::uint64_t shots,
                                             const std::vector<ReadoutError> &readout,
                                             std::uint64_t seed);

/// Template-driven form: runs the noisy (or ideal when `noise` is empty)
/// circuit, then samples with the model's readout errors.
ExpectationEstimate
sample_pauli_expectation(const CircuitTemplate &circuit,
                         const PauliString &observable, std::uint64_t shots,
                         const std::optional<NoiseModel> &noise,
                         std::uint64_t seed);

/// Noisy circuit as a measurement source.
struct NoisyCircuit {
  CircuitTemplate circuit;
  NoiseModel noise;
};

using StateSource = std::variant<QuantumState, DensityMatrix, NoisyCircuit>;

struct TermEstimate {
  double coefficient = 0.0;
  ExpectationEstimate estimate;
};

struct EnergyEstimate {
  double energy = 0.0;
  double std_error = 0.0;
  std::vector<TermEstimate> per_term; // non-identity terms only
};

/// Energy from a source. `shots == 0` selects exact evaluation (no sampling,
/// std_error 0). Otherwise each non-identity term is sampled independently
/// with a seed derived from `seed` and the term index; identity terms are
/// added exactly. Readout noise is taken from the NoisyCircuit's model or
/// from `readout` for state sources.
EnergyEstimate measure_energy(const StateSource &source, const PauliSum &h,
                              std::uint64_t shots, std::uint64_t seed,
                              const std::vector<ReadoutError> &readout = {});

/// Template reproducing `state` (up to global phase). Supports the two-qubit
/// template from |10> or |01> and the three-qubit template from |100>; the
/// state must be real in the reachable sector. Throws InvalidArgument when
/// the fitted template does not reproduce the state.
CircuitTemplate fit_template(const QuantumState &state,
                             const std::string &initial_label,
                             std::size_t cnot_count_base = 4);

} // namespace qitelab
