/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qitelab/backends.hpp"
#include "qitelab/pauli.hpp"
#include "qitelab/state.hpp"

namespace qitelab {

enum class GeneratorForm { Restricted, FullPool };
enum class UpdateMode { WholeHamiltonian, PerTerm };

std::string to_string(GeneratorForm form);
std::string to_string(UpdateMode mode);
GeneratorForm generator_form_from_string(const std::string &text);
UpdateMode update_mode_from_string(const std::string &text);

/// Unitary-update generators. In the full pool every Pauli string on the
/// domain is listed (identity first, then lexicographic); the identity entry
/// only shifts a global phase and is never solved for. In the restricted pool
/// each entry is an antisymmetric pair carrying a single coefficient.
struct OperatorPool {
  std::size_t qubit_count = 0;
  std::size_t domain = 0; // D: the pool acts on D + 1 qubits
  GeneratorForm form = GeneratorForm::Restricted;
  std::vector<PauliSum> generators;
  std::vector<std::string> labels;

  std::size_t size() const { return generators.size(); }
  bool is_identity(std::size_t i) const;
};

/// restricted: {X0Y1 - X1Y0} on 2 qubits, {X0Y1 - X1Y0, X0Z1Y2 - X2Z1Y0} on 3.
/// Requires D + 1 == qubit_count.
OperatorPool build_pool(std::size_t qubit_count, std::size_t domain,
                        bool restricted);

/// One linear solve for a single (local) Hamiltonian piece.
struct QiteStepSolution {
  RVector a;                      // one entry per pool generator (identity 0)
  double c = 1.0;                 // <Psi| e^{-2 dtau h} |Psi>
  /// ||c^{-1/2}(1 - dtau h)|Psi> - (1 - i dtau A)|Psi>||, the objective whose
  /// exact minimizer the normal equations return.
  double residual = 0.0;
  /// Same norm with the exact target c^{-1/2} e^{-dtau h}|Psi>.
  double residual_exact_target = 0.0;
  double energy_after = 0.0;      // <h> after this update
};

struct QiteStepResult {
  QiteStepSolution solution;
  QuantumState state;
};

/// Builds S_IJ = Re<s_I s_J> and b_I = c^{-1/2} Im<Psi| s_I h |Psi>, solves
/// (S + ridge) a = b and applies exp(-i dtau sum_I a_I s_I). With ridge == 0
/// a singular S raises ConditioningError.
QiteStepResult qite_step(const QuantumState &state, const PauliSum &h,
                         double delta_tau, const OperatorPool &pool,
                         double ridge = 1e-8);

double qite_linearized_residual(const QuantumState &state, const PauliSum &h,
                                double delta_tau, const OperatorPool &pool,
                                const RVector &a);
double qite_exact_target_residual(const QuantumState &state, const PauliSum &h,
                                  double delta_tau, const OperatorPool &pool,
                                  const RVector &a);

/// All updates of one imaginary-time step (one per local term in per-term
/// mode, a single one in whole-Hamiltonian mode).
struct QiteStep {
  std::vector<QiteStepSolution> updates;
  double energy = 0.0; // <H> after the step
};

struct QiteTrajectory {
  double delta_tau = 0.0;
  GeneratorForm generator_form = GeneratorForm::Restricted;
  UpdateMode update_mode = UpdateMode::WholeHamiltonian;
  std::vector<QiteStep> steps;
  std::vector<QuantumState> states; // Psi_0 ... Psi_n
  std::vector<double> energies;     // <H> on each state, same length as states

  std::size_t step_count() const { return steps.size(); }
  double beta(std::size_t s) const { return delta_tau * static_cast<double>(s); }
};

struct QiteOptions {
  double delta_tau = 0.05;
  std::size_t n_steps = 40;
  UpdateMode update = UpdateMode::WholeHamiltonian;
  double ridge = 1e-8;
};

/// Runs QITE from psi0. In per-term mode each step applies one update per
/// entry of `local_terms` in order; in whole-Hamiltonian mode one update for
/// their sum.
QiteTrajectory qite_run(const QuantumState &psi0,
                        const std::vector<PauliSum> &local_terms,
                        const OperatorPool &pool, const QiteOptions &options);

/// Normalized e^{-s dtau H}|psi0> for s = 0..n_steps.
struct ImaginaryTimeTrajectory {
  double delta_tau = 0.0;
  std::vector<QuantumState> states;
  std::vector<double> energies;
};

ImaginaryTimeTrajectory exact_imaginary_time(const QuantumState &psi0,
                                             const PauliSum &h,
                                             double delta_tau,
                                             std::size_t n_steps);

/// Single-step circuits: for step s the accumulated coefficient
/// dtau * sum_{k<=s} a[k] of each generator becomes the template angle
/// theta = 2 s dtau a'[s] with a'[s] the running mean.
struct CompressedTrajectory {
  std::vector<double> betas;                 // s * dtau, s = 1..n
  std::vector<CircuitTemplate> templates;
  std::vector<double> fidelity;              // |<compressed|full>|^2
  std::vector<double> energies;              // <H> on the compressed states
};

/// Requires a restricted-pool trajectory that starts from a basis state.
CompressedTrajectory single_step_compress(const QiteTrajectory &trajectory,
                                          const PauliSum &h,
                                          std::size_t cnot_count_base = 4);

nlohmann::json to_json(const QiteTrajectory &trajectory);
nlohmann::json to_json(const CompressedTrajectory &compressed);

} // namespace qitelab
