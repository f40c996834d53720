/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <cstddef>
#include <string_view>
#include <utility>

#include "qitelab/pauli.hpp"

namespace qitelab {

/// Normalized pure state on `qubit_count` qubits. Immutable once built.
class QuantumState {
public:
  /// Validates the dimension and that the squared norm is 1 within tol::norm.
  QuantumState(std::size_t qubit_count, CVector amplitudes);

  /// Normalizes `amplitudes` first. Throws on a zero vector.
  static QuantumState normalized(std::size_t qubit_count, CVector amplitudes);

  std::size_t qubit_count() const { return qubit_count_; }
  std::size_t dimension() const { return std::size_t{1} << qubit_count_; }
  const CVector &amplitudes() const { return amplitudes_; }
  complex amplitude(std::size_t index) const { return amplitudes_(index); }

  /// <this|other>
  complex overlap(const QuantumState &other) const;
  /// |<this|other>|^2
  double fidelity(const QuantumState &other) const;

private:
  std::size_t qubit_count_;
  CVector amplitudes_;
};

/// Mixed state for noisy-channel simulation.
class DensityMatrix {
public:
  /// Validates Hermiticity, unit trace and eigenvalues >= -1e-10.
  DensityMatrix(std::size_t qubit_count, CMatrix matrix);

  static DensityMatrix from_pure(const QuantumState &state);
  static DensityMatrix maximally_mixed(std::size_t qubit_count);

  std::size_t qubit_count() const { return qubit_count_; }
  std::size_t dimension() const { return std::size_t{1} << qubit_count_; }
  const CMatrix &matrix() const { return matrix_; }

  /// Tr[rho^2]
  double purity() const;

private:
  std::size_t qubit_count_;
  CMatrix matrix_;
};

/// Computational basis state; label[j] is the value of qubit j.
QuantumState basis_state(std::size_t qubit_count, std::string_view label);

/// Basis index of a label under the library's qubit ordering.
std::size_t basis_index(std::string_view label);
/// Label of a basis index (inverse of basis_index).
std::string basis_label(std::size_t index, std::size_t qubit_count);

double expectation(const QuantumState &state, const PauliSum &observable);
double expectation(const DensityMatrix &rho, const PauliSum &observable);
double expectation(const QuantumState &state, const PauliString &observable);
double expectation(const DensityMatrix &rho, const PauliString &observable);

/// exp(-i angle G)|psi> for a Hermitian generator G.
QuantumState apply_pauli_exponential(const QuantumState &state,
                                     const PauliSum &generator, double angle);

/// (normalized exp(-tau h)|psi>, ||exp(-tau h)|psi>||) for tau >= 0.
std::pair<QuantumState, double>
apply_nonunitary_exponential(const QuantumState &state, const PauliSum &h,
                             double tau);

/// Dense Hermitian-matrix helpers shared across modules. Functions of a
/// Hermitian matrix go through its eigendecomposition.
namespace dense {

/// exp(factor * H) for Hermitian H and any complex factor.
CMatrix hermitian_exp(const CMatrix &hermitian, complex factor);

/// Ascending eigenvalues of a Hermitian matrix.
RVector eigenvalues(const CMatrix &hermitian);

/// Throws if `m` is not Hermitian within `tolerance` (max-abs entrywise).
void require_hermitian(const CMatrix &m, double tolerance, const char *what);

} // namespace dense

} // namespace qitelab
