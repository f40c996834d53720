/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "qitelab/state.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qitelab/error.hpp"
#include "qitelab/tolerances.hpp"

namespace qitelab {

namespace {

void check_dimension(std::size_t qubit_count, Eigen::Index size) {
  if (qubit_count == 0 || qubit_count > kMaxQubits)
    throw DimensionError("qubit count must be in [1, " +
                         std::to_string(kMaxQubits) + "]");
  if (static_cast<std::size_t>(size) != (std::size_t{1} << qubit_count))
    throw DimensionError("amplitude count does not match 2^" +
                         std::to_string(qubit_count));
}

double real_part_checked(complex value) {
  if (std::abs(value.imag()) > tol::imaginary_part)
    throw Error("expectation value has imaginary part " +
                std::to_string(value.imag()) +
                "; observable is not Hermitian");
  return value.real();
}

} // namespace

QuantumState::QuantumState(std::size_t qubit_count, CVector amplitudes)
    : qubit_count_(qubit_count), amplitudes_(std::move(amplitudes)) {
  check_dimension(qubit_count_, amplitudes_.size());
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol::norm)
    throw InvalidArgument("state is not normalized (squared norm " +
                          std::to_string(norm2) + ")");
}

QuantumState QuantumState::normalized(std::size_t qubit_count,
                                      CVector amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0)
    throw InvalidArgument("cannot normalize the zero vector");
  amplitudes /= n;
  return QuantumState(qubit_count, std::move(amplitudes));
}

complex QuantumState::overlap(const QuantumState &other) const {
  if (other.qubit_count_ != qubit_count_)
    throw DimensionError("overlap of states on different qubit counts");
  return amplitudes_.dot(other.amplitudes_);
}

double QuantumState::fidelity(const QuantumState &other) const {
  return std::norm(overlap(other));
}

DensityMatrix::DensityMatrix(std::size_t qubit_count, CMatrix matrix)
    : qubit_count_(qubit_count), matrix_(std::move(matrix)) {
  check_dimension(qubit_count_, matrix_.rows());
  if (matrix_.rows() != matrix_.cols())
    throw DimensionError("density matrix must be square");
  dense::require_hermitian(matrix_, tol::density_hermitian, "density matrix");
  const complex trace = matrix_.trace();
  if (std::abs(trace - complex{1.0, 0.0}) > tol::density_trace)
    throw InvalidArgument("density matrix trace is not 1");
  const RVector evals = dense::eigenvalues(matrix_);
  if (evals(0) < tol::density_min_eigenvalue)
    throw InvalidArgument("density matrix has negative eigenvalue " +
                          std::to_string(evals(0)));
}

DensityMatrix DensityMatrix::from_pure(const QuantumState &state) {
  const CVector &v = state.amplitudes();
  return DensityMatrix(state.qubit_count(), v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t qubit_count) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << qubit_count);
  return DensityMatrix(qubit_count, CMatrix::Identity(dim, dim) /
                                        static_cast<double>(dim));
}

double DensityMatrix::purity() const {
  return (matrix_ * matrix_).trace().real();
}

std::size_t basis_index(std::string_view label) {
  std::size_t index = 0;
  for (char c : label) {
    if (c != '0' && c != '1')
      throw InvalidArgument("basis label contains non-binary character '" +
                            std::string(1, c) + "'");
    index = (index << 1) | static_cast<std::size_t>(c - '0');
  }
  return index;
}

std::string basis_label(std::size_t index, std::size_t qubit_count) {
  std::string label(qubit_count, '0');
  for (std::size_t q = 0; q < qubit_count; ++q)
    if ((index >> bit_of_qubit(q, qubit_count)) & 1u)
      label[q] = '1';
  return label;
}

QuantumState basis_state(std::size_t qubit_count, std::string_view label) {
  if (label.size() != qubit_count)
    throw InvalidArgument("basis label '" + std::string(label) + "' has " +
                          std::to_string(label.size()) + " characters, expected " +
                          std::to_string(qubit_count));
  const std::size_t index = basis_index(label);
  check_dimension(qubit_count, static_cast<Eigen::Index>(1) << qubit_count);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(1) << qubit_count);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return QuantumState(qubit_count, std::move(v));
}

double expectation(const QuantumState &state, const PauliSum &observable) {
  if (observable.qubit_count() != state.qubit_count())
    throw DimensionError("observable and state act on different qubit counts");
  return real_part_checked(
      state.amplitudes().dot(observable.apply(state.amplitudes())));
}

double expectation(const DensityMatrix &rho, const PauliSum &observable) {
  if (observable.qubit_count() != rho.qubit_count())
    throw DimensionError("observable and state act on different qubit counts");
  return real_part_checked((rho.matrix() * observable.matrix()).trace());
}

double expectation(const QuantumState &state, const PauliString &observable) {
  if (observable.qubit_count() != state.qubit_count())
    throw DimensionError("observable and state act on different qubit counts");
  return real_part_checked(
      state.amplitudes().dot(observable.apply(state.amplitudes())));
}

double expectation(const DensityMatrix &rho, const PauliString &observable) {
  if (observable.qubit_count() != rho.qubit_count())
    throw DimensionError("observable and state act on different qubit counts");
  return real_part_checked((rho.matrix() * observable.matrix()).trace());
}

QuantumState apply_pauli_exponential(const QuantumState &state,
                                     const PauliSum &generator, double angle) {
  if (generator.qubit_count() != state.qubit_count())
    throw DimensionError("generator and state act on different qubit counts");
  if (generator.empty() || angle == 0.0)
    return state;
  const CMatrix u =
      dense::hermitian_exp(generator.matrix(), complex{0.0, -angle});
  return QuantumState::normalized(state.qubit_count(), u * state.amplitudes());
}

std::pair<QuantumState, double>
apply_nonunitary_exponential(const QuantumState &state, const PauliSum &h,
                             double tau) {
  if (tau < 0.0)
    throw InvalidArgument("imaginary-time step must be non-negative");
  if (h.qubit_count() != state.qubit_count())
    throw DimensionError("Hamiltonian and state act on different qubit counts");
  if (tau == 0.0 || h.empty())
    return {state, 1.0};
  const CMatrix e = dense::hermitian_exp(h.matrix(), complex{-tau, 0.0});
  CVector image = e * state.amplitudes();
  const double norm = image.norm();
  return {QuantumState::normalized(state.qubit_count(), std::move(image)),
          norm};
}

namespace dense {

CMatrix hermitian_exp(const CMatrix &hermitian, complex factor) {
  require_hermitian(hermitian, 1e-10, "generator");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian);
  const RVector &w = solver.eigenvalues();
  const CMatrix &v = solver.eigenvectors();
  CVector f(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    f(i) = std::exp(factor * w(i));
  return v * f.asDiagonal() * v.adjoint();
}

RVector eigenvalues(const CMatrix &hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian,
                                                Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

void require_hermitian(const CMatrix &m, double tolerance, const char *what) {
  if (m.rows() != m.cols())
    throw DimensionError(std::string(what) + " is not square");
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tolerance)
    throw InvalidArgument(std::string(what) + " is not Hermitian (deviation " +
                          std::to_string(dev) + ")");
}

} // namespace dense

} // namespace qitelab
