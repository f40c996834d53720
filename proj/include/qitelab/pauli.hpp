/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qitelab {

using complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Qubit ordering used everywhere in the library.
///
/// A bitstring label is read left to right as qubits 0, 1, ..., n-1, and
/// qubit j is stored in bit (n-1-j) of the computational-basis index. The
/// label "10" on two qubits is therefore index 2, and reading the index in
/// binary reproduces the label.
inline constexpr std::size_t bit_of_qubit(std::size_t qubit,
                                          std::size_t qubit_count) {
  return qubit_count - 1 - qubit;
}

/// Largest register the dense representation accepts.
inline constexpr std::size_t kMaxQubits = 4;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Tensor product of single-qubit Paulis, one letter per qubit.
class PauliString {
public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> letters);

  /// Parses "XZY"-style text; position j is the letter acting on qubit j.
  static PauliString parse(std::string_view text);
  static PauliString identity(std::size_t qubit_count);
  /// Single non-identity letter `p` on `qubit`.
  static PauliString single(std::size_t qubit_count, std::size_t qubit,
                            Pauli p);

  std::size_t qubit_count() const { return letters_.size(); }
  Pauli operator[](std::size_t qubit) const { return letters_[qubit]; }
  const std::vector<Pauli> &letters() const { return letters_; }

  bool is_identity() const;
  /// Qubits carrying a non-identity letter, ascending.
  std::vector<std::size_t> support() const;
  std::string to_string() const;

  /// Basis-index masks: bits flipped (X or Y) and bits that pick up a sign
  /// (Y or Z). Together with the Y count they fully determine the action.
  std::uint32_t flip_mask() const;
  std::uint32_t sign_mask() const;
  std::size_t y_count() const;

  /// Matrix element phase: P|k> = phase(k) |k ^ flip_mask>.
  complex phase(std::uint32_t index) const;

  CMatrix matrix() const;
  CVector apply(const CVector &amplitudes) const;

  /// Product this * other = phase * string.
  std::pair<complex, PauliString> multiply(const PauliString &other) const;

  /// Lexicographic over letters in the order I < X < Y < Z.
  auto operator<=>(const PauliString &other) const = default;

private:
  std::vector<Pauli> letters_;
};

struct PauliTerm {
  double coefficient = 0.0;
  PauliString string;
};

/// Real-weighted sum of Pauli strings kept in canonical form: terms sorted by
/// string, one term per distinct string.
class PauliSum {
public:
  PauliSum() = default;
  explicit PauliSum(std::size_t qubit_count) : qubit_count_(qubit_count) {}
  PauliSum(std::size_t qubit_count, std::vector<PauliTerm> terms);

  /// Convenience builder from (coefficient, "XYZ") pairs.
  static PauliSum from_labels(
      std::size_t qubit_count,
      std::initializer_list<std::pair<double, std::string_view>> terms);

  std::size_t qubit_count() const { return qubit_count_; }
  const std::vector<PauliTerm> &terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Coefficient of `string` (0 when absent).
  double coefficient(const PauliString &string) const;
  /// Coefficient of the all-identity string.
  double identity_coefficient() const;

  void add(double coefficient, const PauliString &string);

  PauliSum &operator+=(const PauliSum &other);
  PauliSum &operator-=(const PauliSum &other);
  PauliSum &operator*=(double scale);
  friend PauliSum operator+(PauliSum a, const PauliSum &b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum &b) { return a -= b; }
  friend PauliSum operator*(double s, PauliSum a) { return a *= s; }

  /// Drops terms whose |coefficient| <= threshold.
  PauliSum pruned(double threshold) const;
  /// Largest |coefficient|, 0 for an empty sum.
  double max_abs_coefficient() const;

  CMatrix matrix() const;
  CVector apply(const CVector &amplitudes) const;
  std::string to_string() const;

private:
  std::size_t qubit_count_ = 0;
  std::vector<PauliTerm> terms_;
};

} // namespace qitelab
