/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "qitelab/pauli.hpp"

namespace qitelab {

/// Pion-less EFT deuteron in a harmonic-oscillator basis of size N.
struct DeuteronParams {
  double hbar_omega = 7.0;   // MeV
  double v0 = -5.686;        // MeV, contact strength on the n = 0 state
  double lambda_uv = 152.0;  // MeV; carried for provenance, no formula uses it
  std::size_t n_basis = 2;

  void validate() const;
};

/// Symmetric N x N matrix of <n'|T+V|n> in MeV.
struct OneBodyMatrix {
  RMatrix entries;

  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
};

/// Kinetic plus contact potential in the oscillator basis. Tridiagonal:
/// diagonal hw/2 (2n + 3/2) + V0 [n = 0], coupling between n and n+1 equal
/// to -hw/2 sqrt((n+1)(n+3/2)).
OneBodyMatrix ho_one_body_matrix(const DeuteronParams &params);

/// Jordan-Wigner image of sum_{pq} t_pq a_p^dag a_q with qubit j = orbital j.
/// Occupied orbital is |1>, so a_p^dag a_p -> (I - Z_p)/2.
PauliSum jordan_wigner_one_body(const OneBodyMatrix &matrix);

struct DeuteronHamiltonian {
  PauliSum full;
  /// Diagonal group first, then one group per nearest-neighbour hopping pair.
  std::vector<PauliSum> local_terms;
};

/// N = 2 or N = 3 with default parameters.
DeuteronHamiltonian deuteron_hamiltonian(std::size_t n_basis);
DeuteronHamiltonian deuteron_hamiltonian(const DeuteronParams &params);

/// One row of the two-qubit H2 coefficient table.
struct H2Row {
  double bond_length = 0.0;
  std::array<double, 6> h{}; // Hartree; I, Z0, Z1, Z0Z1, X0X1, Y0Y1
};

struct H2CoefficientTable {
  std::string units; // from the '#units:' comment; empty when absent
  std::vector<H2Row> rows;

  const H2Row &row(double bond_length) const;
  std::vector<double> bond_lengths() const;
};

/// Parses the coefficient CSV. See data/README.md for the format.
H2CoefficientTable load_h2_coefficients(const std::filesystem::path &path);
H2CoefficientTable parse_h2_coefficients(const std::string &text);

/// h0 I + h1 Z0 + h2 Z1 + h3 Z0Z1 + h4 X0X1 + h5 Y0Y1.
PauliSum h2_hamiltonian(const H2Row &row);
/// Exact-match lookup of `bond_length` (no interpolation).
PauliSum h2_hamiltonian(const H2CoefficientTable &table, double bond_length);

/// Splits a Hamiltonian for Trotterized updates: all diagonal (I/Z-only)
/// strings in one group, then the remaining strings grouped by their flip
/// pattern so that members of a group commute (XX with YY on the same pair).
std::vector<PauliSum> group_local_terms(const PauliSum &hamiltonian);

} // namespace qitelab
