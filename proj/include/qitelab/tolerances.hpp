/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

// Every numerical threshold used by the library lives here.

namespace qitelab::tol {

/// Exact algebraic identities (P^2 = I, linearity of expectation values).
inline constexpr double algebraic = 1e-12;

/// Composition of evolutions (e^{-t1 H} e^{-t2 H} versus e^{-(t1+t2) H}).
inline constexpr double evolution = 1e-10;

/// Statevector normalization.
inline constexpr double norm = 1e-12;

/// Largest imaginary part tolerated in an expectation value of a Hermitian
/// observable before it is discarded.
inline constexpr double imaginary_part = 1e-10;

/// Density matrices: Hermiticity and unit trace.
inline constexpr double density_hermitian = 1e-12;
inline constexpr double density_trace = 1e-12;

/// Smallest eigenvalue allowed for a density matrix.
inline constexpr double density_min_eigenvalue = -1e-10;

/// Exact-match tolerance when looking up a bond length in a coefficient table.
inline constexpr double bond_length_match = 1e-9;

/// Krylov overlap matrix: unit diagonal and positive semidefiniteness.
inline constexpr double krylov_unit_diagonal = 1e-10;
inline constexpr double krylov_min_eigenvalue = -1e-8;

/// Hermiticity check on Pauli-sum generators (coefficient imaginary parts).
inline constexpr double hermitian_coefficient = 1e-12;

/// Relative pivot below which a linear solve is treated as singular.
inline constexpr double singular_pivot = 1e-13;

/// Template fitting must reproduce the requested state to this infidelity.
inline constexpr double template_fit_infidelity = 1e-10;

/// Residual that counts as an exact solve in the finite-basis extrapolation.
inline constexpr double luscher_residual = 1e-6;

} // namespace qitelab::tol
