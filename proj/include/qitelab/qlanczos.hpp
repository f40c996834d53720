/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "qitelab/pauli.hpp"
#include "qitelab/qite.hpp"
#include "qitelab/state.hpp"

namespace qitelab {

struct ConditionReport {
  double overlap_threshold = 0.0;
  double eig_cutoff = 0.0;
  std::vector<std::size_t> discarded_indices;
  std::size_t discarded_directions = 0;
  RVector overlap_eigenvalues; // of T on the selected indices
};

/// Krylov basis |Phi_l> = normalized e^{-l dtau H}|Phi_0>, l = 0, 2, ..., L_max.
struct KrylovSpace {
  double delta_tau = 0.0;
  std::vector<std::size_t> indices;    // 0, 2, ..., L_max
  std::vector<double> norms;           // c_r for r = 0 .. L_max
  std::vector<double> energies;        // <Phi_r|H|Phi_r> for r = 0 .. L_max
  RMatrix T;                           // over `indices`
  RMatrix Hm;                          // over `indices`
  std::vector<QuantumState> states;    // Phi_r for r = 0 .. L_max

  std::vector<std::size_t> selected;   // positions into `indices`
  RMatrix projection;                  // selected -> well-conditioned basis
  ConditionReport report;
};

/// Assembles the space from states Phi_0 .. Phi_{L_max} spaced by dtau.
/// c_0 = 1 and c_{r+1} = c_r / sqrt(<Phi_r|e^{-2 dtau H}|Phi_r>);
/// T_{l,l'} = c_l c_l' / c_r^2 and H_{l,l'} = T_{l,l'} <Phi_r|H|Phi_r> with
/// r = (l + l') / 2. `measured_energies`, when given, replaces the exact
/// <Phi_r|H|Phi_r> (one entry per r).
KrylovSpace build_krylov(const std::vector<QuantumState> &states,
                         const PauliSum &h, double delta_tau,
                         std::size_t l_max,
                         const std::optional<std::vector<double>> &measured_energies = std::nullopt);

KrylovSpace build_krylov(const QiteTrajectory &trajectory, const PauliSum &h,
                         std::size_t l_max);
KrylovSpace build_krylov(const ImaginaryTimeTrajectory &trajectory,
                         const PauliSum &h, std::size_t l_max);

/// Greedy overlap filter against the last kept index, then removal of
/// eigendirections of the kept T below `eig_cutoff`. Throws
/// StabilizationError when fewer than `min_survivors` vectors remain.
KrylovSpace stabilize(KrylovSpace space, double overlap_threshold = 0.99,
                      double eig_cutoff = 1e-8, std::size_t min_survivors = 2);

struct QlanczosResult {
  std::vector<double> energies_from_eigenvalues;  // ascending
  std::vector<double> energies_from_expectation;  // same order
  std::vector<RVector> eigenvectors;              // over space.selected
  std::vector<QuantumState> reconstructed;        // normalized sum_l x_l Phi_l
  ConditionReport report;
  std::vector<std::size_t> selected_indices;      // Krylov l values used
};

using EnergyEvaluator = std::function<double(const QuantumState &)>;

/// Solves H x = E T x on the selected (projected) subspace. The expectation
/// route evaluates each reconstructed state with `evaluate`, or exactly
/// when it is empty.
QlanczosResult solve(const KrylovSpace &space, const PauliSum &h,
                     const EnergyEvaluator &evaluate = {});

nlohmann::json to_json(const QlanczosResult &result);

} // namespace qitelab
