/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "qitelab/qlanczos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "qitelab/error.hpp"
#include "qitelab/tolerances.hpp"

namespace qitelab {

KrylovSpace build_krylov(const std::vector<QuantumState> &states,
                         const PauliSum &h, double delta_tau,
                         std::size_t l_max,
                         const std::optional<std::vector<double>> &measured_energies) {
  if (l_max % 2 != 0)
    throw InvalidArgument("Krylov indices are even; L_max = " + std::to_string(l_max));
  if (!(delta_tau > 0.0))
    throw InvalidArgument("imaginary-time step must be positive");
  if (states.size() < l_max + 1)
    throw InvalidArgument("trajectory has " + std::to_string(states.size()) +
                          " states, Krylov space needs " + std::to_string(l_max + 1));
  if (measured_energies && measured_energies->size() < l_max + 1)
    throw InvalidArgument("need one measured energy per trajectory state");

  KrylovSpace k;
  k.delta_tau = delta_tau;
  k.states.assign(states.begin(), states.begin() + static_cast<std::ptrdiff_t>(l_max + 1));
  const CMatrix e2 = dense::hermitian_exp(h.matrix(), complex{-2.0 * delta_tau, 0.0});
  k.norms.push_back(1.0);
  for (std::size_t r = 0; r <= l_max; ++r) {
    const CVector &v = k.states[r].amplitudes();
    k.energies.push_back(measured_energies ? (*measured_energies)[r]
                                           : expectation(k.states[r], h));
    if (r < l_max) {
      const double ratio = v.dot(e2 * v).real();
      k.norms.push_back(k.norms.back() / std::sqrt(ratio));
    }
  }
  for (std::size_t l = 0; l <= l_max; l += 2)
    k.indices.push_back(l);
  const auto m = static_cast<Eigen::Index>(k.indices.size());
  k.T.resize(m, m);
  k.Hm.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const std::size_t l = k.indices[static_cast<std::size_t>(i)];
      const std::size_t lp = k.indices[static_cast<std::size_t>(j)];
      const std::size_t r = (l + lp) / 2;
      const double t = k.norms[l] * k.norms[lp] / (k.norms[r] * k.norms[r]);
      k.T(i, j) = t;
      k.Hm(i, j) = t * k.energies[r];
    }
  }
  for (Eigen::Index i = 0; i < m; ++i)
    if (std::abs(k.T(i, i) - 1.0) > tol::krylov_unit_diagonal)
      throw ConditioningError("Krylov overlap matrix lost its unit diagonal");
  return k;
}

KrylovSpace build_krylov(const QiteTrajectory &trajectory, const PauliSum &h,
                         std::size_t l_max) {
  return build_krylov(trajectory.states, h, trajectory.delta_tau, l_max);
}

KrylovSpace build_krylov(const ImaginaryTimeTrajectory &trajectory,
                         const PauliSum &h, std::size_t l_max) {
  return build_krylov(trajectory.states, h, trajectory.delta_tau, l_max);
}

namespace {

RMatrix submatrix(const RMatrix &m, const std::vector<std::size_t> &pos) {
  const auto k = static_cast<Eigen::Index>(pos.size());
  RMatrix out(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      out(i, j) = m(static_cast<Eigen::Index>(pos[static_cast<std::size_t>(i)]),
                    static_cast<Eigen::Index>(pos[static_cast<std::size_t>(j)]));
  return out;
}

/// Fills selected-space projection P = V_k diag(w_k^{-1/2}) from the
/// eigendirections of T_sel above `cutoff`.
void project(KrylovSpace &space, double cutoff) {
  const RMatrix t = submatrix(space.T, space.selected);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(t);
  const RVector &w = es.eigenvalues();
  space.report.overlap_eigenvalues = w;
  if (w(0) < tol::krylov_min_eigenvalue)
    throw ConditioningError("Krylov overlap matrix is indefinite (eigenvalue " +
                            std::to_string(w(0)) + ")");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i) >= cutoff)
      keep.push_back(i);
  space.report.discarded_directions = static_cast<std::size_t>(w.size()) - keep.size();
  space.projection.resize(t.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    space.projection.col(static_cast<Eigen::Index>(c)) =
        es.eigenvectors().col(keep[c]) / std::sqrt(w(keep[c]));
}

} // namespace

KrylovSpace stabilize(KrylovSpace space, double overlap_threshold,
                      double eig_cutoff, std::size_t min_survivors) {
  if (!(overlap_threshold > 0.0 && overlap_threshold < 1.0))
    throw InvalidArgument("overlap threshold must lie in (0, 1)");
  if (!(eig_cutoff > 0.0))
    throw InvalidArgument("eigenvalue cutoff must be positive");
  space.report = ConditionReport{};
  space.report.overlap_threshold = overlap_threshold;
  space.report.eig_cutoff = eig_cutoff;
  space.selected = {0};
  for (std::size_t i = 1; i < space.indices.size(); ++i) {
    const auto last = static_cast<Eigen::Index>(space.selected.back());
    if (std::abs(space.T(static_cast<Eigen::Index>(i), last)) < overlap_threshold)
      space.selected.push_back(i);
    else
      space.report.discarded_indices.push_back(space.indices[i]);
  }
  project(space, eig_cutoff);
  const auto survivors = static_cast<std::size_t>(space.projection.cols());
  if (survivors < min_survivors)
    throw StabilizationError("only " + std::to_string(survivors) +
                             " Krylov vector(s) survive stabilization");
  return space;
}

QlanczosResult solve(const KrylovSpace &input, const PauliSum &h,
                     const EnergyEvaluator &evaluate) {
  KrylovSpace space = input;
  if (space.selected.empty()) {
    space.selected.resize(space.indices.size());
    std::iota(space.selected.begin(), space.selected.end(), std::size_t{0});
    project(space, tol::krylov_unit_diagonal);
  }
  const RMatrix &p = space.projection;
  if (p.cols() == 0)
    throw ConditioningError("no well-conditioned Krylov directions");
  const RMatrix hsel = submatrix(space.Hm, space.selected);
  const RMatrix reduced = p.transpose() * hsel * p;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (reduced + reduced.transpose()));

  QlanczosResult out;
  out.report = space.report;
  for (auto s : space.selected)
    out.selected_indices.push_back(space.indices[s]);
  const std::size_t dim = space.states.front().dimension();
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const RVector x = p * es.eigenvectors().col(k);
    CVector phi = CVector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < space.selected.size(); ++i) {
      const std::size_t l = space.indices[space.selected[i]];
      phi += x(static_cast<Eigen::Index>(i)) * space.states[l].amplitudes();
    }
    QuantumState state = QuantumState::normalized(space.states.front().qubit_count(), phi);
    out.energies_from_eigenvalues.push_back(es.eigenvalues()(k));
    out.energies_from_expectation.push_back(evaluate ? evaluate(state)
                                                     : expectation(state, h));
    out.eigenvectors.push_back(x);
    out.reconstructed.push_back(std::move(state));
  }
  return out;
}

nlohmann::json to_json(const QlanczosResult &result) {
  nlohmann::json vecs = nlohmann::json::array();
  for (const auto &x : result.eigenvectors)
    vecs.push_back(std::vector<double>(x.data(), x.data() + x.size()));
  const auto &r = result.report;
  return {{"energies_from_eigenvalues", result.energies_from_eigenvalues},
          {"energies_from_expectation", result.energies_from_expectation},
          {"eigenvectors", std::move(vecs)},
          {"selected_indices", result.selected_indices},
          {"condition_report",
           {{"overlap_threshold", r.overlap_threshold},
            {"eig_cutoff", r.eig_cutoff},
            {"discarded_indices", r.discarded_indices},
            {"discarded_directions", r.discarded_directions},
            {"overlap_eigenvalues",
             std::vector<double>(r.overlap_eigenvalues.data(),
                                 r.overlap_eigenvalues.data() + r.overlap_eigenvalues.size())}}}};
}

} // namespace qitelab
