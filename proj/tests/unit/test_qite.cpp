/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "qitelab/error.hpp"
#include "qitelab/hamiltonians.hpp"
#include "qitelab/qite.hpp"

using namespace qitelab;

namespace {

QiteOptions options(double dtau, std::size_t steps,
                    UpdateMode mode = UpdateMode::WholeHamiltonian) {
  QiteOptions o;
  o.delta_tau = dtau;
  o.n_steps = steps;
  o.update = mode;
  return o;
}

/// Brute-force minimum of the linearized objective over a 1-D grid, built
/// from Kronecker-product matrices and a series exponential.
double scan_minimum(const oracle::Mat &h, const oracle::Vec &psi, const oracle::Mat &g,
                    double dtau) {
  const double c = (psi.adjoint() * oracle::expm(-2.0 * dtau * h) * psi)(0).real();
  const oracle::Vec target = (psi - dtau * h * psi) / std::sqrt(c);
  const oracle::Vec gpsi = g * psi;
  double best_a = 0.0, best = 1e300;
  for (long i = -30000; i <= 30000; ++i) {
    const double a = i * 1e-4;
    const double r = (target - psi + oracle::cd(0.0, dtau * a) * gpsi).norm();
    if (r < best) {
      best = r;
      best_a = a;
    }
  }
  return best_a;
}

} // namespace

TEST(OperatorPool, Examples) {
  const auto full2 = build_pool(2, 1, false);
  EXPECT_EQ(full2.size(), 16u);
  EXPECT_TRUE(full2.is_identity(0));
  std::set<std::string> unique(full2.labels.begin(), full2.labels.end());
  EXPECT_EQ(unique.size(), 16u);
  EXPECT_TRUE(std::is_sorted(full2.labels.begin(), full2.labels.end()));

  const auto r2 = build_pool(2, 1, true);
  ASSERT_EQ(r2.size(), 1u);
  EXPECT_DOUBLE_EQ(r2.generators[0].coefficient(PauliString::parse("XY")), 1.0);
  EXPECT_DOUBLE_EQ(r2.generators[0].coefficient(PauliString::parse("YX")), -1.0);

  const auto r3 = build_pool(3, 2, true);
  ASSERT_EQ(r3.size(), 2u);
  EXPECT_DOUBLE_EQ(r3.generators[1].coefficient(PauliString::parse("XZY")), 1.0);
  EXPECT_DOUBLE_EQ(r3.generators[1].coefficient(PauliString::parse("YZX")), -1.0);
  EXPECT_EQ(build_pool(3, 2, false).size(), 64u);

  EXPECT_THROW(build_pool(2, 2, true), InvalidArgument);
  EXPECT_THROW(build_pool(3, 1, false), InvalidArgument);
}

TEST(QiteStep, EigenstateGivesZeroUpdate) {
  const auto h = deuteron_hamiltonian(2).full;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
  const QuantumState v(2, es.eigenvectors().col(0));
  for (bool restricted : {true, false}) {
    const auto r = qite_step(v, h, 0.05, build_pool(2, 1, restricted));
    EXPECT_LT(r.solution.a.cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(r.state.fidelity(v), 1.0, 1e-12);
  }
}

TEST(QiteStep, MatchesNormScanOracle) {
  const auto h = deuteron_hamiltonian(2).full;
  const auto pool = build_pool(2, 1, true);
  const auto r = qite_step(basis_state(2, "10"), h, 0.05, pool);
  const oracle::Mat hm = oracle::pauli_matrix("II") * h.identity_coefficient() +
                         h.coefficient(PauliString::parse("ZI")) * oracle::pauli_matrix("ZI") +
                         h.coefficient(PauliString::parse("IZ")) * oracle::pauli_matrix("IZ") +
                         h.coefficient(PauliString::parse("XX")) * oracle::pauli_matrix("XX") +
                         h.coefficient(PauliString::parse("YY")) * oracle::pauli_matrix("YY");
  const oracle::Mat g = oracle::pauli_matrix("XY") - oracle::pauli_matrix("YX");
  const double best = scan_minimum(hm, oracle::ket("10"), g, 0.05);
  EXPECT_NEAR(r.solution.a(0), best, 1e-3);
  EXPECT_GE(r.solution.residual, 0.0);
  EXPECT_GE(r.solution.residual_exact_target, 0.0);
  EXPECT_NEAR(r.solution.c,
              (oracle::ket("10").adjoint() * oracle::expm(-0.1 * hm) * oracle::ket("10"))(0).real(),
              1e-12);
}

TEST(QiteStep, RidgeZeroOnSingularSystem) {
  // On |10> the full pool has strings that act identically (S is singular).
  const auto h = deuteron_hamiltonian(2).full;
  EXPECT_THROW(qite_step(basis_state(2, "10"), h, 0.05, build_pool(2, 1, false), 0.0),
               ConditioningError);
  EXPECT_NO_THROW(qite_step(basis_state(2, "10"), h, 0.05, build_pool(2, 1, true), 0.0));
  EXPECT_THROW(qite_step(basis_state(2, "10"), h, 0.0, build_pool(2, 1, true)),
               InvalidArgument);
}

TEST(QiteStep, SmallStepLimit) {
  const auto h = deuteron_hamiltonian(2).full;
  const auto pool = build_pool(2, 1, true);
  const auto psi = basis_state(2, "10");
  double prev_change = 1e300;
  for (double dtau : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const auto r = qite_step(psi, h, dtau, pool);
    EXPECT_LT(r.solution.a.norm(), 10.0);
    const double change = 1.0 - r.state.fidelity(psi);
    EXPECT_LT(change, prev_change);
    prev_change = change;
  }
  EXPECT_LT(prev_change, 1e-8);
}

// Property: the recorded residual is a local minimum in every coordinate.
TEST(QiteStep, ResidualOptimality) {
  const auto d3 = deuteron_hamiltonian(3);
  QuantumState psi = basis_state(3, "100");
  const auto pool = build_pool(3, 2, true);
  for (int s = 0; s < 6; ++s) {
    for (const auto &h : {d3.full, d3.local_terms[1], d3.local_terms[2]}) {
      const auto r = qite_step(psi, h, 0.05, pool);
      for (Eigen::Index i = 0; i < r.solution.a.size(); ++i) {
        for (double d : {-1e-3, 1e-3}) {
          RVector a = r.solution.a;
          a(i) += d;
          EXPECT_GE(qite_linearized_residual(psi, h, 0.05, pool, a),
                    r.solution.residual - 1e-15);
        }
      }
    }
    psi = qite_step(psi, d3.full, 0.05, pool).state;
  }
}

TEST(QiteRun, DeuteronConverges) {
  const auto d2 = deuteron_hamiltonian(2);
  const auto t2 = qite_run(basis_state(2, "10"), d2.local_terms, build_pool(2, 1, true),
                           options(0.05, 40));
  EXPECT_EQ(t2.states.size(), t2.steps.size() + 1);
  EXPECT_NEAR(t2.energies.front(), -0.436, 1e-12);
  EXPECT_NEAR(t2.energies.back(), -1.749, 0.01);

  const auto d3 = deuteron_hamiltonian(3);
  const auto t3 = qite_run(basis_state(3, "100"), d3.local_terms, build_pool(3, 2, true),
                           options(0.05, 40));
  EXPECT_NEAR(t3.energies.back(), -2.046, 0.02);
  EXPECT_THROW(qite_run(basis_state(2, "10"), {}, build_pool(2, 1, true), options(0.05, 4)),
               InvalidArgument);
}

// Property: energies never rise in whole-Hamiltonian mode.
TEST(QiteRun, EnergyMonotone) {
  for (std::size_t n : {2u, 3u}) {
    const auto d = deuteron_hamiltonian(n);
    const auto t = qite_run(basis_state(n, n == 2 ? "10" : "100"), d.local_terms,
                            build_pool(n, n - 1, true), options(0.05, 40));
    for (std::size_t s = 1; s < t.energies.size(); ++s)
      EXPECT_LE(t.energies[s], t.energies[s - 1] + 1e-8) << "N=" << n << " s=" << s;
  }
}

// Property: per-term error against exact imaginary time shrinks with dtau.
TEST(QiteRun, TrotterConsistency) {
  for (std::size_t n : {2u, 3u}) {
    const auto d = deuteron_hamiltonian(n);
    const auto psi0 = basis_state(n, n == 2 ? "10" : "100");
    const double exact =
        expectation(apply_nonunitary_exponential(psi0, d.full, 0.5).first, d.full);
    double prev = 1e300;
    for (double dtau : {0.1, 0.05, 0.025}) {
      const auto steps = static_cast<std::size_t>(std::lround(0.5 / dtau));
      const auto t = qite_run(psi0, d.local_terms, build_pool(n, n - 1, true),
                              options(dtau, steps, UpdateMode::PerTerm));
      const double dev = std::abs(t.energies.back() - exact);
      EXPECT_LT(dev, prev) << "N=" << n << " dtau=" << dtau;
      prev = dev;
    }
  }
}

// Property: the restricted pool loses nothing for N = 2.
TEST(QiteRun, RestrictedPoolEquivalence) {
  const auto d = deuteron_hamiltonian(2);
  for (auto mode : {UpdateMode::WholeHamiltonian, UpdateMode::PerTerm}) {
    const auto r = qite_run(basis_state(2, "10"), d.local_terms, build_pool(2, 1, true),
                            options(0.05, 40, mode));
    const auto f = qite_run(basis_state(2, "10"), d.local_terms, build_pool(2, 1, false),
                            options(0.05, 40, mode));
    for (std::size_t s = 0; s < r.energies.size(); ++s)
      EXPECT_NEAR(r.energies[s], f.energies[s], 1e-6) << "s=" << s;
  }
}

TEST(QiteRun, H2ConvergesWithinSector) {
  H2Row row;
  row.bond_length = 0.7;
  row.h = {-0.32, 0.39, 0.39, 0.01, 0.18, 0.0};
  const auto h = h2_hamiltonian(row);
  const CMatrix m = h.matrix();
  // Sector {|01>, |10>} block.
  Eigen::Matrix2cd odd;
  odd << m(1, 1), m(1, 2), m(2, 1), m(2, 2);
  const double odd_ground = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(odd).eigenvalues()(0);
  const auto t = qite_run(basis_state(2, "10"), {h}, build_pool(2, 1, false), options(0.1, 200));
  EXPECT_NEAR(t.energies.back(), odd_ground, 1e-5);
  EXPECT_GT(t.energies.back(), dense::eigenvalues(m)(0) + 1e-3);
}

TEST(SingleStep, TwoQubitExact) {
  const auto d = deuteron_hamiltonian(2);
  for (auto mode : {UpdateMode::WholeHamiltonian, UpdateMode::PerTerm}) {
    const auto t = qite_run(basis_state(2, "10"), d.local_terms, build_pool(2, 1, true),
                            options(0.05, 40, mode));
    const auto c = single_step_compress(t, d.full);
    ASSERT_EQ(c.templates.size(), 40u);
    double sum = 0.0;
    for (const auto &u : t.steps[0].updates)
      sum += u.a(0);
    EXPECT_NEAR(c.templates[0].angles[0], 2.0 * 0.05 * sum, 1e-15);
    for (double f : c.fidelity)
      EXPECT_GE(f, 1.0 - 1e-12);
  }
}

TEST(SingleStep, ThreeQubitFidelity) {
  const auto d = deuteron_hamiltonian(3);
  const auto t = qite_run(basis_state(3, "100"), d.local_terms, build_pool(3, 2, true),
                          options(0.05, 6));
  const auto c = single_step_compress(t, d.full);
  EXPECT_NEAR(c.betas.back(), 0.30, 1e-12);
  EXPECT_GE(c.fidelity.back(), 0.999);
  EXPECT_EQ(c.templates.back().cnot_count_base, 4u);

  const auto full = qite_run(basis_state(3, "100"), d.local_terms, build_pool(3, 2, false),
                             options(0.05, 2));
  EXPECT_THROW(single_step_compress(full, d.full), InvalidArgument);
}

TEST(ExactImaginaryTime, MatchesOracle) {
  const auto d = deuteron_hamiltonian(3);
  const auto t = exact_imaginary_time(basis_state(3, "100"), d.full, 0.05, 8);
  ASSERT_EQ(t.states.size(), 9u);
  const oracle::Vec ref = oracle::expm(-0.4 * d.full.matrix()) * oracle::ket("100");
  EXPECT_NEAR(t.states.back().fidelity(QuantumState::normalized(3, ref)), 1.0, 1e-12);
}

TEST(QiteJson, HasPerStepRecords) {
  const auto d = deuteron_hamiltonian(2);
  const auto t = qite_run(basis_state(2, "10"), d.local_terms, build_pool(2, 1, true),
                          options(0.05, 3, UpdateMode::PerTerm));
  const auto j = to_json(t);
  EXPECT_EQ(j["steps"].size(), 3u);
  EXPECT_EQ(j["steps"][0]["updates"].size(), 2u);
  EXPECT_EQ(j["generator_form"], "restricted");
  EXPECT_EQ(j["update_mode"], "per_term");
}
