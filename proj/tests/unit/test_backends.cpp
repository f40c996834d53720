/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "qitelab/backends.hpp"
#include "qitelab/error.hpp"
#include "qitelab/hamiltonians.hpp"

using namespace qitelab;

namespace {

const double kPi = std::numbers::pi;

CVector oracle_two_qubit(const std::string &init, double theta) {
  const CMatrix g = oracle::pauli_matrix("XY") - oracle::pauli_matrix("YX");
  return oracle::expm(complex(0.0, -theta / 2.0) * g) * oracle::ket(init);
}

CVector oracle_three_qubit(double t1, double t2) {
  const CMatrix g1 = oracle::pauli_matrix("XYI") - oracle::pauli_matrix("YXI");
  const CMatrix g2 = oracle::pauli_matrix("XZY") - oracle::pauli_matrix("YZX");
  return oracle::expm(complex(0.0, -t1 / 2.0) * g1) *
         oracle::expm(complex(0.0, -t2 / 2.0) * g2) * oracle::ket("100");
}

double max_abs(const CMatrix &m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST(CircuitTemplate, Validation) {
  EXPECT_THROW(CircuitTemplate::two_qubit("100", 0.1), InvalidArgument);
  EXPECT_THROW(CircuitTemplate::three_qubit("10", 0.1, 0.2), InvalidArgument);
  CircuitTemplate t;
  t.angles = {0.1, 0.2};
  EXPECT_THROW(t.validate(), InvalidArgument);
  EXPECT_THROW(NoiseModel::uniform(2, 1.2, 0.0, 0.0), InvalidArgument);
  EXPECT_THROW(NoiseModel::uniform(2, 0.0, 0.0, 0.0, 2), InvalidArgument);
}

TEST(PrepareState, AgainstDenseExponential) {
  EXPECT_EQ(prepare_state(CircuitTemplate::two_qubit("10", 0.0)).amplitudes(),
            oracle::ket("10"));
  EXPECT_LT((prepare_state(CircuitTemplate::three_qubit("100", 0.0, 0.0)).amplitudes() -
             oracle::ket("100"))
                .norm(),
            1e-15);
  for (double th : {0.3, -1.1, kPi / 2.0, kPi, 2.5}) {
    for (const char *init : {"10", "01", "00"}) {
      const auto s = prepare_state(CircuitTemplate::two_qubit(init, th));
      EXPECT_LT((s.amplitudes() - oracle_two_qubit(init, th)).norm(), 1e-12);
    }
    const auto s3 = prepare_state(CircuitTemplate::three_qubit("100", th, 0.7 - th));
    EXPECT_LT((s3.amplitudes() - oracle_three_qubit(th, 0.7 - th)).norm(), 1e-12);
  }
  // The generator rotates |10> into |01> at a quarter turn of the angle.
  const auto quarter = prepare_state(CircuitTemplate::two_qubit("10", kPi / 2.0));
  EXPECT_NEAR(quarter.fidelity(basis_state(2, "01")), 1.0, 1e-12);
  const auto half = prepare_state(CircuitTemplate::two_qubit("10", kPi));
  EXPECT_NEAR(half.fidelity(basis_state(2, "10")), 1.0, 1e-12);
}

TEST(NoisySimulation, NoiselessMatchesPureProjector) {
  for (double th : {0.0, 0.41, -2.0, kPi}) {
    for (const char *init : {"10", "01", "11"}) {
      const auto c = CircuitTemplate::two_qubit(init, th);
      const CMatrix pure = DensityMatrix::from_pure(prepare_state(c)).matrix();
      for (std::size_t r : {1u, 3u, 5u}) {
        const auto rho = noisy_density_simulation(c, NoiseModel::uniform(2, 0, 0, 0.0, r));
        EXPECT_LT(max_abs(rho.matrix() - pure), 1e-10) << init << " r=" << r;
      }
    }
    const auto c3 = CircuitTemplate::three_qubit("100", th, 0.3);
    const CMatrix pure3 = DensityMatrix::from_pure(prepare_state(c3)).matrix();
    for (std::size_t r : {1u, 3u, 5u})
      EXPECT_LT(max_abs(noisy_density_simulation(c3, NoiseModel::uniform(3, 0, 0, 0.0, r))
                            .matrix() -
                        pure3),
                1e-10);
  }
}

TEST(NoisySimulation, FullDepolarizingMixesPair) {
  const auto rho = noisy_density_simulation(CircuitTemplate::two_qubit("10", 0.8),
                                            NoiseModel::uniform(2, 0, 0, 1.0));
  EXPECT_LT(max_abs(rho.matrix() - CMatrix::Identity(4, 4) / 4.0), 1e-12);

  // On three qubits only the pair is randomized; qubit 2 keeps its marginal.
  const auto s = DensityMatrix::from_pure(basis_state(3, "001"));
  const auto mixed = depolarize_pair(s, 0, 1, 1.0);
  EXPECT_NEAR(expectation(mixed, PauliString::parse("IIZ")), -1.0, 1e-12);
  EXPECT_NEAR(expectation(mixed, PauliString::parse("ZII")), 0.0, 1e-12);
  EXPECT_NEAR(expectation(mixed, PauliString::parse("XYI")), 0.0, 1e-12);
}

TEST(NoisySimulation, ReplicationContractsTowardMixed) {
  // For the maximally mixed state every non-identity Pauli averages to 0.
  const auto c = CircuitTemplate::two_qubit("10", 0.9);
  for (const char *label : {"ZI", "IZ", "XX", "YY"}) {
    double prev = 0.0;
    for (std::size_t r : {1u, 3u, 5u}) {
      const auto rho = noisy_density_simulation(c, NoiseModel::uniform(2, 0, 0, 0.01, r));
      const double v = std::abs(expectation(rho, PauliString::parse(label)));
      if (r > 1)
        EXPECT_LT(v, prev) << label;
      prev = v;
    }
  }
}

// Property: for small eps the r-dependence is nearly affine.
TEST(NoisySimulation, ApproximatelyAffineInReplication) {
  const double eps = 0.01;
  const auto c = CircuitTemplate::two_qubit("10", 1.2);
  for (const char *label : {"ZI", "IZ", "XX", "YY"}) {
    std::vector<double> v;
    for (std::size_t r : {1u, 3u, 5u})
      v.push_back(expectation(noisy_density_simulation(c, NoiseModel::uniform(2, 0, 0, eps, r)),
                              PauliString::parse(label)));
    const double secant_mid = 0.5 * (v[0] + v[2]);
    EXPECT_LT(std::abs(v[1] - secant_mid), 10.0 * eps * eps) << label;
  }
}

TEST(Sampling, DeterministicOutcome) {
  const auto rho = DensityMatrix::from_pure(basis_state(2, "10"));
  const auto e = sample_pauli_expectation(rho, PauliString::parse("ZI"), 8192, {}, 7);
  EXPECT_EQ(e.value, -1.0);
  EXPECT_EQ(e.std_error, 0.0);
  EXPECT_EQ(e.raw_counts.size(), 1u);
  EXPECT_EQ(e.raw_counts.at("10"), 8192u);
  EXPECT_THROW(sample_pauli_expectation(rho, PauliString::parse("ZI"), 0, {}, 7),
               InvalidArgument);

  const auto id = sample_pauli_expectation(rho, PauliString::parse("II"), 10, {}, 7);
  EXPECT_EQ(id.value, 1.0);
  EXPECT_EQ(id.std_error, 0.0);
  EXPECT_TRUE(id.raw_counts.empty());
}

TEST(Sampling, SymmetricOutcome) {
  const auto c = CircuitTemplate::two_qubit("10", 0.0);
  const auto e = sample_pauli_expectation(c, PauliString::parse("XI"), 8192, std::nullopt, 11);
  EXPECT_LT(std::abs(e.value), 4.0 / std::sqrt(8192.0));
  const std::uint64_t total = std::accumulate(
      e.raw_counts.begin(), e.raw_counts.end(), std::uint64_t{0},
      [](std::uint64_t s, const auto &kv) { return s + kv.second; });
  EXPECT_EQ(total, 8192u);
}

TEST(Sampling, ReadoutFlipClosedForm) {
  const auto noise = NoiseModel::uniform(2, 0.1, 0.1, 0.0);
  const auto c = CircuitTemplate::two_qubit("10", 0.0);
  const auto e = sample_pauli_expectation(c, PauliString::parse("ZI"), 8192, noise, 3);
  const double expect = -(1.0 - 0.1 - 0.1);
  EXPECT_NEAR(e.value, expect, 4.0 * std::sqrt((1 - expect * expect) / 8192.0));

  // Exact distribution against the enumerating oracle.
  const std::vector<double> p = oracle::z_probabilities(oracle_two_qubit("10", 0.7));
  const std::vector<ReadoutError> ro{{0.02, 0.07}, {0.11, 0.05}};
  const auto mine = apply_readout(p, ro);
  const auto ref = oracle::flip_channel(p, {0.02, 0.11}, {0.07, 0.05});
  for (std::size_t k = 0; k < 4; ++k)
    EXPECT_NEAR(mine[k], ref[k], 1e-15);
}

TEST(Sampling, BasisRotationProbabilities) {
  CVector v = oracle_two_qubit("10", 0.6);
  const auto rho = DensityMatrix::from_pure(QuantumState(2, v));
  for (const char *label : {"XX", "YY", "XY", "YX", "XZ", "IY", "ZZ"}) {
    const auto obs = PauliString::parse(label);
    const auto p = rotated_probabilities(rho, obs);
    double parity_mean = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      int parity = 0;
      for (std::size_t q = 0; q < 2; ++q)
        if (obs[q] != Pauli::I && ((k >> (1 - q)) & 1u))
          parity ^= 1;
      parity_mean += (parity ? -1.0 : 1.0) * p[k];
    }
    const double exact = (v.adjoint() * oracle::pauli_matrix(label) * v)(0).real();
    EXPECT_NEAR(parity_mean, exact, 1e-12) << label;
  }
}

// Property: same inputs and seed give bit-identical counts.
TEST(Sampling, SeedDeterminism) {
  const auto c = CircuitTemplate::three_qubit("100", 0.4, -0.2);
  const auto noise = NoiseModel::uniform(3, 0.03, 0.02, 0.02, 3);
  const auto obs = PauliString::parse("XZY");
  const auto a = sample_pauli_expectation(c, obs, 8192, noise, 1234);
  const auto b = sample_pauli_expectation(c, obs, 8192, noise, 1234);
  EXPECT_EQ(a.raw_counts, b.raw_counts);
  EXPECT_EQ(a.value, b.value);
  const auto d = sample_pauli_expectation(c, obs, 8192, noise, 1235);
  EXPECT_NE(a.raw_counts, d.raw_counts);
}

// Property: the estimator is unbiased.
TEST(Sampling, Unbiased) {
  const auto c = CircuitTemplate::two_qubit("10", 0.9);
  const auto rho = DensityMatrix::from_pure(prepare_state(c));
  for (const char *label : {"ZI", "XX", "YY", "XY"}) {
    const auto obs = PauliString::parse(label);
    const double exact = expectation(rho, obs);
    const int seeds = 100;
    double mean = 0.0;
    for (int s = 0; s < seeds; ++s)
      mean += sample_pauli_expectation(rho, obs, 8192, {}, 900 + s).value;
    mean /= seeds;
    const double sigma = std::sqrt((1.0 - exact * exact) / 8192.0);
    EXPECT_LT(std::abs(mean - exact), 5.0 * sigma / std::sqrt(double(seeds)) + 1e-12)
        << label;
  }
}

TEST(MeasureEnergy, ExactBackend) {
  const auto h = deuteron_hamiltonian(2).full;
  EXPECT_NEAR(measure_energy(basis_state(2, "10"), h, 0, 0).energy, -0.436, 1e-12);

  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
  const QuantumState ground(2, es.eigenvectors().col(0));
  const auto e = measure_energy(ground, h, 0, 0);
  EXPECT_NEAR(e.energy, es.eigenvalues()(0), 1e-6);
  EXPECT_NEAR(e.energy, -1.749, 1e-3);
  EXPECT_EQ(e.std_error, 0.0);
  EXPECT_EQ(e.per_term.size(), 4u);
  EXPECT_THROW(measure_energy(basis_state(3, "100"), h, 0, 0), DimensionError);
}

TEST(MeasureEnergy, LargeShotLimit) {
  const auto h = deuteron_hamiltonian(2).full;
  const auto src = CircuitTemplate::two_qubit("10", 0.8);
  const double exact = measure_energy(prepare_state(src), h, 0, 0).energy;
  double mean = 0.0, var = 0.0;
  const int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    const auto e = measure_energy(prepare_state(src), h, 1'000'000, 77 + s);
    mean += e.energy;
    var += e.std_error * e.std_error;
  }
  mean /= seeds;
  const double se = std::sqrt(var) / seeds;
  EXPECT_LT(std::abs(mean - exact), 3.0 * se);
}

TEST(MeasureEnergy, NoisyCircuitSourceUsesItsReadout) {
  const auto h = deuteron_hamiltonian(2).full;
  const auto c = CircuitTemplate::two_qubit("10", 0.0);
  const auto noise = NoiseModel::uniform(2, 0.1, 0.1, 0.0);
  const auto e = measure_energy(NoisyCircuit{c, noise}, h, 0, 0);
  // Z expectations shrink by 1 - p01 - p10; the XX/YY terms stay at zero.
  const double z0 = -0.8, z1 = 0.8;
  EXPECT_NEAR(e.energy,
              h.identity_coefficient() + h.coefficient(PauliString::parse("ZI")) * z0 +
                  h.coefficient(PauliString::parse("IZ")) * z1,
              1e-12);
}

TEST(FitTemplate, RoundTrip) {
  for (double th : {0.0, 0.35, -0.9, 2.8}) {
    for (const char *init : {"10", "01"}) {
      const auto c = CircuitTemplate::two_qubit(init, th);
      const auto fit = fit_template(prepare_state(c), init);
      EXPECT_GT(prepare_state(fit).fidelity(prepare_state(c)), 1.0 - 1e-12);
    }
    const auto c3 = CircuitTemplate::three_qubit("100", th, 0.5 * th - 0.2);
    const auto fit3 = fit_template(prepare_state(c3), "100");
    EXPECT_GT(prepare_state(fit3).fidelity(prepare_state(c3)), 1.0 - 1e-12);
  }
  // Phase-rotated inputs still fit.
  CVector v = oracle_two_qubit("10", 0.4) * std::polar(1.0, 1.3);
  EXPECT_NO_THROW(fit_template(QuantumState(2, v), "10"));
  // |00> is outside the |10>-reachable sector.
  EXPECT_THROW(fit_template(basis_state(2, "00"), "10"), InvalidArgument);
}
