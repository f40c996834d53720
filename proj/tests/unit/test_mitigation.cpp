/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qitelab/backends.hpp"
#include "qitelab/error.hpp"
#include "qitelab/hamiltonians.hpp"
#include "qitelab/mitigation.hpp"
#include "qitelab/random.hpp"

using namespace qitelab;

namespace {

std::vector<std::string> all_labels(std::size_t n) {
  std::vector<std::string> out{""};
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<std::string> next;
    for (const auto &s : out)
      for (char c : std::string("IXYZ"))
        next.push_back(s + c);
    out = std::move(next);
  }
  return out;
}

ReadoutCalibration make_calibration(const std::vector<double> &p01,
                                    const std::vector<double> &p10) {
  ReadoutCalibration cal;
  for (std::size_t q = 0; q < p01.size(); ++q)
    cal.qubits.push_back({p01[q], p10[q], 0.0, 0.0});
  cal.shots = 1;
  return cal;
}

std::map<std::string, std::uint64_t> counts_from(const std::vector<std::uint64_t> &c,
                                                 std::size_t n) {
  std::map<std::string, std::uint64_t> out;
  for (std::size_t k = 0; k < c.size(); ++k)
    out[basis_label(k, n)] = c[k];
  return out;
}

} // namespace

TEST(Calibration, NoiselessBackendIsExactlyZero) {
  const auto cal = calibrate_readout(3, {}, 1000, 5);
  for (const auto &q : cal.qubits) {
    EXPECT_EQ(q.p01, 0.0);
    EXPECT_EQ(q.p10, 0.0);
    EXPECT_EQ(q.p01_std_error, 0.0);
  }
}

TEST(Calibration, InjectedFlipRateWithinBinomialBand) {
  const std::uint64_t shots = 8192;
  const double band = 3.0 * std::sqrt(0.05 * 0.95 / static_cast<double>(shots));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto cal = calibrate_readout(2, {{0.02, 0.05}, {0.02, 0.05}}, shots, seed);
    for (const auto &q : cal.qubits) {
      EXPECT_NEAR(q.p10, 0.05, band);
      EXPECT_NEAR(q.p10_std_error, std::sqrt(0.05 * 0.95 / shots), 2e-3);
    }
  }
}

TEST(Calibration, DegenerateRatesRejected) {
  EXPECT_THROW(calibrate_readout(1, {{0.6, 0.6}}, 4096, 1), CalibrationError);
  EXPECT_THROW(calibrate_readout(1, {}, 0, 1), InvalidArgument);
}

TEST(Calibration, FromCountsLabelsPerQubit) {
  const auto cal = calibration_from_counts(2, {{"00", 90}, {"10", 10}},
                                           {{"11", 80}, {"01", 20}});
  EXPECT_DOUBLE_EQ(cal.qubits[0].p10, 0.1);
  EXPECT_DOUBLE_EQ(cal.qubits[1].p10, 0.0);
  EXPECT_DOUBLE_EQ(cal.qubits[0].p01, 0.2);
  EXPECT_DOUBLE_EQ(cal.qubits[1].p01, 0.0);
}

TEST(Roem, ZeroCalibrationReturnsRawEstimate) {
  const auto cal = make_calibration({0.0, 0.0}, {0.0, 0.0});
  const std::map<std::string, std::uint64_t> counts{
      {"00", 400}, {"01", 100}, {"10", 300}, {"11", 200}};
  const auto z0z1 = PauliString::parse("ZZ");
  const double raw = (400.0 - 100.0 - 300.0 + 200.0) / 1000.0;
  EXPECT_DOUBLE_EQ(roem_correct(counts, cal, z0z1).value, raw);
  const double z0 = (400.0 + 100.0 - 300.0 - 200.0) / 1000.0;
  EXPECT_DOUBLE_EQ(roem_correct(counts, cal, PauliString::parse("ZI")).value, z0);
}

TEST(Roem, DeterministicOutcomeThroughKnownChannel) {
  const auto cal = make_calibration({0.1}, {0.1});
  EXPECT_NEAR(roem_correct_distribution({0.1, 0.9}, cal, PauliString::parse("Z")),
              -1.0, 1e-15);
  const auto c = roem_correct({{"0", 100}, {"1", 900}}, cal, PauliString::parse("Z"));
  EXPECT_NEAR(c.value, -1.0, 1e-15);
}

TEST(Roem, TwoQubitClosedForm) {
  const std::vector<double> truth{0.4, 0.1, 0.2, 0.3};
  const std::vector<double> p01{0.07, 0.02}, p10{0.03, 0.11};
  const auto observed = oracle::flip_channel(truth, p01, p10);
  const double zz = truth[0] - truth[1] - truth[2] + truth[3];
  EXPECT_NEAR(roem_correct_distribution(observed, make_calibration(p01, p10),
                                        PauliString::parse("ZZ")),
              zz, 1e-14);
}

TEST(Roem, UnbiasedOnEveryPauliString) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> flip(0.0, 0.2);
  for (std::size_t n : {2u, 3u}) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto psi = QuantumState::normalized(
          n, CVector::Random(static_cast<Eigen::Index>(std::size_t{1} << n)));
      const auto rho = DensityMatrix::from_pure(psi);
      std::vector<double> p01(n), p10(n);
      for (std::size_t q = 0; q < n; ++q) {
        p01[q] = flip(gen);
        p10[q] = flip(gen);
      }
      const auto cal = make_calibration(p01, p10);
      for (const auto &label : all_labels(n)) {
        const auto obs = PauliString::parse(label);
        const auto observed =
            oracle::flip_channel(rotated_probabilities(rho, obs), p01, p10);
        EXPECT_NEAR(roem_correct_distribution(observed, cal, obs),
                    expectation(psi, obs), 1e-12)
            << label;
      }
    }
  }
}

TEST(Roem, MissingCalibrationForSupportQubit) {
  const auto cal = make_calibration({0.01}, {0.01});
  EXPECT_THROW(roem_correct({{"00", 10}}, cal, PauliString::parse("IZ")),
               InvalidArgument);
  EXPECT_NO_THROW(roem_correct({{"00", 10}}, cal, PauliString::parse("ZI")));
}

TEST(Roem, ErrorBarCoversScatter) {
  // Empirical spread of the corrected value over seeds against the reported error.
  const auto psi = QuantumState::normalized(2, CVector::Random(4));
  const auto rho = DensityMatrix::from_pure(psi);
  const std::vector<ReadoutError> ro{{0.04, 0.02}, {0.03, 0.05}};
  const auto obs = PauliString::parse("XZ");
  const double truth = expectation(psi, obs);
  double sum = 0.0, sum_sq = 0.0, reported = 0.0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) {
    const auto cal = calibrate_readout(2, ro, 4096, derive_seed(99, {std::uint64_t(s), 0}));
    const auto est = sample_pauli_expectation(rho, obs, 4096, ro,
                                              derive_seed(99, {std::uint64_t(s), 1}));
    const auto c = roem_correct(est.raw_counts, cal, obs);
    sum += c.value;
    sum_sq += c.value * c.value;
    reported += c.std_error;
  }
  const double mean = sum / seeds;
  const double sd = std::sqrt(sum_sq / seeds - mean * mean);
  EXPECT_NEAR(mean, truth, 4.0 * sd / std::sqrt(double(seeds)));
  EXPECT_NEAR(reported / seeds, sd, 0.2 * sd);
}

TEST(Richardson, ConstantSeries) {
  RichardsonSeries s{{{1, 0.5, 0.01}, {3, 0.5, 0.01}, {5, 0.5, 0.01}}, 1};
  EXPECT_NEAR(richardson_extrapolate(s).intercept, 0.5, 1e-14);
}

TEST(Richardson, ExactLine) {
  RichardsonSeries s{{{1, 0.9, 0.0}, {3, 0.7, 0.0}, {5, 0.5, 0.0}}, 1};
  const auto fit = richardson_extrapolate(s);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-12);
  EXPECT_NEAR(fit.coefficients[1], -0.1, 1e-12);
}

TEST(Richardson, ExactQuadratic) {
  auto v = [](double r) { return 0.2 * r * r - 0.1 * r + 2.0; };
  RichardsonSeries s{{{1, v(1), 0.01}, {3, v(3), 0.02}, {5, v(5), 0.03}}, 2};
  EXPECT_NEAR(richardson_extrapolate(s).intercept, 2.0, 1e-12);
}

TEST(Richardson, PolynomialExactnessProperty) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t order : {1u, 2u}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> c(order + 1);
      for (auto &x : c)
        x = u(gen);
      RichardsonSeries s;
      s.order = order;
      for (double r : {1.0, 3.0, 5.0, 7.0}) {
        double val = 0.0, pw = 1.0;
        for (double ci : c) {
          val += ci * pw;
          pw *= r;
        }
        s.points.push_back({r, val, 0.01 + 0.01 * r});
      }
      EXPECT_NEAR(richardson_extrapolate(s).intercept, c[0], 1e-12);
    }
  }
}

TEST(Richardson, InterceptErrorFromWeights) {
  // Line through r = 1, 3 with equal sigma: intercept = (3 v1 - v3) / 2.
  RichardsonSeries s{{{1, 0.0, 0.1}, {3, 0.0, 0.1}}, 1};
  EXPECT_NEAR(richardson_extrapolate(s).intercept_std_error,
              0.1 * std::sqrt(10.0) / 2.0, 1e-12);
}

TEST(Richardson, Underdetermined) {
  EXPECT_THROW(richardson_extrapolate({{{1, 0.9, 0.1}, {3, 0.7, 0.1}}, 2}),
               InvalidArgument);
  EXPECT_THROW(richardson_extrapolate({{{1, 0.9, 0.1}, {1, 0.7, 0.1}}, 1}),
               InvalidArgument);
}

TEST(Mitigation, EndToEndRecoversDeuteronTerms) {
  const auto h = deuteron_hamiltonian(2).full;
  const auto ground = QuantumState::normalized(
      2, Eigen::SelfAdjointEigenSolver<CMatrix>(h.matrix()).eigenvectors().col(0));
  const auto circuit = fit_template(ground, "10");
  const auto base = NoiseModel::uniform(2, 0.03, 0.03, 0.02);
  const std::uint64_t shots = 8192;
  const int seeds = 10;
  int outliers = 0, checks = 0;
  for (std::size_t t = 0; t < h.size(); ++t) {
    const auto &obs = h.terms()[t].string;
    if (obs.is_identity())
      continue;
    const double truth = expectation(ground, obs);
    double mean = 0.0, se_sum = 0.0;
    for (int s = 0; s < seeds; ++s) {
      const auto cal = calibrate_readout(2, base.readout, shots,
                                         derive_seed(7, {std::uint64_t(s), t, 0}));
      RichardsonSeries series;
      series.order = 1;
      for (std::size_t r : {1u, 3u, 5u}) {
        const auto est = sample_pauli_expectation(
            circuit, obs, shots, base.with_replication(r),
            derive_seed(7, {std::uint64_t(s), t, r}));
        const auto c = roem_correct(est.raw_counts, cal, obs);
        series.points.push_back({double(r), c.value, c.std_error});
      }
      const auto fit = richardson_extrapolate(series);
      ++checks;
      if (std::abs(fit.intercept - truth) > 3.0 * fit.intercept_std_error)
        ++outliers;
      mean += fit.intercept / seeds;
      se_sum += fit.intercept_std_error / seeds;
    }
    EXPECT_NEAR(mean, truth, 3.0 * se_sum / std::sqrt(double(seeds))) << obs.to_string();
  }
  // At 3 sigma, expected outliers over 40 checks is about 0.1.
  EXPECT_LE(outliers, 2) << "of " << checks;
}

TEST(Mitigation, JsonRecords) {
  const auto cal = make_calibration({0.01, 0.02}, {0.03, 0.04});
  const auto j = to_json(cal);
  EXPECT_EQ(j["qubits"].size(), 2u);
  EXPECT_DOUBLE_EQ(j["qubits"][1]["p10"].get<double>(), 0.04);
  RichardsonSeries s{{{1, 0.9, 0.0}, {3, 0.7, 0.0}}, 1};
  const auto jr = to_json(s, richardson_extrapolate(s));
  EXPECT_NEAR(jr["intercept"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(jr["points"].size(), 2u);
}
