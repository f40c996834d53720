/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "qitelab/mitigation.hpp"

#include <cmath>
#include <set>

#include "qitelab/error.hpp"
#include "qitelab/random.hpp"
#include "qitelab/state.hpp"

namespace qitelab {

void ReadoutCalibration::validate() const {
  for (std::size_t q = 0; q < qubits.size(); ++q) {
    const auto &c = qubits[q];
    if (!(c.p01 + c.p10 < 1.0))
      throw CalibrationError("qubit " + std::to_string(q) + ": p01 + p10 = " +
                             std::to_string(c.p01 + c.p10) +
                             " leaves no invertible readout channel");
  }
}

namespace {

std::uint64_t total(const std::map<std::string, std::uint64_t> &counts) {
  std::uint64_t n = 0;
  for (const auto &kv : counts)
    n += kv.second;
  return n;
}

void check_label(const std::string &label, std::size_t n) {
  if (label.size() != n)
    throw DimensionError("outcome label '" + label + "' does not match " +
                         std::to_string(n) + " qubits");
}

} // namespace

ReadoutCalibration
calibration_from_counts(std::size_t qubit_count,
                        const std::map<std::string, std::uint64_t> &counts_all0,
                        const std::map<std::string, std::uint64_t> &counts_all1) {
  const std::uint64_t n0 = total(counts_all0), n1 = total(counts_all1);
  if (n0 == 0 || n1 == 0)
    throw InvalidArgument("calibration needs at least one shot per preparation");
  ReadoutCalibration cal;
  cal.shots = n0;
  cal.qubits.resize(qubit_count);
  for (std::size_t q = 0; q < qubit_count; ++q) {
    std::uint64_t read1_from0 = 0, read0_from1 = 0;
    for (const auto &[label, c] : counts_all0) {
      check_label(label, qubit_count);
      if (label[q] == '1')
        read1_from0 += c;
    }
    for (const auto &[label, c] : counts_all1) {
      check_label(label, qubit_count);
      if (label[q] == '0')
        read0_from1 += c;
    }
    auto &qc = cal.qubits[q];
    qc.p10 = static_cast<double>(read1_from0) / static_cast<double>(n0);
    qc.p01 = static_cast<double>(read0_from1) / static_cast<double>(n1);
    qc.p10_std_error = std::sqrt(qc.p10 * (1.0 - qc.p10) / static_cast<double>(n0));
    qc.p01_std_error = std::sqrt(qc.p01 * (1.0 - qc.p01) / static_cast<double>(n1));
  }
  cal.validate();
  return cal;
}

ReadoutCalibration calibrate_readout(std::size_t qubit_count,
                                     const std::vector<ReadoutError> &readout,
                                     std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0)
    throw InvalidArgument("calibration shot count must be positive");
  auto prepared = [&](char bit, std::uint64_t sub) {
    const auto rho =
        DensityMatrix::from_pure(basis_state(qubit_count, std::string(qubit_count, bit)));
    const auto z = PauliString::parse(std::string(qubit_count, 'Z'));
    return sample_pauli_expectation(rho, z, shots, readout, derive_seed(seed, {sub}))
        .raw_counts;
  };
  return calibration_from_counts(qubit_count, prepared('0', 0), prepared('1', 1));
}

namespace {

struct Factor {
  std::size_t qubit;
  double p01, p10, s01, s10;
};

std::vector<Factor> support_factors(const ReadoutCalibration &cal,
                                    const PauliString &observable) {
  std::vector<Factor> out;
  for (std::size_t q = 0; q < observable.qubit_count(); ++q) {
    if (observable[q] == Pauli::I)
      continue;
    if (q >= cal.qubits.size())
      throw InvalidArgument("no calibration for support qubit " + std::to_string(q));
    const auto &c = cal.qubits[q];
    out.push_back({q, c.p01, c.p10, c.p01_std_error, c.p10_std_error});
  }
  return out;
}

double factor_value(const Factor &f, bool one) {
  const double s = one ? -1.0 : 1.0;
  return (s - (f.p01 - f.p10)) / (1.0 - f.p01 - f.p10);
}

} // namespace

CorrectedValue roem_correct(const std::map<std::string, std::uint64_t> &raw_counts,
                            const ReadoutCalibration &calibration,
                            const PauliString &observable) {
  calibration.validate();
  const std::size_t n = observable.qubit_count();
  if (observable.is_identity())
    return {1.0, 0.0};
  const auto factors = support_factors(calibration, observable);
  const std::uint64_t shots = total(raw_counts);
  if (shots == 0)
    throw InvalidArgument("no counts to correct");

  double mean = 0.0, mean_sq = 0.0;
  std::vector<double> d01(factors.size(), 0.0), d10(factors.size(), 0.0);
  for (const auto &[label, count] : raw_counts) {
    check_label(label, n);
    const double p = static_cast<double>(count) / static_cast<double>(shots);
    std::vector<double> g(factors.size());
    double prod = 1.0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      g[i] = factor_value(factors[i], label[factors[i].qubit] == '1');
      prod *= g[i];
    }
    mean += p * prod;
    mean_sq += p * prod * prod;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      double others = 1.0;
      for (std::size_t j = 0; j < factors.size(); ++j)
        if (j != i)
          others *= g[j];
      const auto &f = factors[i];
      const double s = label[f.qubit] == '1' ? -1.0 : 1.0;
      const double den = (1.0 - f.p01 - f.p10) * (1.0 - f.p01 - f.p10);
      d01[i] += p * others * (s - 1.0 + 2.0 * f.p10) / den;
      d10[i] += p * others * (1.0 + s - 2.0 * f.p01) / den;
    }
  }
  double var = std::max(0.0, mean_sq - mean * mean) / static_cast<double>(shots);
  for (std::size_t i = 0; i < factors.size(); ++i)
    var += d01[i] * d01[i] * factors[i].s01 * factors[i].s01 +
           d10[i] * d10[i] * factors[i].s10 * factors[i].s10;
  return {mean, std::sqrt(var)};
}

double roem_correct_distribution(const std::vector<double> &probabilities,
                                 const ReadoutCalibration &calibration,
                                 const PauliString &observable) {
  calibration.validate();
  const std::size_t n = observable.qubit_count();
  if (probabilities.size() != (std::size_t{1} << n))
    throw DimensionError("distribution size does not match the observable");
  const auto factors = support_factors(calibration, observable);
  double v = 0.0;
  for (std::size_t x = 0; x < probabilities.size(); ++x) {
    double prod = 1.0;
    for (const auto &f : factors)
      prod *= factor_value(f, (x >> bit_of_qubit(f.qubit, n)) & 1u);
    v += probabilities[x] * prod;
  }
  return v;
}

RichardsonFit richardson_extrapolate(const RichardsonSeries &series) {
  const std::size_t k = series.order + 1;
  if (series.order < 1)
    throw InvalidArgument("Richardson order must be at least 1");
  if (series.points.size() < k)
    throw InvalidArgument("Richardson fit of order " + std::to_string(series.order) +
                          " needs at least " + std::to_string(k) + " points");
  std::set<double> distinct;
  for (const auto &p : series.points)
    distinct.insert(p.r);
  if (distinct.size() != series.points.size())
    throw InvalidArgument("Richardson replication factors must be distinct");

  bool weighted = true;
  for (const auto &p : series.points)
    if (!(p.std_error > 0.0))
      weighted = false;

  const auto m = static_cast<Eigen::Index>(series.points.size());
  const auto kk = static_cast<Eigen::Index>(k);
  RMatrix x(m, kk);
  RVector y(m), w(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto &p = series.points[static_cast<std::size_t>(i)];
    double pw = 1.0;
    for (Eigen::Index j = 0; j < kk; ++j) {
      x(i, j) = pw;
      pw *= p.r;
    }
    y(i) = p.value;
    w(i) = weighted ? 1.0 / (p.std_error * p.std_error) : 1.0;
  }
  const RVector sw = w.cwiseSqrt();
  const RMatrix xw = sw.asDiagonal() * x;
  const RVector yw = sw.asDiagonal() * y;
  const RVector coef = xw.colPivHouseholderQr().solve(yw);

  RichardsonFit fit;
  fit.coefficients.assign(coef.data(), coef.data() + coef.size());
  fit.intercept = coef(0);
  const RMatrix cov = (xw.transpose() * xw).inverse();
  if (weighted) {
    fit.intercept_std_error = std::sqrt(std::max(0.0, cov(0, 0)));
  } else if (m > kk) {
    const double s2 = (yw - xw * coef).squaredNorm() / static_cast<double>(m - kk);
    fit.intercept_std_error = std::sqrt(std::max(0.0, s2 * cov(0, 0)));
  }
  return fit;
}

nlohmann::json to_json(const ReadoutCalibration &calibration) {
  nlohmann::json qubits = nlohmann::json::array();
  for (const auto &q : calibration.qubits)
    qubits.push_back({{"p01", q.p01},
                      {"p10", q.p10},
                      {"p01_std_error", q.p01_std_error},
                      {"p10_std_error", q.p10_std_error}});
  return {{"shots", calibration.shots}, {"qubits", std::move(qubits)}};
}

nlohmann::json to_json(const RichardsonSeries &series, const RichardsonFit &fit) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto &p : series.points)
    pts.push_back({{"r", p.r}, {"value", p.value}, {"std_error", p.std_error}});
  return {{"order", series.order},
          {"points", std::move(pts)},
          {"coefficients", fit.coefficients},
          {"intercept", fit.intercept},
          {"intercept_std_error", fit.intercept_std_error}};
}

} // namespace qitelab
