/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qitelab/backends.hpp"
#include "qitelab/pauli.hpp"

namespace qitelab {

/// Flip rates use p(a|b) = probability of reading a when b was prepared, so
/// p01 = p(0|1) and p10 = p(1|0). Some write-ups state the estimator for
/// p(1|0) as "prepared |1>, read 0"; that is p(0|1) here.
struct QubitCalibration {
  double p01 = 0.0;
  double p10 = 0.0;
  double p01_std_error = 0.0;
  double p10_std_error = 0.0;
};

struct ReadoutCalibration {
  std::vector<QubitCalibration> qubits;
  std::uint64_t shots = 0;

  std::size_t qubit_count() const { return qubits.size(); }
  /// Throws CalibrationError when p01 + p10 >= 1 on any qubit.
  void validate() const;
};

/// Estimates flip rates from the counts of the all-|0> and all-|1>
/// preparations (outcome label, qubit 0 first, -> count).
ReadoutCalibration
calibration_from_counts(std::size_t qubit_count,
                        const std::map<std::string, std::uint64_t> &counts_all0,
                        const std::map<std::string, std::uint64_t> &counts_all1);

/// Prepares |0...0> and |1...1> on a backend with the given readout model,
/// samples `shots` each and estimates the flip rates.
ReadoutCalibration calibrate_readout(std::size_t qubit_count,
                                     const std::vector<ReadoutError> &readout,
                                     std::uint64_t shots, std::uint64_t seed);

struct CorrectedValue {
  double value = 0.0;
  double std_error = 0.0;
};

/// Readout-corrected <observable>:
///   sum_x p(x) prod_{k in support} ((-1)^{x_k} - p_k^-) / (1 - p_k^+)
/// with p^+ = p01 + p10 and p^- = p01 - p10. The standard error combines
/// multinomial count noise and calibration noise to first order.
CorrectedValue roem_correct(const std::map<std::string, std::uint64_t> &raw_counts,
                            const ReadoutCalibration &calibration,
                            const PauliString &observable);

/// Same estimator on an exact outcome distribution (basis index order).
double roem_correct_distribution(const std::vector<double> &probabilities,
                                 const ReadoutCalibration &calibration,
                                 const PauliString &observable);

struct RichardsonPoint {
  double r = 1.0;
  double value = 0.0;
  double std_error = 0.0;
};

struct RichardsonSeries {
  std::vector<RichardsonPoint> points;
  std::size_t order = 1;
};

struct RichardsonFit {
  std::vector<double> coefficients; // c0 + c1 r + c2 r^2 ...
  double intercept = 0.0;
  double intercept_std_error = 0.0;
};

/// Weighted (1/sigma^2) least-squares polynomial fit in r; unit weights when
/// any point has sigma <= 0. Throws InvalidArgument if underdetermined.
RichardsonFit richardson_extrapolate(const RichardsonSeries &series);

nlohmann::json to_json(const ReadoutCalibration &calibration);
nlohmann::json to_json(const RichardsonSeries &series, const RichardsonFit &fit);

} // namespace qitelab
