/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qitelab/backends.hpp"
#include "qitelab/luscher.hpp"
#include "qitelab/mitigation.hpp"
#include "qitelab/qite.hpp"

namespace qitelab {

inline constexpr const char *kVersion = "0.1.0";

/// Chemical-accuracy bar in Hartree.
inline constexpr double kChemicalAccuracy = 1.6e-3;

enum class SystemKind { Deuteron, H2 };
enum class AlgorithmKind { Qite, QiteSingleStep, Qlanczos, Exact, Luscher };
enum class BackendKind { Exact, Sampled, Noisy };

std::string to_string(SystemKind kind);
std::string to_string(AlgorithmKind kind);
std::string to_string(BackendKind kind);

struct SystemSpec {
  SystemKind kind = SystemKind::Deuteron;
  std::size_t n_basis = 2;                // deuteron
  std::string coefficients_ref;           // h2, as written in the config
  std::filesystem::path coefficients;     // h2, resolved path
  std::vector<double> bond_lengths;       // h2; empty means every table row
};

struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::Qite;
  double delta_tau = 0.05;
  std::size_t n_steps = 40;
  UpdateMode update = UpdateMode::WholeHamiltonian;
  GeneratorForm pool = GeneratorForm::Restricted;
  double ridge = 1e-8;
  std::vector<std::string> initial_states;
  std::vector<double> betas;              // measured subset; empty means all
  // qlanczos
  std::size_t l_max = 4;
  std::string krylov_source = "exact";    // exact | qite
  double overlap_threshold = 0.99;
  double eig_cutoff = 1e-8;
  // luscher
  std::vector<std::string> luscher_sources{"exact"}; // exact | qite | qlanczos
  std::map<std::string, std::map<std::size_t, double>> luscher_energies;
  MassConvention mass = MassConvention::ReducedMass;
};

struct NoiseSpec {
  std::vector<ReadoutError> readout;      // one entry, or one per qubit
  double cnot_depolarizing = 0.0;
  std::size_t cnot_count_base = 4;

  NoiseModel model(std::size_t qubit_count) const;
};

struct BackendSpec {
  BackendKind kind = BackendKind::Exact;
  std::uint64_t shots = 8192;
  NoiseSpec noise;
};

struct MitigationSpec {
  bool roem = false;
  std::uint64_t calibration_shots = 8192;
  bool richardson = false;
  std::vector<std::size_t> richardson_r{1, 3, 5};
  std::optional<std::size_t> richardson_order; // default: 1 for 2 qubits, 2 for 3
};

struct ExperimentConfig {
  std::string name;
  SystemSpec system;
  AlgorithmSpec algorithm;
  BackendSpec backend;
  MitigationSpec mitigation;
  std::uint64_t seed = 0;
  std::size_t runs = 1;

  /// Canonical form; the digest is computed over its serialization.
  nlohmann::json to_json() const;
  std::string digest() const;
};

/// Parses YAML text. Relative file references resolve against `base_dir`
/// first and the working directory second. Throws ConfigError with the
/// offending field and line.
ExperimentConfig parse_config(const std::string &text,
                              const std::filesystem::path &base_dir = {});
ExperimentConfig load_config(const std::filesystem::path &path);

/// Runs the configured pipeline and returns the result record. Everything
/// outside the "timing" member is a deterministic function of the config.
nlohmann::json run_experiment(const ExperimentConfig &config);

/// Copy of `record` without its "timing" member.
nlohmann::json strip_timing(const nlohmann::json &record);

/// Write-to-temporary then rename.
void write_text_atomic(const std::filesystem::path &path, const std::string &text);
void write_json_atomic(const std::filesystem::path &path, const nlohmann::json &value);

/// Writes the CSV series for every record into `out_dir` and returns the
/// paths written. An empty list writes nothing.
std::vector<std::filesystem::path> emit_plot_data(const std::vector<nlohmann::json> &records,
                                                  const std::filesystem::path &out_dir);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string &bytes);

/// Settings for the `calibrate` command.
struct CalibrationConfig {
  std::size_t qubits = 2;
  std::uint64_t shots = 8192;
  std::vector<ReadoutError> readout;
  std::uint64_t seed = 0;
};

CalibrationConfig parse_calibration_config(const std::string &text);
CalibrationConfig load_calibration_config(const std::filesystem::path &path);

} // namespace qitelab
