/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qitelab/error.hpp"
#include "qitelab/experiment.hpp"

namespace {

using nlohmann::json;
using namespace qitelab;

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kNumerical = 3 };

struct Outcome {
  int code = kOk;
  std::string message;
};

/// Maps an exception to an exit code and diagnostic.
Outcome classify(const std::exception_ptr &e) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError &x) {
    return {kConfig, x.what()};
  } catch (const CoefficientFileError &x) {
    return {kConfig, x.what()};
  } catch (const ConvergenceError &x) {
    return {kNumerical, std::string("convergence: ") + x.what()};
  } catch (const ConditioningError &x) {
    return {kNumerical, std::string("conditioning: ") + x.what()};
  } catch (const StabilizationError &x) {
    return {kNumerical, std::string("stabilization: ") + x.what()};
  } catch (const CalibrationError &x) {
    return {kNumerical, std::string("calibration: ") + x.what()};
  } catch (const std::exception &x) {
    return {kFailure, x.what()};
  }
}

std::string fmt(double v, int precision = 6) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string headline(const json &record) {
  std::ostringstream out;
  const auto alg = record["algorithm"].get<std::string>();
  const auto &res = record["results"];
  if (alg == "luscher") {
    for (const auto &s : res["sources"])
      for (const auto &r : s["rows"]) {
        out << "  " << s["source"].get<std::string>() << " N=" << r["N"] << " E_N="
            << fmt(r["E_N"].get<double>(), 3);
        for (const char *o : {"LO", "NLO", "N2LO"})
          if (r.contains(o) && r[o].contains("e_inf"))
            out << " " << o << "=" << fmt(r[o]["e_inf"].get<double>(), 3);
        out << "\n";
      }
    return out.str();
  }
  for (const auto &i : res["instances"]) {
    out << "  " << i["system"].dump();
    if (i.contains("initial_state"))
      out << " |" << i["initial_state"].get<std::string>() << ">";
    if (alg == "exact") {
      out << " ground=" << fmt(i["ground_energy"].get<double>());
    } else if (alg == "qlanczos") {
      out << " E=" << fmt(i["noiseless"]["energies_from_expectation"][0].get<double>())
          << " exact=" << fmt(i["sector_spectrum"][0].get<double>());
      if (i.contains("measured"))
        for (const auto &[p, m] : i["measured"].items())
          out << " " << p << "=" << fmt(m["from_expectation"]["mean"].get<double>(), 4) << "+-"
              << fmt(m["from_expectation"]["std_error"].get<double>(), 4);
    } else {
      const auto &last = i["trajectory"].back();
      out << " beta=" << fmt(last["beta"].get<double>(), 2)
          << " sector=" << fmt(i["sector_energy"].get<double>());
      for (const auto &[p, m] : last["energies"].items())
        out << " " << p << "=" << fmt(m["mean"].get<double>(), 4) << "+-"
            << fmt(m["std_error"].get<double>(), 4);
    }
    out << "\n";
  }
  return out.str();
}

int cmd_run(const std::vector<std::string> &configs, const std::optional<std::uint64_t> &seed,
            const std::string &out_dir, unsigned jobs) {
  std::vector<Outcome> outcomes(configs.size());
  std::vector<std::string> reports(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        auto config = load_config(configs[i]);
        if (seed)
          config.seed = *seed;
        const auto record = run_experiment(config);
        const auto path = std::filesystem::path(out_dir) / (config.name + ".json");
        write_json_atomic(path, record);
        std::ostringstream msg;
        msg << config.name << ": " << path.string() << " (config " << config.digest() << ")\n";
        for (const auto &p : emit_plot_data({record}, out_dir))
          msg << "  " << p.string() << "\n";
        msg << headline(record);
        reports[i] = msg.str();
      } catch (...) {
        outcomes[i] = classify(std::current_exception());
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();

  int code = kOk;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (outcomes[i].code != kOk) {
      std::cerr << "error: " << configs[i] << ": " << outcomes[i].message << "\n";
      code = std::max(code, outcomes[i].code);
    } else {
      std::cout << reports[i];
    }
  }
  return code;
}

int cmd_report(const std::vector<std::string> &records, const std::string &out_dir) {
  if (records.empty()) {
    std::cerr << "warning: no records given; nothing to report\n";
    return kOk;
  }
  std::vector<json> loaded;
  for (const auto &path : records) {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "error: cannot open '" << path << "'\n";
      return kFailure;
    }
    try {
      loaded.push_back(json::parse(in));
    } catch (const json::exception &e) {
      std::cerr << "error: " << path << ": " << e.what() << "\n";
      return kFailure;
    }
  }
  try {
    for (const auto &p : emit_plot_data(loaded, out_dir))
      std::cout << p.string() << "\n";
    for (const auto &r : loaded)
      std::cout << r["name"].get<std::string>() << " [" << r["algorithm"].get<std::string>()
                << "]\n"
                << headline(r);
  } catch (...) {
    const auto o = classify(std::current_exception());
    std::cerr << "error: " << o.message << "\n";
    return o.code;
  }
  return kOk;
}

int cmd_calibrate(const std::string &config_path, const std::optional<std::uint64_t> &seed,
                  const std::optional<std::string> &out_dir) {
  try {
    auto c = load_calibration_config(config_path);
    if (seed)
      c.seed = *seed;
    const auto cal = calibrate_readout(c.qubits, c.readout, c.shots, c.seed);
    json out{{"tool", {{"name", "qitelab"}, {"version", kVersion}}},
             {"seed", c.seed},
             {"calibration", to_json(cal)}};
    std::cout << out.dump(2) << "\n";
    if (out_dir)
      write_json_atomic(std::filesystem::path(*out_dir) / "calibration.json", out);
  } catch (...) {
    const auto o = classify(std::current_exception());
    std::cerr << "error: " << o.message << "\n";
    return o.code;
  }
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Imaginary-time and Krylov eigensolvers on simulated few-qubit hardware"};
  app.set_version_flag("--version", std::string(qitelab::kVersion));
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::string out_dir = "results";
  unsigned jobs = 1;

  auto *run = app.add_subcommand("run", "Run experiment configs and write result records");
  std::vector<std::string> configs;
  run->add_option("config", configs, "Experiment config files (YAML)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the base seed of every config");
  run->add_option("--out-dir", out_dir, "Directory for records and CSVs")
      ->capture_default_str();
  run->add_option("--jobs", jobs, "Configs run in parallel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto *report = app.add_subcommand("report", "Write plot CSVs and summaries from records");
  std::vector<std::string> records;
  report->add_option("records", records, "Result record files (JSON)");
  report->add_option("--out-dir", out_dir, "Directory for CSVs")->capture_default_str();

  auto *calibrate = app.add_subcommand("calibrate", "Estimate readout flip rates");
  std::string noise_config;
  std::optional<std::string> cal_out;
  calibrate->add_option("noise-config", noise_config, "Noise config file (YAML)")
      ->required()
      ->check(CLI::ExistingFile);
  calibrate->add_option("--seed", seed, "Override the seed");
  calibrate->add_option("--out-dir", cal_out, "Also write calibration.json here");

  CLI11_PARSE(app, argc, argv);

  if (*run)
    return cmd_run(configs, seed, out_dir, jobs);
  if (*report)
    return cmd_report(records, out_dir);
  return cmd_calibrate(noise_config, seed, cal_out);
}
