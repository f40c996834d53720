/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "qitelab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qitelab/error.hpp"
#include "qitelab/hamiltonians.hpp"
#include "qitelab/qlanczos.hpp"
#include "qitelab/random.hpp"

namespace qitelab {

namespace {

using nlohmann::json;

// Index tags keep the seed paths of different measurement kinds apart.
constexpr std::uint64_t kCalibrationTag = 0xCA11;
constexpr std::uint64_t kEvaluatorTag = 0xE7A1;

struct Instance {
  json label;
  std::size_t qubits = 0;
  PauliSum h;
  std::vector<PauliSum> local_terms;
};

std::vector<Instance> make_instances(const ExperimentConfig &c) {
  std::vector<Instance> out;
  if (c.system.kind == SystemKind::Deuteron) {
    const auto d = deuteron_hamiltonian(c.system.n_basis);
    out.push_back({{{"kind", "deuteron"}, {"N", c.system.n_basis}},
                   c.system.n_basis, d.full, d.local_terms});
    return out;
  }
  const auto table = load_h2_coefficients(c.system.coefficients);
  const auto rs = c.system.bond_lengths.empty() ? table.bond_lengths() : c.system.bond_lengths;
  for (double r : rs) {
    PauliSum h;
    try {
      h = h2_hamiltonian(table, r);
    } catch (const InvalidArgument &e) {
      throw ConfigError("system.R", 0, e.what());
    }
    out.push_back({{{"kind", "h2"}, {"R", r}}, 2, h, group_local_terms(h)});
  }
  return out;
}

struct Spectrum {
  RVector values;
  CMatrix vectors;
};

Spectrum diagonalize(const PauliSum &h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Eigenvalues whose eigenvectors overlap `psi` (ascending).
std::vector<double> sector(const Spectrum &s, const QuantumState &psi) {
  std::vector<double> out;
  for (Eigen::Index k = 0; k < s.values.size(); ++k)
    if (std::norm(s.vectors.col(k).dot(psi.amplitudes())) > 1e-12)
      out.push_back(s.values(k));
  return out;
}

std::vector<double> to_vector(const RVector &v) { return {v.data(), v.data() + v.size()}; }

/// Mean and standard error over runs; a single run reports its own error.
json summarize(const std::vector<double> &values, const std::vector<double> &errors) {
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values)
    mean += v / n;
  double se = errors.empty() ? 0.0 : errors.front();
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values)
      ss += (v - mean) * (v - mean);
    se = std::sqrt(ss / (n - 1.0) / n);
  }
  return {{"mean", mean}, {"std_error", se}, {"per_run", values}, {"per_run_std_error", errors}};
}

struct Value {
  double value = 0.0;
  double std_error = 0.0;
};

struct TermSeries {
  std::string op;
  double coefficient = 0.0;
  std::vector<std::size_t> r;
  std::vector<Value> points; // ROEM-corrected when enabled
};

struct Measurement {
  std::map<std::string, Value> energy; // by provenance
  std::vector<TermSeries> terms;       // noisy backend only
  std::vector<Value> energy_series;    // sum_i c_i <O_i(r)>, per r
};

/// Energy measurement for one backend and mitigation setting.
class Meter {
public:
  Meter(const ExperimentConfig &c, std::size_t qubits) : c_(c), qubits_(qubits) {
    if (c.backend.kind == BackendKind::Noisy) {
      noise_ = c.backend.noise.model(qubits);
      rs_ = c.mitigation.richardson ? c.mitigation.richardson_r : std::vector<std::size_t>{1};
      if (std::find(rs_.begin(), rs_.end(), std::size_t{1}) == rs_.end())
        rs_.insert(rs_.begin(), 1);
      order_ = c.mitigation.richardson_order.value_or(qubits == 2 ? 1 : 2);
    }
  }

  std::vector<std::string> provenances() const {
    std::vector<std::string> p{"raw"};
    if (c_.backend.kind != BackendKind::Noisy)
      return p;
    if (c_.mitigation.roem)
      p.push_back("roem");
    if (c_.mitigation.richardson)
      p.push_back(c_.mitigation.roem ? "roem+richardson" : "richardson");
    return p;
  }

  /// Calibrates the readout for one run. Returns the calibration record.
  json start_run(std::uint64_t run_seed) {
    calibration_.reset();
    if (c_.backend.kind != BackendKind::Noisy || !c_.mitigation.roem)
      return nullptr;
    calibration_ = calibrate_readout(qubits_, noise_.readout, c_.mitigation.calibration_shots,
                                     derive_seed(run_seed, {kCalibrationTag}));
    return to_json(*calibration_);
  }

  Measurement measure(const QuantumState &state, const std::string &init, const PauliSum &h,
                      std::uint64_t seed) const {
    Measurement m;
    if (c_.backend.kind == BackendKind::Exact) {
      m.energy["raw"] = {expectation(state, h), 0.0};
      return m;
    }
    if (c_.backend.kind == BackendKind::Sampled) {
      const auto e = measure_energy(state, h, c_.backend.shots, seed);
      m.energy["raw"] = {e.energy, e.std_error};
      return m;
    }
    const auto tmpl = fit_template(state, init, c_.backend.noise.cnot_count_base);
    double identity = 0.0;
    std::vector<std::pair<double, Value>> raw1, roem1;
    std::vector<double> series_sum(rs_.size(), 0.0), series_var(rs_.size(), 0.0);
    double rich = identity, rich_var = 0.0;
    const auto &terms = h.terms();
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const auto &t = terms[i];
      if (t.string.is_identity()) {
        identity += t.coefficient;
        continue;
      }
      TermSeries ts;
      ts.op = t.string.to_string();
      ts.coefficient = t.coefficient;
      for (std::size_t k = 0; k < rs_.size(); ++k) {
        const std::size_t r = rs_[k];
        const auto est = sample_pauli_expectation(tmpl, t.string, c_.backend.shots,
                                                  noise_.with_replication(r),
                                                  derive_seed(seed, {i, r}));
        Value v{est.value, est.std_error};
        if (r == 1)
          raw1.push_back({t.coefficient, v});
        if (calibration_) {
          const auto corr = roem_correct(est.raw_counts, *calibration_, t.string);
          v = {corr.value, corr.std_error};
          if (r == 1)
            roem1.push_back({t.coefficient, v});
        }
        ts.r.push_back(r);
        ts.points.push_back(v);
        series_sum[k] += t.coefficient * v.value;
        series_var[k] += t.coefficient * t.coefficient * v.std_error * v.std_error;
      }
      if (c_.mitigation.richardson) {
        RichardsonSeries series;
        series.order = order_;
        for (std::size_t k = 0; k < rs_.size(); ++k)
          if (std::find(c_.mitigation.richardson_r.begin(), c_.mitigation.richardson_r.end(),
                        rs_[k]) != c_.mitigation.richardson_r.end())
            series.points.push_back(
                {static_cast<double>(rs_[k]), ts.points[k].value, ts.points[k].std_error});
        const auto fit = richardson_extrapolate(series);
        rich += t.coefficient * fit.intercept;
        rich_var += t.coefficient * t.coefficient * fit.intercept_std_error *
                    fit.intercept_std_error;
      }
      m.terms.push_back(std::move(ts));
    }
    auto total = [&](const std::vector<std::pair<double, Value>> &parts) {
      Value out{identity, 0.0};
      double var = 0.0;
      for (const auto &[coef, v] : parts) {
        out.value += coef * v.value;
        var += coef * coef * v.std_error * v.std_error;
      }
      out.std_error = std::sqrt(var);
      return out;
    };
    m.energy["raw"] = total(raw1);
    if (calibration_)
      m.energy["roem"] = total(roem1);
    if (c_.mitigation.richardson)
      m.energy[calibration_ ? "roem+richardson" : "richardson"] = {identity + rich,
                                                                   std::sqrt(rich_var)};
    for (std::size_t k = 0; k < rs_.size(); ++k)
      m.energy_series.push_back({identity + series_sum[k], std::sqrt(series_var[k])});
    return m;
  }

  const std::vector<std::size_t> &replication_factors() const { return rs_; }
  std::size_t richardson_order() const { return order_; }

private:
  const ExperimentConfig &c_;
  std::size_t qubits_;
  NoiseModel noise_;
  std::vector<std::size_t> rs_;
  std::size_t order_ = 1;
  std::optional<ReadoutCalibration> calibration_;
};

/// Per-term Richardson data averaged over runs, for plotting.
json term_series_json(const std::vector<Measurement> &runs, const Meter &meter,
                      const ExperimentConfig &c) {
  if (runs.empty() || runs.front().terms.empty())
    return json::array();
  const auto &rs = meter.replication_factors();
  json out = json::array();
  auto fit_means = [&](const std::vector<json> &points) {
    RichardsonSeries s;
    s.order = meter.richardson_order();
    for (const auto &p : points)
      if (std::find(c.mitigation.richardson_r.begin(), c.mitigation.richardson_r.end(),
                    p["r"].get<std::size_t>()) != c.mitigation.richardson_r.end())
        s.points.push_back({p["r"].get<double>(), p["mean"].get<double>(),
                            p["std_error"].get<double>()});
    return to_json(s, richardson_extrapolate(s));
  };
  const auto n_terms = runs.front().terms.size();
  for (std::size_t i = 0; i <= n_terms; ++i) {
    const bool energy = i == n_terms;
    std::vector<json> points;
    for (std::size_t k = 0; k < rs.size(); ++k) {
      std::vector<double> v, e;
      for (const auto &m : runs) {
        const Value &x = energy ? m.energy_series[k] : m.terms[i].points[k];
        v.push_back(x.value);
        e.push_back(x.std_error);
      }
      auto s = summarize(v, e);
      points.push_back({{"r", rs[k]}, {"mean", s["mean"]}, {"std_error", s["std_error"]}});
    }
    json entry{{"operator", energy ? "H" : runs.front().terms[i].op},
               {"coefficient", energy ? 1.0 : runs.front().terms[i].coefficient},
               {"points", points}};
    if (c.mitigation.richardson)
      entry["fit"] = fit_means(points);
    out.push_back(std::move(entry));
  }
  return out;
}

json summarize_energies(const std::vector<Measurement> &runs, const Meter &meter) {
  json out = json::object();
  for (const auto &p : meter.provenances()) {
    std::vector<double> v, e;
    for (const auto &m : runs) {
      v.push_back(m.energy.at(p).value);
      e.push_back(m.energy.at(p).std_error);
    }
    out[p] = summarize(v, e);
  }
  return out;
}

OperatorPool pool_for(const ExperimentConfig &c, std::size_t qubits) {
  return build_pool(qubits, qubits - 1, c.algorithm.pool == GeneratorForm::Restricted);
}

QiteOptions qite_options(const ExperimentConfig &c, std::size_t steps) {
  QiteOptions o;
  o.delta_tau = c.algorithm.delta_tau;
  o.n_steps = steps;
  o.update = c.algorithm.update;
  o.ridge = c.algorithm.ridge;
  return o;
}

std::vector<std::size_t> measured_steps(const ExperimentConfig &c) {
  std::vector<std::size_t> out;
  if (c.algorithm.betas.empty()) {
    for (std::size_t s = 0; s <= c.algorithm.n_steps; ++s)
      out.push_back(s);
  } else {
    for (double b : c.algorithm.betas)
      out.push_back(static_cast<std::size_t>(std::llround(b / c.algorithm.delta_tau)));
  }
  return out;
}

json run_qite(const ExperimentConfig &c) {
  const bool single = c.algorithm.kind == AlgorithmKind::QiteSingleStep;
  json instances = json::array();
  const auto list = make_instances(c);
  for (std::size_t ii = 0; ii < list.size(); ++ii) {
    const auto &inst = list[ii];
    const auto spectrum = diagonalize(inst.h);
    const auto pool = pool_for(c, inst.qubits);
    for (std::size_t si = 0; si < c.algorithm.initial_states.size(); ++si) {
      const auto &init = c.algorithm.initial_states[si];
      const auto psi0 = basis_state(inst.qubits, init);
      const auto traj =
          qite_run(psi0, inst.local_terms, pool, qite_options(c, c.algorithm.n_steps));
      const auto exact = exact_imaginary_time(psi0, inst.h, c.algorithm.delta_tau,
                                              c.algorithm.n_steps);
      std::optional<CompressedTrajectory> comp;
      if (single)
        comp = single_step_compress(traj, inst.h, c.backend.noise.cnot_count_base);
      auto state_at = [&](std::size_t s) {
        return (single && s > 0) ? prepare_state(comp->templates[s - 1]) : traj.states[s];
      };

      const auto steps = measured_steps(c);
      Meter meter(c, inst.qubits);
      std::vector<std::vector<Measurement>> per_step(steps.size());
      json calibrations = json::array();
      for (std::size_t run = 0; run < c.runs; ++run) {
        const auto run_seed = derive_seed(c.seed, {ii, si, run});
        auto cal = meter.start_run(run_seed);
        if (!cal.is_null())
          calibrations.push_back(std::move(cal));
        for (std::size_t k = 0; k < steps.size(); ++k)
          per_step[k].push_back(
              meter.measure(state_at(steps[k]), init, inst.h, derive_seed(run_seed, {steps[k]})));
      }

      json points = json::array();
      for (std::size_t k = 0; k < steps.size(); ++k) {
        const std::size_t s = steps[k];
        json p{{"step", s},
               {"beta", traj.beta(s)},
               {"energy_noiseless", single && s > 0 ? comp->energies[s - 1] : traj.energies[s]},
               {"energy_exact_imaginary_time", exact.energies[s]},
               {"energies", summarize_energies(per_step[k], meter)}};
        if (single) {
          p["fidelity"] = s > 0 ? comp->fidelity[s - 1] : 1.0;
          p["angles"] = s > 0 ? comp->templates[s - 1].angles
                              : fit_template(psi0, init, c.backend.noise.cnot_count_base).angles;
        }
        if (c.mitigation.richardson)
          p["richardson"] = term_series_json(per_step[k], meter, c);
        points.push_back(std::move(p));
      }
      const auto sec = sector(spectrum, psi0);
      json entry{{"system", inst.label},
                 {"initial_state", init},
                 {"spectrum", to_vector(spectrum.values)},
                 {"ground_energy", spectrum.values(0)},
                 {"sector_energy", sec.front()},
                 {"final_energy_noiseless", traj.energies.back()},
                 {"final_error", std::abs(traj.energies.back() - sec.front())},
                 {"trajectory", std::move(points)}};
      if (!calibrations.empty())
        entry["calibrations"] = std::move(calibrations);
      instances.push_back(std::move(entry));
    }
  }
  return {{"instances", std::move(instances)}};
}

std::vector<QuantumState> krylov_states(const ExperimentConfig &c, const Instance &inst,
                                        const QuantumState &psi0) {
  if (c.algorithm.krylov_source == "qite")
    return qite_run(psi0, inst.local_terms, pool_for(c, inst.qubits),
                    qite_options(c, c.algorithm.l_max))
        .states;
  return exact_imaginary_time(psi0, inst.h, c.algorithm.delta_tau, c.algorithm.l_max).states;
}

json run_qlanczos(const ExperimentConfig &c) {
  json instances = json::array();
  const auto list = make_instances(c);
  const auto &a = c.algorithm;
  for (std::size_t ii = 0; ii < list.size(); ++ii) {
    const auto &inst = list[ii];
    const auto spectrum = diagonalize(inst.h);
    for (std::size_t si = 0; si < a.initial_states.size(); ++si) {
      const auto &init = a.initial_states[si];
      const auto psi0 = basis_state(inst.qubits, init);
      const auto states = krylov_states(c, inst, psi0);

      const auto space = stabilize(build_krylov(states, inst.h, a.delta_tau, a.l_max),
                                   a.overlap_threshold, a.eig_cutoff);
      const auto noiseless = solve(space, inst.h);

      json entry{{"system", inst.label},
                 {"initial_state", init},
                 {"spectrum", to_vector(spectrum.values)},
                 {"sector_spectrum", sector(spectrum, psi0)},
                 {"noiseless", to_json(noiseless)}};

      if (c.backend.kind != BackendKind::Exact) {
        Meter meter(c, inst.qubits);
        const auto provs = meter.provenances();
        std::map<std::string, std::vector<double>> eig, eig_err, expv, exp_err;
        json calibrations = json::array(), runs = json::array();
        for (std::size_t run = 0; run < c.runs; ++run) {
          const auto run_seed = derive_seed(c.seed, {ii, si, run});
          auto cal = meter.start_run(run_seed);
          if (!cal.is_null())
            calibrations.push_back(std::move(cal));
          std::vector<Measurement> m;
          for (std::size_t r = 0; r < states.size(); ++r)
            m.push_back(meter.measure(states[r], init, inst.h, derive_seed(run_seed, {r})));
          json run_json = json::object();
          for (std::size_t pi = 0; pi < provs.size(); ++pi) {
            const auto &p = provs[pi];
            std::vector<double> energies;
            for (const auto &x : m)
              energies.push_back(x.energy.at(p).value);
            const auto noisy = stabilize(build_krylov(states, inst.h, a.delta_tau, a.l_max, energies),
                                         a.overlap_threshold, a.eig_cutoff);
            std::uint64_t calls = 0;
            std::vector<double> eval_err;
            const EnergyEvaluator evaluate = [&](const QuantumState &phi) {
              const auto x = meter.measure(
                  phi, init, inst.h,
                  derive_seed(run_seed, {kEvaluatorTag, pi, calls++}));
              eval_err.push_back(x.energy.at(p).std_error);
              return x.energy.at(p).value;
            };
            const auto result = solve(noisy, inst.h, evaluate);
            eig[p].push_back(result.energies_from_eigenvalues.front());
            expv[p].push_back(result.energies_from_expectation.front());
            exp_err[p].push_back(eval_err.front());
            // Single-run proxy: the largest error among the measured <H>_r.
            double var = 0.0;
            for (const auto &x : m)
              var = std::max(var, x.energy.at(p).std_error * x.energy.at(p).std_error);
            eig_err[p].push_back(std::sqrt(var));
            run_json[p] = {{"krylov_energies", energies}, {"result", to_json(result)}};
          }
          runs.push_back(std::move(run_json));
        }
        json measured = json::object();
        for (const auto &p : provs)
          measured[p] = {{"from_eigenvalues", summarize(eig[p], eig_err[p])},
                         {"from_expectation", summarize(expv[p], exp_err[p])}};
        entry["measured"] = std::move(measured);
        entry["runs"] = std::move(runs);
        if (!calibrations.empty())
          entry["calibrations"] = std::move(calibrations);
      }
      instances.push_back(std::move(entry));
    }
  }
  return {{"instances", std::move(instances)}};
}

json run_exact(const ExperimentConfig &c) {
  json instances = json::array();
  for (const auto &inst : make_instances(c)) {
    const auto spectrum = diagonalize(inst.h);
    json sectors = json::object();
    for (const auto &init : c.algorithm.initial_states)
      sectors[init] = sector(spectrum, basis_state(inst.qubits, init));
    instances.push_back({{"system", inst.label},
                         {"spectrum", to_vector(spectrum.values)},
                         {"ground_energy", spectrum.values(0)},
                         {"sectors", sectors}});
  }
  return {{"instances", std::move(instances)}};
}

double one_body_ground(std::size_t n) {
  DeuteronParams p;
  p.n_basis = n;
  return Eigen::SelfAdjointEigenSolver<RMatrix>(ho_one_body_matrix(p).entries).eigenvalues()(0);
}

std::map<std::size_t, double> source_energies(const ExperimentConfig &c, const std::string &src) {
  std::map<std::size_t, double> e{{1, one_body_ground(1)}};
  const auto &a = c.algorithm;
  for (std::size_t n : {2u, 3u}) {
    const auto d = deuteron_hamiltonian(n);
    const auto psi0 = basis_state(n, std::string("1") + std::string(n - 1, '0'));
    if (src == "exact") {
      e[n] = one_body_ground(n);
    } else if (src == "qite") {
      const auto traj = qite_run(psi0, d.local_terms, build_pool(n, n - 1, true),
                                 qite_options(c, a.n_steps));
      e[n] = traj.energies.back();
    } else {
      const Instance inst{nullptr, n, d.full, d.local_terms};
      const auto states = krylov_states(c, inst, psi0);
      const auto space = stabilize(build_krylov(states, d.full, a.delta_tau, a.l_max),
                                   a.overlap_threshold, a.eig_cutoff);
      e[n] = solve(space, d.full).energies_from_expectation.front();
    }
  }
  return e;
}

json run_luscher(const ExperimentConfig &c) {
  LuscherConstants constants;
  constants.mass = c.algorithm.mass;
  std::vector<std::string> sources = c.algorithm.luscher_sources;
  for (const auto &[src, _] : c.algorithm.luscher_energies)
    if (std::find(sources.begin(), sources.end(), src) == sources.end())
      sources.push_back(src);
  json out = json::array();
  for (const auto &src : sources) {
    std::map<std::size_t, double> e;
    const bool computed = std::find(c.algorithm.luscher_sources.begin(),
                                    c.algorithm.luscher_sources.end(),
                                    src) != c.algorithm.luscher_sources.end();
    if (computed)
      e = source_energies(c, src);
    else
      e[1] = one_body_ground(1);
    if (const auto it = c.algorithm.luscher_energies.find(src);
        it != c.algorithm.luscher_energies.end())
      for (const auto &[n, v] : it->second)
        e[n] = v;
    json rows = json::array();
    for (std::size_t row : {2u, 3u}) {
      if (!e.count(row))
        continue;
      json r{{"N", row}, {"E_N", e.at(row)}};
      std::vector<LuscherOrder> orders{LuscherOrder::LO, LuscherOrder::NLO};
      if (row == 3)
        orders.push_back(LuscherOrder::N2LO);
      for (auto order : orders) {
        try {
          r[to_string(order)] = to_json(fit_luscher(luscher_row_inputs(e, row, order), order,
                                                    constants));
        } catch (const Error &err) {
          r[to_string(order)] = {{"error", err.what()}};
        }
      }
      rows.push_back(std::move(r));
    }
    json energies = json::object();
    for (const auto &[n, v] : e)
      energies[std::to_string(n)] = v;
    out.push_back({{"source", src}, {"energies", energies}, {"rows", std::move(rows)}});
  }
  return {{"sources", std::move(out)},
          {"constants",
           {{"mu", constants.mu},
            {"m_p", constants.m_p},
            {"m_n", constants.m_n},
            {"hbar_c", constants.hbar_c},
            {"hbar_omega", constants.hbar_omega},
            {"L", {{"1", constants.L.at(1)}, {"2", constants.L.at(2)}, {"3", constants.L.at(3)}}},
            {"mass_convention", to_string(constants.mass)}}}};
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string file_digest(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return fnv1a_hex(ss.str());
}

} // namespace

json run_experiment(const ExperimentConfig &config) {
  const auto start = std::chrono::steady_clock::now();
  json results;
  switch (config.algorithm.kind) {
  case AlgorithmKind::Qite:
  case AlgorithmKind::QiteSingleStep:
    results = run_qite(config);
    break;
  case AlgorithmKind::Qlanczos:
    results = run_qlanczos(config);
    break;
  case AlgorithmKind::Exact:
    results = run_exact(config);
    break;
  case AlgorithmKind::Luscher:
    results = run_luscher(config);
    break;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json record{{"tool", {{"name", "qitelab"}, {"version", kVersion}}},
              {"name", config.name},
              {"algorithm", to_string(config.algorithm.kind)},
              {"system", to_string(config.system.kind)},
              {"config", config.to_json()},
              {"config_digest", config.digest()},
              {"results", std::move(results)},
              {"timing", {{"wall_seconds", wall}, {"finished_utc", utc_now()}}}};
  if (config.system.kind == SystemKind::H2)
    record["data_digest"] = file_digest(config.system.coefficients);
  return record;
}

json strip_timing(const json &record) {
  json out = record;
  out.erase("timing");
  return out;
}

void write_text_atomic(const std::filesystem::path &path, const std::string &text) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error("cannot write '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out)
      throw Error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

void write_json_atomic(const std::filesystem::path &path, const json &value) {
  write_text_atomic(path, value.dump(2) + "\n");
}

} // namespace qitelab
