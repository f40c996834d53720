/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "qitelab/error.hpp"
#include "qitelab/experiment.hpp"

namespace qitelab {

std::string to_string(SystemKind kind) {
  return kind == SystemKind::Deuteron ? "deuteron" : "h2";
}

std::string to_string(AlgorithmKind kind) {
  switch (kind) {
  case AlgorithmKind::Qite:
    return "qite";
  case AlgorithmKind::QiteSingleStep:
    return "qite_single_step";
  case AlgorithmKind::Qlanczos:
    return "qlanczos";
  case AlgorithmKind::Exact:
    return "exact";
  case AlgorithmKind::Luscher:
    return "luscher";
  }
  return "?";
}

std::string to_string(BackendKind kind) {
  switch (kind) {
  case BackendKind::Exact:
    return "exact";
  case BackendKind::Sampled:
    return "sampled";
  case BackendKind::Noisy:
    return "noisy";
  }
  return "?";
}

NoiseModel NoiseSpec::model(std::size_t qubit_count) const {
  NoiseModel m;
  if (readout.size() == 1)
    m.readout.assign(qubit_count, readout.front());
  else
    m.readout = readout;
  m.cnot_depolarizing = cnot_depolarizing;
  m.validate(qubit_count);
  return m;
}

std::string fnv1a_hex(const std::string &bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

int line_of(const YAML::Node &node) {
  const auto mark = node.Mark();
  return mark.line >= 0 ? mark.line + 1 : 0;
}

std::string join(const std::string &parent, const std::string &key) {
  return parent.empty() ? key : parent + "." + key;
}

/// Thin wrapper around a YAML mapping that reports field paths and lines.
class Section {
public:
  Section(YAML::Node node, std::string path, int fallback_line)
      : node_(std::move(node)), path_(std::move(path)), line_(fallback_line) {
    if (node_.IsDefined() && !node_.IsNull()) {
      if (!node_.IsMap())
        throw ConfigError(path_, line_of(node_), "expected a mapping");
      line_ = line_of(node_);
    }
  }

  bool has(const std::string &key) const {
    return node_.IsMap() && node_[key].IsDefined() && !node_[key].IsNull();
  }

  YAML::Node raw(const std::string &key) const { return node_[key]; }
  std::string field(const std::string &key) const { return join(path_, key); }
  int line(const std::string &key) const {
    return has(key) ? line_of(node_[key]) : line_;
  }

  void allow(std::initializer_list<const char *> keys) const {
    if (!node_.IsMap())
      return;
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto &kv : node_) {
      const auto k = kv.first.as<std::string>();
      if (!ok.count(k))
        throw ConfigError(join(path_, k), line_of(kv.first), "unknown key");
    }
  }

  template <typename T> T get(const std::string &key, const T &fallback) const {
    if (!has(key))
      return fallback;
    return as<T>(key);
  }

  template <typename T> T require(const std::string &key) const {
    if (!has(key))
      throw ConfigError(field(key), line_, "required field is missing");
    return as<T>(key);
  }

  template <typename T> T as(const std::string &key) const {
    try {
      return node_[key].as<T>();
    } catch (const YAML::Exception &) {
      throw ConfigError(field(key), line(key), std::string("expected ") + type_name<T>());
    }
  }

  Section child(const std::string &key) const {
    return Section(has(key) ? node_[key] : YAML::Node(), field(key), line(key));
  }

  const std::string &path() const { return path_; }
  int line() const { return line_; }

private:
  template <typename T> static const char *type_name() {
    if constexpr (std::is_same_v<T, bool>)
      return "true or false";
    else if constexpr (std::is_integral_v<T>)
      return "an integer";
    else if constexpr (std::is_floating_point_v<T>)
      return "a number";
    else if constexpr (std::is_same_v<T, std::string>)
      return "a string";
    else
      return "a list";
  }

  YAML::Node node_;
  std::string path_;
  int line_;
};

void check_label(const std::string &label, std::size_t n, const std::string &field, int line) {
  if (label.size() != n || label.find_first_not_of("01") != std::string::npos)
    throw ConfigError(field, line,
                      "initial state '" + label + "' is not a " + std::to_string(n) +
                          "-qubit computational basis label");
}

ReadoutError parse_readout(const YAML::Node &node, const std::string &field) {
  Section s(node, field, line_of(node));
  s.allow({"p01", "p10", "p"});
  if (s.has("p")) {
    const double p = s.as<double>("p");
    return {p, p};
  }
  return {s.get<double>("p01", 0.0), s.get<double>("p10", 0.0)};
}

std::filesystem::path resolve(const std::string &ref, const std::filesystem::path &base_dir,
                              const std::string &field, int line) {
  const std::filesystem::path p(ref);
  std::vector<std::filesystem::path> tries;
  if (p.is_absolute()) {
    tries.push_back(p);
  } else {
    if (!base_dir.empty())
      tries.push_back(base_dir / p);
    tries.push_back(std::filesystem::current_path() / p);
  }
  for (const auto &t : tries)
    if (std::filesystem::is_regular_file(t))
      return t;
  throw ConfigError(field, line, "file '" + ref + "' not found");
}

bool template_label(const std::string &label) {
  return label == "10" || label == "01" || label == "100";
}

} // namespace

ExperimentConfig parse_config(const std::string &text, const std::filesystem::path &base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException &e) {
    throw ConfigError("", e.mark.line + 1, e.msg);
  }
  Section top(root, "", 1);
  if (!root.IsMap())
    throw ConfigError("", 1, "config must be a mapping");
  top.allow({"name", "system", "algorithm", "backend", "mitigation", "seeds", "seed", "runs"});

  ExperimentConfig c;
  c.name = top.require<std::string>("name");
  if (c.name.empty() || c.name.find_first_of("/\\ ") != std::string::npos)
    throw ConfigError("name", top.line("name"), "name must be non-empty without spaces or slashes");

  // algorithm first: the system checks depend on it
  const Section alg = top.child("algorithm");
  alg.allow({"kind", "delta_tau", "n_steps", "update", "pool", "ridge", "initial_state",
             "initial_states", "betas", "L_max", "krylov_source", "overlap_threshold",
             "eig_cutoff", "sources", "energies", "mass_convention"});
  auto &a = c.algorithm;
  {
    const auto kind = alg.require<std::string>("kind");
    static const std::map<std::string, AlgorithmKind> kinds{
        {"qite", AlgorithmKind::Qite},
        {"qite_single_step", AlgorithmKind::QiteSingleStep},
        {"qlanczos", AlgorithmKind::Qlanczos},
        {"exact", AlgorithmKind::Exact},
        {"luscher", AlgorithmKind::Luscher}};
    const auto it = kinds.find(kind);
    if (it == kinds.end())
      throw ConfigError(alg.field("kind"), alg.line("kind"), "unknown algorithm '" + kind + "'");
    a.kind = it->second;
  }

  const Section sys = top.child("system");
  sys.allow({"kind", "N", "coefficients", "R"});
  auto &s = c.system;
  {
    const auto kind = sys.require<std::string>("kind");
    if (kind == "deuteron")
      s.kind = SystemKind::Deuteron;
    else if (kind == "h2")
      s.kind = SystemKind::H2;
    else
      throw ConfigError(sys.field("kind"), sys.line("kind"), "unknown system '" + kind + "'");
  }
  std::size_t qubits = 2;
  if (s.kind == SystemKind::Deuteron) {
    s.n_basis = sys.get<std::size_t>("N", 2);
    if (a.kind != AlgorithmKind::Luscher && s.n_basis != 2 && s.n_basis != 3)
      throw ConfigError(sys.field("N"), sys.line("N"), "deuteron basis size must be 2 or 3");
    qubits = s.n_basis;
    if (sys.has("coefficients") || sys.has("R"))
      throw ConfigError(sys.field(sys.has("R") ? "R" : "coefficients"),
                        sys.line(sys.has("R") ? "R" : "coefficients"),
                        "only used by the h2 system");
  } else {
    if (sys.has("N"))
      throw ConfigError(sys.field("N"), sys.line("N"), "only used by the deuteron system");
    s.coefficients_ref = sys.get<std::string>("coefficients", "data/h2_sto3g.csv");
    s.coefficients = resolve(s.coefficients_ref, base_dir, sys.field("coefficients"),
                             sys.line("coefficients"));
    if (sys.has("R")) {
      const auto r = sys.raw("R");
      if (r.IsScalar() && r.as<std::string>() == "all") {
      } else if (r.IsSequence()) {
        s.bond_lengths = sys.as<std::vector<double>>("R");
      } else {
        s.bond_lengths = {sys.as<double>("R")};
      }
    }
    if (a.kind == AlgorithmKind::QiteSingleStep || a.kind == AlgorithmKind::Luscher)
      throw ConfigError(alg.field("kind"), alg.line("kind"),
                        to_string(a.kind) + " is only supported for the deuteron");
  }

  a.delta_tau = alg.get<double>("delta_tau", s.kind == SystemKind::H2 ? 0.1 : 0.05);
  if (!(a.delta_tau > 0.0))
    throw ConfigError(alg.field("delta_tau"), alg.line("delta_tau"), "must be positive");
  a.n_steps = alg.get<std::size_t>("n_steps", s.kind == SystemKind::H2 ? 200 : 40);
  try {
    a.update = update_mode_from_string(alg.get<std::string>("update", "whole"));
  } catch (const InvalidArgument &e) {
    throw ConfigError(alg.field("update"), alg.line("update"), e.what());
  }
  try {
    a.pool = generator_form_from_string(
        alg.get<std::string>("pool", s.kind == SystemKind::H2 ? "full" : "restricted"));
  } catch (const InvalidArgument &e) {
    throw ConfigError(alg.field("pool"), alg.line("pool"), e.what());
  }
  if (s.kind == SystemKind::H2 && a.pool == GeneratorForm::Restricted)
    throw ConfigError(alg.field("pool"), alg.line("pool"),
                      "the restricted pool covers the deuteron only");
  a.ridge = alg.get<double>("ridge", 1e-8);
  if (a.ridge < 0.0)
    throw ConfigError(alg.field("ridge"), alg.line("ridge"), "must be non-negative");

  if (alg.has("initial_state") && alg.has("initial_states"))
    throw ConfigError(alg.field("initial_states"), alg.line("initial_states"),
                      "give initial_state or initial_states, not both");
  if (alg.has("initial_state"))
    a.initial_states = {alg.as<std::string>("initial_state")};
  else if (alg.has("initial_states"))
    a.initial_states = alg.as<std::vector<std::string>>("initial_states");
  else if (s.kind == SystemKind::H2)
    a.initial_states = {"00", "10"};
  else
    a.initial_states = {std::string("1") + std::string(qubits - 1, '0')};
  const std::string init_field =
      alg.field(alg.has("initial_state") ? "initial_state" : "initial_states");
  const int init_line = alg.line(alg.has("initial_state") ? "initial_state" : "initial_states");
  if (a.kind != AlgorithmKind::Luscher)
    for (const auto &l : a.initial_states)
      check_label(l, qubits, init_field, init_line);

  if (alg.has("betas")) {
    a.betas = alg.as<std::vector<double>>("betas");
    for (double b : a.betas) {
      const double k = b / a.delta_tau;
      if (b < 0.0 || std::abs(k - std::round(k)) > 1e-9 ||
          std::round(k) > static_cast<double>(a.n_steps))
        throw ConfigError(alg.field("betas"), alg.line("betas"),
                          "beta " + std::to_string(b) + " is not a step of the trajectory");
    }
  }

  a.l_max = alg.get<std::size_t>("L_max", 4);
  if (a.kind == AlgorithmKind::Qlanczos && (a.l_max < 2 || a.l_max % 2 != 0))
    throw ConfigError(alg.field("L_max"), alg.line("L_max"), "must be even and at least 2");
  a.krylov_source = alg.get<std::string>("krylov_source", "exact");
  if (a.krylov_source != "exact" && a.krylov_source != "qite")
    throw ConfigError(alg.field("krylov_source"), alg.line("krylov_source"),
                      "must be 'exact' or 'qite'");
  a.overlap_threshold = alg.get<double>("overlap_threshold", 0.99);
  if (!(a.overlap_threshold > 0.0 && a.overlap_threshold < 1.0))
    throw ConfigError(alg.field("overlap_threshold"), alg.line("overlap_threshold"),
                      "must lie in (0, 1)");
  a.eig_cutoff = alg.get<double>("eig_cutoff", 1e-8);
  if (!(a.eig_cutoff > 0.0))
    throw ConfigError(alg.field("eig_cutoff"), alg.line("eig_cutoff"), "must be positive");

  if (alg.has("sources")) {
    a.luscher_sources = alg.as<std::vector<std::string>>("sources");
    for (const auto &src : a.luscher_sources)
      if (src != "exact" && src != "qite" && src != "qlanczos")
        throw ConfigError(alg.field("sources"), alg.line("sources"),
                          "unknown energy source '" + src + "'");
  }
  if (alg.has("energies")) {
    const auto node = alg.raw("energies");
    if (!node.IsMap())
      throw ConfigError(alg.field("energies"), alg.line("energies"), "expected a mapping");
    for (const auto &kv : node) {
      const auto src = kv.first.as<std::string>();
      try {
        a.luscher_energies[src] = kv.second.as<std::map<std::size_t, double>>();
      } catch (const YAML::Exception &) {
        throw ConfigError(alg.field("energies." + src), line_of(kv.second),
                          "expected a mapping from N to energy");
      }
    }
  }
  try {
    a.mass = mass_convention_from_string(alg.get<std::string>("mass_convention", "reduced"));
  } catch (const InvalidArgument &e) {
    throw ConfigError(alg.field("mass_convention"), alg.line("mass_convention"), e.what());
  }

  const Section be = top.child("backend");
  be.allow({"kind", "shots", "noise"});
  auto &b = c.backend;
  {
    const auto kind = be.get<std::string>("kind", "exact");
    if (kind == "exact")
      b.kind = BackendKind::Exact;
    else if (kind == "sampled")
      b.kind = BackendKind::Sampled;
    else if (kind == "noisy")
      b.kind = BackendKind::Noisy;
    else
      throw ConfigError(be.field("kind"), be.line("kind"), "unknown backend '" + kind + "'");
  }
  b.shots = be.get<std::uint64_t>("shots", 8192);
  if (b.kind != BackendKind::Exact && b.shots == 0)
    throw ConfigError(be.field("shots"), be.line("shots"), "must be at least 1");
  const Section noise = be.child("noise");
  noise.allow({"readout", "cnot_depolarizing", "cnot_count_base"});
  if (noise.has("readout")) {
    const auto node = noise.raw("readout");
    if (node.IsSequence()) {
      if (node.size() != qubits)
        throw ConfigError(noise.field("readout"), noise.line("readout"),
                          "need one readout entry per qubit");
      for (std::size_t i = 0; i < node.size(); ++i)
        b.noise.readout.push_back(
            parse_readout(node[i], noise.field("readout[" + std::to_string(i) + "]")));
    } else {
      b.noise.readout.push_back(parse_readout(node, noise.field("readout")));
    }
  }
  b.noise.cnot_depolarizing = noise.get<double>("cnot_depolarizing", 0.0);
  b.noise.cnot_count_base = noise.get<std::size_t>("cnot_count_base", qubits == 2 ? 1 : 4);
  if (b.kind == BackendKind::Noisy) {
    try {
      b.noise.model(qubits);
    } catch (const Error &e) {
      throw ConfigError(noise.path(), noise.line(), e.what());
    }
    if (qubits == 2 && b.noise.cnot_count_base != 1)
      throw ConfigError(noise.field("cnot_count_base"), noise.line("cnot_count_base"),
                        "the two-qubit template has one logical CNOT");
    if (s.kind != SystemKind::Deuteron)
      throw ConfigError(be.field("kind"), be.line("kind"),
                        "noisy circuits are available for deuteron templates only");
    for (const auto &l : a.initial_states)
      if (!template_label(l))
        throw ConfigError(init_field, init_line,
                          "no circuit template starts from '" + l + "'");
  } else if (noise.has("readout") || noise.has("cnot_depolarizing")) {
    throw ConfigError(noise.path(), noise.line(), "noise parameters need backend kind 'noisy'");
  }

  const Section mit = top.child("mitigation");
  mit.allow({"roem", "calibration_shots", "richardson"});
  auto &m = c.mitigation;
  m.roem = mit.get<bool>("roem", false);
  m.calibration_shots = mit.get<std::uint64_t>("calibration_shots", 8192);
  if (m.calibration_shots == 0)
    throw ConfigError(mit.field("calibration_shots"), mit.line("calibration_shots"),
                      "must be at least 1");
  const Section rich = mit.child("richardson");
  rich.allow({"enabled", "r", "order"});
  m.richardson = rich.get<bool>("enabled", false);
  if (rich.has("r"))
    m.richardson_r = rich.as<std::vector<std::size_t>>("r");
  if (rich.has("order"))
    m.richardson_order = rich.as<std::size_t>("order");
  const std::size_t order = m.richardson_order.value_or(qubits == 2 ? 1 : 2);
  if (m.richardson) {
    std::set<std::size_t> distinct(m.richardson_r.begin(), m.richardson_r.end());
    for (auto r : m.richardson_r)
      if (r % 2 == 0)
        throw ConfigError(rich.field("r"), rich.line("r"), "replication factors must be odd");
    if (distinct.size() != m.richardson_r.size())
      throw ConfigError(rich.field("r"), rich.line("r"), "replication factors must be distinct");
    if (order < 1 || m.richardson_r.size() < order + 1)
      throw ConfigError(rich.field("order"), rich.line("order"),
                        "order " + std::to_string(order) + " needs at least " +
                            std::to_string(order + 1) + " replication factors");
  }
  if ((m.roem || m.richardson) && b.kind != BackendKind::Noisy)
    throw ConfigError(mit.path(), mit.line(), "mitigation needs backend kind 'noisy'");

  if (top.has("seeds") && top.has("seed"))
    throw ConfigError("seed", top.line("seed"), "give seed or seeds.base, not both");
  if (top.has("seeds")) {
    const Section seeds = top.child("seeds");
    seeds.allow({"base"});
    c.seed = seeds.get<std::uint64_t>("base", 0);
  } else {
    c.seed = top.get<std::uint64_t>("seed", 0);
  }
  c.runs = top.get<std::size_t>("runs", 1);
  if (c.runs == 0)
    throw ConfigError("runs", top.line("runs"), "must be at least 1");

  if (a.kind == AlgorithmKind::Luscher && b.kind == BackendKind::Noisy)
    throw ConfigError(be.field("kind"), be.line("kind"),
                      "the luscher driver uses noiseless energies; pass measured values "
                      "through algorithm.energies");
  if (a.kind == AlgorithmKind::Exact && b.kind != BackendKind::Exact)
    throw ConfigError(be.field("kind"), be.line("kind"),
                      "exact diagonalization does not use a backend");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("", 0, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json sys{{"kind", qitelab::to_string(system.kind)}};
  if (system.kind == SystemKind::Deuteron) {
    sys["N"] = system.n_basis;
  } else {
    sys["coefficients"] = system.coefficients_ref;
    sys["R"] = system.bond_lengths;
  }
  const auto &a = algorithm;
  nlohmann::json alg{{"kind", qitelab::to_string(a.kind)},
                     {"delta_tau", a.delta_tau},
                     {"n_steps", a.n_steps},
                     {"update", qitelab::to_string(a.update)},
                     {"pool", qitelab::to_string(a.pool)},
                     {"ridge", a.ridge},
                     {"initial_states", a.initial_states},
                     {"betas", a.betas},
                     {"L_max", a.l_max},
                     {"krylov_source", a.krylov_source},
                     {"overlap_threshold", a.overlap_threshold},
                     {"eig_cutoff", a.eig_cutoff},
                     {"sources", a.luscher_sources},
                     {"mass_convention", qitelab::to_string(a.mass)}};
  nlohmann::json energies = nlohmann::json::object();
  for (const auto &[src, m] : a.luscher_energies)
    for (const auto &[n, e] : m)
      energies[src][std::to_string(n)] = e;
  alg["energies"] = energies;
  nlohmann::json readout = nlohmann::json::array();
  for (const auto &r : backend.noise.readout)
    readout.push_back({{"p01", r.p01}, {"p10", r.p10}});
  nlohmann::json be{{"kind", qitelab::to_string(backend.kind)},
                    {"shots", backend.shots},
                    {"noise",
                     {{"readout", readout},
                      {"cnot_depolarizing", backend.noise.cnot_depolarizing},
                      {"cnot_count_base", backend.noise.cnot_count_base}}}};
  nlohmann::json mit{{"roem", mitigation.roem},
                     {"calibration_shots", mitigation.calibration_shots},
                     {"richardson",
                      {{"enabled", mitigation.richardson},
                       {"r", mitigation.richardson_r},
                       {"order", mitigation.richardson_order
                                     ? nlohmann::json(*mitigation.richardson_order)
                                     : nlohmann::json(nullptr)}}}};
  return {{"name", name}, {"system", sys},     {"algorithm", alg}, {"backend", be},
          {"mitigation", mit}, {"seed", seed}, {"runs", runs}};
}

std::string ExperimentConfig::digest() const { return fnv1a_hex(to_json().dump()); }

CalibrationConfig parse_calibration_config(const std::string &text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException &e) {
    throw ConfigError("", e.mark.line + 1, e.msg);
  }
  if (!root.IsMap())
    throw ConfigError("", 1, "noise config must be a mapping");
  Section top(root, "", 1);
  top.allow({"qubits", "shots", "readout", "seed", "seeds"});
  CalibrationConfig c;
  c.qubits = top.get<std::size_t>("qubits", 2);
  if (c.qubits < 1 || c.qubits > kMaxQubits)
    throw ConfigError("qubits", top.line("qubits"), "qubit count out of range");
  c.shots = top.get<std::uint64_t>("shots", 8192);
  if (c.shots == 0)
    throw ConfigError("shots", top.line("shots"), "must be at least 1");
  if (top.has("readout")) {
    const auto node = top.raw("readout");
    if (node.IsSequence()) {
      if (node.size() != c.qubits)
        throw ConfigError("readout", top.line("readout"), "need one readout entry per qubit");
      for (std::size_t i = 0; i < node.size(); ++i)
        c.readout.push_back(parse_readout(node[i], "readout[" + std::to_string(i) + "]"));
    } else {
      c.readout.assign(c.qubits, parse_readout(node, "readout"));
    }
  }
  if (top.has("seeds")) {
    const Section seeds = top.child("seeds");
    seeds.allow({"base"});
    c.seed = seeds.get<std::uint64_t>("base", 0);
  } else {
    c.seed = top.get<std::uint64_t>("seed", 0);
  }
  return c;
}

CalibrationConfig load_calibration_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("", 0, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_calibration_config(ss.str());
}

} // namespace qitelab
