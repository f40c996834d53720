/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include <cstdio>
#include <sstream>

#include "qitelab/error.hpp"
#include "qitelab/experiment.hpp"

namespace qitelab {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string num(const json &v) { return v.is_number() ? num(v.get<double>()) : ""; }

class Csv {
public:
  explicit Csv(std::initializer_list<const char *> header) {
    bool first = true;
    for (const char *h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << "\n";
  }

  template <typename... T> void row(const T &...cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cells, first = false), ...);
    out_ << "\n";
    ++rows_;
  }

  std::size_t rows() const { return rows_; }
  std::string str() const { return out_.str(); }

private:
  std::ostringstream out_;
  std::size_t rows_ = 0;
};

std::string system_param(const json &system) {
  return system["kind"] == "deuteron" ? std::to_string(system["N"].get<std::size_t>())
                                      : num(system["R"]);
}

/// Most-mitigated provenance present in an energies block.
std::string best_provenance(const json &energies) {
  for (const char *p : {"roem+richardson", "richardson", "roem"})
    if (energies.contains(p))
      return p;
  return "raw";
}

void emit_qite(const json &record, const std::string &name, const std::filesystem::path &dir,
               std::vector<std::filesystem::path> &written) {
  const auto &inst = record["results"]["instances"];
  if (record["system"] == "h2") {
    Csv h2({"R", "algorithm", "initial_state", "level", "E", "E_std_error", "E_exact",
            "abs_error", "chemical_accuracy"});
    for (const auto &i : inst) {
      const auto &last = i["trajectory"].back()["energies"]["raw"];
      const double e = last["mean"].get<double>(), ex = i["sector_energy"].get<double>();
      h2.row(num(i["system"]["R"]), record["algorithm"].get<std::string>(),
             i["initial_state"].get<std::string>(), 0, num(e), num(last["std_error"]), num(ex),
             num(std::abs(e - ex)), num(kChemicalAccuracy));
    }
    const auto path = dir / (name + "_h2.csv");
    write_text_atomic(path, h2.str());
    written.push_back(path);
    return;
  }
  Csv energy({"N", "initial_state", "beta", "E_exact_imaginary_time", "E_noiseless", "E_raw",
              "E_raw_std_error", "E_mitigated", "E_mitigated_std_error", "mitigation",
              "fidelity"});
  Csv rich({"N", "initial_state", "beta", "operator", "coefficient", "r", "mean", "std_error",
            "order", "intercept", "intercept_std_error"});
  for (const auto &i : inst) {
    const auto n = system_param(i["system"]);
    const auto init = i["initial_state"].get<std::string>();
    for (const auto &p : i["trajectory"]) {
      const auto &e = p["energies"];
      const auto best = best_provenance(e);
      energy.row(n, init, num(p["beta"]), num(p["energy_exact_imaginary_time"]),
                 num(p["energy_noiseless"]), num(e["raw"]["mean"]), num(e["raw"]["std_error"]),
                 num(e[best]["mean"]), num(e[best]["std_error"]), best,
                 p.contains("fidelity") ? num(p["fidelity"]) : "");
      if (!p.contains("richardson"))
        continue;
      for (const auto &t : p["richardson"]) {
        const auto &fit = t["fit"];
        for (const auto &pt : t["points"])
          rich.row(n, init, num(p["beta"]), t["operator"].get<std::string>(),
                   num(t["coefficient"]), pt["r"].get<std::size_t>(), num(pt["mean"]),
                   num(pt["std_error"]), fit["order"].get<std::size_t>(), num(fit["intercept"]),
                   num(fit["intercept_std_error"]));
      }
    }
  }
  auto path = dir / (name + "_energy.csv");
  write_text_atomic(path, energy.str());
  written.push_back(path);
  if (rich.rows() > 0) {
    path = dir / (name + "_richardson.csv");
    write_text_atomic(path, rich.str());
    written.push_back(path);
  }
}

void emit_qlanczos(const json &record, const std::string &name,
                   const std::filesystem::path &dir,
                   std::vector<std::filesystem::path> &written) {
  const auto &inst = record["results"]["instances"];
  if (record["system"] == "h2") {
    Csv h2({"R", "algorithm", "initial_state", "level", "E", "E_eigenvalue", "E_exact",
            "abs_error", "chemical_accuracy"});
    for (const auto &i : inst) {
      const auto &res = i["noiseless"];
      const auto &sec = i["sector_spectrum"];
      const auto &ee = res["energies_from_expectation"];
      for (std::size_t k = 0; k < ee.size() && k < sec.size(); ++k) {
        const double e = ee[k].get<double>(), ex = sec[k].get<double>();
        h2.row(num(i["system"]["R"]), "qlanczos", i["initial_state"].get<std::string>(), k,
               num(e), num(res["energies_from_eigenvalues"][k]), num(ex), num(std::abs(e - ex)),
               num(kChemicalAccuracy));
      }
    }
    const auto path = dir / (name + "_h2.csv");
    write_text_atomic(path, h2.str());
    written.push_back(path);
    return;
  }
  Csv csv({"N", "initial_state", "mitigation", "E_eigenvalue", "E_eigenvalue_std_error",
           "E_expectation", "E_expectation_std_error", "E_exact"});
  for (const auto &i : inst) {
    const auto n = system_param(i["system"]);
    const auto init = i["initial_state"].get<std::string>();
    const auto exact = num(i["sector_spectrum"][0]);
    const auto &res = i["noiseless"];
    csv.row(n, init, "noiseless", num(res["energies_from_eigenvalues"][0]), 0,
            num(res["energies_from_expectation"][0]), 0, exact);
    if (!i.contains("measured"))
      continue;
    for (const auto &[prov, m] : i["measured"].items())
      csv.row(n, init, prov, num(m["from_eigenvalues"]["mean"]),
              num(m["from_eigenvalues"]["std_error"]), num(m["from_expectation"]["mean"]),
              num(m["from_expectation"]["std_error"]), exact);
  }
  const auto path = dir / (name + "_qlanczos.csv");
  write_text_atomic(path, csv.str());
  written.push_back(path);
}

void emit_luscher(const json &record, const std::string &name,
                  const std::filesystem::path &dir,
                  std::vector<std::filesystem::path> &written) {
  Csv csv({"source", "N", "E_N", "LO", "NLO", "N2LO"});
  for (const auto &s : record["results"]["sources"]) {
    for (const auto &r : s["rows"]) {
      auto cell = [&](const char *order) {
        return r.contains(order) && r[order].contains("e_inf") ? num(r[order]["e_inf"])
                                                                : std::string();
      };
      csv.row(s["source"].get<std::string>(), r["N"].get<std::size_t>(), num(r["E_N"]),
              cell("LO"), cell("NLO"), cell("N2LO"));
    }
  }
  const auto path = dir / (name + "_luscher.csv");
  write_text_atomic(path, csv.str());
  written.push_back(path);
}

void emit_exact(const json &record, const std::string &name, const std::filesystem::path &dir,
                std::vector<std::filesystem::path> &written) {
  Csv csv({"system", "parameter", "level", "E"});
  for (const auto &i : record["results"]["instances"]) {
    const auto &spec = i["spectrum"];
    for (std::size_t k = 0; k < spec.size(); ++k)
      csv.row(i["system"]["kind"].get<std::string>(), system_param(i["system"]), k,
              num(spec[k]));
  }
  const auto path = dir / (name + "_spectrum.csv");
  write_text_atomic(path, csv.str());
  written.push_back(path);
}

} // namespace

std::vector<std::filesystem::path> emit_plot_data(const std::vector<json> &records,
                                                  const std::filesystem::path &out_dir) {
  std::vector<std::filesystem::path> written;
  for (const auto &record : records) {
    if (!record.contains("algorithm") || !record.contains("results") || !record.contains("name"))
      throw Error("not a result record (missing name, algorithm or results)");
    const auto name = record["name"].get<std::string>();
    const auto alg = record["algorithm"].get<std::string>();
    if (alg == "qite" || alg == "qite_single_step")
      emit_qite(record, name, out_dir, written);
    else if (alg == "qlanczos")
      emit_qlanczos(record, name, out_dir, written);
    else if (alg == "luscher")
      emit_luscher(record, name, out_dir, written);
    else if (alg == "exact")
      emit_exact(record, name, out_dir, written);
    else
      throw Error("unknown algorithm '" + alg + "' in record " + name);
  }
  return written;
}

} // namespace qitelab
