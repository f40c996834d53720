/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "qitelab/qite.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qitelab/error.hpp"
#include "qitelab/tolerances.hpp"

namespace qitelab {

std::string to_string(GeneratorForm form) {
  return form == GeneratorForm::Restricted ? "restricted" : "full_pool";
}

std::string to_string(UpdateMode mode) {
  return mode == UpdateMode::WholeHamiltonian ? "whole" : "per_term";
}

GeneratorForm generator_form_from_string(const std::string &text) {
  if (text == "restricted")
    return GeneratorForm::Restricted;
  if (text == "full" || text == "full_pool")
    return GeneratorForm::FullPool;
  throw InvalidArgument("unknown generator form '" + text + "'");
}

UpdateMode update_mode_from_string(const std::string &text) {
  if (text == "whole")
    return UpdateMode::WholeHamiltonian;
  if (text == "per_term")
    return UpdateMode::PerTerm;
  throw InvalidArgument("unknown update mode '" + text + "'");
}

bool OperatorPool::is_identity(std::size_t i) const {
  const auto &terms = generators.at(i).terms();
  return terms.size() == 1 && terms.front().string.is_identity();
}

OperatorPool build_pool(std::size_t qubit_count, std::size_t domain,
                        bool restricted) {
  if (qubit_count < 2 || qubit_count > 3)
    throw InvalidArgument("operator pools are defined for 2 or 3 qubits");
  if (domain + 1 != qubit_count)
    throw InvalidArgument("domain size D = " + std::to_string(domain) +
                          " must satisfy D + 1 = qubit count");
  OperatorPool pool;
  pool.qubit_count = qubit_count;
  pool.domain = domain;
  if (restricted) {
    pool.form = GeneratorForm::Restricted;
    if (qubit_count == 2) {
      pool.generators = {two_qubit_generator()};
      pool.labels = {"XY-YX"};
    } else {
      pool.generators = three_qubit_generators();
      pool.labels = {"XYI-YXI", "XZY-YZX"};
    }
    return pool;
  }
  pool.form = GeneratorForm::FullPool;
  std::vector<std::string> labels{""};
  for (std::size_t q = 0; q < qubit_count; ++q) {
    std::vector<std::string> next;
    for (const auto &s : labels)
      for (char c : {'I', 'X', 'Y', 'Z'})
        next.push_back(s + c);
    labels = std::move(next);
  }
  for (const auto &l : labels) {
    PauliSum g(qubit_count);
    g.add(1.0, PauliString::parse(l));
    pool.generators.push_back(std::move(g));
    pool.labels.push_back(l);
  }
  return pool;
}

namespace {

struct Correlators {
  std::vector<CVector> images; // s_I |Psi>
  CVector h_psi;
  double c = 1.0;
};

Correlators correlators(const QuantumState &state, const PauliSum &h,
                        double delta_tau, const OperatorPool &pool) {
  if (!(delta_tau > 0.0))
    throw InvalidArgument("imaginary-time step must be positive");
  if (h.qubit_count() != state.qubit_count() ||
      pool.qubit_count != state.qubit_count())
    throw DimensionError("state, Hamiltonian and pool act on different qubit counts");
  Correlators k;
  const CVector &psi = state.amplitudes();
  k.images.reserve(pool.size());
  for (const auto &g : pool.generators)
    k.images.push_back(g.apply(psi));
  k.h_psi = h.apply(psi);
  const CMatrix e2 = dense::hermitian_exp(h.matrix(), complex{-2.0 * delta_tau, 0.0});
  k.c = psi.dot(e2 * psi).real();
  return k;
}

CVector update_image(const QuantumState &state, const Correlators &k,
                     double delta_tau, const RVector &a) {
  CVector out = state.amplitudes();
  for (std::size_t i = 0; i < k.images.size(); ++i)
    out -= complex{0.0, delta_tau * a(static_cast<Eigen::Index>(i))} * k.images[i];
  return out;
}

PauliSum combine(const OperatorPool &pool, const RVector &a) {
  PauliSum sum(pool.qubit_count);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double ai = a(static_cast<Eigen::Index>(i));
    if (ai != 0.0 && !pool.is_identity(i))
      sum += ai * pool.generators[i];
  }
  return sum;
}

} // namespace

double qite_linearized_residual(const QuantumState &state, const PauliSum &h,
                                double delta_tau, const OperatorPool &pool,
                                const RVector &a) {
  const auto k = correlators(state, h, delta_tau, pool);
  const CVector target = (state.amplitudes() - delta_tau * k.h_psi) / std::sqrt(k.c);
  return (target - update_image(state, k, delta_tau, a)).norm();
}

double qite_exact_target_residual(const QuantumState &state, const PauliSum &h,
                                  double delta_tau, const OperatorPool &pool,
                                  const RVector &a) {
  const auto k = correlators(state, h, delta_tau, pool);
  const CMatrix e = dense::hermitian_exp(h.matrix(), complex{-delta_tau, 0.0});
  const CVector target = e * state.amplitudes() / std::sqrt(k.c);
  return (target - update_image(state, k, delta_tau, a)).norm();
}

QiteStepResult qite_step(const QuantumState &state, const PauliSum &h,
                         double delta_tau, const OperatorPool &pool,
                         double ridge) {
  if (ridge < 0.0)
    throw InvalidArgument("ridge must be non-negative");
  const auto k = correlators(state, h, delta_tau, pool);

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (!pool.is_identity(i))
      active.push_back(i);
  const auto m = static_cast<Eigen::Index>(active.size());
  RMatrix s(m, m);
  RVector b(m);
  const double inv_sqrt_c = 1.0 / std::sqrt(k.c);
  for (Eigen::Index i = 0; i < m; ++i) {
    const CVector &vi = k.images[active[static_cast<std::size_t>(i)]];
    for (Eigen::Index j = i; j < m; ++j) {
      const double sij = vi.dot(k.images[active[static_cast<std::size_t>(j)]]).real();
      s(i, j) = sij;
      s(j, i) = sij;
    }
    b(i) = inv_sqrt_c * vi.dot(k.h_psi).imag();
  }

  RVector x;
  if (ridge == 0.0) {
    const RVector ev = Eigen::SelfAdjointEigenSolver<RMatrix>(s, Eigen::EigenvaluesOnly).eigenvalues();
    if (ev(0) <= tol::singular_pivot * std::max(1.0, ev(m - 1)))
      throw ConditioningError("QITE normal matrix is singular (smallest eigenvalue " +
                              std::to_string(ev(0)) + "); use a positive ridge");
    x = s.ldlt().solve(b);
  } else {
    x = (s + ridge * RMatrix::Identity(m, m)).ldlt().solve(b);
  }
  if (!x.allFinite())
    throw ConditioningError("QITE linear solve produced non-finite coefficients");

  QiteStepSolution sol;
  sol.a = RVector::Zero(static_cast<Eigen::Index>(pool.size()));
  for (Eigen::Index i = 0; i < m; ++i)
    sol.a(static_cast<Eigen::Index>(active[static_cast<std::size_t>(i)])) = x(i);
  sol.c = k.c;

  const CVector approx = update_image(state, k, delta_tau, sol.a);
  const CVector lin_target = (state.amplitudes() - delta_tau * k.h_psi) * inv_sqrt_c;
  sol.residual = (lin_target - approx).norm();
  const CMatrix e = dense::hermitian_exp(h.matrix(), complex{-delta_tau, 0.0});
  sol.residual_exact_target = (e * state.amplitudes() * inv_sqrt_c - approx).norm();

  QuantumState next = apply_pauli_exponential(state, combine(pool, sol.a), delta_tau);
  sol.energy_after = expectation(next, h);
  return {std::move(sol), std::move(next)};
}

QiteTrajectory qite_run(const QuantumState &psi0,
                        const std::vector<PauliSum> &local_terms,
                        const OperatorPool &pool, const QiteOptions &options) {
  if (local_terms.empty())
    throw InvalidArgument("QITE needs at least one Hamiltonian term");
  if (options.n_steps < 1)
    throw InvalidArgument("QITE needs at least one step");
  PauliSum h(psi0.qubit_count());
  for (const auto &t : local_terms)
    h += t;
  const std::vector<PauliSum> pieces =
      options.update == UpdateMode::PerTerm ? local_terms : std::vector<PauliSum>{h};

  QiteTrajectory traj;
  traj.delta_tau = options.delta_tau;
  traj.generator_form = pool.form;
  traj.update_mode = options.update;
  traj.states.push_back(psi0);
  traj.energies.push_back(expectation(psi0, h));
  QuantumState psi = psi0;
  for (std::size_t s = 0; s < options.n_steps; ++s) {
    QiteStep step;
    for (const auto &piece : pieces) {
      auto r = qite_step(psi, piece, options.delta_tau, pool, options.ridge);
      step.updates.push_back(std::move(r.solution));
      psi = std::move(r.state);
    }
    step.energy = expectation(psi, h);
    traj.energies.push_back(step.energy);
    traj.states.push_back(psi);
    traj.steps.push_back(std::move(step));
  }
  return traj;
}

ImaginaryTimeTrajectory exact_imaginary_time(const QuantumState &psi0,
                                             const PauliSum &h,
                                             double delta_tau,
                                             std::size_t n_steps) {
  if (!(delta_tau > 0.0))
    throw InvalidArgument("imaginary-time step must be positive");
  ImaginaryTimeTrajectory out;
  out.delta_tau = delta_tau;
  out.states.push_back(psi0);
  out.energies.push_back(expectation(psi0, h));
  // Each state is produced from psi0 directly so errors do not accumulate.
  const CMatrix hm = h.matrix();
  for (std::size_t s = 1; s <= n_steps; ++s) {
    const CMatrix e = dense::hermitian_exp(hm, complex{-delta_tau * static_cast<double>(s), 0.0});
    auto state = QuantumState::normalized(psi0.qubit_count(), e * psi0.amplitudes());
    out.energies.push_back(expectation(state, h));
    out.states.push_back(std::move(state));
  }
  return out;
}

namespace {

std::string basis_label_of(const QuantumState &state) {
  const CVector &v = state.amplitudes();
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (std::abs(std::abs(v(imax)) - 1.0) > tol::norm)
    throw InvalidArgument("single-step compression needs a basis-state initial state");
  return basis_label(static_cast<std::size_t>(imax), state.qubit_count());
}

} // namespace

CompressedTrajectory single_step_compress(const QiteTrajectory &trajectory,
                                          const PauliSum &h,
                                          std::size_t cnot_count_base) {
  if (trajectory.generator_form != GeneratorForm::Restricted)
    throw InvalidArgument("single-step compression needs a restricted-pool trajectory");
  if (trajectory.states.empty())
    throw InvalidArgument("empty trajectory");
  const std::size_t n = trajectory.states.front().qubit_count();
  const std::string init = basis_label_of(trajectory.states.front());
  const std::size_t gens = n == 2 ? 1 : 2;

  CompressedTrajectory out;
  RVector sum_a = RVector::Zero(static_cast<Eigen::Index>(gens));
  for (std::size_t s = 1; s <= trajectory.step_count(); ++s) {
    for (const auto &u : trajectory.steps[s - 1].updates) {
      if (static_cast<std::size_t>(u.a.size()) != gens)
        throw InvalidArgument("trajectory coefficients do not match the template");
      sum_a += u.a;
    }
    // theta = 2 s dtau a'[s] with a'[s] = sum_a / s.
    const RVector theta = 2.0 * trajectory.delta_tau * sum_a;
    CircuitTemplate t = n == 2 ? CircuitTemplate::two_qubit(init, theta(0))
                               : CircuitTemplate::three_qubit(init, theta(0), theta(1),
                                                              cnot_count_base);
    const QuantumState compressed = prepare_state(t);
    out.betas.push_back(trajectory.beta(s));
    out.fidelity.push_back(compressed.fidelity(trajectory.states[s]));
    out.energies.push_back(expectation(compressed, h));
    out.templates.push_back(std::move(t));
  }
  return out;
}

nlohmann::json to_json(const QiteTrajectory &trajectory) {
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t s = 0; s < trajectory.steps.size(); ++s) {
    nlohmann::json updates = nlohmann::json::array();
    for (const auto &u : trajectory.steps[s].updates) {
      updates.push_back({{"a", std::vector<double>(u.a.data(), u.a.data() + u.a.size())},
                         {"c", u.c},
                         {"residual", u.residual},
                         {"residual_exact_target", u.residual_exact_target},
                         {"energy_after", u.energy_after}});
    }
    steps.push_back({{"s", s + 1},
                     {"beta", trajectory.beta(s + 1)},
                     {"energy", trajectory.steps[s].energy},
                     {"updates", std::move(updates)}});
  }
  return {{"delta_tau", trajectory.delta_tau},
          {"generator_form", to_string(trajectory.generator_form)},
          {"update_mode", to_string(trajectory.update_mode)},
          {"initial_energy", trajectory.energies.front()},
          {"steps", std::move(steps)}};
}

nlohmann::json to_json(const CompressedTrajectory &compressed) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < compressed.templates.size(); ++i) {
    const auto &t = compressed.templates[i];
    rows.push_back({{"beta", compressed.betas[i]},
                    {"structure_id", to_string(t.kind)},
                    {"initial_label", t.initial_label},
                    {"angles", t.angles},
                    {"fidelity", compressed.fidelity[i]},
                    {"energy", compressed.energies[i]}});
  }
  return rows;
}

} // namespace qitelab
