/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "qitelab/backends.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "qitelab/error.hpp"
#include "qitelab/random.hpp"
#include "qitelab/tolerances.hpp"

namespace qitelab {

std::string to_string(TemplateKind kind) {
  switch (kind) {
  case TemplateKind::TwoQubitSingleStep:
    return "two_qubit_single_step";
  case TemplateKind::ThreeQubitSingleStep:
    return "three_qubit_single_step";
  }
  return "unknown";
}

CircuitTemplate CircuitTemplate::two_qubit(std::string initial, double theta) {
  CircuitTemplate t;
  t.kind = TemplateKind::TwoQubitSingleStep;
  t.initial_label = std::move(initial);
  t.angles = {theta};
  t.cnot_count_base = 1;
  t.validate();
  return t;
}

CircuitTemplate CircuitTemplate::three_qubit(std::string initial, double theta1,
                                             double theta2,
                                             std::size_t cnot_count_base) {
  CircuitTemplate t;
  t.kind = TemplateKind::ThreeQubitSingleStep;
  t.initial_label = std::move(initial);
  t.angles = {theta1, theta2};
  t.cnot_count_base = cnot_count_base;
  t.validate();
  return t;
}

void CircuitTemplate::validate() const {
  const std::size_t n = qubit_count();
  if (initial_label.size() != n)
    throw InvalidArgument("template initial label '" + initial_label +
                          "' must have " + std::to_string(n) + " characters");
  basis_index(initial_label);
  const std::size_t want = kind == TemplateKind::TwoQubitSingleStep ? 1 : 2;
  if (angles.size() != want)
    throw InvalidArgument(to_string(kind) + " takes " + std::to_string(want) +
                          " angle(s)");
  for (double a : angles)
    if (!std::isfinite(a))
      throw InvalidArgument("template angle is not finite");
  if (kind == TemplateKind::TwoQubitSingleStep && cnot_count_base != 1)
    throw InvalidArgument("two-qubit template has exactly one CNOT");
  if (cnot_count_base == 0)
    throw InvalidArgument("template needs at least one CNOT");
}

PauliSum two_qubit_generator() {
  return PauliSum::from_labels(2, {{1.0, "XY"}, {-1.0, "YX"}});
}

std::vector<PauliSum> three_qubit_generators() {
  return {PauliSum::from_labels(3, {{1.0, "XYI"}, {-1.0, "YXI"}}),
          PauliSum::from_labels(3, {{1.0, "XZY"}, {-1.0, "YZX"}})};
}

NoiseModel NoiseModel::uniform(std::size_t qubit_count, double p01, double p10,
                               double cnot_depolarizing,
                               std::size_t replication_factor) {
  NoiseModel m;
  m.readout.assign(qubit_count, ReadoutError{p01, p10});
  m.cnot_depolarizing = cnot_depolarizing;
  m.replication_factor = replication_factor;
  m.validate(qubit_count);
  return m;
}

bool NoiseModel::has_readout_noise() const {
  return std::any_of(readout.begin(), readout.end(), [](const ReadoutError &e) {
    return e.p01 != 0.0 || e.p10 != 0.0;
  });
}

NoiseModel NoiseModel::with_replication(std::size_t r) const {
  NoiseModel m = *this;
  m.replication_factor = r;
  return m;
}

void NoiseModel::validate(std::size_t qubit_count) const {
  if (!readout.empty() && readout.size() != qubit_count)
    throw InvalidArgument("readout error list has " +
                          std::to_string(readout.size()) + " entries for " +
                          std::to_string(qubit_count) + " qubits");
  for (const auto &e : readout) {
    if (!(e.p01 >= 0.0 && e.p01 <= 1.0 && e.p10 >= 0.0 && e.p10 <= 1.0))
      throw InvalidArgument("readout error probabilities must lie in [0, 1]");
  }
  if (!(cnot_depolarizing >= 0.0 && cnot_depolarizing <= 1.0))
    throw InvalidArgument("CNOT depolarizing strength must lie in [0, 1]");
  if (replication_factor == 0 || replication_factor % 2 == 0)
    throw InvalidArgument("replication factor must be a positive odd integer");
}

namespace {

using Mat2 = Eigen::Matrix2cd;

CMatrix embed_single(const Mat2 &u, std::size_t qubit, std::size_t n) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (std::size_t q = 0; q < n; ++q) {
    const CMatrix factor = q == qubit ? CMatrix(u) : CMatrix(Mat2::Identity());
    CMatrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        next.block(2 * i, 2 * j, 2, 2) = out(i, j) * factor;
    out = std::move(next);
  }
  return out;
}

CMatrix ry(double angle, std::size_t qubit, std::size_t n) {
  Mat2 m;
  const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
  m << c, -s, s, c;
  return embed_single(m, qubit, n);
}

CMatrix cnot(std::size_t control, std::size_t target, std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  const std::size_t cbit = std::size_t{1} << bit_of_qubit(control, n);
  const std::size_t tbit = std::size_t{1} << bit_of_qubit(target, n);
  CMatrix m = CMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < static_cast<std::size_t>(dim); ++k) {
    const std::size_t image = (k & cbit) ? (k ^ tbit) : k;
    m(static_cast<Eigen::Index>(image), static_cast<Eigen::Index>(k)) = 1.0;
  }
  return m;
}

CMatrix template_unitary(const CircuitTemplate &c) {
  if (c.kind == TemplateKind::TwoQubitSingleStep)
    return dense::hermitian_exp(two_qubit_generator().matrix(),
                                complex{0.0, -c.angles[0] / 2.0});
  const auto g = three_qubit_generators();
  const CMatrix u1 =
      dense::hermitian_exp(g[0].matrix(), complex{0.0, -c.angles[0] / 2.0});
  const CMatrix u2 =
      dense::hermitian_exp(g[1].matrix(), complex{0.0, -c.angles[1] / 2.0});
  return u1 * u2;
}

CMatrix pure_density(const CVector &v) { return v * v.adjoint(); }

CMatrix depolarize_raw(const CMatrix &rho, std::size_t a, std::size_t b,
                       std::size_t n, double eps) {
  if (eps == 0.0)
    return rho;
  CMatrix twirl = CMatrix::Zero(rho.rows(), rho.cols());
  for (Pauli pa : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}) {
    for (Pauli pb : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}) {
      std::vector<Pauli> letters(n, Pauli::I);
      letters[a] = pa;
      letters[b] = pb;
      const CMatrix p = PauliString(std::move(letters)).matrix();
      twirl += p * rho * p;
    }
  }
  return (1.0 - eps) * rho + (eps / 16.0) * twirl;
}

/// Logical CNOT pair order for the three-qubit template.
constexpr std::array<std::pair<std::size_t, std::size_t>, 4> kThreeQubitPairs = {
    {{0, 1}, {1, 2}, {1, 2}, {0, 1}}};

CMatrix hermitize(const CMatrix &m) { return 0.5 * (m + m.adjoint()); }

} // namespace

QuantumState prepare_state(const CircuitTemplate &circuit) {
  circuit.validate();
  const std::size_t n = circuit.qubit_count();
  const QuantumState init = basis_state(n, circuit.initial_label);
  return QuantumState::normalized(n, template_unitary(circuit) * init.amplitudes());
}

DensityMatrix depolarize_pair(const DensityMatrix &rho, std::size_t qubit_a,
                              std::size_t qubit_b, double eps) {
  const std::size_t n = rho.qubit_count();
  if (qubit_a >= n || qubit_b >= n || qubit_a == qubit_b)
    throw InvalidArgument("depolarizing pair must be two distinct qubits");
  if (!(eps >= 0.0 && eps <= 1.0))
    throw InvalidArgument("depolarizing strength must lie in [0, 1]");
  return DensityMatrix(n, hermitize(depolarize_raw(rho.matrix(), qubit_a,
                                                   qubit_b, n, eps)));
}

DensityMatrix noisy_density_simulation(const CircuitTemplate &circuit,
                                       const NoiseModel &noise) {
  circuit.validate();
  const std::size_t n = circuit.qubit_count();
  noise.validate(n);
  const double eps = noise.cnot_depolarizing;
  const std::size_t r = noise.replication_factor;
  const CVector init = basis_state(n, circuit.initial_label).amplitudes();

  CMatrix rho;
  if (circuit.kind == TemplateKind::TwoQubitSingleStep &&
      (circuit.initial_label == "10" || circuit.initial_label == "01")) {
    // Gate-level decomposition: one rotation then the (replicated) CNOT.
    const double theta = circuit.angles[0];
    const bool from10 = circuit.initial_label == "10";
    const CMatrix rot = from10 ? ry(2.0 * theta, 1, n) : ry(-2.0 * theta, 0, n);
    const CMatrix cx = from10 ? cnot(1, 0, n) : cnot(0, 1, n);
    rho = pure_density(rot * init);
    for (std::size_t k = 0; k < r; ++k) {
      rho = cx * rho * cx.adjoint();
      rho = depolarize_raw(rho, 0, 1, n, eps);
    }
  } else if (circuit.kind == TemplateKind::TwoQubitSingleStep) {
    rho = pure_density(template_unitary(circuit) * init);
    for (std::size_t k = 0; k < r * circuit.cnot_count_base; ++k)
      rho = depolarize_raw(rho, 0, 1, n, eps);
  } else {
    // Exact rotations with the CNOT noise attached after the block that
    // contains each CNOT: the first half after U2, the rest after U1.
    const auto g = three_qubit_generators();
    const CMatrix u1 = dense::hermitian_exp(
        g[0].matrix(), complex{0.0, -circuit.angles[0] / 2.0});
    const CMatrix u2 = dense::hermitian_exp(
        g[1].matrix(), complex{0.0, -circuit.angles[1] / 2.0});
    const std::size_t logical = circuit.cnot_count_base;
    const std::size_t first = (logical + 1) / 2;
    auto insert = [&](std::size_t from, std::size_t to) {
      for (std::size_t l = from; l < to; ++l) {
        const auto [a, b] = kThreeQubitPairs[l % kThreeQubitPairs.size()];
        for (std::size_t k = 0; k < r; ++k)
          rho = depolarize_raw(rho, a, b, n, eps);
      }
    };
    rho = pure_density(u2 * init);
    insert(0, first);
    rho = u1 * rho * u1.adjoint();
    insert(first, logical);
  }
  return DensityMatrix(n, hermitize(rho));
}

std::vector<double> rotated_probabilities(const DensityMatrix &rho,
                                          const PauliString &observable) {
  const std::size_t n = rho.qubit_count();
  if (observable.qubit_count() != n)
    throw DimensionError("observable and state act on different qubit counts");
  const double h = 1.0 / std::sqrt(2.0);
  Mat2 had;
  had << h, h, h, -h;
  Mat2 sdg;
  sdg << 1.0, 0.0, 0.0, complex{0.0, -1.0};
  CMatrix u = CMatrix::Identity(rho.matrix().rows(), rho.matrix().cols());
  for (std::size_t q = 0; q < n; ++q) {
    if (observable[q] == Pauli::X)
      u = embed_single(had, q, n) * u;
    else if (observable[q] == Pauli::Y)
      u = embed_single(Mat2(had * sdg), q, n) * u;
  }
  const CMatrix rotated = u * rho.matrix() * u.adjoint();
  std::vector<double> p(static_cast<std::size_t>(rotated.rows()));
  for (Eigen::Index k = 0; k < rotated.rows(); ++k)
    p[static_cast<std::size_t>(k)] = std::max(0.0, rotated(k, k).real());
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double &x : p)
    x /= total;
  return p;
}

std::vector<double> apply_readout(const std::vector<double> &probabilities,
                                  const std::vector<ReadoutError> &readout) {
  if (readout.empty())
    return probabilities;
  const std::size_t n = readout.size();
  if (probabilities.size() != (std::size_t{1} << n))
    throw DimensionError("readout model does not match outcome count");
  std::vector<double> p = probabilities;
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << bit_of_qubit(q, n);
    const auto &e = readout[q];
    std::vector<double> next(p.size(), 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p[k] == 0.0)
        continue;
      const bool one = (k & bit) != 0;
      const double flip = one ? e.p01 : e.p10;
      next[k] += p[k] * (1.0 - flip);
      next[k ^ bit] += p[k] * flip;
    }
    p = std::move(next);
  }
  return p;
}

std::vector<std::uint64_t> draw_counts(const std::vector<double> &probabilities,
                                       std::uint64_t shots, std::uint64_t seed) {
  std::vector<double> cdf(probabilities.size());
  std::partial_sum(probabilities.begin(), probabilities.end(), cdf.begin());
  const double total = cdf.empty() ? 0.0 : cdf.back();
  if (!(total > 0.0))
    throw InvalidArgument("outcome distribution has no weight");
  // Last non-empty outcome absorbs rounding at the top of the CDF.
  std::size_t last = probabilities.size() - 1;
  while (last > 0 && probabilities[last] == 0.0)
    --last;
  Rng rng(seed);
  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cdf.begin());
    if (k > last)
      k = last;
    ++counts[k];
  }
  return counts;
}

namespace {

double parity_sign(std::size_t index, const PauliString &observable) {
  const std::size_t n = observable.qubit_count();
  int parity = 0;
  for (std::size_t q = 0; q < n; ++q)
    if (observable[q] != Pauli::I && ((index >> bit_of_qubit(q, n)) & 1u))
      parity ^= 1;
  return parity ? -1.0 : 1.0;
}

double exact_with_readout(const DensityMatrix &rho, const PauliString &obs,
                          const std::vector<ReadoutError> &readout) {
  if (readout.empty())
    return expectation(rho, obs);
  const auto p = apply_readout(rotated_probabilities(rho, obs), readout);
  double v = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k)
    v += p[k] * parity_sign(k, obs);
  return v;
}

} // namespace

ExpectationEstimate sample_pauli_expectation(const DensityMatrix &rho,
                                             const PauliString &observable,
                                             std::uint64_t shots,
                                             const std::vector<ReadoutError> &readout,
                                             std::uint64_t seed) {
  const std::size_t n = rho.qubit_count();
  if (shots == 0)
    throw InvalidArgument("shot count must be positive");
  if (!readout.empty() && readout.size() != n)
    throw DimensionError("readout model does not match qubit count");
  ExpectationEstimate est;
  est.observable = observable;
  est.shots = shots;
  if (observable.is_identity()) {
    est.value = 1.0;
    return est;
  }
  const auto probs = apply_readout(rotated_probabilities(rho, observable), readout);
  const auto counts = draw_counts(probs, shots, seed);
  double sum = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0)
      continue;
    est.raw_counts[basis_label(k, n)] = counts[k];
    sum += parity_sign(k, observable) * static_cast<double>(counts[k]);
  }
  est.value = sum / static_cast<double>(shots);
  est.std_error = std::sqrt(std::max(0.0, 1.0 - est.value * est.value) /
                            static_cast<double>(shots));
  return est;
}

ExpectationEstimate
sample_pauli_expectation(const CircuitTemplate &circuit,
                         const PauliString &observable, std::uint64_t shots,
                         const std::optional<NoiseModel> &noise,
                         std::uint64_t seed) {
  if (!noise)
    return sample_pauli_expectation(DensityMatrix::from_pure(prepare_state(circuit)),
                                    observable, shots, {}, seed);
  return sample_pauli_expectation(noisy_density_simulation(circuit, *noise),
                                  observable, shots, noise->readout, seed);
}

EnergyEstimate measure_energy(const StateSource &source, const PauliSum &h,
                              std::uint64_t shots, std::uint64_t seed,
                              const std::vector<ReadoutError> &readout) {
  std::vector<ReadoutError> errors = readout;
  const DensityMatrix rho = std::visit(
      [&](const auto &s) -> DensityMatrix {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, QuantumState>)
          return DensityMatrix::from_pure(s);
        else if constexpr (std::is_same_v<T, DensityMatrix>)
          return s;
        else {
          errors = s.noise.readout;
          return noisy_density_simulation(s.circuit, s.noise);
        }
      },
      source);
  if (h.qubit_count() != rho.qubit_count())
    throw DimensionError("Hamiltonian and state act on different qubit counts");

  EnergyEstimate out;
  double var = 0.0;
  std::uint64_t index = 0;
  for (const auto &t : h.terms()) {
    if (t.string.is_identity()) {
      out.energy += t.coefficient;
      continue;
    }
    TermEstimate te;
    te.coefficient = t.coefficient;
    if (shots == 0) {
      te.estimate.observable = t.string;
      te.estimate.value = exact_with_readout(rho, t.string, errors);
    } else {
      te.estimate = sample_pauli_expectation(rho, t.string, shots, errors,
                                             derive_seed(seed, {index}));
    }
    out.energy += t.coefficient * te.estimate.value;
    var += t.coefficient * t.coefficient * te.estimate.std_error *
           te.estimate.std_error;
    out.per_term.push_back(std::move(te));
    ++index;
  }
  out.std_error = std::sqrt(var);
  return out;
}

namespace {

/// Amplitudes with the global phase of the largest entry removed.
CVector dephase(const CVector &v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const complex ph = v(imax) / std::abs(v(imax));
  return v / ph;
}

} // namespace

CircuitTemplate fit_template(const QuantumState &state,
                             const std::string &initial_label,
                             std::size_t cnot_count_base) {
  const CVector v = dephase(state.amplitudes());
  auto re = [&](const char *label) {
    return v(static_cast<Eigen::Index>(basis_index(label))).real();
  };
  CircuitTemplate t;
  if (state.qubit_count() == 2 && initial_label == "10") {
    t = CircuitTemplate::two_qubit("10", std::atan2(re("01"), re("10")));
  } else if (state.qubit_count() == 2 && initial_label == "01") {
    t = CircuitTemplate::two_qubit("01", std::atan2(-re("10"), re("01")));
  } else if (state.qubit_count() == 3 && initial_label == "100") {
    // cos t1 cos t2 |100> + sin t1 cos t2 |010> + sin t2 |001>
    const double s2 = std::clamp(re("001"), -1.0, 1.0);
    const double p2 = std::asin(s2);
    const double p1 = std::atan2(re("010"), re("100"));
    t = CircuitTemplate::three_qubit("100", p1, p2, cnot_count_base);
  } else {
    throw InvalidArgument("no template for " + std::to_string(state.qubit_count()) +
                          " qubits from |" + initial_label + ">");
  }
  const double infidelity = 1.0 - prepare_state(t).fidelity(state);
  if (infidelity > tol::template_fit_infidelity)
    throw InvalidArgument("state is outside the template manifold (infidelity " +
                          std::to_string(infidelity) + ")");
  return t;
}

} // namespace qitelab
