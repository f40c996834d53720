/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "qitelab/luscher.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "qitelab/error.hpp"
#include "qitelab/tolerances.hpp"

namespace qitelab {

std::string to_string(LuscherOrder order) {
  switch (order) {
  case LuscherOrder::LO:
    return "LO";
  case LuscherOrder::NLO:
    return "NLO";
  case LuscherOrder::N2LO:
    return "N2LO";
  }
  return "?";
}

LuscherOrder luscher_order_from_string(const std::string &text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::toupper(c); });
  if (t == "LO")
    return LuscherOrder::LO;
  if (t == "NLO")
    return LuscherOrder::NLO;
  if (t == "N2LO" || t == "NNLO")
    return LuscherOrder::N2LO;
  throw InvalidArgument("unknown extrapolation order '" + text + "'");
}

std::string to_string(MassConvention convention) {
  return convention == MassConvention::ReducedMass ? "reduced" : "average_nucleon";
}

MassConvention mass_convention_from_string(const std::string &text) {
  if (text == "reduced" || text == "mu")
    return MassConvention::ReducedMass;
  if (text == "average_nucleon" || text == "average")
    return MassConvention::AverageNucleonMass;
  throw InvalidArgument("unknown mass convention '" + text + "'");
}

double LuscherConstants::amplitude_mass() const {
  return mass == MassConvention::ReducedMass ? mu : 0.5 * (m_p + m_n);
}

double LuscherConstants::length(std::size_t n) const {
  const auto it = L.find(n);
  if (it == L.end())
    throw InvalidArgument("no hard-wall radius tabulated for N = " + std::to_string(n));
  return it->second;
}

void LuscherConstants::validate() const {
  if (!(mu > 0 && m_p > 0 && m_n > 0 && hbar_c > 0 && hbar_omega > 0))
    throw InvalidArgument("extrapolation constants must be positive");
  for (const auto &[n, l] : L)
    if (!(l > 0))
      throw InvalidArgument("hard-wall radius for N = " + std::to_string(n) + " must be positive");
  if (std::abs(mu - 0.25 * (m_p + m_n)) >= 1e-3)
    throw InvalidArgument("reduced mass inconsistent with the nucleon masses");
}

double binding_energy(double k_inf, const LuscherConstants &c) {
  const double hk = c.hbar_c * k_inf;
  return -hk * hk / (2.0 * c.mu);
}

double luscher_model(LuscherOrder order, std::size_t n, const LuscherParameters &p,
                     const LuscherConstants &c) {
  const double k = p.k_inf, g2 = p.gamma_sq, l = c.length(n);
  const double hc2 = c.hbar_c * c.hbar_c, m = c.amplitude_mass();
  const double e2 = std::exp(-2.0 * k * l), e4 = std::exp(-4.0 * k * l);
  double e = binding_energy(k, c) + hc2 * k * g2 / m * e2;
  if (order != LuscherOrder::LO)
    e += 2.0 * hc2 * g2 * g2 / m * k * l * e4;
  if (order == LuscherOrder::N2LO) {
    const double bracket =
        1.0 - g2 / k - g2 * g2 / (4.0 * k * k) + 2.0 * p.w2 * k * g2 * g2;
    e += hc2 * k * g2 / c.mu * bracket * e4;
  }
  return e;
}

namespace {

std::size_t parameter_count(LuscherOrder order) {
  return order == LuscherOrder::N2LO ? 3 : 2;
}

struct Residual {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  LuscherOrder order;
  std::vector<std::pair<std::size_t, double>> data;
  const LuscherConstants *constants;

  Residual(LuscherOrder o, std::vector<std::pair<std::size_t, double>> d,
           const LuscherConstants *c)
      : order(o), data(std::move(d)), constants(c) {}

  int inputs() const { return static_cast<int>(parameter_count(order)); }
  int values() const { return static_cast<int>(data.size()); }

  static LuscherParameters unpack(const Eigen::VectorXd &x) {
    return {x(0), x(1), x.size() > 2 ? x(2) : 0.0};
  }

  int operator()(const Eigen::VectorXd &x, Eigen::VectorXd &f) const {
    const auto p = unpack(x);
    for (std::size_t i = 0; i < data.size(); ++i)
      f(static_cast<Eigen::Index>(i)) =
          luscher_model(order, data[i].first, p, *constants) - data[i].second;
    return 0;
  }
};

} // namespace

LuscherFit fit_luscher(const std::map<std::size_t, double> &inputs, LuscherOrder order,
                       const LuscherConstants &constants) {
  constants.validate();
  const std::size_t np = parameter_count(order);
  if (inputs.size() < np)
    throw InvalidArgument(to_string(order) + " extrapolation needs at least " +
                          std::to_string(np) + " energies, got " +
                          std::to_string(inputs.size()));
  std::vector<std::pair<std::size_t, double>> data(inputs.begin(), inputs.end());
  for (const auto &d : data)
    constants.length(d.first);

  double lowest_input = data.front().second;
  for (const auto &d : data)
    lowest_input = std::min(lowest_input, d.second);

  Residual functor(order, data, &constants);
  Eigen::NumericalDiff<Residual, Eigen::Central> numdiff(functor);
  const bool square = inputs.size() == np;

  struct Candidate {
    Eigen::VectorXd x;
    double cost;
    double e_inf;
  };
  std::vector<Candidate> found;
  std::vector<double> w2_starts = order == LuscherOrder::N2LO
                                      ? std::vector<double>{-1.0, 0.0, 1.0}
                                      : std::vector<double>{0.0};
  for (int ik = 1; ik <= 10; ++ik) {
    for (int ig = 1; ig <= 20; ++ig) {
      for (double w2 : w2_starts) {
        Eigen::VectorXd x(static_cast<Eigen::Index>(np));
        x(0) = 0.1 * ik;
        x(1) = 0.1 * ig;
        if (np == 3)
          x(2) = w2;
        Eigen::LevenbergMarquardt<decltype(numdiff)> lm(numdiff);
        lm.parameters.xtol = 1e-15;
        lm.parameters.ftol = 1e-15;
        lm.parameters.maxfev = 4000;
        lm.minimize(x);
        if (!x.allFinite() || !(x(0) > 0.0))
          continue;
        Eigen::VectorXd f(static_cast<Eigen::Index>(data.size()));
        functor(x, f);
        if (!f.allFinite())
          continue;
        const double e_inf = binding_energy(x(0), constants);
        if (!(e_inf < 0.0) || e_inf > lowest_input + tol::luscher_residual)
          continue;
        found.push_back({x, f.norm(), e_inf});
      }
    }
  }
  if (found.empty())
    throw ConvergenceError(to_string(order) +
                           " extrapolation: no start converged to a physical root");
  std::sort(found.begin(), found.end(),
            [](const Candidate &a, const Candidate &b) { return a.cost < b.cost; });
  const Candidate &best = found.front();
  if (square && best.cost > tol::luscher_residual)
    throw ConvergenceError(to_string(order) + " extrapolation: best residual " +
                           std::to_string(best.cost) + " MeV exceeds tolerance");

  LuscherFit fit;
  fit.order = order;
  fit.inputs = inputs;
  fit.parameters = Residual::unpack(best.x);
  fit.e_inf = best.e_inf;
  fit.exactly_determined = square;
  fit.mass = constants.mass;
  Eigen::VectorXd f(static_cast<Eigen::Index>(data.size()));
  functor(best.x, f);
  for (std::size_t i = 0; i < data.size(); ++i)
    fit.residuals[data[i].first] = f(static_cast<Eigen::Index>(i));
  fit.residual_norm = f.norm();

  // Distinct roots that fit as well as the best one.
  const double accept = square ? tol::luscher_residual
                               : best.cost * (1.0 + 1e-6) + tol::luscher_residual;
  for (const auto &c : found) {
    if (c.cost > accept)
      break;
    bool seen = std::abs(c.e_inf - fit.e_inf) < 1e-6;
    for (double e : fit.alternative_e_inf)
      seen = seen || std::abs(c.e_inf - e) < 1e-6;
    if (!seen)
      fit.alternative_e_inf.push_back(c.e_inf);
  }
  return fit;
}

std::map<std::size_t, double> luscher_row_inputs(const std::map<std::size_t, double> &energies,
                                                 std::size_t row, LuscherOrder order) {
  const std::size_t last = order == LuscherOrder::N2LO ? 3 : row;
  if (order == LuscherOrder::N2LO && row < 3)
    throw InvalidArgument("N2LO extrapolation needs the N = 3 row");
  std::map<std::size_t, double> out;
  for (std::size_t n = 1; n <= last; ++n) {
    const auto it = energies.find(n);
    if (it == energies.end())
      throw InvalidArgument("missing E_" + std::to_string(n) + " for the N = " +
                            std::to_string(row) + " extrapolation");
    out[n] = it->second;
  }
  return out;
}

nlohmann::json to_json(const LuscherFit &fit) {
  nlohmann::json inputs = nlohmann::json::object(), residuals = nlohmann::json::object();
  for (const auto &[n, e] : fit.inputs)
    inputs[std::to_string(n)] = e;
  for (const auto &[n, r] : fit.residuals)
    residuals[std::to_string(n)] = r;
  return {{"order", to_string(fit.order)},
          {"inputs", std::move(inputs)},
          {"k_inf", fit.parameters.k_inf},
          {"gamma_sq", fit.parameters.gamma_sq},
          {"w2", fit.parameters.w2},
          {"e_inf", fit.e_inf},
          {"residuals", std::move(residuals)},
          {"residual_norm", fit.residual_norm},
          {"exactly_determined", fit.exactly_determined},
          {"mass_convention", to_string(fit.mass)},
          {"alternative_e_inf", fit.alternative_e_inf}};
}

} // namespace qitelab
