/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace qitelab {

enum class LuscherOrder { LO, NLO, N2LO };

std::string to_string(LuscherOrder order);
LuscherOrder luscher_order_from_string(const std::string &text);

/// Mass entering the A and B amplitudes.
enum class MassConvention { ReducedMass, AverageNucleonMass };

std::string to_string(MassConvention convention);
MassConvention mass_convention_from_string(const std::string &text);

/// Masses in MeV/c^2, hbar*c in MeV fm, L(N) in fm.
struct LuscherConstants {
  double mu = 469.45925;
  double m_p = 938.272;
  double m_n = 939.565;
  double hbar_c = 197.326;
  double hbar_omega = 7.0;
  std::map<std::size_t, double> L{{1, 9.14}, {2, 11.45}, {3, 13.38}};
  MassConvention mass = MassConvention::ReducedMass;

  double amplitude_mass() const;
  double length(std::size_t n) const;
  void validate() const;
};

struct LuscherParameters {
  double k_inf = 0.0;    // fm^-1
  double gamma_sq = 0.0; // fm^-1
  double w2 = 0.0;       // N2LO only
};

/// E_inf = -(hbar c k)^2 / (2 mu).
double binding_energy(double k_inf, const LuscherConstants &constants);

/// Model energy E_N for the given order and parameters.
double luscher_model(LuscherOrder order, std::size_t n, const LuscherParameters &p,
                     const LuscherConstants &constants);

struct LuscherFit {
  LuscherOrder order = LuscherOrder::LO;
  std::map<std::size_t, double> inputs;
  LuscherParameters parameters;
  double e_inf = 0.0;
  std::map<std::size_t, double> residuals; // model minus input, MeV
  double residual_norm = 0.0;
  bool exactly_determined = false;
  MassConvention mass = MassConvention::ReducedMass;
  std::vector<double> alternative_e_inf; // other physical roots found
};

/// Fits E_N - E_inf = A e^{-2kL} [+ B kL e^{-4kL}] [+ C e^{-4kL}] with
/// A = (hbar c)^2 k g^2/m, B = 2 (hbar c)^2 g^4/m and
/// C = (hbar c)^2 k g^2/mu (1 - g^2/k - g^4/(4k^2) + 2 w2 k g^4).
/// Square systems are solved exactly; extra inputs give a least-squares fit.
/// A root is physical when k > 0 and E_inf lies below every input energy
/// (truncated-basis energies are variational upper bounds). Throws
/// InvalidArgument on too few inputs and ConvergenceError when no start
/// yields a physical root or an exact system is not solved to tolerance.
LuscherFit fit_luscher(const std::map<std::size_t, double> &inputs, LuscherOrder order,
                       const LuscherConstants &constants = {});

/// Inputs used for the extrapolated value of basis size `row`: LO and NLO use
/// E_1 .. E_row, N2LO uses E_1 .. E_3.
std::map<std::size_t, double> luscher_row_inputs(const std::map<std::size_t, double> &energies,
                                                 std::size_t row, LuscherOrder order);

nlohmann::json to_json(const LuscherFit &fit);

} // namespace qitelab
