/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qitelab/error.hpp"
#include "qitelab/hamiltonians.hpp"
#include "qitelab/luscher.hpp"

using namespace qitelab;

namespace {

double exact_energy(std::size_t n) {
  DeuteronParams p;
  p.n_basis = n;
  return Eigen::SelfAdjointEigenSolver<RMatrix>(ho_one_body_matrix(p).entries)
      .eigenvalues()(0);
}

std::map<std::size_t, double> exact_energies() {
  return {{1, exact_energy(1)}, {2, exact_energy(2)}, {3, exact_energy(3)}};
}

} // namespace

TEST(LuscherConstants, Defaults) {
  LuscherConstants c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_LT(std::abs(c.mu - 0.25 * (c.m_p + c.m_n)), 1e-3);
  EXPECT_DOUBLE_EQ(c.length(2), 11.45);
  EXPECT_THROW(c.length(4), InvalidArgument);
  c.mu = 400.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(LuscherFitTest, ExactInputsMatchOneBodyMatrix) {
  const auto e = exact_energies();
  EXPECT_NEAR(e.at(1), -0.436, 1e-3);
  EXPECT_NEAR(e.at(2), -1.749, 1e-3);
}

TEST(LuscherFitTest, LeadingOrderTwoPoint) {
  const auto fit =
      fit_luscher(luscher_row_inputs(exact_energies(), 2, LuscherOrder::LO), LuscherOrder::LO);
  EXPECT_NEAR(fit.e_inf, -2.394, 0.01);
  EXPECT_TRUE(fit.exactly_determined);
  EXPECT_LT(fit.residual_norm, 1e-6);
}

TEST(LuscherFitTest, NextToLeadingOrderRowThree) {
  const auto fit = fit_luscher(luscher_row_inputs(exact_energies(), 3, LuscherOrder::NLO),
                               LuscherOrder::NLO);
  EXPECT_NEAR(fit.e_inf, -2.199, 0.01);
  EXPECT_FALSE(fit.exactly_determined);
}

TEST(LuscherFitTest, N2loThreePoint) {
  const auto fit = fit_luscher(luscher_row_inputs(exact_energies(), 3, LuscherOrder::N2LO),
                               LuscherOrder::N2LO);
  EXPECT_NEAR(fit.e_inf, -2.209, 0.01);
  EXPECT_TRUE(fit.exactly_determined);
  for (const auto &[n, r] : fit.residuals)
    EXPECT_LT(std::abs(r), 1e-6) << n;
}

TEST(LuscherFitTest, BindingEnergyConsistentWithMomentum) {
  const auto e = exact_energies();
  for (auto order : {LuscherOrder::LO, LuscherOrder::NLO, LuscherOrder::N2LO}) {
    const auto fit = fit_luscher(luscher_row_inputs(e, 3, order), order);
    EXPECT_GT(fit.parameters.k_inf, 0.0);
    EXPECT_LT(fit.e_inf, 0.0);
    EXPECT_NEAR(fit.e_inf, binding_energy(fit.parameters.k_inf, LuscherConstants{}), 1e-9);
  }
}

TEST(LuscherFitTest, ExactSystemsSolvedToTolerance) {
  const auto e = exact_energies();
  for (auto order : {LuscherOrder::LO, LuscherOrder::NLO}) {
    const auto fit = fit_luscher({{1, e.at(1)}, {2, e.at(2)}}, order);
    for (const auto &[n, r] : fit.residuals)
      EXPECT_LT(std::abs(r), 1e-6) << to_string(order) << " N=" << n;
  }
}

TEST(LuscherFitTest, OrderConsistency) {
  const auto e = exact_energies();
  const double lo = fit_luscher(luscher_row_inputs(e, 3, LuscherOrder::LO), LuscherOrder::LO).e_inf;
  const double nlo =
      fit_luscher(luscher_row_inputs(e, 3, LuscherOrder::NLO), LuscherOrder::NLO).e_inf;
  const double n2lo =
      fit_luscher(luscher_row_inputs(e, 3, LuscherOrder::N2LO), LuscherOrder::N2LO).e_inf;
  EXPECT_LT(std::abs(nlo - n2lo), std::abs(lo - n2lo));
}

TEST(LuscherFitTest, SyntheticRoundTrip) {
  LuscherConstants c;
  const LuscherParameters truth{0.23, 0.8, 0.0};
  std::map<std::size_t, double> in;
  for (std::size_t n : {1u, 2u})
    in[n] = luscher_model(LuscherOrder::NLO, n, truth, c);
  const auto fit = fit_luscher(in, LuscherOrder::NLO, c);
  EXPECT_NEAR(fit.e_inf, binding_energy(0.23, c), 1e-6);
}

TEST(LuscherFitTest, InputErrors) {
  EXPECT_THROW(fit_luscher({{2, -1.7}}, LuscherOrder::LO), InvalidArgument);
  EXPECT_THROW(fit_luscher({{1, -0.4}, {2, -1.7}}, LuscherOrder::N2LO), InvalidArgument);
  EXPECT_THROW(fit_luscher({{1, -0.4}, {5, -1.7}}, LuscherOrder::LO), InvalidArgument);
  EXPECT_THROW(luscher_row_inputs(exact_energies(), 2, LuscherOrder::N2LO), InvalidArgument);
  EXPECT_THROW(luscher_order_from_string("N3LO"), InvalidArgument);
}

TEST(LuscherFitTest, MassConvention) {
  LuscherConstants avg;
  avg.mass = MassConvention::AverageNucleonMass;
  const auto e = exact_energies();
  // At LO the mass only rescales gamma^2, so E_inf does not depend on it.
  const auto lo_in = luscher_row_inputs(e, 2, LuscherOrder::LO);
  const auto lo = fit_luscher(lo_in, LuscherOrder::LO, avg);
  EXPECT_EQ(lo.mass, MassConvention::AverageNucleonMass);
  EXPECT_NEAR(lo.e_inf, fit_luscher(lo_in, LuscherOrder::LO).e_inf, 1e-8);
  const auto nlo_in = luscher_row_inputs(e, 3, LuscherOrder::NLO);
  const double nlo_avg = fit_luscher(nlo_in, LuscherOrder::NLO, avg).e_inf;
  const double nlo_mu = fit_luscher(nlo_in, LuscherOrder::NLO).e_inf;
  EXPECT_GT(std::abs(nlo_avg - nlo_mu), 1e-4);
}

TEST(LuscherFitTest, Json) {
  const auto fit = fit_luscher(luscher_row_inputs(exact_energies(), 2, LuscherOrder::LO),
                               LuscherOrder::LO);
  const auto j = to_json(fit);
  EXPECT_EQ(j["order"], "LO");
  EXPECT_EQ(j["mass_convention"], "reduced");
  EXPECT_EQ(j["inputs"].size(), 2u);
}
