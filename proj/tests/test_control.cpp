// Copyright 2026 The coolopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "coolopt/control.hpp"
#include "coolopt/dynamics.hpp"
#include "coolopt/error.hpp"
#include "oracles.hpp"

namespace coolopt::control {
namespace {

using schemes::ControlParams;

const SchemeId kAll[] = {SchemeId::rwsc, SchemeId::swsc, SchemeId::eit3, SchemeId::eit4};

ControlProblem problem(SchemeId id, int d, double horizon, double nbar0 = 1.0) {
  const SpaceSpec s(schemes::internal_dim(id), d);
  return make_problem(id, PhysicalConstants::defaults(id), s, fock::thermal_state(nbar0, s),
                      horizon);
}

RVec vec2(double a, double b) {
  RVec v(2);
  v << a, b;
  return v;
}

RVec random_point(SchemeId id, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto& names = schemes::parameter_names(id);
  const bool eit = id == SchemeId::eit3 || id == SchemeId::eit4;
  RVec x(static_cast<Eigen::Index>(names.size()));
  for (std::size_t i = 0; i < names.size(); ++i) {
    x[static_cast<Eigen::Index>(i)] =
        schemes::is_detuning(names[i]) ? (eit ? 50.0 + 30.0 * u(rng) : -0.9 + 0.3 * u(rng))
                                       : (eit ? 3.0 + 8.0 * std::abs(u(rng)) : 0.2 + 0.6 * std::abs(u(rng)));
  }
  return x;
}

TEST(ControlProblem, Validation) {
  ControlProblem p = problem(SchemeId::rwsc, 4, 10.0);
  EXPECT_NO_THROW(p.validate());
  ControlProblem overlap = p;
  overlap.fixed["omega"] = 0.3;
  EXPECT_THROW(overlap.validate(), InvalidArgument);
  ControlProblem missing = p;
  missing.free = {"delta"};
  missing.initial_guess = RVec::Constant(1, -1.0);
  EXPECT_THROW(missing.validate(), InvalidArgument);
  ControlProblem unknown = p;
  unknown.fixed["omega_g"] = 1.0;
  EXPECT_THROW(unknown.validate(), InvalidArgument);
  ControlProblem guess = p;
  guess.initial_guess = RVec::Zero(3);
  EXPECT_THROW(guess.validate(), InvalidArgument);
  ControlProblem horizon = p;
  horizon.horizon = -1.0;
  EXPECT_THROW(horizon.validate(), InvalidArgument);
}

TEST(DefaultStart, Values) {
  const auto c = PhysicalConstants::defaults(SchemeId::rwsc);
  EXPECT_EQ(default_start(SchemeId::rwsc, c).values(), (std::vector<double>{-1.0, 0.3}));
  for (auto id : {SchemeId::eit3, SchemeId::eit4}) {
    const auto p = default_start(id, PhysicalConstants::defaults(id));
    EXPECT_NEAR(p.get("omega_g") / p.get("omega_r"), 0.15, 1e-14);
    const double delta = p.values()[0];
    EXPECT_EQ(delta, 60.0);
    EXPECT_NEAR(schemes::ac_stark(delta, p.get("omega_g"), p.get("omega_r")), 1.0, 1e-12);
  }
}

TEST(Loss, ZeroHorizonGivesInitialPhononNumber) {
  const auto p = problem(SchemeId::rwsc, 10, 0.0);
  EXPECT_NEAR(loss(p, vec2(-0.9, 0.5)), 0.99022, 5e-6);
}

TEST(Loss, NoCouplingKeepsInitialPhononNumber) {
  const auto p = problem(SchemeId::rwsc, 10, 0.0);
  const double n0 = dynamics::mean_phonon(p.rho0);
  for (double horizon : {5.0, 250.0}) {
    ControlProblem q = p;
    q.horizon = horizon;
    for (double delta : {-1.3, 0.2}) EXPECT_NEAR(loss(q, vec2(delta, 0.0)), n0, 1e-12);
  }
}

TEST(Loss, MatchesDirectPropagation) {
  const auto p = problem(SchemeId::swsc, 6, 80.0);
  const RVec x = vec2(-0.95, 1.1);
  const auto l = schemes::build(p.scheme, p.consts, p.assemble(x), p.space);
  EXPECT_NEAR(loss(p, x), dynamics::mean_phonon(dynamics::evolve(l, p.rho0, p.horizon)), 1e-12);
}

TEST(Loss, EvenInRabiFrequency) {
  std::mt19937 rng(61);
  for (auto id : kAll) {
    const auto p = problem(id, 4, 30.0);
    const LossModel m(p);
    const RVec x = random_point(id, rng);
    for (std::size_t i = 0; i < p.free.size(); ++i) {
      if (schemes::is_detuning(p.free[i])) continue;
      RVec y = x;
      y[static_cast<Eigen::Index>(i)] *= -1.0;
      EXPECT_NEAR(m.loss(x), m.loss(y), 1e-12) << schemes::to_string(id) << " " << p.free[i];
    }
  }
}

TEST(Grad, MatchesCentralDifferences) {
  std::mt19937 rng(62);
  for (auto id : kAll) {
    const int d = id == SchemeId::eit4 ? 4 : 5;
    const auto p = problem(id, d, id == SchemeId::eit4 || id == SchemeId::eit3 ? 20.0 : 60.0);
    const LossModel m(p);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const RVec x = random_point(id, rng);
      RVec g;
      const double f = m.grad(x, g);
      EXPECT_NEAR(f, m.loss(x), 1e-12);
      RVec fd(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        // Detunings near 50 nu make the plain O(h^2) truncation error of a
        // central difference larger than the tolerance, so extrapolate.
        const double h = 1e-4 * std::max(1.0, std::abs(x[i]));
        const auto central = [&](double step) {
          RVec xp = x, xm = x;
          xp[i] += step;
          xm[i] -= step;
          return (m.loss(xp) - m.loss(xm)) / (2.0 * step);
        };
        fd[i] = (4.0 * central(0.5 * h) - central(h)) / 3.0;
      }
      worst = std::max(worst, (g - fd).cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff());
    }
    EXPECT_LT(worst, 1e-6) << schemes::to_string(id);
  }
}

TEST(Grad, AdjointAndForwardRoutesAgree) {
  std::mt19937 rng(63);
  for (auto id : kAll) {
    const auto p = problem(id, 4, 50.0);
    const LossModel m(p);
    const RVec x = random_point(id, rng);
    RVec ga, gf;
    const double fa = m.grad(x, ga, GradientRoute::adjoint);
    const double ff = m.grad(x, gf, GradientRoute::forward);
    EXPECT_NEAR(fa, ff, 1e-12);
    EXPECT_LT((ga - gf).cwiseAbs().maxCoeff(), 1e-10 * ga.cwiseAbs().maxCoeff());
  }
}

TEST(Grad, VanishesAlongRabiAtZeroRabi) {
  const LossModel m(problem(SchemeId::rwsc, 6, 100.0));
  RVec g;
  m.grad(vec2(-0.9, 0.0), g);
  EXPECT_LT(std::abs(g[1]), 1e-14);
}

TEST(Grad, SubsetOfFreeParameters) {
  ControlProblem p = problem(SchemeId::eit3, 4, 20.0);
  const RVec full = p.initial_guess;
  const LossModel all(p);
  RVec g_all;
  all.grad(full, g_all);
  p.free = {"omega_r", "delta"};
  p.fixed = {{"omega_g", full[1]}};
  p.initial_guess = RVec(2);
  p.initial_guess << full[2], full[0];
  const LossModel some(p);
  RVec g_some;
  some.grad(p.initial_guess, g_some);
  EXPECT_NEAR(g_some[0], g_all[2], 1e-14);
  EXPECT_NEAR(g_some[1], g_all[0], 1e-14);
}

TEST(Minimize, SidebandJointOptimum) {
  const auto p = problem(SchemeId::rwsc, 10, 400.0);
  const OptimResult r = minimize(p);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.gradient_norm, 1e-7);
  EXPECT_LE(r.loss_opt, r.initial_loss);
  EXPECT_NEAR(r.params_opt.get("delta"), -0.891, 0.003);
  EXPECT_NEAR(r.params_opt.get("omega"), 0.459, 0.003);
  EXPECT_NEAR(r.loss_opt, 0.0087, 0.0002);
  EXPECT_EQ(r.scales, RVec::Ones(2));
  EXPECT_EQ(r.history.size(), static_cast<std::size_t>(r.iterations + 1));
}

TEST(Minimize, NeverWorseThanStart) {
  std::mt19937 rng(64);
  for (auto id : {SchemeId::rwsc, SchemeId::swsc, SchemeId::eit3}) {
    ControlProblem p = problem(id, 4, 40.0);
    p.initial_guess = random_point(id, rng);
    MinimizeOptions opt;
    opt.lbfgs.max_iterations = 5;
    const OptimResult r = minimize(p, opt);
    EXPECT_LE(r.loss_opt, r.initial_loss);
    EXPECT_NEAR(r.initial_loss, loss(p, p.initial_guess), 1e-12);
  }
}

TEST(Minimize, DetuningScalesForEit) {
  const auto p = problem(SchemeId::eit4, 3, 5.0);
  const RVec s = default_scales(p);
  EXPECT_EQ(s[0], 10.0);
  EXPECT_EQ(s[1], 10.0);
  EXPECT_EQ(s[2], 1.0);
  EXPECT_EQ(s[3], 1.0);
}

TEST(Minimize, NoFreeParameters) {
  ControlProblem p = problem(SchemeId::rwsc, 5, 30.0);
  p.fixed = {{"delta", -1.0}, {"omega", 0.3}};
  p.free.clear();
  p.initial_guess.resize(0);
  const OptimResult r = minimize(p);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_NEAR(r.loss_opt, loss(problem(SchemeId::rwsc, 5, 30.0), vec2(-1.0, 0.3)), 1e-14);
}

TEST(Scan1d, SinglePointEqualsMinimize) {
  ControlProblem p = problem(SchemeId::rwsc, 6, 150.0);
  const auto rows = scan1d(p, "delta", {-0.85}, {"omega"});
  ASSERT_EQ(rows.size(), 1u);
  ControlProblem q = p;
  q.free = {"omega"};
  q.fixed = {{"delta", -0.85}};
  q.initial_guess = RVec::Constant(1, 0.3);
  const OptimResult r = minimize(q);
  EXPECT_EQ(rows[0].nbar, r.loss_opt);
  EXPECT_EQ(rows[0].inner[0], r.x_opt[0]);
  EXPECT_TRUE(rows[0].error.empty());
}

TEST(Scan1d, RejectsScanParameterAmongInner) {
  EXPECT_THROW(scan1d(problem(SchemeId::rwsc, 4, 10.0), "delta", {-1.0}, {"delta", "omega"}),
               InvalidArgument);
}

TEST(Scan1d, GridRefinementStable) {
  const ControlProblem p = problem(SchemeId::rwsc, 6, 150.0);
  const auto coarse = scan1d(p, "delta", {-0.95, -0.9, -0.85, -0.8}, {"omega"});
  const auto fine =
      scan1d(p, "delta", {-0.95, -0.925, -0.9, -0.875, -0.85, -0.825, -0.8}, {"omega"});
  for (std::size_t k = 1; k + 1 < coarse.size(); ++k) {
    EXPECT_NEAR(std::abs(coarse[k].inner[0]), std::abs(fine[2 * k].inner[0]), 1e-3);
    EXPECT_NEAR(coarse[k].nbar, fine[2 * k].nbar, 1e-9);
  }
}

TEST(Scan2d, SingleCellAndThreadIndependence) {
  const ControlProblem p = problem(SchemeId::rwsc, 5, 60.0);
  const auto one = scan2d(p, "delta", {-0.9}, "omega", {0.4});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0].nbar, loss(p, vec2(-0.9, 0.4)), 1e-14);
  const std::vector<double> g1{-1.1, -0.9, -0.7}, g2{0.3, 0.5};
  const auto serial = scan2d(p, "delta", g1, "omega", g2, 1);
  const auto parallel = scan2d(p, "delta", g1, "omega", g2, 3);
  ASSERT_EQ(serial.size(), 6u);
  for (std::size_t k = 0; k < serial.size(); ++k) {
    EXPECT_EQ(serial[k].v1, g1[k / 2]);
    EXPECT_EQ(serial[k].v2, g2[k % 2]);
    EXPECT_EQ(serial[k].nbar, parallel[k].nbar);
  }
}

TEST(Multistart, DeterministicAndPicksBest) {
  const ControlProblem p = problem(SchemeId::rwsc, 6, 150.0);
  const auto same = multistart(p, {vec2(-1.0, 0.3), vec2(-1.0, 0.3)});
  EXPECT_EQ(same.runs[0]->loss_opt, same.runs[1]->loss_opt);
  EXPECT_EQ(same.runs[0]->x_opt, same.runs[1]->x_opt);
  EXPECT_EQ(same.best, 0u);
  // A start on the blue side heats; the red-side start wins.
  MinimizeOptions opt;
  opt.lbfgs.max_iterations = 20;
  const auto mixed = multistart(p, {vec2(1.0, 0.3), vec2(-1.0, 0.3)}, opt, 2);
  EXPECT_EQ(mixed.best, 1u);
  EXPECT_LT(mixed.best_result().loss_opt, mixed.runs[0]->loss_opt);
}

TEST(ParallelFor, CoversEveryIndexOnce) {
  std::vector<int> hits(50, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(3, 2, [](std::size_t i) {
                 if (i == 1) throw NumericalError("boom");
               }),
               NumericalError);
}

}  // namespace
}  // namespace coolopt::control
