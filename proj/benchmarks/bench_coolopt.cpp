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

// Micro benchmarks for the dense kernels that dominate an optimisation:
// expm, its Frechet derivative (dense and rank-one directions), and one
// loss / loss+gradient evaluation.
// Generators are real Liouvillians, so scaling counts match production.

#include <benchmark/benchmark.h>

#include "coolopt/control.hpp"
#include "coolopt/fock.hpp"
#include "coolopt/linalg.hpp"
#include "coolopt/schemes.hpp"

namespace {

using namespace coolopt;
using schemes::SchemeId;

// RWSC at d = fock_dim; the real generator has side (2 d)^2.
control::ControlProblem rwsc(int fock_dim, double horizon) {
  auto c = schemes::PhysicalConstants::defaults(SchemeId::rwsc);
  c.eta = 0.1;
  c.gamma = 0.1;
  const fock::SpaceSpec s(2, fock_dim);
  return control::make_problem(SchemeId::rwsc, c, s, fock::thermal_state(1.0, s), horizon);
}

linalg::RMat generator(int fock_dim) {
  const auto p = rwsc(fock_dim, 400.0);
  const control::RealFamily family(p.scheme, p.consts, p.space, p.rho0);
  linalg::RMat a = family.at({-0.891, 0.459});
  a *= p.horizon;
  return a;
}

void BM_Expm(benchmark::State& state) {
  const auto a = generator(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(linalg::expm(a));
  state.counters["n"] = static_cast<double>(a.rows());
}

void BM_ExpmFrechet(benchmark::State& state) {
  const auto a = generator(static_cast<int>(state.range(0)));
  const linalg::RMat e = linalg::RMat::Identity(a.rows(), a.cols()) * 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(linalg::expm_frechet(a, e));
  state.counters["n"] = static_cast<double>(a.rows());
}

void BM_ExpmFrechetRank1(benchmark::State& state) {
  const auto a = generator(static_cast<int>(state.range(0)));
  const linalg::RVec u = linalg::RVec::Ones(a.rows());
  const linalg::RVec v = linalg::RVec::LinSpaced(a.rows(), -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::expm_frechet_rank1<double>(a, u, v));
  state.counters["n"] = static_cast<double>(a.rows());
}

void BM_Loss(benchmark::State& state) {
  const auto p = rwsc(static_cast<int>(state.range(0)), 400.0);
  const control::LossModel model(p);
  const linalg::RVec x = p.initial_guess;
  for (auto _ : state) benchmark::DoNotOptimize(model.loss(x));
}

void BM_Grad(benchmark::State& state) {
  const auto p = rwsc(static_cast<int>(state.range(0)), 400.0);
  const control::LossModel model(p);
  const linalg::RVec x = p.initial_guess;
  linalg::RVec g;
  const auto route = state.range(1) == 0 ? control::GradientRoute::adjoint
                                         : control::GradientRoute::forward;
  for (auto _ : state) benchmark::DoNotOptimize(model.grad(x, g, route));
}

}  // namespace

BENCHMARK(BM_Expm)->Arg(4)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpmFrechet)->Arg(4)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpmFrechetRank1)->Arg(4)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Loss)->Arg(10)->Unit(benchmark::kMillisecond);
// second argument: 0 adjoint (one rank-one Frechet call), 1 forward (one
// dense call per parameter)
BENCHMARK(BM_Grad)->Args({10, 0})->Args({10, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
