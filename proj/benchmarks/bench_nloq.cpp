// Copyright 2026 The nlo_quanta Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "nloq/closed_form.hpp"
#include "nloq/diagnostics.hpp"
#include "nloq/evolve.hpp"
#include "nloq/fock.hpp"
#include "nloq/models.hpp"
#include "nloq/oscillator.hpp"
#include "nloq/soliton.hpp"

namespace {

using namespace nloq;

void BM_BeamSplitterBuild(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Space s = make_space({d, d});
  for (auto _ : state) benchmark::DoNotOptimize(beam_splitter(s, 0.3));
}
BENCHMARK(BM_BeamSplitterBuild)->RangeMultiplier(2)->Range(8, 32)->Unit(benchmark::kMillisecond);

void BM_PropagateChi2(benchmark::State& state) {
  const int ds = static_cast<int>(state.range(0));
  const Space s = make_space({ds, 16});
  const ModelSpec m = h_two_mode_chi2(s, 1.0, 0.1);
  const CVec psi = tensor_product(fock_state(make_space({ds}), {0}),
                                  coherent_state(make_space({16}), {1.0}))
                       .vector();
  for (auto _ : state) benchmark::DoNotOptimize(propagate_static(m.hamiltonian, psi, 2.0));
}
BENCHMARK(BM_PropagateChi2)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SplitStep(benchmark::State& state) {
  FiberParams p;
  p.grid.points = static_cast<int>(state.range(0));
  FieldProfile psi = hartree_profile(2, 0.0, 0.0, p);
  for (auto _ : state) benchmark::DoNotOptimize(split_step_nlse(psi, p, 0.1, 100));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SplitStep)->Arg(512)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_DpoSteadyState(benchmark::State& state) {
  DpoParams p;
  p.kappa = 0.5;
  p.E0 = 1.0;
  const int ds = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dpo_lindblad_moments(p, ds, 8));
}
BENCHMARK(BM_DpoSteadyState)->Arg(4)->Arg(10)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_HusimiGrid(benchmark::State& state) {
  const Space s = make_space({30});
  const State psi = coherent_state(s, {cplx(1.0, 0.5)});
  std::vector<cplx> pts;
  for (int i = 0; i < state.range(0); ++i)
    for (int j = 0; j < state.range(0); ++j) pts.emplace_back(-3.0 + 0.1 * i, -3.0 + 0.1 * j);
  for (auto _ : state) benchmark::DoNotOptimize(husimi_q(psi, 0, pts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}
BENCHMARK(BM_HusimiGrid)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_KernelFit(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fit_kernel_decay(1.0, 50.0, 2000.0));
}
BENCHMARK(BM_KernelFit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
