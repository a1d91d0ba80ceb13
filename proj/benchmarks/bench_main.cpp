// SPDX-License-Identifier: Apache-2.0
//
// risrsma - robust beamforming for practical RIS-aided RSMA downlinks
// Copyright (C) 2026 The risrsma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <benchmark/benchmark.h>

#include <random>

#include "risrsma/ao_driver.hpp"
#include "risrsma/asymptotic.hpp"

using namespace risrsma;

namespace {

CVec random_cvec(std::mt19937_64 &rng, int n)
{
    std::normal_distribution<double> d(0.0, std::sqrt(0.5));
    CVec v(n);
    for (int i = 0; i < n; ++i)
        v(i) = cplx(d(rng), d(rng));
    return v;
}

ChannelRealization reference_channel(std::uint64_t seed)
{
    return draw_channel(ScenarioGeometry{}, FadingSpec::rician(), dbm_to_watt(-110.0), seed);
}

void BM_ManifoldProjection(benchmark::State &state)
{
    const ManifoldProjector proj(RisHardwareProfile::reference());
    std::mt19937_64 rng(1);
    const CVec targets = random_cvec(rng, 256);
    for (auto _ : state)
        benchmark::DoNotOptimize(proj.project(targets));
    state.SetItemsProcessed(state.iterations() * targets.size());
}
BENCHMARK(BM_ManifoldProjection);

void BM_DistortionPowers(benchmark::State &state)
{
    std::mt19937_64 rng(2);
    const int M = static_cast<int>(state.range(0));
    const CVec h = random_cvec(rng, M);
    BeamformingState s;
    s.w_c = random_cvec(rng, M);
    s.w = {random_cvec(rng, M), random_cvec(rng, M)};
    const ImpairmentProfile imp{0.01, 0.01, 0.1};
    for (auto _ : state)
        benchmark::DoNotOptimize(distortion_powers(h, s, imp, 1.0));
}
BENCHMARK(BM_DistortionPowers)->Arg(4)->Arg(8)->Arg(32);

void BM_PrecoderStep(benchmark::State &state)
{
    std::mt19937_64 rng(3);
    PrecoderProblem p;
    for (int k = 0; k < 2; ++k)
    {
        p.h.push_back(random_cvec(rng, 8));
        p.sigma_sq.push_back(1.0);
    }
    p.impairments = {0.01, 0.01, 0.1};
    p.max_power = 10.0;
    p.gamma_th = 0.5;
    const auto init = initial_precoders(p.h, p.max_power, Scheme::rsma);
    const auto prog = p.program();
    const auto mu = optimal_multipliers(prog, p.pack(init));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_precoder_step(p, mu, init));
}
BENCHMARK(BM_PrecoderStep)->Unit(benchmark::kMillisecond);

void BM_AdmmPhaseStep(benchmark::State &state)
{
    const auto c = reference_channel(4);
    std::mt19937_64 rng(4);
    PhaseProblem p;
    p.channel = &c;
    p.impairments = {0.01, 0.01, 0.1};
    p.gamma_th = 0.0;
    p.state.w_c = random_cvec(rng, 8) * 0.1;
    p.state.w = {random_cvec(rng, 8) * 0.2, random_cvec(rng, 8) * 0.2};
    const PhaseVector init(std::vector<double>(16, 0.0));
    for (auto _ : state)
        benchmark::DoNotOptimize(admm_loop(p, init));
}
BENCHMARK(BM_AdmmPhaseStep)->Unit(benchmark::kMillisecond);

void BM_AoRun(benchmark::State &state)
{
    const auto c = reference_channel(5);
    HardwareModel hw;
    hw.impairments = {0.01, 0.01, 0.1};
    AoConfig cfg;
    cfg.max_power = dbm_to_watt(30.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(run_baseline(c, hw, cfg, 5));
}
BENCHMARK(BM_AoRun)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_AsymptoticMonteCarlo(benchmark::State &state)
{
    AsymptoticScenario s;
    s.elements = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(practical_asymptotic_snr_mc(s, 1000, 7, 1));
    state.SetItemsProcessed(state.iterations() * 1000 * s.elements);
}
BENCHMARK(BM_AsymptoticMonteCarlo)->Arg(16)->Arg(256);

} // namespace

BENCHMARK_MAIN();
