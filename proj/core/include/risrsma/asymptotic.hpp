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

#pragma once

#include <cstdint>
#include <optional>

#include "risrsma/ris_model.hpp"

namespace risrsma {

/// Single-antenna BS reaching one user through an N-element RIS, both hops
/// Rayleigh. Phases are aligned as if every element had unit amplitude.
struct AsymptoticScenario
{
    int elements = 16;        // N
    double tau_f_sq = 1.0;    // RIS -> user variance
    double tau_g_sq = 1.0;    // BS -> RIS variance
    double snr_budget = 1.0;  // P_max / sigma^2, linear
    int taylor_order = 5;     // S
    RisHardwareProfile profile = RisHardwareProfile::reference();
    /// Exponential correlation across elements for the Monte Carlo draws.
    std::optional<double> correlation;

    void validate() const;
};

/// tau_f^2 tau_g^2 (P/sigma^2) / 16 * [N^2 pi^2 + N (16 - pi^2)]
double ideal_asymptotic_snr(const AsymptoticScenario &scenario);

/// Large-N ratio of practical to ideal asymptotic SNR, E[beta]^2 with the
/// order-S Taylor mean. Independent of N.
double eta_ratio(const AsymptoticScenario &scenario);

/// Finite-N ratio using both Taylor moments; tends to eta_ratio as N grows.
double eta_ratio_finite_n(const AsymptoticScenario &scenario);

struct SnrEstimate
{
    double practical = 0.0; // mean of |sum |f_n| beta_n |g_n||^2 * P/sigma^2
    double practical_stderr = 0.0;
    double ideal = 0.0;     // same draws with unit amplitudes
    double ideal_stderr = 0.0;
    std::size_t trials = 0;
};

/// Monte Carlo estimate of the practical asymptotic SNR with theta_n set to
/// -arg(f_n^* g_n). Trials are split into fixed-size chunks with their own
/// seeds, so the result does not depend on `workers`.
SnrEstimate practical_asymptotic_snr_mc(const AsymptoticScenario &scenario, std::size_t trials, std::uint64_t seed,
                                        unsigned workers = 0);

} // namespace risrsma
