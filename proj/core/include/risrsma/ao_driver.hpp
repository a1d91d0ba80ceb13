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
#include <vector>

#include "risrsma/phase_opt.hpp"
#include "risrsma/precoder_opt.hpp"

namespace risrsma {

/// The deployed hardware: evaluation always uses this model.
struct HardwareModel
{
    RisHardwareProfile profile = RisHardwareProfile::reference();
    ImpairmentProfile impairments;
};

/// Which imperfections the optimizer accounts for.
struct ModelFlags
{
    bool model_hwi = true;
    bool model_sic = true;
    bool model_coupling = true;

    bool all() const { return model_hwi && model_sic && model_coupling; }
};

struct AoConfig
{
    int max_outer_iters = 30;
    double outer_tolerance = 1e-4; // bits/s/Hz
    Scheme scheme = Scheme::rsma;
    ModelFlags flags;
    double max_power = 1.0; // watts
    double gamma_th = 1.0;
    bool enforce_qos = true;
    /// After each outer iteration try s + c (s - s_prev) for c in {4, 2, 1};
    /// kept only when it raises the model sum rate.
    bool extrapolation = true;
    PrecoderConfig precoder{.barrier = {.gap_tolerance = 1e-8, .initial_t = 100.0, .t_growth = 50.0}};
    AdmmConfig admm{.barrier = {.gap_tolerance = 1e-6, .initial_t = 100.0, .t_growth = 50.0}};
    std::optional<BeamformingState> warm_start;

    void validate() const;
};

struct AoTraceEntry
{
    int iteration = 0;
    double sum_rate = 0.0;       // true model
    double model_sum_rate = 0.0; // optimizer's model
    double rate_c = 0.0;
    std::vector<double> rate_p;
    double common_power = 0.0;   // ||w_c||^2, watts
    double admm_residual = 0.0;
    int admm_iterations = 0;
};

struct AoTrace
{
    std::vector<AoTraceEntry> entries;

    std::vector<double> sum_rates() const;
    /// Largest drop between consecutive true sum rates (0 when monotone).
    double worst_decrease() const;
};

enum class AoStatus
{
    ok,
    infeasible_qos
};

struct AoResult
{
    AoStatus status = AoStatus::ok;
    bool best_effort = false; // QoS rows were dropped after an infeasible run
    bool converged = false;
    int iterations = 0;
    BeamformingState state; // ris_mode practical: the deployed configuration
    AoTrace trace;
    RateReport report;       // true model
    RateReport model_report; // optimizer's model
    std::vector<int> noma_order;
};

/// Alternates the precoder FP loop and the phase ADMM under the model
/// selected by config.flags, starting from seeded random phases. Every
/// accepted update is nondecreasing in the model sum rate.
AoResult run_ao(const ChannelRealization &channel, const HardwareModel &truth, const AoConfig &config,
                std::uint64_t seed);

/// run_ao, falling back to a best-effort run without QoS rows when the
/// misspecified model declares the instance infeasible.
AoResult run_baseline(const ChannelRealization &channel, const HardwareModel &truth, const AoConfig &config,
                      std::uint64_t seed);

/// Runs from the seeded start and from each warm start; keeps the result with
/// the largest model sum rate.
AoResult run_multistart(const ChannelRealization &channel, const HardwareModel &truth, const AoConfig &config,
                        std::uint64_t seed, const std::vector<BeamformingState> &warm_starts);

/// Start near pure multicast: w_c along the principal eigenvector of
/// sum_k h_k h_k^H / sigma_k^2 at the phases of base (under the model chosen
/// by flags) with 98% of max_power; private beams are base's scaled by 0.1.
BeamformingState multicast_start(const ChannelRealization &channel, const HardwareModel &truth,
                                 const ModelFlags &flags, const BeamformingState &base, double max_power);

/// ||w_c||^2 / (||w_c||^2 + sum_k ||w_k||^2), 0 for a silent transmitter.
double common_stream_share(const BeamformingState &state);

/// Upper bound K log2(1 + snr) + log2(1 + snr), snr = P max_k ||h_k||^2 / sigma_k^2.
double sum_rate_upper_bound(const ChannelRealization &channel, const BeamformingState &state,
                            const RisHardwareProfile &profile, double max_power);

} // namespace risrsma
