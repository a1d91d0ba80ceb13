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

#include <vector>

#include "risrsma/fp_solver.hpp"
#include "risrsma/rate_model.hpp"

namespace risrsma {

/// Closed-form quadratic-transform multipliers of the RSMA SINRs.
struct FpMultipliers
{
    std::vector<cplx> mu_c;
    std::vector<cplx> mu_p;
};

/// Rate slacks: xi bounds the common SINR of every user, xi_k the private one.
struct SlackVariables
{
    double xi = 0.0;
    std::vector<double> xi_k;
};

/// mu_c,k = h_k^H w_c / (sum_i |h_k^H w_i|^2 + Phi_c,k),
/// mu_k = h_k^H w_k / (sum_{i != k} |h_k^H w_i|^2 + Phi_p,k).
FpMultipliers update_multipliers(const std::vector<CVec> &h, const BeamformingState &state,
                                 const ImpairmentProfile &impairments, const std::vector<double> &sigma_sq);

/// Everything the precoder subproblem needs for a fixed RIS configuration.
struct PrecoderProblem
{
    std::vector<CVec> h;          // effective channels, physical units
    std::vector<double> sigma_sq; // noise power per user
    ImpairmentProfile impairments;
    double max_power = 1.0;       // P_max in watts
    double gamma_th = 0.0;
    bool enforce_qos = true;
    Scheme scheme = Scheme::rsma;
    std::vector<int> noma_order;

    int users() const { return static_cast<int>(h.size()); }
    int antennas() const { return static_cast<int>(h.front().size()); }
    SchemeLayout layout() const;

    /// Program over x = stacked blocks / sqrt(P_max); channels are scaled by
    /// sqrt(P_max) / sigma_k so that the power budget is 1 and noise is 1 + m_r.
    FpProgram program() const;
    CVec pack(const BeamformingState &state) const;
    void unpack(const CVec &x, BeamformingState &state) const;
};

struct PrecoderConfig
{
    int outer_iters = 20;
    double tolerance = 1e-5; // bits/s/Hz
    int feasibility_iters = 50;
    BarrierConfig barrier;
};

enum class PrecoderStatus
{
    ok,
    infeasible_qos
};

struct PrecoderStepResult
{
    PrecoderStatus status = PrecoderStatus::ok;
    BeamformingState state; // precoders updated; theta untouched
    SlackVariables slacks;
    double surrogate_objective = 0.0; // Q at the returned slacks
};

/// One concave solve at fixed multipliers. The multipliers are given per
/// SINR term of problem.program() (see optimal_multipliers).
PrecoderStepResult solve_precoder_step(const PrecoderProblem &problem, const std::vector<cplx> &multipliers,
                                       const BeamformingState &warm_start, const BarrierConfig &config = {});

struct FpTraceEntry
{
    int iteration = 0;
    double objective = 0.0;  // sum rate under the problem's model
    double power_slack = 0.0; // P_max - total power
    double qos_margin = 0.0;
};

struct PrecoderLoopResult
{
    PrecoderStatus status = PrecoderStatus::ok;
    BeamformingState state;
    double objective = 0.0;
    std::vector<FpTraceEntry> trace;
};

/// Alternates multiplier updates and concave solves until the sum rate
/// changes by less than the tolerance. The objective never decreases. When
/// the start violates the QoS rows a margin-maximizing phase runs first; if
/// it cannot reach a positive margin the result is infeasible_qos and the
/// state is the best point of that phase.
PrecoderLoopResult precoder_fp_loop(const PrecoderProblem &problem, const BeamformingState &init,
                                    const PrecoderConfig &config = {});

/// Maximum-ratio start: w_k along h_k, w_c along the sum of normalized
/// channels, 10% of the budget on the common stream (RSMA only).
BeamformingState initial_precoders(const std::vector<CVec> &h, double max_power, Scheme scheme);

} // namespace risrsma
