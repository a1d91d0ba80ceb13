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

#include <optional>
#include <vector>

#include "risrsma/types.hpp"

namespace risrsma {

/// One SINR of the form |a^H x|^2 / (x^H Q x + noise) over a complex decision
/// vector x. Several terms may feed the same stream; the stream's rate is set
/// by the smallest of them.
struct SinrTerm
{
    int stream = 0;
    CVec numerator;   // a
    CMat interference; // Q, Hermitian PSD
    double noise = 1.0;
};

/// sum_s coeff[s] * xi_s >= threshold
struct QosRow
{
    std::vector<double> coeff;
    double threshold = 0.0;
};

/// Sum-rate program shared by the precoder and the phase subproblems:
///
///   max  sum_s log2(1 + xi_s) - prox_weight * ||x - prox_center||^2
///   s.t. xi_s <= SINR_i(x) for every term i of stream s,
///        QoS rows on xi, ||x||^2 <= power_budget (when set).
struct FpProgram
{
    int dim = 0;
    int streams = 0;
    std::vector<SinrTerm> terms;
    std::vector<QosRow> qos;
    std::optional<double> power_budget;
    double prox_weight = 0.0;
    CVec prox_center;

    void validate() const;

    double sinr(std::size_t term, const CVec &x) const;
    /// Per-stream min over its terms of the true SINR.
    RVec stream_sinrs(const CVec &x) const;
    /// Objective with every slack at its stream SINR.
    double objective(const CVec &x) const;
    /// min over QoS rows of (row value - threshold), slacks at stream SINRs.
    double qos_margin(const CVec &x) const;
};

/// mu = a^H x / (x^H Q x + noise)
cplx optimal_multiplier(const SinrTerm &term, const CVec &x);
std::vector<cplx> optimal_multipliers(const FpProgram &program, const CVec &x);

/// 2 Re{mu^* a^H x} - |mu|^2 (x^H Q x + noise). A lower bound on the SINR for
/// any mu, tight at optimal_multiplier.
double surrogate(const SinrTerm &term, cplx mu, const CVec &x);

struct BarrierConfig
{
    double gap_tolerance = 1e-9;  // stop once (#constraints)/t falls below this
    double initial_t = 10.0;
    double t_growth = 20.0;
    double newton_tolerance = 1e-10; // half squared Newton decrement
    int max_newton_per_stage = 100;
    double slack_offset = 1e-12;     // relative backoff of the initial slacks
};

enum class StepStatus
{
    ok,
    infeasible, // warm start violates the QoS rows under the surrogates
};

struct FpStepResult
{
    StepStatus status = StepStatus::ok;
    CVec x;
    RVec slacks;
    double objective = 0.0; // surrogate objective at (x, slacks)
    int newton_steps = 0;
};

/// Solves the concave program obtained by replacing every SINR with its
/// quadratic-transform surrogate at fixed multipliers. Log-barrier interior
/// point method; x0 must satisfy the power budget. The returned objective is
/// within gap_tolerance of the surrogate optimum, hence no smaller than the
/// surrogate objective at x0 minus that tolerance.
FpStepResult solve_fp_step(const FpProgram &program, const std::vector<cplx> &multipliers, const CVec &x0,
                           const BarrierConfig &config = {});

struct QosSearchResult
{
    CVec x;
    double margin = 0.0; // surrogate QoS margin reached
    int newton_steps = 0;
};

/// Maximizes the QoS margin under the surrogates (feasibility phase). Stops
/// early once the margin exceeds `target`.
QosSearchResult maximize_qos_margin(const FpProgram &program, const std::vector<cplx> &multipliers, const CVec &x0,
                                    double target, const BarrierConfig &config = {});

} // namespace risrsma
