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

#include <iosfwd>
#include <vector>

#include "risrsma/fp_solver.hpp"
#include "risrsma/rate_model.hpp"

namespace risrsma {

/// Per-user matrices of the RSMA phase subproblem:
///   Lambda_k = G^H diag(f_k),
///   B_c,k = m_r A + m_t (1 + m_r) diag(A) + sum_i w_i w_i^H,
///   B_k   = B_c,k - w_k w_k^H + delta_sic^2 w_c w_c^H,
///   P = Lambda^H B Lambda,
/// so that the SINR denominators are phi^H P phi + (1 + m_r) sigma_k^2.
struct QuadraticForms
{
    std::vector<CMat> Lambda;
    std::vector<CMat> P_c;
    std::vector<CMat> P_p;
    std::vector<CMat> B_c;
    std::vector<CMat> B_p;
};

QuadraticForms build_quadratic_forms(const ChannelRealization &channel, const BeamformingState &state,
                                     const ImpairmentProfile &impairments);

/// Phase subproblem for fixed precoders, any scheme.
struct PhaseProblem
{
    const ChannelRealization *channel = nullptr;
    BeamformingState state; // precoders in use; theta ignored
    ImpairmentProfile impairments;
    RisHardwareProfile profile = RisHardwareProfile::reference();
    RisMode ris_mode = RisMode::practical;
    double gamma_th = 0.0;
    bool enforce_qos = true;
    Scheme scheme = Scheme::rsma;
    std::vector<int> noma_order;

    /// Program over x = phi (no power budget, no proximal term), channels
    /// normalized by sigma_k.
    FpProgram program() const;
    CVec reflection(const PhaseVector &theta) const;
};

struct AdmmState
{
    CVec phi;
    CVec phi_tilde;
    CVec nu;
    double lambda = 1.0;
};

struct PhiStepResult
{
    StepStatus status = StepStatus::ok;
    RVec slacks;
    double objective = 0.0; // augmented surrogate objective
};

/// Maximizes sum_s log2(1 + xi_s) - lambda ||phi_tilde - phi + nu||^2 under
/// the surrogate and QoS constraints; on success state.phi is replaced.
PhiStepResult solve_phi_step(const FpProgram &program, const std::vector<cplx> &multipliers, AdmmState &state,
                             const BarrierConfig &config = {});

/// Element-wise minimizer of |beta(theta) e^{j theta} - target|^2.
class ManifoldProjector
{
public:
    explicit ManifoldProjector(const RisHardwareProfile &profile, int grid_points = 4096);

    double project(cplx target) const;
    PhaseVector project(const CVec &target) const;

    /// |beta(theta) e^{j theta} - target|^2
    double distance(double theta, cplx target) const;

private:
    double refine(double lo, double hi, cplx target) const;

    RisHardwareProfile profile_;
    bool constant_;
    std::vector<double> grid_;
    std::vector<double> beta_cos_;
    std::vector<double> beta_sin_;
    std::vector<double> beta_sq_;
};

struct Projection
{
    PhaseVector theta;
    CVec phi_tilde;
};

/// theta_n = argmin |beta(theta) e^{j theta} - (phi_n - nu_n)|^2
Projection project_to_manifold(const CVec &phi, const CVec &nu, const RisHardwareProfile &profile);

struct AdmmConfig
{
    double lambda = 1.0;
    int max_iters = 100;
    double residual_tolerance = 1e-4; // scaled by sqrt(N)
    double objective_tolerance = 1e-5;
    bool keep_trace = false;
    BarrierConfig barrier{.gap_tolerance = 1e-7};
};

struct AdmmTraceEntry
{
    int iteration = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double objective = 0.0; // model sum rate at phi_tilde
    double qos_margin = 0.0;
};

struct AdmmResult
{
    PhaseVector theta;       // best QoS-feasible manifold point seen
    double objective = 0.0;  // model sum rate at theta
    bool converged = false;
    bool feasible = false;   // theta satisfies the QoS rows
    int iterations = 0;
    double primal_residual = 0.0;
    std::vector<AdmmTraceEntry> trace;
};

/// ADMM on phi = phi_tilde. The starting point is always a candidate, so the
/// returned objective is never below the one at init.
AdmmResult admm_loop(const PhaseProblem &problem, const PhaseVector &init, const AdmmConfig &config = {});

void write_admm_trace_csv(std::ostream &os, const std::vector<AdmmTraceEntry> &trace);

} // namespace risrsma
