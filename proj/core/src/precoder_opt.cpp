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

#include "risrsma/precoder_opt.hpp"

#include <cmath>
#include <stdexcept>

namespace risrsma {

namespace {

double abs2(cplx z) { return std::norm(z); }

} // namespace

FpMultipliers update_multipliers(const std::vector<CVec> &h, const BeamformingState &state,
                                 const ImpairmentProfile &impairments, const std::vector<double> &sigma_sq)
{
    const std::size_t K = h.size();
    FpMultipliers mu;
    for (std::size_t k = 0; k < K; ++k)
    {
        const auto phi = distortion_powers(h[k], state, impairments, sigma_sq[k]);
        double all_private = 0.0;
        for (std::size_t i = 0; i < K; ++i)
            all_private += abs2(h[k].dot(state.w[i]));
        const double own = abs2(h[k].dot(state.w[k]));
        const cplx common = state.w_c.size() ? h[k].dot(state.w_c) : cplx(0.0);
        mu.mu_c.push_back(common / (all_private + phi.common));
        mu.mu_p.push_back(h[k].dot(state.w[k]) / (all_private - own + phi.private_));
    }
    return mu;
}

SchemeLayout PrecoderProblem::layout() const { return scheme_layout(scheme, users(), impairments.delta_sic, noma_order); }

FpProgram PrecoderProblem::program() const
{
    if (h.empty())
        throw std::invalid_argument("precoder problem has no users");
    if (sigma_sq.size() != h.size())
        throw std::invalid_argument("one noise power per user is required");
    if (!(max_power > 0.0))
        throw std::invalid_argument("P_max must be positive");
    impairments.validate();

    const auto lay = layout();
    const Eigen::Index M = antennas();
    const Eigen::Index B = lay.blocks;
    const double m_r = impairments.m_r;
    const double m_t = impairments.m_t;

    FpProgram p;
    p.dim = static_cast<int>(B * M);
    p.streams = lay.streams;
    p.power_budget = 1.0;
    for (const auto &spec : lay.sinrs)
    {
        const CVec hs = h[spec.user] * std::sqrt(max_power / sigma_sq[spec.user]);
        const CMat outer = hs * hs.adjoint();
        const CMat hwi = m_r * outer + CMat(m_t * (1.0 + m_r) * hs.cwiseAbs2().cast<cplx>().asDiagonal());

        SinrTerm term;
        term.stream = spec.stream;
        term.noise = 1.0 + m_r;
        term.numerator = CVec::Zero(p.dim);
        term.numerator.segment(spec.signal * M, M) = hs;
        term.interference = CMat::Zero(p.dim, p.dim);
        for (Eigen::Index b = 0; b < B; ++b)
            term.interference.block(b * M, b * M, M, M) = hwi;
        for (const auto &[block, coeff] : spec.interference)
            term.interference.block(block * M, block * M, M, M) += coeff * outer;
        p.terms.push_back(std::move(term));
    }
    if (enforce_qos)
        for (auto &coeff : lay.qos_coefficients())
            p.qos.push_back({std::move(coeff), gamma_th});
    return p;
}

CVec PrecoderProblem::pack(const BeamformingState &state) const
{
    const auto blocks = layout().blocks_of(state);
    const Eigen::Index M = antennas();
    CVec x(static_cast<Eigen::Index>(blocks.size()) * M);
    for (std::size_t b = 0; b < blocks.size(); ++b)
    {
        if (blocks[b].size() != M)
            throw std::invalid_argument("precoder length does not match BS antenna count");
        x.segment(static_cast<Eigen::Index>(b) * M, M) = blocks[b];
    }
    return x / std::sqrt(max_power);
}

void PrecoderProblem::unpack(const CVec &x, BeamformingState &state) const
{
    const auto lay = layout();
    const Eigen::Index M = antennas();
    std::vector<CVec> blocks;
    for (int b = 0; b < lay.blocks; ++b)
        blocks.push_back(x.segment(b * M, M) * std::sqrt(max_power));
    lay.assign(state, blocks);
}

PrecoderStepResult solve_precoder_step(const PrecoderProblem &problem, const std::vector<cplx> &multipliers,
                                       const BeamformingState &warm_start, const BarrierConfig &config)
{
    const FpProgram program = problem.program();
    const auto step = solve_fp_step(program, multipliers, problem.pack(warm_start), config);

    PrecoderStepResult out;
    out.state = warm_start;
    if (step.status == StepStatus::infeasible)
    {
        out.status = PrecoderStatus::infeasible_qos;
        return out;
    }
    problem.unpack(step.x, out.state);
    out.surrogate_objective = step.objective;
    if (problem.scheme == Scheme::rsma)
    {
        out.slacks.xi = step.slacks(0);
        for (int k = 0; k < problem.users(); ++k)
            out.slacks.xi_k.push_back(step.slacks(k + 1));
    }
    else
    {
        for (int k = 0; k < problem.users(); ++k)
            out.slacks.xi_k.push_back(step.slacks(k));
    }
    return out;
}

PrecoderLoopResult precoder_fp_loop(const PrecoderProblem &problem, const BeamformingState &init,
                                    const PrecoderConfig &config)
{
    const FpProgram program = problem.program();
    CVec x = problem.pack(init);
    if (x.squaredNorm() > 1.0 + 1e-9)
        throw std::invalid_argument("initial precoders exceed the power budget");

    PrecoderLoopResult out;
    out.state = init;
    auto record = [&](int iteration, const CVec &v) {
        FpTraceEntry e;
        e.iteration = iteration;
        e.objective = program.objective(v);
        e.power_slack = problem.max_power * (1.0 - v.squaredNorm());
        e.qos_margin = program.qos_margin(v);
        out.trace.push_back(e);
    };

    if (!(program.qos_margin(x) > 0.0))
    {
        const double target = 1e-6 * (1.0 + problem.gamma_th);
        double best = program.qos_margin(x);
        for (int it = 0; it < config.feasibility_iters && !(program.qos_margin(x) > 0.0); ++it)
        {
            const auto search = maximize_qos_margin(program, optimal_multipliers(program, x), x, target, config.barrier);
            const double reached = program.qos_margin(search.x);
            if (!(reached > best + 1e-9 * (1.0 + std::abs(best))))
            {
                if (reached > best)
                    x = search.x;
                break;
            }
            best = reached;
            x = search.x;
        }
        if (!(program.qos_margin(x) > 0.0))
        {
            out.status = PrecoderStatus::infeasible_qos;
            problem.unpack(x, out.state);
            out.objective = program.objective(x);
            record(0, x);
            return out;
        }
    }

    double objective = program.objective(x);
    record(0, x);
    for (int it = 1; it <= config.outer_iters; ++it)
    {
        const auto step = solve_fp_step(program, optimal_multipliers(program, x), x, config.barrier);
        if (step.status != StepStatus::ok)
            break;
        const double next = program.objective(step.x);
        if (!(next >= objective) || !(program.qos_margin(step.x) > 0.0))
            break;
        const double gain = next - objective;
        x = step.x;
        objective = next;
        record(it, x);
        if (gain < config.tolerance)
            break;
    }
    problem.unpack(x, out.state);
    out.objective = objective;
    return out;
}

BeamformingState initial_precoders(const std::vector<CVec> &h, double max_power, Scheme scheme)
{
    if (h.empty())
        throw std::invalid_argument("need at least one user");
    const Eigen::Index M = h.front().size();
    const double K = static_cast<double>(h.size());
    const double common_share = scheme == Scheme::rsma ? 0.1 : 0.0;

    BeamformingState s;
    CVec direction = CVec::Zero(M);
    for (const auto &hk : h)
    {
        const double n = hk.norm();
        CVec wk = n > 0.0 ? CVec(hk / n) : CVec::Constant(M, 1.0 / std::sqrt(static_cast<double>(M)));
        direction += wk;
        s.w.push_back(wk * std::sqrt((1.0 - common_share) * max_power / K));
    }
    if (common_share > 0.0)
    {
        const double n = direction.norm();
        if (n > 0.0)
            direction /= n;
        else
            direction = CVec::Constant(M, 1.0 / std::sqrt(static_cast<double>(M)));
        s.w_c = direction * std::sqrt(common_share * max_power);
    }
    else
    {
        s.w_c = CVec::Zero(M);
    }
    return s;
}

} // namespace risrsma
