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

#include "risrsma/ao_driver.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace risrsma {

void AoConfig::validate() const
{
    if (max_outer_iters < 1)
        throw std::invalid_argument("AO needs at least one outer iteration");
    if (!(outer_tolerance > 0.0))
        throw std::invalid_argument("AO tolerance must be positive");
    if (!(max_power > 0.0) || !std::isfinite(max_power))
        throw std::invalid_argument("P_max must be positive");
    if (!(gamma_th >= 0.0))
        throw std::invalid_argument("QoS threshold must be nonnegative");
}

std::vector<double> AoTrace::sum_rates() const
{
    std::vector<double> out;
    for (const auto &e : entries)
        out.push_back(e.sum_rate);
    return out;
}

double AoTrace::worst_decrease() const
{
    double worst = 0.0;
    for (std::size_t i = 1; i < entries.size(); ++i)
        worst = std::max(worst, entries[i - 1].sum_rate - entries[i].sum_rate);
    return worst;
}

namespace {

struct OptimizerModel
{
    RisHardwareProfile profile;
    RisMode mode;
    ImpairmentProfile impairments;
};

OptimizerModel optimizer_model(const HardwareModel &truth, const ModelFlags &flags)
{
    ImpairmentProfile imp = truth.impairments;
    if (!flags.model_hwi)
        imp.m_t = imp.m_r = 0.0;
    if (!flags.model_sic)
        imp.delta_sic = 0.0;
    return {truth.profile, flags.model_coupling ? RisMode::practical : RisMode::ideal, imp};
}

class Evaluator
{
public:
    Evaluator(const ChannelRealization &channel, const HardwareModel &truth, const OptimizerModel &model,
              Scheme scheme, std::vector<int> order)
        : channel_(channel), truth_(truth), model_(model), scheme_(scheme), order_(std::move(order))
    {
    }

    RateReport model(BeamformingState state) const
    {
        state.ris_mode = model_.mode;
        return evaluate(channel_, state, model_.profile, model_.impairments, scheme_, order_);
    }

    RateReport truth(BeamformingState state) const
    {
        state.ris_mode = RisMode::practical;
        return evaluate(channel_, state, truth_.profile, truth_.impairments, scheme_, order_);
    }

private:
    const ChannelRealization &channel_;
    const HardwareModel &truth_;
    const OptimizerModel &model_;
    Scheme scheme_;
    std::vector<int> order_;
};

PhaseVector random_phases(int n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-pi, pi);
    std::vector<double> theta(n);
    for (auto &t : theta)
        t = u(rng);
    return PhaseVector(std::move(theta));
}

double qos_margin(const RateReport &r, Scheme scheme, double gamma_th)
{
    double margin = std::numeric_limits<double>::infinity();
    const std::size_t K = r.gamma_p.size();
    double common = 0.0;
    if (scheme == Scheme::rsma)
    {
        common = std::numeric_limits<double>::infinity();
        for (double g : r.gamma_c)
            common = std::min(common, g);
        common /= static_cast<double>(K);
    }
    for (double g : r.gamma_p)
        margin = std::min(margin, common + g - gamma_th);
    return margin;
}

// s + factor (s - prev), precoders rescaled into the power budget.
BeamformingState extrapolate(const BeamformingState &prev, const BeamformingState &s, double factor, double max_power)
{
    BeamformingState out = s;
    std::vector<double> theta(s.theta.size());
    for (std::size_t n = 0; n < theta.size(); ++n)
        theta[n] = s.theta[n] + factor * wrap_angle(s.theta[n] - prev.theta[n]);
    out.theta = PhaseVector(std::move(theta));
    if (prev.w_c.size() == s.w_c.size())
        out.w_c = s.w_c + factor * (s.w_c - prev.w_c);
    for (std::size_t k = 0; k < s.w.size(); ++k)
        out.w[k] = s.w[k] + factor * (s.w[k] - prev.w[k]);
    const double p = out.total_power();
    if (p > max_power)
    {
        const double scale = std::sqrt(max_power / p);
        out.w_c *= scale;
        for (auto &w : out.w)
            w *= scale;
    }
    return out;
}

} // namespace

AoResult run_ao(const ChannelRealization &channel, const HardwareModel &truth, const AoConfig &config,
                std::uint64_t seed)
{
    config.validate();
    truth.impairments.validate();
    const OptimizerModel model = optimizer_model(truth, config.flags);

    BeamformingState state;
    if (config.warm_start)
    {
        state = *config.warm_start;
        if (state.total_power() > config.max_power * (1.0 + 1e-9))
            throw std::invalid_argument("warm start exceeds P_max");
        if (config.scheme != Scheme::rsma)
            state.w_c = CVec::Zero(channel.bs_antennas());
    }
    else
    {
        state.theta = random_phases(channel.ris_elements(), seed);
        BeamformingState probe;
        probe.theta = state.theta;
        probe.ris_mode = model.mode;
        const auto h = effective_channel(channel, probe, model.profile);
        const auto init = initial_precoders(h, config.max_power, config.scheme);
        state.w_c = init.w_c;
        state.w = init.w;
    }
    state.ris_mode = RisMode::practical;

    AoResult out;
    if (config.scheme == Scheme::noma)
    {
        BeamformingState probe = state;
        probe.ris_mode = model.mode;
        out.noma_order = gain_ordered_decoding(effective_channel(channel, probe, model.profile));
    }
    const Evaluator eval(channel, truth, model, config.scheme, out.noma_order);

    auto record = [&](int iteration, const BeamformingState &s, double model_rate, const AdmmResult *admm) {
        const auto r = eval.truth(s);
        AoTraceEntry e;
        e.iteration = iteration;
        e.sum_rate = r.sum_rate;
        e.model_sum_rate = model_rate;
        e.rate_c = r.rate_c;
        e.rate_p = r.rate_p;
        e.common_power = s.common_power();
        if (admm)
        {
            e.admm_residual = admm->primal_residual;
            e.admm_iterations = admm->iterations;
        }
        out.trace.entries.push_back(std::move(e));
    };

    PrecoderProblem pp;
    pp.sigma_sq = channel.noise_power;
    pp.impairments = model.impairments;
    pp.max_power = config.max_power;
    pp.gamma_th = config.gamma_th;
    pp.enforce_qos = config.enforce_qos;
    pp.scheme = config.scheme;
    pp.noma_order = out.noma_order;

    PhaseProblem php;
    php.channel = &channel;
    php.impairments = model.impairments;
    php.profile = model.profile;
    php.ris_mode = model.mode;
    php.gamma_th = config.gamma_th;
    php.enforce_qos = config.enforce_qos;
    php.scheme = config.scheme;
    php.noma_order = out.noma_order;

    auto feasible = [&](const RateReport &r) {
        return !config.enforce_qos || qos_margin(r, config.scheme, config.gamma_th) >= 0.0;
    };

    auto model_channels = [&](const BeamformingState &s) {
        BeamformingState probe = s;
        probe.ris_mode = model.mode;
        return effective_channel(channel, probe, model.profile);
    };

    // Feasibility phase: when the start violates QoS, alternate unconstrained
    // sum-rate updates until the constrained precoder loop succeeds.
    if (!feasible(eval.model(state)))
    {
        pp.h = model_channels(state);
        auto loop = precoder_fp_loop(pp, state, config.precoder);
        PrecoderProblem relaxed = pp;
        relaxed.enforce_qos = false;
        PhaseProblem relaxed_phase = php;
        relaxed_phase.enforce_qos = false;
        for (int it = 0; it < config.max_outer_iters && loop.status == PrecoderStatus::infeasible_qos; ++it)
        {
            relaxed.h = model_channels(state);
            const auto free_loop = precoder_fp_loop(relaxed, state, config.precoder);
            state.w_c = free_loop.state.w_c;
            state.w = free_loop.state.w;
            relaxed_phase.state = state;
            state.theta = admm_loop(relaxed_phase, state.theta, config.admm).theta;
            pp.h = model_channels(state);
            loop = precoder_fp_loop(pp, state, config.precoder);
        }
        state.w_c = loop.state.w_c;
        state.w = loop.state.w;
        if (loop.status == PrecoderStatus::infeasible_qos)
        {
            out.status = AoStatus::infeasible_qos;
            out.state = state;
            out.report = eval.truth(state);
            out.model_report = eval.model(state);
            record(0, state, out.model_report.sum_rate, nullptr);
            return out;
        }
    }

    BeamformingState previous = state;
    RateReport current = eval.model(state);
    bool have_feasible = feasible(current);
    double objective = have_feasible ? current.sum_rate : -std::numeric_limits<double>::infinity();
    record(0, state, current.sum_rate, nullptr);

    for (int it = 1; it <= config.max_outer_iters; ++it)
    {
        const double before = objective;
        const BeamformingState state_before = state;

        pp.h = model_channels(state);
        const auto loop = precoder_fp_loop(pp, state, config.precoder);
        if (loop.status == PrecoderStatus::infeasible_qos)
        {
            if (!have_feasible)
            {
                out.status = AoStatus::infeasible_qos;
                out.state = state;
                out.state.w_c = loop.state.w_c;
                out.state.w = loop.state.w;
                out.iterations = it;
                out.report = eval.truth(out.state);
                out.model_report = eval.model(out.state);
                return out;
            }
        }
        else
        {
            BeamformingState candidate = state;
            candidate.w_c = loop.state.w_c;
            candidate.w = loop.state.w;
            const auto r = eval.model(candidate);
            if (feasible(r) && (!have_feasible || r.sum_rate >= objective))
            {
                state = std::move(candidate);
                objective = r.sum_rate;
                have_feasible = true;
            }
        }

        php.state = state;
        const auto admm = admm_loop(php, state.theta, config.admm);
        if (admm.feasible)
        {
            BeamformingState candidate = state;
            candidate.theta = admm.theta;
            const auto r = eval.model(candidate);
            if (feasible(r) && r.sum_rate >= objective)
            {
                state = std::move(candidate);
                objective = r.sum_rate;
            }
        }
        if (config.extrapolation && it > 1)
        {
            for (double factor : {4.0, 2.0, 1.0})
            {
                BeamformingState candidate = extrapolate(previous, state, factor, config.max_power);
                const auto r = eval.model(candidate);
                if (feasible(r) && r.sum_rate > objective)
                {
                    state = std::move(candidate);
                    objective = r.sum_rate;
                    break;
                }
            }
        }
        previous = state_before;
        record(it, state, objective, &admm);
        out.iterations = it;
        if (std::abs(objective - before) < config.outer_tolerance)
        {
            out.converged = true;
            break;
        }
    }

    out.state = state;
    out.report = eval.truth(state);
    out.model_report = eval.model(state);
    return out;
}

AoResult run_baseline(const ChannelRealization &channel, const HardwareModel &truth, const AoConfig &config,
                      std::uint64_t seed)
{
    auto result = run_ao(channel, truth, config, seed);
    if (result.status == AoStatus::infeasible_qos && config.enforce_qos)
    {
        AoConfig relaxed = config;
        relaxed.enforce_qos = false;
        result = run_ao(channel, truth, relaxed, seed);
        result.best_effort = true;
    }
    return result;
}

AoResult run_multistart(const ChannelRealization &channel, const HardwareModel &truth, const AoConfig &config,
                        std::uint64_t seed, const std::vector<BeamformingState> &warm_starts)
{
    AoResult best = run_baseline(channel, truth, config, seed);
    for (const auto &start : warm_starts)
    {
        AoConfig cfg = config;
        cfg.warm_start = start;
        auto candidate = run_baseline(channel, truth, cfg, seed);
        const bool better_status = best.best_effort && !candidate.best_effort;
        const bool same_status = best.best_effort == candidate.best_effort;
        if (better_status || (same_status && candidate.model_report.sum_rate > best.model_report.sum_rate))
            best = std::move(candidate);
    }
    return best;
}

BeamformingState multicast_start(const ChannelRealization &channel, const HardwareModel &truth,
                                 const ModelFlags &flags, const BeamformingState &base, double max_power)
{
    const auto model = optimizer_model(truth, flags);
    BeamformingState s = base;
    s.ris_mode = model.mode;
    const auto h = effective_channel(channel, s, model.profile);
    CMat a = CMat::Zero(s.w_c.size(), s.w_c.size());
    for (std::size_t k = 0; k < h.size(); ++k)
        a += h[k] * h[k].adjoint() / channel.noise_power[k];
    Eigen::SelfAdjointEigenSolver<CMat> eig(a);
    s.w_c = std::sqrt(0.98 * max_power) * eig.eigenvectors().col(a.cols() - 1);
    for (auto &w : s.w)
        w *= 0.1;
    s.ris_mode = base.ris_mode;
    return s;
}

double common_stream_share(const BeamformingState &state)
{
    const double total = state.total_power();
    return total > 0.0 ? state.common_power() / total : 0.0;
}

double sum_rate_upper_bound(const ChannelRealization &channel, const BeamformingState &state,
                            const RisHardwareProfile &profile, double max_power)
{
    const auto h = effective_channel(channel, state, profile);
    double snr = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k)
        snr = std::max(snr, max_power * h[k].squaredNorm() / channel.noise_power[k]);
    return static_cast<double>(h.size() + 1) * std::log2(1.0 + snr);
}

} // namespace risrsma
