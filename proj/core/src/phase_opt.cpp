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

#include "risrsma/phase_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace risrsma {

namespace {

CMat hwi_matrix(const CMat &A, const ImpairmentProfile &imp)
{
    CMat B = imp.m_r * A;
    B.diagonal() += imp.m_t * (1.0 + imp.m_r) * A.diagonal();
    return B;
}

CMat lambda_matrix(const ChannelRealization &channel, int user)
{
    return channel.G.adjoint() * channel.f[user].asDiagonal();
}

void check_dimensions(const ChannelRealization &channel, const BeamformingState &state)
{
    const auto M = channel.G.cols();
    if (state.w.size() != channel.f.size())
        throw std::invalid_argument("one private precoder per user is required");
    for (const auto &w : state.w)
        if (w.size() != M)
            throw std::invalid_argument("precoder length does not match BS antenna count");
    if (state.w_c.size() != 0 && state.w_c.size() != M)
        throw std::invalid_argument("common precoder length does not match BS antenna count");
}

CMat stream_covariance(const BeamformingState &state, Eigen::Index M)
{
    CMat A = CMat::Zero(M, M);
    if (state.w_c.size())
        A += state.w_c * state.w_c.adjoint();
    for (const auto &w : state.w)
        A += w * w.adjoint();
    return A;
}

} // namespace

QuadraticForms build_quadratic_forms(const ChannelRealization &channel, const BeamformingState &state,
                                     const ImpairmentProfile &impairments)
{
    check_dimensions(channel, state);
    const auto M = channel.G.cols();
    const CMat A = stream_covariance(state, M);
    CMat privates = CMat::Zero(M, M);
    for (const auto &w : state.w)
        privates += w * w.adjoint();
    const CMat base = hwi_matrix(A, impairments);
    const double d2 = impairments.delta_sic * impairments.delta_sic;

    QuadraticForms forms;
    for (std::size_t k = 0; k < state.w.size(); ++k)
    {
        const CMat L = lambda_matrix(channel, static_cast<int>(k));
        CMat Bc = base + privates;
        CMat Bp = Bc - state.w[k] * state.w[k].adjoint();
        if (state.w_c.size())
            Bp += d2 * state.w_c * state.w_c.adjoint();
        forms.P_c.push_back(L.adjoint() * Bc * L);
        forms.P_p.push_back(L.adjoint() * Bp * L);
        forms.B_c.push_back(std::move(Bc));
        forms.B_p.push_back(std::move(Bp));
        forms.Lambda.push_back(L);
    }
    return forms;
}

FpProgram PhaseProblem::program() const
{
    if (channel == nullptr)
        throw std::invalid_argument("phase problem has no channel");
    check_dimensions(*channel, state);
    impairments.validate();

    const auto lay = scheme_layout(scheme, static_cast<int>(state.w.size()), impairments.delta_sic, noma_order);
    const auto blocks = lay.blocks_of(state);
    const auto M = channel->G.cols();
    const int N = static_cast<int>(channel->G.rows());
    const CMat hwi = hwi_matrix(stream_covariance(state, M), impairments);

    FpProgram p;
    p.dim = N;
    p.streams = lay.streams;
    for (const auto &spec : lay.sinrs)
    {
        const CMat L = lambda_matrix(*channel, spec.user) / std::sqrt(channel->noise_power[spec.user]);
        CMat B = hwi;
        for (const auto &[block, coeff] : spec.interference)
            B += coeff * blocks[block] * blocks[block].adjoint();
        SinrTerm term;
        term.stream = spec.stream;
        term.numerator = L.adjoint() * blocks[spec.signal];
        term.interference = L.adjoint() * B * L;
        term.interference = 0.5 * (term.interference + term.interference.adjoint()).eval();
        term.noise = 1.0 + impairments.m_r;
        p.terms.push_back(std::move(term));
    }
    if (enforce_qos)
        for (auto &coeff : lay.qos_coefficients())
            p.qos.push_back({std::move(coeff), gamma_th});
    return p;
}

CVec PhaseProblem::reflection(const PhaseVector &theta) const { return reflection_vector(ris_mode, profile, theta); }

PhiStepResult solve_phi_step(const FpProgram &program, const std::vector<cplx> &multipliers, AdmmState &state,
                             const BarrierConfig &config)
{
    if (!(state.lambda > 0.0))
        throw std::invalid_argument("ADMM penalty must be positive");
    FpProgram aug = program;
    aug.power_budget.reset();
    aug.prox_weight = state.lambda;
    aug.prox_center = state.phi_tilde + state.nu;

    const auto step = solve_fp_step(aug, multipliers, state.phi, config);
    PhiStepResult out;
    out.status = step.status;
    if (step.status != StepStatus::ok)
        return out;
    state.phi = step.x;
    out.slacks = step.slacks;
    out.objective = step.objective;
    return out;
}

ManifoldProjector::ManifoldProjector(const RisHardwareProfile &profile, int grid_points)
    : profile_(profile), constant_(profile.is_unit_modulus())
{
    if (grid_points < 8)
        throw std::invalid_argument("projection grid needs at least 8 points");
    if (constant_)
        return;
    grid_.resize(grid_points);
    beta_cos_.resize(grid_points);
    beta_sin_.resize(grid_points);
    beta_sq_.resize(grid_points);
    for (int i = 0; i < grid_points; ++i)
    {
        const double t = -pi + 2.0 * pi * i / grid_points;
        const double b = amplitude(profile_, t);
        grid_[i] = t;
        beta_cos_[i] = b * std::cos(t);
        beta_sin_[i] = b * std::sin(t);
        beta_sq_[i] = b * b;
    }
}

double ManifoldProjector::distance(double theta, cplx target) const
{
    const double b = amplitude(profile_, theta);
    return std::norm(b * std::polar(1.0, theta) - target);
}

double ManifoldProjector::refine(double lo, double hi, cplx target) const
{
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = distance(c, target), fd = distance(d, target);
    while (b - a > 1e-13)
    {
        if (fc <= fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = distance(c, target);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = distance(d, target);
        }
    }
    return fc <= fd ? c : d;
}

double ManifoldProjector::project(cplx target) const
{
    if (constant_)
        return target == cplx(0.0) ? 0.0 : std::arg(target);
    if (target == cplx(0.0))
        return wrap_angle(profile_.delta() - 0.5 * pi);

    const int G = static_cast<int>(grid_.size());
    const double tr = target.real(), ti = target.imag();
    std::vector<double> f(G);
    for (int i = 0; i < G; ++i)
        f[i] = beta_sq_[i] - 2.0 * (tr * beta_cos_[i] + ti * beta_sin_[i]);

    std::vector<int> minima;
    for (int i = 0; i < G; ++i)
        if (f[i] <= f[(i + G - 1) % G] && f[i] <= f[(i + 1) % G])
            minima.push_back(i);
    std::sort(minima.begin(), minima.end(), [&](int a, int b) { return f[a] < f[b]; });
    if (minima.size() > 3)
        minima.resize(3);

    const double h = 2.0 * pi / G;
    double best_theta = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i : minima)
    {
        const double t = wrap_angle(refine(grid_[i] - h, grid_[i] + h, target));
        const double v = distance(t, target);
        if (v < best - 1e-12 || (std::abs(v - best) <= 1e-12 && t < best_theta))
        {
            best = std::min(best, v);
            best_theta = t;
        }
    }
    return best_theta;
}

PhaseVector ManifoldProjector::project(const CVec &target) const
{
    std::vector<double> theta(target.size());
    for (Eigen::Index n = 0; n < target.size(); ++n)
        theta[n] = project(target(n));
    return PhaseVector(std::move(theta));
}

Projection project_to_manifold(const CVec &phi, const CVec &nu, const RisHardwareProfile &profile)
{
    if (phi.size() != nu.size())
        throw std::invalid_argument("phi and nu differ in length");
    Projection out;
    out.theta = ManifoldProjector(profile).project(CVec(phi - nu));
    out.phi_tilde = reflection_vector(profile, out.theta);
    return out;
}

AdmmResult admm_loop(const PhaseProblem &problem, const PhaseVector &init, const AdmmConfig &config)
{
    if (!(config.lambda > 0.0) || config.max_iters < 0)
        throw std::invalid_argument("invalid ADMM configuration");
    const FpProgram base = problem.program();
    if (static_cast<int>(init.size()) != base.dim)
        throw std::invalid_argument("initial phases do not match the RIS size");

    const ManifoldProjector projector(problem.ris_mode == RisMode::ideal ? RisHardwareProfile(1.0, 0.0, 0.0)
                                                                          : problem.profile);
    const double tol = config.residual_tolerance * std::sqrt(static_cast<double>(base.dim));

    AdmmState s;
    s.lambda = config.lambda;
    s.phi = problem.reflection(init);
    s.phi_tilde = s.phi;
    s.nu = CVec::Zero(base.dim);

    AdmmResult out;
    out.theta = init;
    out.objective = base.objective(s.phi_tilde);
    out.feasible = base.qos.empty() || base.qos_margin(s.phi_tilde) >= 0.0;

    double previous = out.objective;
    for (int it = 1; it <= config.max_iters; ++it)
    {
        FpProgram aug = base;
        aug.prox_weight = s.lambda;
        aug.prox_center = s.phi_tilde + s.nu;
        const auto step = solve_phi_step(base, optimal_multipliers(aug, s.phi), s, config.barrier);
        if (step.status != StepStatus::ok)
            break;

        const PhaseVector theta = projector.project(CVec(s.phi - s.nu));
        const CVec next = problem.reflection(theta);
        const double dual = s.lambda * (next - s.phi_tilde).norm();
        s.phi_tilde = next;
        s.nu += s.phi_tilde - s.phi;

        const double primal = (s.phi_tilde - s.phi).norm();
        const double objective = base.objective(s.phi_tilde);
        const double margin = base.qos.empty() ? 0.0 : base.qos_margin(s.phi_tilde);
        const bool feasible = margin >= 0.0;
        if (feasible && (!out.feasible || objective > out.objective))
        {
            out.theta = theta;
            out.objective = objective;
            out.feasible = true;
        }
        out.iterations = it;
        out.primal_residual = primal;
        if (config.keep_trace)
            out.trace.push_back({it, primal, dual, objective, margin});
        if (primal < tol && std::abs(objective - previous) < config.objective_tolerance)
        {
            out.converged = true;
            break;
        }
        previous = objective;
    }
    return out;
}

void write_admm_trace_csv(std::ostream &os, const std::vector<AdmmTraceEntry> &trace)
{
    os << "iteration,primal_residual,dual_residual,objective_bps_hz,qos_margin\n";
    for (const auto &e : trace)
        os << e.iteration << ',' << e.primal_residual << ',' << e.dual_residual << ',' << e.objective << ','
           << e.qos_margin << '\n';
}

} // namespace risrsma
