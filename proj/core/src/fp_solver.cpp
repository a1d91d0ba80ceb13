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

#include "risrsma/fp_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace risrsma {

namespace {

constexpr double ninf = -std::numeric_limits<double>::infinity();

RVec to_real(const CVec &x)
{
    RVec z(2 * x.size());
    z.head(x.size()) = x.real();
    z.tail(x.size()) = x.imag();
    return z;
}

CVec to_complex(const RVec &z)
{
    const Eigen::Index n = z.size() / 2;
    CVec x(n);
    for (Eigen::Index i = 0; i < n; ++i)
        x(i) = cplx(z(i), z(n + i));
    return x;
}

// Real symmetric embedding of a Hermitian matrix: x^H Q x = z^T Qr z.
RMat to_real(const CMat &q)
{
    const Eigen::Index n = q.rows();
    RMat r(2 * n, 2 * n);
    r.topLeftCorner(n, n) = q.real();
    r.topRightCorner(n, n) = -q.imag();
    r.bottomLeftCorner(n, n) = q.imag();
    r.bottomRightCorner(n, n) = q.real();
    return r;
}

enum class Goal
{
    rate,
    margin
};

struct RealTerm
{
    int stream;
    RMat q;
    RVec lin; // [Re(mu a); Im(mu a)]
    double mu_sq;
    double noise;
};

// The barrier-augmented program in real coordinates y = [z; xi; (s)].
class BarrierModel
{
public:
    BarrierModel(const FpProgram &p, const std::vector<cplx> &mu, Goal goal) : p_(p), goal_(goal)
    {
        n2_ = 2 * p.dim;
        streams_ = p.streams;
        vars_ = n2_ + streams_ + (goal == Goal::margin ? 1 : 0);
        terms_.reserve(p.terms.size());
        for (std::size_t i = 0; i < p.terms.size(); ++i)
        {
            const auto &t = p.terms[i];
            terms_.push_back({t.stream, to_real(t.interference), to_real(CVec(mu[i] * t.numerator)), std::norm(mu[i]),
                              t.noise});
        }
        if (p.prox_weight > 0.0)
            prox_center_ = to_real(p.prox_center);
        qz_.resize(terms_.size());
        qdz_.resize(terms_.size());
        line_.resize(terms_.size());
    }

    Eigen::Index vars() const { return vars_; }
    Eigen::Index n2() const { return n2_; }
    int constraint_count() const
    {
        return static_cast<int>(terms_.size() + p_.qos.size()) + (p_.power_budget ? 1 : 0);
    }

    double qos_value(const QosRow &row, const RVec &y) const
    {
        double v = -row.threshold;
        for (int s = 0; s < streams_; ++s)
            v += row.coeff[s] * y(n2_ + s);
        if (goal_ == Goal::margin)
            v -= y(vars_ - 1);
        return v;
    }

    double objective(const RVec &y) const
    {
        if (goal_ == Goal::margin)
            return y(vars_ - 1);
        double f = 0.0;
        for (int s = 0; s < streams_; ++s)
            f += std::log1p(y(n2_ + s)) / std::numbers::ln2;
        if (p_.prox_weight > 0.0)
            f -= p_.prox_weight * (y.head(n2_) - prox_center_).squaredNorm();
        return f;
    }

    // t * objective + sum of log constraint slacks; -inf outside the domain.
    // Caches Q z of every term for derivatives() and set_direction().
    double evaluate(const RVec &y, double t)
    {
        const auto z = y.head(n2_);
        double barrier = 0.0;
        bool inside = true;
        if (goal_ == Goal::rate)
            for (int s = 0; s < streams_; ++s)
                inside = inside && y(n2_ + s) > -1.0;
        for (std::size_t i = 0; i < terms_.size(); ++i)
        {
            const auto &term = terms_[i];
            qz_[i].noalias() = term.q * z;
            const double g =
                2.0 * term.lin.dot(z) - term.mu_sq * (z.dot(qz_[i]) + term.noise) - y(n2_ + term.stream);
            inside = inside && g > 0.0;
            if (inside)
                barrier += std::log(g);
        }
        for (const auto &row : p_.qos)
        {
            const double g = qos_value(row, y);
            inside = inside && g > 0.0;
            if (inside)
                barrier += std::log(g);
        }
        if (p_.power_budget)
        {
            const double g = *p_.power_budget - z.squaredNorm();
            inside = inside && g > 0.0;
            if (inside)
                barrier += std::log(g);
        }
        return inside ? t * objective(y) + barrier : ninf;
    }

    // Gradient and Hessian at the point last passed to evaluate().
    void derivatives(const RVec &y, double t, RVec &grad, RMat &hess) const
    {
        grad.setZero(vars_);
        hess.setZero(vars_, vars_);
        const auto z = y.head(n2_);

        if (goal_ == Goal::margin)
        {
            grad(vars_ - 1) += t;
        }
        else
        {
            for (int s = 0; s < streams_; ++s)
            {
                const double d = 1.0 + y(n2_ + s);
                grad(n2_ + s) += t / (std::numbers::ln2 * d);
                hess(n2_ + s, n2_ + s) -= t / (std::numbers::ln2 * d * d);
            }
            if (p_.prox_weight > 0.0)
            {
                grad.head(n2_) -= 2.0 * t * p_.prox_weight * (z - prox_center_);
                hess.topLeftCorner(n2_, n2_).diagonal().array() -= 2.0 * t * p_.prox_weight;
            }
        }

        RVec dg(vars_);
        for (std::size_t i = 0; i < terms_.size(); ++i)
        {
            const auto &term = terms_[i];
            const double g =
                2.0 * term.lin.dot(z) - term.mu_sq * (z.dot(qz_[i]) + term.noise) - y(n2_ + term.stream);
            dg.setZero();
            dg.head(n2_) = (2.0 / g) * (term.lin - term.mu_sq * qz_[i]);
            dg(n2_ + term.stream) = -1.0 / g;
            grad += dg;
            hess.topLeftCorner(n2_, n2_) -= (2.0 * term.mu_sq / g) * term.q;
            hess.noalias() -= dg * dg.transpose();
        }
        for (const auto &row : p_.qos)
        {
            const double g = qos_value(row, y);
            dg.setZero();
            for (int s = 0; s < streams_; ++s)
                dg(n2_ + s) = row.coeff[s] / g;
            if (goal_ == Goal::margin)
                dg(vars_ - 1) = -1.0 / g;
            grad += dg;
            hess.noalias() -= dg * dg.transpose();
        }
        if (p_.power_budget)
        {
            const double g = *p_.power_budget - z.squaredNorm();
            dg.setZero();
            dg.head(n2_) = (-2.0 / g) * z;
            grad += dg;
            hess.topLeftCorner(n2_, n2_).diagonal().array() -= 2.0 / g;
            hess.noalias() -= dg * dg.transpose();
        }
    }

    // Every constraint and the objective are at most quadratic in the step,
    // so the line search only needs these coefficients.
    void set_direction(const RVec &y, const RVec &dy)
    {
        y_ = y;
        dy_ = dy;
        const auto z = y.head(n2_);
        const auto dz = dy.head(n2_);
        for (std::size_t i = 0; i < terms_.size(); ++i)
        {
            const auto &term = terms_[i];
            qdz_[i].noalias() = term.q * dz;
            auto &c = line_[i];
            c[0] = 2.0 * term.lin.dot(z) - term.mu_sq * (z.dot(qz_[i]) + term.noise) - y(n2_ + term.stream);
            c[1] = 2.0 * term.lin.dot(dz) - 2.0 * term.mu_sq * z.dot(qdz_[i]) - dy(n2_ + term.stream);
            c[2] = -term.mu_sq * dz.dot(qdz_[i]);
        }
        zz_ = z.squaredNorm();
        zdz_ = z.dot(dz);
        dzdz_ = dz.squaredNorm();
        if (p_.prox_weight > 0.0)
        {
            const RVec r = z - prox_center_;
            rr_ = r.squaredNorm();
            rdz_ = r.dot(dz);
        }
    }

    double value_along(double step, double t) const
    {
        double barrier = 0.0;
        for (const auto &c : line_)
        {
            const double g = c[0] + step * (c[1] + step * c[2]);
            if (!(g > 0.0))
                return ninf;
            barrier += std::log(g);
        }
        const RVec y = y_ + step * dy_;
        for (const auto &row : p_.qos)
        {
            const double g = qos_value(row, y);
            if (!(g > 0.0))
                return ninf;
            barrier += std::log(g);
        }
        if (p_.power_budget)
        {
            const double g = *p_.power_budget - (zz_ + step * (2.0 * zdz_ + step * dzdz_));
            if (!(g > 0.0))
                return ninf;
            barrier += std::log(g);
        }
        double f = 0.0;
        if (goal_ == Goal::margin)
        {
            f = y(vars_ - 1);
        }
        else
        {
            for (int s = 0; s < streams_; ++s)
            {
                if (!(y(n2_ + s) > -1.0))
                    return ninf;
                f += std::log1p(y(n2_ + s)) / std::numbers::ln2;
            }
            if (p_.prox_weight > 0.0)
                f -= p_.prox_weight * (rr_ + step * (2.0 * rdz_ + step * dzdz_));
        }
        return t * f + barrier;
    }

private:
    const FpProgram &p_;
    Goal goal_;
    Eigen::Index n2_ = 0;
    int streams_ = 0;
    Eigen::Index vars_ = 0;
    std::vector<RealTerm> terms_;
    RVec prox_center_;

    std::vector<RVec> qz_;
    std::vector<RVec> qdz_;
    std::vector<std::array<double, 3>> line_;
    RVec y_, dy_;
    double zz_ = 0.0, zdz_ = 0.0, dzdz_ = 0.0, rr_ = 0.0, rdz_ = 0.0;
};

// Damped Newton on the barrier function for an increasing sequence of t.
// `stop` is checked after every centering stage.
template <typename Stop>
int run_barrier(BarrierModel &model, RVec &y, const BarrierConfig &cfg, Stop stop)
{
    const int m = model.constraint_count();
    double t = cfg.initial_t;
    int steps = 0;
    RVec grad;
    RMat hess;
    Eigen::LDLT<RMat> ldlt(model.vars());
    for (;;)
    {
        for (int it = 0; it < cfg.max_newton_per_stage; ++it)
        {
            const double f0 = model.evaluate(y, t);
            if (!std::isfinite(f0))
                break;
            model.derivatives(y, t, grad, hess);
            hess = -hess;
            const double ridge = 1e-14 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
            hess.diagonal().array() += ridge;
            ldlt.compute(hess);
            const RVec dy = ldlt.solve(grad);
            if (!dy.allFinite())
                break;
            const double decrement = grad.dot(dy);
            if (!(decrement > 2.0 * cfg.newton_tolerance))
                break;
            model.set_direction(y, dy);
            double step = 1.0;
            bool moved = false;
            // The line value uses cached quadratic coefficients; the direct
            // evaluation confirms the trial point is strictly interior.
            while (step > 1e-14)
            {
                if (model.value_along(step, t) >= f0 + 0.25 * step * decrement &&
                    std::isfinite(model.evaluate(RVec(y + step * dy), t)))
                {
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            ++steps;
            if (!moved)
                break;
            y += step * dy;
        }
        if (stop(y))
            break;
        if (m / t < cfg.gap_tolerance)
            break;
        t *= cfg.t_growth;
    }
    return steps;
}

RVec interior_power_point(const FpProgram &p, const CVec &x0)
{
    RVec z = to_real(x0);
    if (p.power_budget)
    {
        const double cap = *p.power_budget * (1.0 - 1e-12);
        const double norm2 = z.squaredNorm();
        if (norm2 >= cap)
            z *= std::sqrt(cap / norm2) * (1.0 - 1e-12);
    }
    return z;
}

void check_multipliers(const FpProgram &p, const std::vector<cplx> &mu, const CVec &x0)
{
    if (mu.size() != p.terms.size())
        throw std::invalid_argument("one multiplier per SINR term is required");
    if (x0.size() != p.dim)
        throw std::invalid_argument("warm start has the wrong dimension");
}

} // namespace

void FpProgram::validate() const
{
    if (dim < 1 || streams < 1)
        throw std::invalid_argument("program needs a positive dimension and at least one stream");
    for (const auto &t : terms)
    {
        if (t.stream < 0 || t.stream >= streams)
            throw std::invalid_argument("SINR term refers to an unknown stream");
        if (t.numerator.size() != dim || t.interference.rows() != dim || t.interference.cols() != dim)
            throw std::invalid_argument("SINR term dimensions do not match the program");
        if (!(t.noise > 0.0))
            throw std::invalid_argument("SINR term noise must be positive");
    }
    for (const auto &row : qos)
        if (static_cast<int>(row.coeff.size()) != streams)
            throw std::invalid_argument("QoS row needs one coefficient per stream");
    if (prox_weight > 0.0 && prox_center.size() != dim)
        throw std::invalid_argument("proximal center has the wrong dimension");
    if (power_budget && !(*power_budget > 0.0))
        throw std::invalid_argument("power budget must be positive");
}

double FpProgram::sinr(std::size_t term, const CVec &x) const
{
    const auto &t = terms[term];
    const double den = std::real(x.dot(t.interference * x)) + t.noise;
    return std::norm(t.numerator.dot(x)) / den;
}

RVec FpProgram::stream_sinrs(const CVec &x) const
{
    RVec out = RVec::Constant(streams, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < terms.size(); ++i)
        out(terms[i].stream) = std::min(out(terms[i].stream), sinr(i, x));
    return out;
}

double FpProgram::objective(const CVec &x) const
{
    const RVec g = stream_sinrs(x);
    double f = 0.0;
    for (int s = 0; s < streams; ++s)
        f += std::log2(1.0 + g(s));
    if (prox_weight > 0.0)
        f -= prox_weight * (x - prox_center).squaredNorm();
    return f;
}

double FpProgram::qos_margin(const CVec &x) const
{
    if (qos.empty())
        return std::numeric_limits<double>::infinity();
    const RVec g = stream_sinrs(x);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto &row : qos)
    {
        double v = -row.threshold;
        for (int s = 0; s < streams; ++s)
            v += row.coeff[s] * g(s);
        margin = std::min(margin, v);
    }
    return margin;
}

cplx optimal_multiplier(const SinrTerm &term, const CVec &x)
{
    const double den = std::real(x.dot(term.interference * x)) + term.noise;
    return term.numerator.dot(x) / den;
}

std::vector<cplx> optimal_multipliers(const FpProgram &program, const CVec &x)
{
    std::vector<cplx> mu;
    mu.reserve(program.terms.size());
    for (const auto &t : program.terms)
        mu.push_back(optimal_multiplier(t, x));
    return mu;
}

double surrogate(const SinrTerm &term, cplx mu, const CVec &x)
{
    const double den = std::real(x.dot(term.interference * x)) + term.noise;
    return 2.0 * std::real(std::conj(mu) * term.numerator.dot(x)) - std::norm(mu) * den;
}

FpStepResult solve_fp_step(const FpProgram &program, const std::vector<cplx> &multipliers, const CVec &x0,
                           const BarrierConfig &config)
{
    program.validate();
    check_multipliers(program, multipliers, x0);
    BarrierModel model(program, multipliers, Goal::rate);

    RVec y(model.vars());
    y.head(model.n2()) = interior_power_point(program, x0);
    const CVec xs = to_complex(RVec(y.head(model.n2())));

    RVec lowest = RVec::Constant(program.streams, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < program.terms.size(); ++i)
    {
        const auto &t = program.terms[i];
        lowest(t.stream) = std::min(lowest(t.stream), surrogate(t, multipliers[i], xs));
    }

    FpStepResult result;
    for (int s = 0; s < program.streams; ++s)
    {
        const double xi = lowest(s) - config.slack_offset * (1.0 + std::abs(lowest(s)));
        if (!(xi > -1.0))
        {
            result.status = StepStatus::infeasible;
            break;
        }
        y(model.n2() + s) = xi;
    }
    if (result.status == StepStatus::ok && !std::isfinite(model.evaluate(y, 1.0)))
        result.status = StepStatus::infeasible;
    if (result.status == StepStatus::infeasible)
    {
        result.x = x0;
        return result;
    }

    result.newton_steps = run_barrier(model, y, config, [](const RVec &) { return false; });
    result.x = to_complex(RVec(y.head(model.n2())));
    result.slacks = y.segment(model.n2(), program.streams);
    result.objective = model.objective(y);
    return result;
}

QosSearchResult maximize_qos_margin(const FpProgram &program, const std::vector<cplx> &multipliers, const CVec &x0,
                                    double target, const BarrierConfig &config)
{
    program.validate();
    check_multipliers(program, multipliers, x0);
    if (program.qos.empty())
        throw std::invalid_argument("QoS margin search needs at least one QoS row");
    BarrierModel model(program, multipliers, Goal::margin);

    RVec y(model.vars());
    y.head(model.n2()) = interior_power_point(program, x0);
    const CVec xs = to_complex(RVec(y.head(model.n2())));
    RVec lowest = RVec::Constant(program.streams, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < program.terms.size(); ++i)
    {
        const auto &t = program.terms[i];
        lowest(t.stream) = std::min(lowest(t.stream), surrogate(t, multipliers[i], xs));
    }
    for (int s = 0; s < program.streams; ++s)
        y(model.n2() + s) = lowest(s) - 1.0;
    y(model.vars() - 1) = 0.0;
    double margin = std::numeric_limits<double>::infinity();
    for (const auto &row : program.qos)
        margin = std::min(margin, model.qos_value(row, y));
    y(model.vars() - 1) = margin - 1.0;

    QosSearchResult result;
    result.newton_steps = run_barrier(model, y, config, [&](const RVec &v) { return v(v.size() - 1) > target; });
    result.x = to_complex(RVec(y.head(model.n2())));
    result.margin = y(model.vars() - 1);
    return result;
}

} // namespace risrsma
