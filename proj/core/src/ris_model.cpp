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

#include "risrsma/ris_model.hpp"

#include <cmath>
#include <stdexcept>

namespace risrsma {

namespace {

// prod_{t=0}^{n-1} (alpha - t)
double falling_factorial(double alpha, int n)
{
    double p = 1.0;
    for (int t = 0; t < n; ++t)
        p *= alpha - t;
    return p;
}

double factorial(int n)
{
    double f = 1.0;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// 1 + sum_{k=1}^{floor(S/2)} prod_{t=0}^{2k-1}(alpha - t) / (2^{2k} (k!)^2)
double mean_of_power_series(double alpha, int order)
{
    double b = 1.0;
    for (int k = 1; k <= order / 2; ++k)
        b += falling_factorial(alpha, 2 * k) / (std::pow(4.0, k) * factorial(k) * factorial(k));
    return b;
}

void check_order(int order)
{
    if (order < 1)
        throw std::invalid_argument("Taylor truncation order must be >= 1");
}

} // namespace

RisHardwareProfile::RisHardwareProfile(double beta_min, double delta, double alpha)
    : beta_min_(beta_min), delta_(delta), alpha_(alpha)
{
    if (!std::isfinite(beta_min) || beta_min < 0.0 || beta_min > 1.0)
        throw std::invalid_argument("beta_min must lie in [0, 1]");
    if (!std::isfinite(delta) || delta < 0.0)
        throw std::invalid_argument("delta must be finite and >= 0");
    if (!std::isfinite(alpha) || alpha < 0.0)
        throw std::invalid_argument("alpha must be finite and >= 0");
    rho_ = (1.0 - beta_min) / std::pow(2.0, alpha);
}

RisHardwareProfile RisHardwareProfile::reference() { return {0.2, 0.43 * pi, 1.6}; }

double wrap_angle(double theta)
{
    double w = std::remainder(theta, 2.0 * pi);
    // remainder may return exactly +-pi; both are inside the closed interval
    return w;
}

PhaseVector::PhaseVector(std::vector<double> theta) : theta_(std::move(theta))
{
    for (auto &t : theta_)
    {
        if (!std::isfinite(t))
            throw std::invalid_argument("phase shifts must be finite");
        t = wrap_angle(t);
    }
}

PhaseVector::PhaseVector(const RVec &theta) : PhaseVector(std::vector<double>(theta.data(), theta.data() + theta.size())) {}

RVec PhaseVector::as_eigen() const
{
    RVec out(static_cast<Eigen::Index>(theta_.size()));
    for (std::size_t n = 0; n < theta_.size(); ++n)
        out(static_cast<Eigen::Index>(n)) = theta_[n];
    return out;
}

double amplitude(const RisHardwareProfile &profile, double theta)
{
    if (profile.rho() == 0.0)
        return 1.0;
    // sin + 1 can dip a hair below zero through rounding
    const double base = std::max(0.0, std::sin(theta - profile.delta()) + 1.0);
    const double beta = profile.rho() * std::pow(base, profile.alpha()) + profile.beta_min();
    return std::min(beta, 1.0);
}

CVec reflection_vector(const RisHardwareProfile &profile, const PhaseVector &theta)
{
    CVec phi(static_cast<Eigen::Index>(theta.size()));
    for (std::size_t n = 0; n < theta.size(); ++n)
        phi(static_cast<Eigen::Index>(n)) = std::polar(amplitude(profile, theta[n]), theta[n]);
    return phi;
}

CVec ideal_reflection_vector(const PhaseVector &theta)
{
    CVec phi(static_cast<Eigen::Index>(theta.size()));
    for (std::size_t n = 0; n < theta.size(); ++n)
        phi(static_cast<Eigen::Index>(n)) = std::polar(1.0, theta[n]);
    return phi;
}

CVec reflection_vector(RisMode mode, const RisHardwareProfile &profile, const PhaseVector &theta)
{
    return mode == RisMode::ideal ? ideal_reflection_vector(theta) : reflection_vector(profile, theta);
}

double taylor_mean_beta(const RisHardwareProfile &profile, int order)
{
    check_order(order);
    return profile.rho() * mean_of_power_series(profile.alpha(), order) + profile.beta_min();
}

double taylor_mean_beta_sq(const RisHardwareProfile &profile, int order)
{
    check_order(order);
    const double alpha = profile.alpha();
    const double delta = profile.delta();

    // Harmonic coefficients of the truncated series
    //   (1 + sin x)^alpha ~ 1 + sum_s sum_l D[s][l] exp(j (s - 2l) x),  x = theta - delta
    // folded with the delta phase so that the harmonic index is s - 2l.
    std::vector<std::vector<cplx>> d(static_cast<std::size_t>(order) + 1);
    const cplx two_j(0.0, 2.0);
    for (int s = 1; s <= order; ++s)
    {
        d[s].resize(static_cast<std::size_t>(s) + 1);
        const cplx scale = falling_factorial(alpha, s) / factorial(s) / std::pow(two_j, s);
        for (int l = 0; l <= s; ++l)
        {
            const double sign = (l % 2 == 0) ? 1.0 : -1.0;
            d[s][l] = scale * binomial(s, l) * sign * std::polar(1.0, (2 * l - s) * delta);
        }
    }

    // Average of the squared series: pairs with (s1 - 2 l1) + (s2 - 2 l2) = 0.
    cplx c(0.0, 0.0);
    for (int s1 = 1; s1 <= order; ++s1)
        for (int l1 = 0; l1 <= s1; ++l1)
            for (int s2 = 1; s2 <= order; ++s2)
                for (int l2 = 0; l2 <= s2; ++l2)
                    if (s1 - 2 * l1 == 2 * l2 - s2)
                        c += d[s1][l1] * d[s2][l2];

    if (std::abs(c.imag()) >= 1e-9)
        throw std::logic_error("second Taylor moment has a non-negligible imaginary residue");

    const double b = mean_of_power_series(alpha, order);
    const double rho = profile.rho();
    const double bmin = profile.beta_min();
    // E[X^2] = 1 + 2 (B - 1) + C with X the truncated (1 + sin)^alpha series
    const double mean_x_sq = 2.0 * b - 1.0 + c.real();
    return rho * rho * mean_x_sq + 2.0 * rho * bmin * b + bmin * bmin;
}

} // namespace risrsma
