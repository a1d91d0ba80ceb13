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

#include <span>
#include <vector>

#include "risrsma/types.hpp"

namespace risrsma {

/// Circuit constants of a practical RIS element whose reflection amplitude
/// depends on the applied phase shift:
///
///     beta(theta) = rho * (sin(theta - delta) + 1)^alpha + beta_min,
///     rho = (1 - beta_min) / 2^alpha.
///
/// beta_min = 1 or alpha = 0 recover the unit-modulus (ideal) element.
class RisHardwareProfile
{
public:
    /// Throws std::invalid_argument when beta_min is outside [0, 1] or when
    /// alpha / delta are negative or non-finite.
    RisHardwareProfile(double beta_min, double delta, double alpha);

    /// beta_min = 0.2, delta = 0.43 pi, alpha = 1.6
    static RisHardwareProfile reference();

    double beta_min() const { return beta_min_; }
    double delta() const { return delta_; }
    double alpha() const { return alpha_; }
    double rho() const { return rho_; }

    // True when the amplitude is constant (and equal to one) for every phase.
    bool is_unit_modulus() const { return rho_ == 0.0 || alpha_ == 0.0; }

private:
    double beta_min_;
    double delta_;
    double alpha_;
    double rho_;
};

enum class RisMode
{
    ideal,
    practical
};

/// N phase shifts, canonicalized into [-pi, pi] on construction.
class PhaseVector
{
public:
    PhaseVector() = default;
    explicit PhaseVector(std::vector<double> theta);
    explicit PhaseVector(const RVec &theta);

    std::size_t size() const { return theta_.size(); }
    double operator[](std::size_t n) const { return theta_[n]; }
    std::span<const double> values() const { return theta_; }
    RVec as_eigen() const;

private:
    std::vector<double> theta_;
};

/// Wraps any real angle into [-pi, pi].
double wrap_angle(double theta);

/// Reflection amplitude of one element at phase theta (any real angle).
double amplitude(const RisHardwareProfile &profile, double theta);

/// phi_n = beta(theta_n) exp(j theta_n)
CVec reflection_vector(const RisHardwareProfile &profile, const PhaseVector &theta);

/// phi_n = exp(j theta_n)
CVec ideal_reflection_vector(const PhaseVector &theta);

CVec reflection_vector(RisMode mode, const RisHardwareProfile &profile, const PhaseVector &theta);

/// E[beta] for theta ~ U[0, 2 pi) using the order-S Taylor expansion of
/// (1 + sin)^alpha. Requires S >= 1.
double taylor_mean_beta(const RisHardwareProfile &profile, int order = 5);

/// E[beta^2] for theta ~ U[0, 2 pi) using the same order-S expansion. The
/// squared series is averaged term by term: only pairs of harmonics whose
/// exponents cancel survive. Requires S >= 1.
double taylor_mean_beta_sq(const RisHardwareProfile &profile, int order = 5);

} // namespace risrsma
