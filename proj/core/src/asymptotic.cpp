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

#include "risrsma/asymptotic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "risrsma/channel.hpp"
#include "risrsma/parallel.hpp"

namespace risrsma {

namespace {

constexpr std::size_t chunk_trials = 1000;

struct Moments
{
    double sum_p = 0.0, sum_p2 = 0.0, sum_i = 0.0, sum_i2 = 0.0;
};

} // namespace

void AsymptoticScenario::validate() const
{
    if (elements < 1)
        throw std::invalid_argument("N must be >= 1");
    if (!(tau_f_sq > 0.0) || !(tau_g_sq > 0.0))
        throw std::invalid_argument("channel variances must be positive");
    if (!(snr_budget > 0.0))
        throw std::invalid_argument("SNR budget must be positive");
    if (taylor_order < 1)
        throw std::invalid_argument("Taylor order must be >= 1");
}

double ideal_asymptotic_snr(const AsymptoticScenario &s)
{
    s.validate();
    const double n = s.elements;
    return s.tau_f_sq * s.tau_g_sq * s.snr_budget / 16.0 * (n * n * pi * pi + n * (16.0 - pi * pi));
}

double eta_ratio(const AsymptoticScenario &s)
{
    s.validate();
    const double m = taylor_mean_beta(s.profile, s.taylor_order);
    return m * m;
}

double eta_ratio_finite_n(const AsymptoticScenario &s)
{
    s.validate();
    const double m = taylor_mean_beta(s.profile, s.taylor_order);
    const double m2 = taylor_mean_beta_sq(s.profile, s.taylor_order);
    const double n = s.elements;
    const double pi2 = pi * pi;
    return (pi2 * m * m + (16.0 * m2 - pi2 * m * m) / n) / (pi2 + (16.0 - pi2) / n);
}

SnrEstimate practical_asymptotic_snr_mc(const AsymptoticScenario &s, std::size_t trials, std::uint64_t seed,
                                        unsigned workers)
{
    s.validate();
    if (trials < 1)
        throw std::invalid_argument("need at least one Monte Carlo trial");

    const std::size_t chunks = (trials + chunk_trials - 1) / chunk_trials;
    std::vector<Moments> partial(chunks);
    const double tau_f = std::sqrt(s.tau_f_sq);
    const double tau_g = std::sqrt(s.tau_g_sq);

    parallel_for(chunks, workers, [&](std::size_t c) {
        const std::size_t begin = c * chunk_trials;
        const std::size_t end = std::min(trials, begin + chunk_trials);
        Moments m;
        for (std::size_t t = begin; t < end; ++t)
        {
            const auto [f, g] = draw_iid_pair(s.elements, tau_f, tau_g,
                                              derive_seed(seed, static_cast<std::uint64_t>(s.elements), t),
                                              s.correlation);
            double coherent_p = 0.0;
            double coherent_i = 0.0;
            for (Eigen::Index n = 0; n < f.size(); ++n)
            {
                const double gain = std::abs(f(n)) * std::abs(g(n));
                const double theta = -std::arg(std::conj(f(n)) * g(n));
                coherent_p += gain * amplitude(s.profile, theta);
                coherent_i += gain;
            }
            const double xp = coherent_p * coherent_p * s.snr_budget;
            const double xi = coherent_i * coherent_i * s.snr_budget;
            m.sum_p += xp;
            m.sum_p2 += xp * xp;
            m.sum_i += xi;
            m.sum_i2 += xi * xi;
        }
        partial[c] = m;
    });

    Moments total;
    for (const auto &m : partial)
    {
        total.sum_p += m.sum_p;
        total.sum_p2 += m.sum_p2;
        total.sum_i += m.sum_i;
        total.sum_i2 += m.sum_i2;
    }
    const double n = static_cast<double>(trials);
    auto stderr_of = [n](double sum, double sum2) {
        if (n < 2.0)
            return 0.0;
        const double mean = sum / n;
        const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
        return std::sqrt(var / n);
    };
    SnrEstimate e;
    e.trials = trials;
    e.practical = total.sum_p / n;
    e.practical_stderr = stderr_of(total.sum_p, total.sum_p2);
    e.ideal = total.sum_i / n;
    e.ideal_stderr = stderr_of(total.sum_i, total.sum_i2);
    return e;
}

} // namespace risrsma
