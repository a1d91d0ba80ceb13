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

#include <cstdint>
#include <random>
#include <vector>

#include "risrsma/channel.hpp"
#include "risrsma/rate_model.hpp"

namespace risrsma::test {

inline CVec random_cvec(std::mt19937_64 &rng, int n, double scale = 1.0)
{
    std::normal_distribution<double> d(0.0, scale / std::sqrt(2.0));
    CVec v(n);
    for (int i = 0; i < n; ++i)
        v(i) = cplx(d(rng), d(rng));
    return v;
}

inline PhaseVector random_phases(std::mt19937_64 &rng, int n)
{
    std::uniform_real_distribution<double> u(-pi, pi);
    std::vector<double> t(n);
    for (auto &x : t)
        x = u(rng);
    return PhaseVector(t);
}

// Precoders scaled to total power `power`; w_c dropped unless `common`.
inline BeamformingState random_state(std::mt19937_64 &rng, int users, int antennas, int elements, double power,
                                     bool common = true)
{
    BeamformingState s;
    s.w_c = common ? random_cvec(rng, antennas) : CVec::Zero(antennas);
    for (int k = 0; k < users; ++k)
        s.w.push_back(random_cvec(rng, antennas));
    const double scale = std::sqrt(power / s.total_power());
    s.w_c *= scale;
    for (auto &w : s.w)
        w *= scale;
    s.theta = random_phases(rng, elements);
    return s;
}

// Unit-variance channel with noise 1, handy for dimensionless checks.
inline ChannelRealization unit_channel(std::mt19937_64 &rng, int users, int antennas, int elements, double noise = 1.0)
{
    ChannelRealization c;
    c.G.resize(elements, antennas);
    for (int m = 0; m < antennas; ++m)
        c.G.col(m) = random_cvec(rng, elements);
    for (int k = 0; k < users; ++k)
    {
        c.f.push_back(random_cvec(rng, elements));
        c.noise_power.push_back(noise);
        c.user_positions.push_back(Point3::Zero());
    }
    return c;
}

inline ChannelRealization reference_channel(std::uint64_t seed, int users = 2, int antennas = 8, int elements = 16)
{
    ScenarioGeometry g;
    g.users = users;
    g.bs_antennas = antennas;
    g.ris_elements = elements;
    return draw_channel(g, FadingSpec::rician(), dbm_to_watt(-110.0), seed);
}

} // namespace risrsma::test
