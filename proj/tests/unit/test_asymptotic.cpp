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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "risrsma/asymptotic.hpp"

using namespace risrsma;
using Catch::Approx;

namespace {

AsymptoticScenario scenario(int n, double bmin = 0.2, double alpha = 1.6)
{
    AsymptoticScenario s;
    s.elements = n;
    s.profile = RisHardwareProfile(bmin, 0.43 * pi, alpha);
    return s;
}

// E[beta^2] and E[beta] under uniform theta by a dense midpoint rule.
std::pair<double, double> amplitude_moments(const RisHardwareProfile &p)
{
    const int nodes = 1 << 20;
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < nodes; ++i)
    {
        const double b = amplitude(p, -pi + 2.0 * pi * (i + 0.5) / nodes);
        m1 += b;
        m2 += b * b;
    }
    return {m1 / nodes, m2 / nodes};
}

} // namespace

TEST_CASE("ideal asymptotic SNR", "[asymptotic]")
{
    CHECK(ideal_asymptotic_snr(scenario(1)) == Approx(1.0).epsilon(1e-15));
    CHECK(ideal_asymptotic_snr(scenario(16)) == Approx((256.0 * pi * pi + 16.0 * (16.0 - pi * pi)) / 16.0));
    auto s = scenario(16);
    s.snr_budget = 2.0;
    CHECK(ideal_asymptotic_snr(s) == Approx(2.0 * ideal_asymptotic_snr(scenario(16))));
    s.elements = 0;
    CHECK_THROWS_AS(ideal_asymptotic_snr(s), std::invalid_argument);
}

TEST_CASE("eta ratio", "[asymptotic]")
{
    CHECK(eta_ratio(scenario(16, 1.0)) == 1.0);
    CHECK(eta_ratio(scenario(16, 0.2, 0.0)) == Approx(1.0).epsilon(1e-15));
    const auto [m1, m2] = amplitude_moments(RisHardwareProfile::reference());
    CHECK(eta_ratio(scenario(16)) == Approx(m1 * m1).epsilon(0.02));
    for (int a = 0; a <= 12; ++a)
        for (int b = 0; b <= 10; ++b)
        {
            const double alpha = 0.25 * a, bmin = 0.1 * b;
            REQUIRE(eta_ratio(scenario(16, bmin, alpha)) <= 1.0 + 1e-12);
            REQUIRE(eta_ratio_finite_n(scenario(16, bmin, alpha)) <= 1.0 + 1e-12);
        }
}

TEST_CASE("eta is nondecreasing in beta_min", "[asymptotic]")
{
    for (double alpha : {0.5, 1.0, 1.6, 3.0})
    {
        double prev = 0.0;
        for (int b = 0; b <= 20; ++b)
        {
            const double e = eta_ratio(scenario(64, 0.05 * b, alpha));
            REQUIRE(e >= prev);
            prev = e;
        }
    }
}

TEST_CASE("finite-N eta", "[asymptotic]")
{
    for (int n : {1, 16, 256})
        CHECK(eta_ratio_finite_n(scenario(n, 1.0)) == Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(eta_ratio_finite_n(scenario(1000000)) - eta_ratio(scenario(1000000))) < 1e-4);
}

TEST_CASE("Monte Carlo: unit amplitudes reproduce the ideal SNR", "[asymptotic]")
{
    for (int n : {4, 16})
    {
        const auto e = practical_asymptotic_snr_mc(scenario(n, 1.0), 40000, 5);
        CHECK(std::abs(e.practical - ideal_asymptotic_snr(scenario(n))) <= 3.0 * e.practical_stderr);
        CHECK(e.practical == e.ideal);
    }
}

TEST_CASE("Monte Carlo: one element", "[asymptotic]")
{
    // theta* is uniform and independent of |f||g|, so the mean is E|f|^2 E|g|^2 E[beta^2]
    const auto [m1, m2] = amplitude_moments(RisHardwareProfile::reference());
    const auto e = practical_asymptotic_snr_mc(scenario(1), 200000, 6);
    CHECK(std::abs(e.practical - m2) <= 3.0 * e.practical_stderr);
}

TEST_CASE("Monte Carlo ratio tracks finite-N eta and respects the bounds", "[asymptotic]")
{
    for (int n : {8, 16, 32, 64})
    {
        const auto s = scenario(n);
        const auto e = practical_asymptotic_snr_mc(s, 20000, 7);
        const double ideal = ideal_asymptotic_snr(s);
        CHECK(e.practical / ideal == Approx(eta_ratio_finite_n(s)).epsilon(0.03));
        CHECK(e.practical <= ideal + 3.0 * e.practical_stderr);
        CHECK(e.practical >= 0.04 * ideal - 3.0 * e.practical_stderr);
    }
}

TEST_CASE("Monte Carlo is reproducible across worker counts", "[asymptotic]")
{
    const auto a = practical_asymptotic_snr_mc(scenario(16), 5000, 9, 1);
    const auto b = practical_asymptotic_snr_mc(scenario(16), 5000, 9, 2);
    CHECK(a.practical == b.practical);
    CHECK(a.practical_stderr == b.practical_stderr);
    CHECK_THROWS_AS(practical_asymptotic_snr_mc(scenario(16), 0, 9), std::invalid_argument);
}

TEST_CASE("correlated channels stay below the ideal curve", "[asymptotic]")
{
    auto s = scenario(32);
    s.correlation = 0.7;
    const auto e = practical_asymptotic_snr_mc(s, 20000, 10);
    CHECK(e.practical <= e.ideal);
    CHECK(e.practical / e.ideal == Approx(eta_ratio_finite_n(scenario(32))).epsilon(0.05));
}
