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

#include "risrsma/ris_model.hpp"

using namespace risrsma;
using Catch::Approx;

namespace {

const RisHardwareProfile ref = RisHardwareProfile::reference();

// Generalized binomial coefficient C(alpha, s).
double gbinom(double alpha, int s)
{
    double c = 1.0;
    for (int t = 0; t < s; ++t)
        c *= (alpha - t) / (t + 1);
    return c;
}

// Truncated series X_S(x) = sum_{s<=S} C(alpha,s) sin^s(x); its moments are
// trigonometric polynomials, so a uniform rule with enough nodes is exact.
std::pair<double, double> truncated_moments(const RisHardwareProfile &p, int order)
{
    const int nodes = 4096;
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < nodes; ++i)
    {
        const double u = std::sin(2.0 * pi * i / nodes);
        double x = 0.0, pw = 1.0;
        for (int s = 0; s <= order; ++s, pw *= u)
            x += gbinom(p.alpha(), s) * pw;
        const double b = p.rho() * x + p.beta_min();
        m1 += b;
        m2 += b * b;
    }
    return {m1 / nodes, m2 / nodes};
}

std::pair<double, double> mc_moments(const RisHardwareProfile &p, int draws, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < draws; ++i)
    {
        const double b = amplitude(p, u(rng));
        m1 += b;
        m2 += b * b;
    }
    return {m1 / draws, m2 / draws};
}

} // namespace

TEST_CASE("profile derives rho and rejects invalid fields", "[ris_model]")
{
    CHECK(ref.rho() == (1.0 - 0.2) / std::pow(2.0, 1.6));
    CHECK_THROWS_AS(RisHardwareProfile(-0.1, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RisHardwareProfile(1.1, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RisHardwareProfile(0.2, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RisHardwareProfile(0.2, 0.0, -0.5), std::invalid_argument);
}

TEST_CASE("amplitude hits its bounds at delta +- pi/2", "[ris_model]")
{
    CHECK(amplitude(ref, ref.delta() + pi / 2) == Approx(1.0).epsilon(1e-15));
    CHECK(amplitude(ref, ref.delta() - pi / 2) == Approx(0.2).epsilon(1e-12));
    // direct scalar evaluation at theta = 0
    // 30-digit desk value
    CHECK(amplitude(ref, 0.0) == Approx(0.200679494271569703).epsilon(1e-14));
}

TEST_CASE("amplitude stays in range, is periodic and degenerates", "[ris_model]")
{
    const RisHardwareProfile unit(1.0, 0.3, 2.0), flat(0.4, 0.3, 0.0);
    for (int i = -2000; i <= 2000; ++i)
    {
        const double th = i * 0.00731;
        const double b = amplitude(ref, th);
        REQUIRE(b >= ref.beta_min());
        REQUIRE(b <= 1.0);
        REQUIRE(amplitude(ref, th + 2.0 * pi) == Approx(b).epsilon(1e-12));
        REQUIRE(amplitude(unit, th) == 1.0);
        REQUIRE(amplitude(flat, th) == 1.0);
    }
}

TEST_CASE("reflection vectors", "[ris_model]")
{
    const PhaseVector t(std::vector<double>{0.0, pi / 2});
    const CVec ideal = ideal_reflection_vector(t);
    CHECK(std::abs(ideal(0) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(ideal(1) - cplx(0.0, 1.0)) < 1e-15);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-pi, pi);
    std::vector<double> th(64);
    for (auto &x : th)
        x = u(rng);
    const PhaseVector pv(th);
    const CVec prac = reflection_vector(ref, pv);
    for (std::size_t n = 0; n < th.size(); ++n)
        CHECK(std::abs(std::abs(prac(n)) - amplitude(ref, th[n])) < 1e-12);
    CHECK((reflection_vector(RisHardwareProfile(1.0, 0.43 * pi, 1.6), pv) - ideal_reflection_vector(pv)).norm() == 0.0);

    const PhaseVector floor(std::vector<double>{ref.delta() - pi / 2});
    CHECK(std::abs(reflection_vector(ref, floor)(0) - std::polar(0.2, ref.delta() - pi / 2)) < 1e-12);
}

TEST_CASE("phase vectors wrap into [-pi, pi]", "[ris_model]")
{
    const PhaseVector t(std::vector<double>{3.5 * pi, -7.0, 0.25});
    for (double x : t.values())
    {
        CHECK(x >= -pi);
        CHECK(x <= pi);
    }
    CHECK(std::cos(t[0]) == Approx(std::cos(3.5 * pi)).margin(1e-12));
    CHECK(std::sin(t[1]) == Approx(std::sin(-7.0)).margin(1e-12));
}

TEST_CASE("Taylor moments: closed-form cases", "[ris_model]")
{
    CHECK(taylor_mean_beta(RisHardwareProfile(1.0, 0.3, 1.7)) == 1.0);
    CHECK(taylor_mean_beta_sq(RisHardwareProfile(1.0, 0.3, 1.7)) == 1.0);
    CHECK(taylor_mean_beta(RisHardwareProfile(0.0, 0.0, 1.0)) == Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(taylor_mean_beta(ref, 0), std::invalid_argument);
}

TEST_CASE("Taylor moments equal exact averages of the truncated series", "[ris_model]")
{
    for (double bmin : {0.0, 0.2, 0.5, 0.8})
        for (double alpha : {0.5, 1.0, 1.6, 2.3, 3.0})
            for (double delta : {0.0, 0.43 * pi, 1.0})
                for (int order : {1, 2, 3, 5, 7})
                {
                    const RisHardwareProfile p(bmin, delta, alpha);
                    const auto [m1, m2] = truncated_moments(p, order);
                    INFO("bmin=" << bmin << " alpha=" << alpha << " delta=" << delta << " S=" << order);
                    REQUIRE(taylor_mean_beta(p, order) == Approx(m1).epsilon(1e-12));
                    REQUIRE(taylor_mean_beta_sq(p, order) == Approx(m2).epsilon(1e-12));
                }
}

TEST_CASE("Taylor moments track Monte Carlo at the reference profile", "[ris_model]")
{
    const auto [m1, m2] = mc_moments(ref, 1000000, 11);
    CHECK(std::abs(taylor_mean_beta(ref) / m1 - 1.0) < 0.01);
    CHECK(std::abs(taylor_mean_beta_sq(ref) / m2 - 1.0) < 0.02);
    const RisHardwareProfile lin(0.0, 0.0, 1.0);
    const auto [l1, l2] = mc_moments(lin, 1000000, 12);
    CHECK(std::abs(taylor_mean_beta_sq(lin) / l2 - 1.0) < 0.02);
    CHECK(std::abs(taylor_mean_beta(lin) / l1 - 1.0) < 0.01);
}

TEST_CASE("Jensen: second moment dominates squared mean", "[ris_model]")
{
    for (int b = 0; b <= 8; ++b)
        for (int a = 2; a <= 12; ++a)
        {
            const RisHardwareProfile p(0.1 * b, 0.43 * pi, 0.25 * a);
            const double m = taylor_mean_beta(p);
            REQUIRE(taylor_mean_beta_sq(p) >= m * m);
        }
}

TEST_CASE("Taylor moments track Monte Carlo over the profile grid", "[ris_model][truncation]")
{
    std::uint64_t seed = 100;
    for (double bmin : {0.0, 0.2, 0.4, 0.6, 0.8})
        for (double alpha : {0.5, 1.0, 1.6, 2.0, 3.0})
        {
            const RisHardwareProfile p(bmin, 0.43 * pi, alpha);
            const auto [m1, m2] = mc_moments(p, 1000000, ++seed);
            INFO("bmin=" << bmin << " alpha=" << alpha << " mean " << taylor_mean_beta(p) << " vs " << m1
                         << ", second " << taylor_mean_beta_sq(p) << " vs " << m2);
            CHECK(std::abs(taylor_mean_beta(p) / m1 - 1.0) < 0.01);
            CHECK(std::abs(taylor_mean_beta_sq(p) / m2 - 1.0) < 0.02);
        }
}
