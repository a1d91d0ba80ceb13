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

#include "pg_oracle.hpp"
#include "support.hpp"
#include "risrsma/fp_solver.hpp"

using namespace risrsma;
using Catch::Approx;

namespace {

// Two streams, three SINR terms, optional QoS rows and power budget 1.
FpProgram random_program(std::mt19937_64 &rng, int dim, bool qos, double threshold = 0.2)
{
    FpProgram p;
    p.dim = dim;
    p.streams = 2;
    p.power_budget = 1.0;
    for (int t = 0; t < 3; ++t)
    {
        SinrTerm term;
        term.stream = t == 0 ? 0 : 1;
        term.numerator = test::random_cvec(rng, dim, 2.0);
        CMat b(dim, dim);
        for (int c = 0; c < dim; ++c)
            b.col(c) = test::random_cvec(rng, dim);
        term.interference = 0.3 * b * b.adjoint();
        term.noise = 1.0;
        p.terms.push_back(term);
    }
    if (qos)
    {
        p.qos.push_back({{0.5, 1.0}, threshold});
        p.qos.push_back({{1.0, 0.0}, threshold});
    }
    return p;
}

} // namespace

TEST_CASE("program validation", "[fp_solver]")
{
    std::mt19937_64 rng(1);
    auto p = random_program(rng, 3, false);
    CHECK_NOTHROW(p.validate());
    auto bad = p;
    bad.terms[0].stream = 5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.terms[1].noise = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.qos.push_back({{1.0}, 0.0});
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.prox_weight = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("quadratic transform: tight at the optimal multiplier, a lower bound elsewhere", "[fp_solver]")
{
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto p = random_program(rng, 4, false);
        const CVec x = test::random_cvec(rng, 4);
        const auto mu = optimal_multipliers(p, x);
        for (std::size_t t = 0; t < p.terms.size(); ++t)
        {
            const double sinr = p.sinr(t, x);
            REQUIRE(surrogate(p.terms[t], mu[t], x) == Approx(sinr).epsilon(1e-10));
            for (int k = 0; k < 20; ++k)
            {
                const cplx other = mu[t] + cplx(n(rng), n(rng)) * std::pow(10.0, n(rng));
                REQUIRE(surrogate(p.terms[t], other, x) <= sinr + 1e-10 * (1.0 + sinr));
            }
        }
    }
}

TEST_CASE("program objective and QoS margin use the weakest term per stream", "[fp_solver]")
{
    std::mt19937_64 rng(3);
    const auto p = random_program(rng, 3, true);
    const CVec x = test::random_cvec(rng, 3);
    const double g0 = p.sinr(0, x), g1 = std::min(p.sinr(1, x), p.sinr(2, x));
    CHECK(p.objective(x) == Approx(std::log2(1 + g0) + std::log2(1 + g1)));
    CHECK(p.qos_margin(x) == Approx(std::min(0.5 * g0 + g1, g0) - 0.2));
}

TEST_CASE("concave step: ascent, feasibility and agreement with the projected-gradient solver", "[fp_solver]")
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 12; ++trial)
    {
        const bool qos = trial % 2 == 1;
        auto p = random_program(rng, 4, qos, 0.05);
        if (trial % 3 == 2)
        {
            p.prox_weight = 0.5;
            p.prox_center = test::random_cvec(rng, 4, 0.3);
        }
        CVec x0 = test::random_cvec(rng, 4);
        x0 *= 0.5 / x0.norm();
        if (qos && !(p.qos_margin(x0) > 0.0))
            continue;
        const auto mu = optimal_multipliers(p, x0);
        const auto r = solve_fp_step(p, mu, x0);
        REQUIRE(r.status == StepStatus::ok);
        REQUIRE(r.x.squaredNorm() <= 1.0 + 1e-9);
        double warm = 0.0;
        RVec lowest = RVec::Constant(2, 1e300);
        for (std::size_t t = 0; t < p.terms.size(); ++t)
        {
            REQUIRE(r.slacks(p.terms[t].stream) <= surrogate(p.terms[t], mu[t], r.x) + 1e-9);
            lowest(p.terms[t].stream) = std::min(lowest(p.terms[t].stream), surrogate(p.terms[t], mu[t], x0));
        }
        for (int s = 0; s < 2; ++s)
            warm += std::log2(1.0 + lowest(s));
        if (p.prox_weight > 0.0)
            warm -= p.prox_weight * (x0 - p.prox_center).squaredNorm();
        REQUIRE(r.objective >= warm - 1e-9);
        for (const auto &row : p.qos)
            REQUIRE(row.coeff[0] * r.slacks(0) + row.coeff[1] * r.slacks(1) >= row.threshold - 1e-9);

        oracle::PgAugmentedLagrangian pg(p, mu);
        const auto ref = pg.solve(x0);
        INFO("trial " << trial << " barrier " << r.objective << " pg " << ref.objective << " pg violation "
                      << ref.violation);
        REQUIRE(ref.violation < 1e-8);
        REQUIRE(r.objective == Approx(ref.objective).margin(1e-4));
    }
}

TEST_CASE("concave step flags a warm start outside the QoS set", "[fp_solver]")
{
    std::mt19937_64 rng(5);
    auto p = random_program(rng, 3, true, 1e6);
    const CVec x0 = test::random_cvec(rng, 3) * 0.1;
    const auto r = solve_fp_step(p, optimal_multipliers(p, x0), x0);
    CHECK(r.status == StepStatus::infeasible);
    CHECK(r.x == x0);
}

TEST_CASE("QoS margin search climbs toward the target", "[fp_solver]")
{
    std::mt19937_64 rng(6);
    auto p = random_program(rng, 4, true, 1.0);
    CVec x = CVec::Zero(4);
    x(0) = 1e-3;
    const double start = p.qos_margin(x);
    const auto r = maximize_qos_margin(p, optimal_multipliers(p, x), x, 0.0);
    CHECK(p.qos_margin(r.x) > start);
    CHECK(r.x.squaredNorm() <= 1.0 + 1e-9);
    p.qos.clear();
    CHECK_THROWS_AS(maximize_qos_margin(p, optimal_multipliers(p, x), x, 0.0), std::invalid_argument);
}
