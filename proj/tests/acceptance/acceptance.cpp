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

// One PASS/FAIL line per acceptance criterion.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "support.hpp"
#include "risrsma/experiment.hpp"

using namespace risrsma;
namespace fs = std::filesystem;

namespace {

struct Verdict
{
    bool passed = false;
    std::string detail;
};

std::string fmt(const char *f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig fig2_config(std::vector<double> beta_min)
{
    auto c = parse_config("{}");
    c.fig2.beta_min = std::move(beta_min);
    c.fig2.correlation = 0.0;
    c.fig2.trials = 100000;
    return c;
}

Verdict criterion_1(const fs::path &dir)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = fig2_config({0.2, 1.0});
    const auto ref = RisHardwareProfile::reference();
    if (ref.beta_min() != 0.2 || std::abs(ref.delta() - 0.43 * pi) > 1e-15 || ref.alpha() != 1.6 ||
        cfg.fig2.taylor_order != 5)
        return {false, "reference profile differs from (0.2, 0.43 pi, 1.6, S=5)"};
    const auto r = run_fig2_campaign(cfg);
    write_result(r, dir);
    const double elapsed = seconds_since(t0);

    bool gap_ok = true, bounded = true, unit_ok = true;
    double worst_gap = 0.0, worst_unit = 0.0;
    for (const auto &row : r.rows)
    {
        const double se = row.stderr_mc / row.gamma_ideal_theory;
        bounded = bounded && row.eta_theory <= 1.0 && row.eta_finite_n <= 1.0 && row.eta_mc <= 1.0 + 3.0 * se;
        if (row.beta_min == 0.2)
        {
            const double gap = std::abs(row.eta_mc / row.eta_finite_n - 1.0);
            worst_gap = std::max(worst_gap, gap);
            gap_ok = gap_ok && gap < 0.03;
        }
        else
        {
            const double z = std::abs(row.eta_mc - 1.0) / se;
            worst_unit = std::max(worst_unit, z);
            unit_ok = unit_ok && z <= 3.0;
        }
    }
    const bool fast = elapsed < 120.0;
    return {gap_ok && bounded && unit_ok && fast && r.rows.size() == 10,
            "worst MC/finite-N gap " + fmt("%.4f", worst_gap) + ", eta <= 1 " + (bounded ? "yes" : "no") +
                ", beta_min=1 worst |eta-1|/se " + fmt("%.2f", worst_unit) + ", " + fmt("%.1f", elapsed) + " s"};
}

Verdict criterion_2(const fs::path &dir)
{
    const auto r = run_fig2_campaign(fig2_config({0.2}));
    write_result(r, dir);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto &row : r.rows)
    {
        const double x = std::log(static_cast<double>(row.elements)), y = std::log(row.gamma_practical_mc);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {n == 5 && std::abs(slope - 2.0) <= 0.05, "log-log slope " + fmt("%.4f", slope) + " over N = 16..256"};
}

Verdict criterion_3(const fs::path &)
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(derive_seed(1, hash_string("acceptance-3"), 0));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_mc = 0.0, worst_exact = 0.0, worst_channel = 0.0;
    for (int i = 0; i < 1000; ++i)
    {
        const auto c = test::unit_channel(rng, 2, 4, 8, 0.1 + u(rng));
        const auto s = test::random_state(rng, 2, 4, 8, 0.5 + 10.0 * u(rng));
        const ImpairmentProfile imp{0.08 * u(rng), 0.08 * u(rng), u(rng)};
        const auto h = effective_channel(c, s, RisHardwareProfile::reference());
        const auto hl = oracle::effective_channel_loops(c, reflection_vector(RisHardwareProfile::reference(), s.theta));
        for (int k = 0; k < 2; ++k)
        {
            worst_channel = std::max(worst_channel, (h[k] - hl[k]).norm() / hl[k].norm());
            const auto d = distortion_powers(h[k], s, imp, c.noise_power[k]);
            const auto exact = oracle::distortion_loops(hl[k], s, imp, c.noise_power[k]);
            const auto mc = oracle::distortion_monte_carlo(hl[k], s, imp, c.noise_power[k], 100000,
                                                           derive_seed(2, hash_string("acceptance-3"), i, k));
            worst_exact = std::max({worst_exact, std::abs(d.common / exact.common - 1.0),
                                    std::abs(d.private_ / exact.private_ - 1.0)});
            worst_mc = std::max({worst_mc, std::abs(d.common / mc.common - 1.0), std::abs(d.private_ / mc.private_ - 1.0)});
        }
    }
    const double elapsed = seconds_since(t0);
    return {worst_mc < 0.02 && worst_exact < 1e-10 && worst_channel < 1e-10 && elapsed < 300.0,
            "worst MC gap " + fmt("%.4f", worst_mc) + ", worst closed-form gap " + fmt("%.2e", worst_exact) +
                ", effective channel " + fmt("%.2e", worst_channel) + ", " + fmt("%.1f", elapsed) + " s"};
}

Verdict criterion_4(const fs::path &)
{
    std::mt19937_64 rng(derive_seed(1, hash_string("acceptance-4"), 0));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> n01(0.0, 1.0);
    double worst_tight = 0.0, worst_bound = -1e300;
    long bound_checks = 0;
    auto check = [&](double sinr, cplx mu, cplx num, double den) {
        auto q = [&](cplx m) { return 2.0 * std::real(std::conj(m) * num) - std::norm(m) * den; };
        worst_tight = std::max(worst_tight, std::abs(q(mu) - sinr) / std::max(sinr, 1e-300));
        for (int p = 0; p < 100; ++p)
        {
            const cplx other = mu + cplx(n01(rng), n01(rng)) * std::abs(mu) * std::pow(10.0, 2.0 * u(rng) - 1.0);
            worst_bound = std::max(worst_bound, (q(other) - sinr) / (1.0 + sinr));
            ++bound_checks;
        }
    };
    for (int i = 0; i < 1000; ++i)
    {
        const auto c = test::unit_channel(rng, 2, 4, 8, 0.1 + u(rng));
        const auto s = test::random_state(rng, 2, 4, 8, 0.5 + 10.0 * u(rng));
        const ImpairmentProfile imp{0.08 * u(rng), 0.08 * u(rng), u(rng)};
        const auto h = effective_channel(c, s, RisHardwareProfile::reference());
        const auto mu = update_multipliers(h, s, imp, c.noise_power);
        const auto sinr = rsma_sinrs(h, s, imp, c.noise_power);
        for (int k = 0; k < 2; ++k)
        {
            const auto phi = distortion_powers(h[k], s, imp, c.noise_power[k]);
            double all = 0.0;
            for (const auto &w : s.w)
                all += std::norm(h[k].dot(w));
            const double own = std::norm(h[k].dot(s.w[k]));
            check(sinr[k].common, mu.mu_c[k], h[k].dot(s.w_c), all + phi.common);
            check(sinr[k].private_, mu.mu_p[k], h[k].dot(s.w[k]), all - own + phi.private_);
        }
    }
    return {worst_tight <= 1e-10 && worst_bound <= 1e-12,
            "worst relative tightness error " + fmt("%.2e", worst_tight) + ", largest surrogate excess " +
                fmt("%.2e", worst_bound) + " over " + std::to_string(bound_checks) + " perturbed multipliers"};
}

Verdict criterion_5(const fs::path &)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto profile = RisHardwareProfile::reference();
    const int G = 1000000;
    std::vector<double> bc(G), bs(G), b2(G);
    for (int i = 0; i < G; ++i)
    {
        const double t = -pi + 2.0 * pi * i / G;
        const double b = amplitude(profile, t);
        bc[i] = b * std::cos(t);
        bs[i] = b * std::sin(t);
        b2[i] = b * b;
    }
    std::mt19937_64 rng(derive_seed(1, hash_string("acceptance-5"), 0));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int T = 10000;
    CVec target(T);
    for (int i = 0; i < T; ++i)
        target(i) = std::polar(std::pow(10.0, 3.0 * u(rng) - 2.0), 2.0 * pi * u(rng));

    const auto proj = project_to_manifold(target, CVec::Zero(T), profile);
    double worst = 0.0;
    for (int i = 0; i < T; ++i)
    {
        const double tr = target(i).real(), ti = target(i).imag();
        double best = 1e300;
        for (int g = 0; g < G; ++g)
        {
            const double v = b2[g] - 2.0 * (tr * bc[g] + ti * bs[g]);
            best = v < best ? v : best;
        }
        best += std::norm(target(i));
        const double got = std::norm(proj.phi_tilde(i) - target(i));
        worst = std::max(worst, std::abs(got - best));
    }

    const RisHardwareProfile unit(1.0, profile.delta(), profile.alpha());
    const auto exact = project_to_manifold(target, CVec::Zero(T), unit);
    int mismatches = 0;
    for (int i = 0; i < T; ++i)
        mismatches += exact.theta[i] == std::arg(target(i)) ? 0 : 1;
    const double elapsed = seconds_since(t0);
    return {worst <= 1e-8 && mismatches == 0 && elapsed < 60.0,
            "worst objective gap to 1e6-point grid " + fmt("%.2e", worst) + ", beta_min=1 arg mismatches " +
                std::to_string(mismatches) + ", " + fmt("%.1f", elapsed) + " s"};
}

Verdict criterion_6(const fs::path &dir)
{
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioGeometry geometry; // K=2, M=8, N=16
    HardwareModel hw;
    hw.impairments = {0.01, 0.01, 0.1};
    AoConfig cfg;
    cfg.max_power = dbm_to_watt(30.0);
    cfg.gamma_th = 1.0;
    const std::uint64_t stream = hash_string("acceptance-6");
    int monotone = 0, plateau = 0, best_effort = 0;
    double worst = 0.0;
    fs::create_directories(dir);
    std::ofstream csv(dir / "ao_traces.csv");
    csv << "instance,iteration,sum_rate_bps_hz\n";
    for (int i = 0; i < 200; ++i)
    {
        const auto channel = draw_channel(geometry, FadingSpec::rician(), dbm_to_watt(-110.0), derive_seed(1, stream, i));
        const auto r = run_baseline(channel, hw, cfg, derive_seed(1, stream, i, 1));
        const auto rates = r.trace.sum_rates();
        for (std::size_t t = 0; t < rates.size(); ++t)
            csv << i << ',' << t << ',' << fmt("%.12g", rates[t]) << '\n';
        worst = std::max(worst, r.trace.worst_decrease());
        monotone += r.trace.worst_decrease() <= 1e-8 ? 1 : 0;
        const bool flat = rates.size() >= 6 && std::abs(rates.back() - rates[rates.size() - 6]) < cfg.outer_tolerance;
        plateau += (r.converged || flat) && r.iterations <= 30 ? 1 : 0;
        best_effort += r.best_effort ? 1 : 0;
    }
    const double elapsed = seconds_since(t0);
    return {monotone == 200 && plateau >= 180 && elapsed < 1800.0,
            std::to_string(monotone) + "/200 monotone (worst drop " + fmt("%.2e", worst) + "), " +
                std::to_string(plateau) + "/200 plateau within 30 iterations, " + std::to_string(best_effort) +
                " best-effort, " + fmt("%.0f", elapsed) + " s"};
}

std::map<std::pair<int, std::string>, const TrialRecord *> index_trials(const CampaignResult &r, int point)
{
    std::map<std::pair<int, std::string>, const TrialRecord *> out;
    for (const auto &t : r.trials)
        if (t.point == point)
            out[{t.trial, t.arm}] = &t;
    return out;
}

// Mean over trials of (a - b) and the count of trials used.
std::pair<double, int> paired_gap(const CampaignResult &r, int point, const std::string &a, const std::string &b)
{
    const auto idx = index_trials(r, point);
    double sum = 0.0;
    int n = 0;
    for (const auto &[key, rec] : idx)
        if (key.second == a)
        {
            sum += rec->report.sum_rate - idx.at({key.first, b})->report.sum_rate;
            ++n;
        }
    return {n ? sum / n : std::nan(""), n};
}

ExperimentConfig delta_sweep_config(std::vector<double> values, const fs::path &dir)
{
    auto c = parse_config(R"({
        "fading": {"k_factor_db": 10.0},
        "arms": [
            {"label": "rsma_robust", "scheme": "rsma"},
            {"label": "sdma_robust", "scheme": "sdma"}
        ],
        "sweep": {"axis": "delta_sic"},
        "trials": 200
    })");
    c.sweep_values = std::move(values);
    c.out_dir = dir;
    return c;
}

Verdict criterion_7(const fs::path &dir)
{
    auto cfg = parse_config(R"({"power_grid_dbm": [30.0], "trials": 200})");
    const auto r = run_sumrate_vs_power(cfg);
    write_result(r, dir / "power");
    bool ok = true;
    std::string detail = "at 30 dBm:";
    for (const char *other : {"rsma_hwi_only", "noma_robust"})
    {
        const auto [gap, n] = paired_gap(r, 0, "rsma_robust", other);
        ok = ok && n >= 200 && gap >= 0.0;
        detail += std::string(" robust - ") + other + " = " + fmt("%.4f", gap) + " (" + std::to_string(n) + " pairs);";
    }
    const auto idx = index_trials(r, 0);
    int below = 0, pairs = 0, skipped = 0;
    double worst = 0.0;
    for (const auto &[key, rec] : idx)
        if (key.second == "rsma_robust")
        {
            const auto *sdma = idx.at({key.first, "sdma_robust"});
            if (sdma->best_effort)
            {
                ++skipped;
                continue;
            }
            const double gap = rec->report.sum_rate - sdma->report.sum_rate;
            worst = std::min(worst, gap);
            below += gap < -1e-6 ? 1 : 0;
            ++pairs;
        }
    ok = ok && below == 0 && pairs + skipped >= 200;
    detail += " rsma < sdma - 1e-6 on " + std::to_string(below) + "/" + std::to_string(pairs) +
              " QoS-feasible instances (" + std::to_string(skipped) + " best-effort sdma skipped);";

    const auto sweep = run_parameter_sweep(delta_sweep_config({0.5, 0.7, 0.9}, dir));
    write_result(sweep, dir / "delta");
    for (int p = 0; p < 3; ++p)
    {
        const AggregateRow *rs = nullptr, *sd = nullptr;
        for (const auto &row : sweep.aggregate)
            if (row.point == p)
                (row.arm == "rsma_robust" ? rs : sd) = &row;
        const double rel = std::abs(rs->mean_sum_rate / sd->mean_sum_rate - 1.0);
        ok = ok && rel < 0.02 && rs->count >= 200;
        detail += " delta_sic=" + fmt("%.1f", rs->x) + " |rsma/sdma - 1| = " + fmt("%.4f", rel) + ";";
    }
    return {ok, detail};
}

Verdict criterion_8(const fs::path &dir)
{
    const auto r = run_parameter_sweep(delta_sweep_config({0.04, 0.2, 0.35, 0.5, 0.7, 0.9}, dir));
    write_result(r, dir);
    std::vector<double> share;
    for (const auto &row : r.aggregate)
        if (row.arm == "rsma_robust")
            share.push_back(row.mean_share);
    bool nonincreasing = share.size() == 6;
    std::string trend;
    for (std::size_t i = 0; i < share.size(); ++i)
    {
        if (i && share[i] > share[i - 1])
            nonincreasing = false;
        trend += (i ? " " : "") + fmt("%.3g", share[i]);
    }
    const bool terminal = !share.empty() && share.back() < 0.05;
    return {nonincreasing && terminal, "common-stream share over delta_sic 0.04..0.9: " + trend};
}

Verdict criterion_9(const fs::path &)
{
    const RisHardwareProfile unit(1.0, 0.43 * pi, 1.6);
    const ImpairmentProfile none{0.0, 0.0, 0.0};
    std::mt19937_64 rng(derive_seed(1, hash_string("acceptance-9"), 0));
    double worst_phi = 0.0, worst_refl = 0.0, worst_sinr = 0.0;
    for (int i = 0; i < 200; ++i)
    {
        const auto c = test::unit_channel(rng, 2, 4, 8, 0.5);
        const auto s = test::random_state(rng, 2, 4, 8, 3.0);
        worst_refl = std::max(worst_refl, (reflection_vector(unit, s.theta) - ideal_reflection_vector(s.theta)).norm());
        const auto h = effective_channel(c, s, unit);
        const auto sinr = rsma_sinrs(h, s, none, c.noise_power);
        for (int k = 0; k < 2; ++k)
        {
            const auto d = distortion_powers(h[k], s, none, c.noise_power[k]);
            worst_phi = std::max({worst_phi, std::abs(d.common - c.noise_power[k]), std::abs(d.private_ - c.noise_power[k])});
            const double p0 = std::norm(h[k].dot(s.w[0])), p1 = std::norm(h[k].dot(s.w[1]));
            const double textbook_c = std::norm(h[k].dot(s.w_c)) / (p0 + p1 + c.noise_power[k]);
            const double textbook_p = (k ? p1 : p0) / ((k ? p0 : p1) + c.noise_power[k]);
            worst_sinr = std::max({worst_sinr, std::abs(sinr[k].common / textbook_c - 1.0),
                                   std::abs(sinr[k].private_ / textbook_p - 1.0)});
        }
    }

    HardwareModel hw;
    hw.profile = unit;
    hw.impairments = none;
    AoConfig aware;
    aware.max_power = dbm_to_watt(30.0);
    aware.gamma_th = 1.0;
    AoConfig ignorant = aware;
    ignorant.flags = {false, false, false};
    double worst_rate = 0.0;
    const ScenarioGeometry geometry;
    for (int seed = 0; seed < 20; ++seed)
    {
        const auto channel = draw_channel(geometry, FadingSpec::rician(), dbm_to_watt(-110.0),
                                          derive_seed(1, hash_string("acceptance-9"), seed, 1));
        const auto a = run_baseline(channel, hw, aware, seed);
        const auto b = run_baseline(channel, hw, ignorant, seed);
        worst_rate = std::max(worst_rate, std::abs(a.report.sum_rate - b.report.sum_rate));
    }
    return {worst_phi == 0.0 && worst_refl == 0.0 && worst_sinr < 1e-12 && worst_rate <= 1e-6,
            "max |Phi - sigma^2| " + fmt("%.1e", worst_phi) + ", reflection gap " + fmt("%.1e", worst_refl) +
                ", textbook SINR gap " + fmt("%.1e", worst_sinr) + ", robust vs ignorant sum-rate gap " +
                fmt("%.1e", worst_rate) + " over 20 seeds"};
}

Verdict criterion_10(const fs::path &dir)
{
    auto cfg = parse_config(R"({
        "power_grid_dbm": [25.0, 30.0],
        "sweep": {"axis": "delta_sic", "values": [0.04, 0.9]},
        "fig2": {"trials": 2000, "elements": [16, 64]},
        "trials": 2,
        "seed": 11
    })");
    auto run_all = [&](unsigned workers, const fs::path &out) {
        cfg.workers = workers;
        std::vector<fs::path> files;
        auto add = [&](std::vector<fs::path> more) { files.insert(files.end(), more.begin(), more.end()); };
        add(write_result(run_fig2_campaign(cfg), out));
        add(write_result(run_sumrate_vs_power(cfg), out));
        add(write_result(run_parameter_sweep(cfg), out));
        add(write_result(run_convergence_trace(cfg), out));
        return files;
    };
    fs::remove_all(dir);
    const auto a = run_all(1, dir / "run_a");
    const auto b = run_all(1, dir / "run_b");
    const auto c = run_all(2, dir / "run_c");
    if (a.size() != b.size() || a.size() != c.size())
        return {false, "runs wrote different file sets"};
    int differing = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        const auto text = slurp(a[i]);
        differing += (text.empty() || text != slurp(b[i]) || text != slurp(c[i])) ? 1 : 0;
    }
    return {differing == 0, std::to_string(a.size()) + " files compared across 3 runs (workers 1, 1, 2), " +
                                std::to_string(differing) + " differ"};
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"acceptance criteria"};
    int criterion = 0;
    std::string workdir = "acceptance_out";
    app.add_option("--criterion", criterion, "criterion number 1-10")->required()->check(CLI::Range(1, 10));
    app.add_option("--workdir", workdir, "directory for campaign outputs");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<Verdict(const fs::path &)>> all{criterion_1, criterion_2, criterion_3, criterion_4,
                                                                     criterion_5, criterion_6, criterion_7, criterion_8,
                                                                     criterion_9, criterion_10};
    const fs::path dir = fs::path(workdir) / ("criterion_" + std::to_string(criterion));
    Verdict v;
    try
    {
        v = all[criterion - 1](dir);
    }
    catch (const std::exception &e)
    {
        v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (v.passed ? "PASS" : "FAIL") << " criterion " << criterion << ": " << v.detail << std::endl;
    return v.passed ? 0 : 1;
}
