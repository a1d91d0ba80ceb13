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

#include "risrsma/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "risrsma/parallel.hpp"

namespace risrsma {

using ojson = nlohmann::ordered_json;

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

ojson point_json(const Point3 &p) { return ojson::array({p.x(), p.y(), p.z()}); }

Point3 point_from(const nlohmann::json &j, const char *key)
{
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument(std::string(key) + " must be a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void reject_unknown(const nlohmann::json &obj, const std::set<std::string> &allowed, const std::string &where)
{
    if (!obj.is_object())
        throw std::invalid_argument(where + " must be an object");
    for (const auto &[key, value] : obj.items())
        if (!allowed.count(key))
            throw std::invalid_argument("unknown config key '" + where + (where.empty() ? "" : ".") + key + "'");
}

template <typename T> void read(const nlohmann::json &obj, const char *key, T &out)
{
    if (obj.contains(key))
        out = obj.at(key).get<T>();
}

const char *fading_name(FadingModel m)
{
    switch (m)
    {
    case FadingModel::rayleigh:
        return "rayleigh";
    case FadingModel::rician:
        return "rician";
    case FadingModel::rician_los_dominant:
        return "los_dominant";
    }
    return "?";
}

FadingModel fading_from(const std::string &name)
{
    if (name == "rayleigh")
        return FadingModel::rayleigh;
    if (name == "rician")
        return FadingModel::rician;
    if (name == "los_dominant")
        return FadingModel::rician_los_dominant;
    throw std::invalid_argument("unknown fading model '" + name + "'");
}

std::string flags_key(const ModelFlags &f)
{
    return std::string(f.model_hwi ? "h" : "-") + (f.model_sic ? "s" : "-") + (f.model_coupling ? "c" : "-");
}

// First arm that is RSMA with every imperfection modeled, else arm 0.
std::size_t reference_arm(const std::vector<ArmSpec> &arms)
{
    for (std::size_t i = 0; i < arms.size(); ++i)
        if (arms[i].scheme == Scheme::rsma && arms[i].flags.all())
            return i;
    return 0;
}

struct PointSetup
{
    double x = 0.0;
    HardwareModel truth;
    double max_power_w = 1.0;
    double gamma_th = 1.0;
};

// The first-decoded NOMA stream becomes the common stream.
BeamformingState noma_as_rsma(const BeamformingState &noma, const std::vector<int> &order)
{
    BeamformingState s = noma;
    if (order.empty())
        return s;
    auto &first = s.w[static_cast<std::size_t>(order.front())];
    s.w_c = first;
    first *= 0.1;
    s.w_c *= std::sqrt(0.99);
    return s;
}

// Evaluates every arm on one channel. Returns false (and nothing else) when
// the reference arm cannot meet QoS, so the caller redraws the channel.
bool run_arms(const ExperimentConfig &cfg, const PointSetup &setup, const ChannelRealization &channel,
              std::uint64_t ao_seed, std::vector<TrialRecord> &out)
{
    std::map<std::string, AoResult> sdma_cache, noma_cache;
    auto base_config = [&](const ArmSpec &arm) {
        AoConfig c = cfg.ao;
        c.scheme = arm.scheme;
        c.flags = arm.flags;
        c.max_power = setup.max_power_w;
        c.gamma_th = setup.gamma_th;
        c.enforce_qos = setup.gamma_th > 0.0;
        return c;
    };
    auto sdma = [&](const ArmSpec &arm) -> const AoResult & {
        const auto key = flags_key(arm.flags);
        auto it = sdma_cache.find(key);
        if (it == sdma_cache.end())
        {
            ArmSpec s = arm;
            s.scheme = Scheme::sdma;
            it = sdma_cache.emplace(key, run_baseline(channel, setup.truth, base_config(s), ao_seed)).first;
        }
        return it->second;
    };
    auto noma = [&](const ArmSpec &arm) -> const AoResult & {
        const auto key = flags_key(arm.flags);
        auto it = noma_cache.find(key);
        if (it == noma_cache.end())
        {
            ArmSpec s = arm;
            s.scheme = Scheme::noma;
            it = noma_cache.emplace(key, run_baseline(channel, setup.truth, base_config(s), ao_seed)).first;
        }
        return it->second;
    };
    const bool has_noma = std::any_of(cfg.arms.begin(), cfg.arms.end(),
                                      [](const ArmSpec &a) { return a.scheme == Scheme::noma; });
    auto solve = [&](const ArmSpec &arm) {
        switch (arm.scheme)
        {
        case Scheme::rsma: {
            const auto &base = sdma(arm).state;
            std::vector<BeamformingState> starts{
                base, multicast_start(channel, setup.truth, arm.flags, base, setup.max_power_w)};
            if (has_noma)
            {
                const auto &n = noma(arm);
                starts.push_back(noma_as_rsma(n.state, n.noma_order));
            }
            return run_multistart(channel, setup.truth, base_config(arm), ao_seed, starts);
        }
        case Scheme::sdma:
            return sdma(arm);
        case Scheme::noma:
            break;
        }
        return noma(arm);
    };

    const std::size_t ref = reference_arm(cfg.arms);
    std::vector<AoResult> results(cfg.arms.size());
    results[ref] = solve(cfg.arms[ref]);
    if (results[ref].best_effort || results[ref].status != AoStatus::ok)
        return false;
    for (std::size_t a = 0; a < cfg.arms.size(); ++a)
        if (a != ref)
            results[a] = solve(cfg.arms[a]);

    for (std::size_t a = 0; a < cfg.arms.size(); ++a)
    {
        TrialRecord r;
        r.x = setup.x;
        r.arm = cfg.arms[a].label;
        r.report = results[a].report;
        r.share = common_stream_share(results[a].state);
        r.best_effort = results[a].best_effort || results[a].status != AoStatus::ok;
        r.converged = results[a].converged;
        r.iterations = results[a].iterations;
        out.push_back(std::move(r));
    }
    return true;
}

CampaignResult run_paired(const ExperimentConfig &cfg, const std::string &campaign, const std::string &x_column,
                          const std::vector<PointSetup> &points)
{
    const auto start = std::chrono::steady_clock::now();
    cfg.validate();
    const std::uint64_t stream = hash_string(campaign);
    const std::uint64_t phase_stream = hash_string(campaign + "/phases");
    const double noise_w = dbm_to_watt(cfg.noise_dbm);
    const std::size_t T = static_cast<std::size_t>(cfg.trials);

    struct Slot
    {
        std::vector<TrialRecord> records;
        int attempts = 0;
        bool dropped = false;
    };
    std::vector<Slot> slots(points.size() * T);
    parallel_for(slots.size(), cfg.workers, [&](std::size_t task) {
        const std::size_t p = task / T;
        const std::size_t i = task % T;
        auto &slot = slots[task];
        for (int attempt = 0; attempt <= cfg.max_redraws; ++attempt)
        {
            slot.attempts = attempt + 1;
            const auto channel = draw_channel(cfg.geometry, cfg.fading, noise_w, derive_seed(cfg.master_seed, stream, i, attempt));
            std::vector<TrialRecord> records;
            if (run_arms(cfg, points[p], channel, derive_seed(cfg.master_seed, phase_stream, i, attempt), records))
            {
                for (auto &r : records)
                {
                    r.point = static_cast<int>(p);
                    r.trial = static_cast<int>(i);
                    r.attempts = slot.attempts;
                }
                slot.records = std::move(records);
                return;
            }
        }
        slot.dropped = true;
    });

    CampaignResult out;
    out.campaign = campaign;
    out.x_column = x_column;
    out.config_hash = config_hash(cfg);
    out.master_seed = cfg.master_seed;
    out.users = cfg.geometry.users;
    for (const auto &slot : slots)
    {
        out.redraws += slot.attempts - 1;
        out.dropped_trials += slot.dropped ? 1 : 0;
        out.trials.insert(out.trials.end(), slot.records.begin(), slot.records.end());
    }
    for (std::size_t p = 0; p < points.size(); ++p)
        for (const auto &arm : cfg.arms)
        {
            AggregateRow row;
            row.point = static_cast<int>(p);
            row.x = points[p].x;
            row.arm = arm.label;
            std::vector<double> rates;
            double rate_c = 0.0, share = 0.0;
            for (const auto &r : out.trials)
                if (r.point == row.point && r.arm == arm.label)
                {
                    rates.push_back(r.report.sum_rate);
                    rate_c += r.report.rate_c;
                    share += r.share;
                    row.best_effort += r.best_effort ? 1 : 0;
                }
            row.count = static_cast<int>(rates.size());
            std::tie(row.mean_sum_rate, row.stderr_sum_rate) = mean_stderr(rates);
            if (row.count)
            {
                row.mean_rate_c = rate_c / row.count;
                row.mean_share = share / row.count;
            }
            out.aggregate.push_back(row);
        }
    out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

const AggregateRow *find_row(const CampaignResult &r, int point, const std::string &arm)
{
    for (const auto &row : r.aggregate)
        if (row.point == point && row.arm == arm)
            return &row;
    return nullptr;
}

int point_count(const CampaignResult &r)
{
    int n = 0;
    for (const auto &row : r.aggregate)
        n = std::max(n, row.point + 1);
    return n;
}

// Per-point paired means of `a` minus `b`; false if either arm is absent.
bool arm_dominates(const CampaignResult &r, const std::string &a, const std::string &b, std::string &detail)
{
    bool ok = true;
    std::ostringstream os;
    for (int p = 0; p < point_count(r); ++p)
    {
        const auto *ra = find_row(r, p, a);
        const auto *rb = find_row(r, p, b);
        if (!ra || !rb || ra->count == 0)
            return false;
        os << (p ? "; " : "") << num(ra->x) << ": " << num(ra->mean_sum_rate) << " vs " << num(rb->mean_sum_rate);
        ok = ok && ra->mean_sum_rate >= rb->mean_sum_rate;
    }
    detail = os.str();
    return ok;
}

void add_scheme_checks(const ExperimentConfig &cfg, CampaignResult &r)
{
    const auto &robust = cfg.arms[reference_arm(cfg.arms)];
    for (const auto &arm : cfg.arms)
    {
        if (arm.label == robust.label)
            continue;
        std::string detail;
        if (arm.scheme == Scheme::rsma || arm.scheme == Scheme::noma)
        {
            const bool ok = arm_dominates(r, robust.label, arm.label, detail);
            r.checks.push_back({robust.label + " >= " + arm.label + " (paired means)", ok, detail});
        }
        if (arm.scheme == Scheme::sdma && flags_key(arm.flags) == flags_key(robust.flags))
        {
            int violations = 0, pairs = 0, skipped = 0;
            double worst = 0.0;
            std::map<std::pair<int, int>, const TrialRecord *> sdma;
            for (const auto &t : r.trials)
                if (t.arm == arm.label)
                    sdma[{t.point, t.trial}] = &t;
            for (const auto &t : r.trials)
                if (t.arm == robust.label)
                {
                    const auto *other = sdma.at({t.point, t.trial});
                    if (other->best_effort)
                    {
                        ++skipped;
                        continue;
                    }
                    const double gap = t.report.sum_rate - other->report.sum_rate;
                    worst = std::min(worst, gap);
                    violations += gap < -1e-6 ? 1 : 0;
                    ++pairs;
                }
            r.checks.push_back({robust.label + " >= " + arm.label + " - 1e-6 per QoS-feasible instance",
                                violations == 0,
                                std::to_string(violations) + " of " + std::to_string(pairs) +
                                    " instances below, worst gap " + num(worst) + ", " + std::to_string(skipped) +
                                    " best-effort " + arm.label + " instances skipped"});
        }
    }
}

std::vector<double> arm_means(const CampaignResult &r, const std::string &arm, bool share = false)
{
    std::vector<double> out;
    for (int p = 0; p < point_count(r); ++p)
    {
        const auto *row = find_row(r, p, arm);
        out.push_back(row ? (share ? row->mean_share : row->mean_sum_rate) : std::nan(""));
    }
    return out;
}

std::string join(const std::vector<double> &v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? " " : "") + num(v[i]);
    return s;
}

bool monotone(const std::vector<double> &v, bool increasing)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (increasing ? v[i] < v[i - 1] : v[i] > v[i - 1])
            return false;
    return true;
}

std::ofstream open_out(const std::filesystem::path &path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    return os;
}

ojson checks_json(const std::vector<Check> &checks)
{
    ojson arr = ojson::array();
    for (const auto &c : checks)
        arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return arr;
}

std::filesystem::path prepare(const std::filesystem::path &dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    return dir;
}

} // namespace

const char *to_string(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::distortion:
        return "m";
    case SweepAxis::delta_sic:
        return "delta_sic";
    case SweepAxis::beta_min:
        return "beta_min";
    }
    return "?";
}

SweepAxis sweep_axis_from_string(const std::string &name)
{
    if (name == "m")
        return SweepAxis::distortion;
    if (name == "delta_sic")
        return SweepAxis::delta_sic;
    if (name == "beta_min")
        return SweepAxis::beta_min;
    throw std::invalid_argument("unknown sweep axis '" + name + "' (expected m, delta_sic or beta_min)");
}

std::vector<double> default_sweep_values(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::distortion:
        return {0.0, 0.02, 0.04, 0.06, 0.08};
    case SweepAxis::delta_sic:
        return {0.04, 0.2, 0.35, 0.5, 0.7, 0.9};
    case SweepAxis::beta_min:
        return {0.2, 0.4, 0.6, 0.8, 1.0};
    }
    return {};
}

std::vector<ArmSpec> ExperimentConfig::default_arms()
{
    return {
        {"rsma_robust", Scheme::rsma, {true, true, true}},
        {"rsma_hwi_only", Scheme::rsma, {true, false, false}},
        {"sdma_robust", Scheme::sdma, {true, true, true}},
        {"noma_robust", Scheme::noma, {true, true, true}},
    };
}

void ExperimentConfig::validate() const
{
    geometry.validate();
    fading.validate();
    impairments.validate();
    ao.validate();
    auto bad = [](const std::string &what) { throw std::invalid_argument(what); };
    if (trials < 1)
        bad("trials must be >= 1");
    if (max_redraws < 0)
        bad("max_redraws must be >= 0");
    if (impairments.m_t > 0.08 || impairments.m_r > 0.08)
        bad("m_t and m_r must lie in [0, 0.08]");
    if (!std::isfinite(noise_dbm) || !std::isfinite(max_power_dbm))
        bad("noise and power levels must be finite");
    if (!(gamma_th >= 0.0))
        bad("gamma_th must be >= 0");
    if (arms.empty())
        bad("at least one arm is required");
    std::set<std::string> labels;
    for (const auto &a : arms)
        if (a.label.empty() || !labels.insert(a.label).second || a.label.find_first_of(",\"\n") != std::string::npos)
            bad("arm labels must be unique, non-empty and free of commas or quotes");
    for (double p : power_grid_dbm)
        if (!std::isfinite(p))
            bad("power grid entries must be finite");
    for (double v : sweep_values)
    {
        const double hi = sweep_axis == SweepAxis::distortion ? 0.08 : 1.0;
        if (!(v >= 0.0 && v <= hi))
            bad(std::string("sweep values for ") + to_string(sweep_axis) + " must lie in [0, " + num(hi) + "]");
    }
    for (int n : fig2.elements)
        if (n < 1)
            bad("fig2 element counts must be >= 1");
    for (double b : fig2.beta_min)
        if (!(b >= 0.0 && b <= 1.0))
            bad("fig2 beta_min values must lie in [0, 1]");
    if (fig2.trials < 1 || fig2.taylor_order < 1)
        bad("fig2 trials and taylor_order must be >= 1");
    if (!(fig2.correlation >= 0.0 && fig2.correlation < 1.0))
        bad("fig2 correlation must lie in [0, 1)");
}

ExperimentConfig parse_config(const std::string &json_text)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(json_text);
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(j,
                   {"scenario", "fading", "ris", "impairments", "noise_dbm", "max_power_dbm", "gamma_th",
                    "power_grid_dbm", "sweep", "arms", "ao", "fig2", "trials", "seed", "out", "workers", "max_redraws"},
                   "");

    ExperimentConfig c;
    c.arms = ExperimentConfig::default_arms();
    try
    {
        if (j.contains("scenario"))
        {
            const auto &s = j["scenario"];
            reject_unknown(s, {"users", "bs_antennas", "ris_elements", "bs_position", "ris_position", "user_center",
                               "user_radius_m"},
                           "scenario");
            read(s, "users", c.geometry.users);
            read(s, "bs_antennas", c.geometry.bs_antennas);
            read(s, "ris_elements", c.geometry.ris_elements);
            read(s, "user_radius_m", c.geometry.user_radius);
            if (s.contains("bs_position"))
                c.geometry.bs_position = point_from(s["bs_position"], "bs_position");
            if (s.contains("ris_position"))
                c.geometry.ris_position = point_from(s["ris_position"], "ris_position");
            if (s.contains("user_center"))
                c.geometry.user_center = point_from(s["user_center"], "user_center");
        }
        if (j.contains("fading"))
        {
            const auto &f = j["fading"];
            reject_unknown(f, {"model", "k_factor_db", "correlation"}, "fading");
            if (f.contains("model"))
            {
                c.fading.model = fading_from(f["model"].get<std::string>());
                if (c.fading.model == FadingModel::rician_los_dominant)
                    c.fading.rician_k_factor = db_to_linear(20.0);
            }
            if (f.contains("k_factor_db"))
                c.fading.rician_k_factor = db_to_linear(f["k_factor_db"].get<double>());
            if (f.contains("correlation"))
            {
                if (f["correlation"].is_null())
                    c.fading.correlation.reset();
                else
                    c.fading.correlation = f["correlation"].get<double>();
            }
        }
        if (j.contains("ris"))
        {
            const auto &r = j["ris"];
            reject_unknown(r, {"beta_min", "delta_over_pi", "alpha"}, "ris");
            double beta_min = c.profile.beta_min(), delta = c.profile.delta() / pi, alpha = c.profile.alpha();
            read(r, "beta_min", beta_min);
            read(r, "delta_over_pi", delta);
            read(r, "alpha", alpha);
            c.profile = RisHardwareProfile(beta_min, delta * pi, alpha);
        }
        if (j.contains("impairments"))
        {
            const auto &m = j["impairments"];
            reject_unknown(m, {"m_t", "m_r", "delta_sic"}, "impairments");
            read(m, "m_t", c.impairments.m_t);
            read(m, "m_r", c.impairments.m_r);
            read(m, "delta_sic", c.impairments.delta_sic);
        }
        read(j, "noise_dbm", c.noise_dbm);
        read(j, "max_power_dbm", c.max_power_dbm);
        read(j, "gamma_th", c.gamma_th);
        read(j, "power_grid_dbm", c.power_grid_dbm);
        if (j.contains("sweep"))
        {
            const auto &s = j["sweep"];
            reject_unknown(s, {"axis", "values"}, "sweep");
            if (s.contains("axis"))
            {
                c.sweep_axis = sweep_axis_from_string(s["axis"].get<std::string>());
                c.sweep_values = default_sweep_values(c.sweep_axis);
            }
            read(s, "values", c.sweep_values);
        }
        if (j.contains("arms"))
        {
            c.arms.clear();
            for (const auto &a : j["arms"])
            {
                reject_unknown(a, {"label", "scheme", "model_hwi", "model_sic", "model_coupling"}, "arms[]");
                ArmSpec arm;
                arm.label = a.at("label").get<std::string>();
                arm.scheme = scheme_from_string(a.value("scheme", std::string("rsma")));
                read(a, "model_hwi", arm.flags.model_hwi);
                read(a, "model_sic", arm.flags.model_sic);
                read(a, "model_coupling", arm.flags.model_coupling);
                c.arms.push_back(arm);
            }
        }
        if (j.contains("ao"))
        {
            const auto &a = j["ao"];
            reject_unknown(a, {"max_outer_iters", "outer_tolerance", "admm_lambda", "admm_max_iters",
                               "precoder_outer_iters", "extrapolation"},
                           "ao");
            read(a, "max_outer_iters", c.ao.max_outer_iters);
            read(a, "outer_tolerance", c.ao.outer_tolerance);
            read(a, "admm_lambda", c.ao.admm.lambda);
            read(a, "admm_max_iters", c.ao.admm.max_iters);
            read(a, "precoder_outer_iters", c.ao.precoder.outer_iters);
            read(a, "extrapolation", c.ao.extrapolation);
        }
        if (j.contains("fig2"))
        {
            const auto &f = j["fig2"];
            reject_unknown(f, {"elements", "beta_min", "trials", "correlation", "taylor_order"}, "fig2");
            read(f, "elements", c.fig2.elements);
            read(f, "beta_min", c.fig2.beta_min);
            read(f, "trials", c.fig2.trials);
            read(f, "correlation", c.fig2.correlation);
            read(f, "taylor_order", c.fig2.taylor_order);
        }
        read(j, "trials", c.trials);
        read(j, "seed", c.master_seed);
        if (j.contains("out"))
            c.out_dir = j["out"].get<std::string>();
        read(j, "workers", c.workers);
        read(j, "max_redraws", c.max_redraws);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw std::invalid_argument(std::string("config has a value of the wrong type: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot read config " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    try
    {
        return parse_config(ss.str());
    }
    catch (const std::invalid_argument &e)
    {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

namespace {

ojson config_json(const ExperimentConfig &c)
{
    ojson arms = ojson::array();
    for (const auto &a : c.arms)
        arms.push_back({{"label", a.label},
                        {"scheme", to_string(a.scheme)},
                        {"model_hwi", a.flags.model_hwi},
                        {"model_sic", a.flags.model_sic},
                        {"model_coupling", a.flags.model_coupling}});
    ojson j;
    j["scenario"] = {{"users", c.geometry.users},
                     {"bs_antennas", c.geometry.bs_antennas},
                     {"ris_elements", c.geometry.ris_elements},
                     {"bs_position", point_json(c.geometry.bs_position)},
                     {"ris_position", point_json(c.geometry.ris_position)},
                     {"user_center", point_json(c.geometry.user_center)},
                     {"user_radius_m", c.geometry.user_radius}};
    j["fading"] = {{"model", fading_name(c.fading.model)},
                   {"k_factor_db", std::round(1e9 * 10.0 * std::log10(c.fading.rician_k_factor)) / 1e9},
                   {"correlation", c.fading.correlation ? ojson(*c.fading.correlation) : ojson(nullptr)}};
    j["ris"] = {{"beta_min", c.profile.beta_min()}, {"delta_over_pi", c.profile.delta() / pi}, {"alpha", c.profile.alpha()}};
    j["impairments"] = {{"m_t", c.impairments.m_t}, {"m_r", c.impairments.m_r}, {"delta_sic", c.impairments.delta_sic}};
    j["noise_dbm"] = c.noise_dbm;
    j["max_power_dbm"] = c.max_power_dbm;
    j["gamma_th"] = c.gamma_th;
    j["power_grid_dbm"] = c.power_grid_dbm;
    j["sweep"] = {{"axis", to_string(c.sweep_axis)}, {"values", c.sweep_values}};
    j["arms"] = arms;
    j["ao"] = {{"max_outer_iters", c.ao.max_outer_iters},
               {"outer_tolerance", c.ao.outer_tolerance},
               {"admm_lambda", c.ao.admm.lambda},
               {"admm_max_iters", c.ao.admm.max_iters},
               {"precoder_outer_iters", c.ao.precoder.outer_iters},
               {"extrapolation", c.ao.extrapolation}};
    j["fig2"] = {{"elements", c.fig2.elements},
                 {"beta_min", c.fig2.beta_min},
                 {"trials", c.fig2.trials},
                 {"correlation", c.fig2.correlation},
                 {"taylor_order", c.fig2.taylor_order}};
    j["trials"] = c.trials;
    j["seed"] = c.master_seed;
    j["max_redraws"] = c.max_redraws;
    return j;
}

} // namespace

std::string config_to_json(const ExperimentConfig &config) { return config_json(config).dump(2); }

std::string config_hash(const ExperimentConfig &config)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(hash_string(config_json(config).dump())));
    return buf;
}

std::pair<double, double> mean_stderr(const std::vector<double> &values)
{
    if (values.empty())
        return {std::nan(""), std::nan("")};
    double sum = 0.0;
    for (double v : values)
        sum += v;
    const double mean = sum / static_cast<double>(values.size());
    if (values.size() < 2)
        return {mean, 0.0};
    double ss = 0.0;
    for (double v : values)
        ss += (v - mean) * (v - mean);
    const double n = static_cast<double>(values.size());
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

Fig2Result run_fig2_campaign(const ExperimentConfig &config)
{
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    Fig2Result out;
    out.config_hash = config_hash(config);
    out.master_seed = config.master_seed;
    const std::uint64_t stream = hash_string("fig2");

    struct Arm
    {
        double beta_min;
        bool correlated;
    };
    std::vector<Arm> arms;
    for (double b : config.fig2.beta_min)
        arms.push_back({b, false});
    if (!config.fig2.beta_min.empty() && config.fig2.correlation > 0.0)
        arms.push_back({config.fig2.beta_min.front(), true});

    std::uint64_t index = 0;
    for (const auto &arm : arms)
        for (int n : config.fig2.elements)
        {
            AsymptoticScenario s;
            s.elements = n;
            s.taylor_order = config.fig2.taylor_order;
            s.profile = RisHardwareProfile(arm.beta_min, config.profile.delta(), config.profile.alpha());
            if (arm.correlated)
                s.correlation = config.fig2.correlation;
            const auto mc = practical_asymptotic_snr_mc(s, config.fig2.trials,
                                                        derive_seed(config.master_seed, stream, index++),
                                                        config.workers);
            Fig2Row row;
            row.beta_min = arm.beta_min;
            row.correlated = arm.correlated;
            row.elements = n;
            row.gamma_ideal_theory = ideal_asymptotic_snr(s);
            row.gamma_practical_mc = mc.practical;
            row.stderr_mc = mc.practical_stderr;
            row.eta_theory = eta_ratio(s);
            row.eta_finite_n = eta_ratio_finite_n(s);
            row.eta_mc = mc.practical / row.gamma_ideal_theory;
            out.rows.push_back(row);
        }

    bool bounded = true, gap_ok = true, unit_ok = true;
    double worst_gap = 0.0;
    for (const auto &r : out.rows)
    {
        const double se = r.stderr_mc / r.gamma_ideal_theory;
        bounded = bounded && r.eta_theory <= 1.0 && r.eta_finite_n <= 1.0 && r.eta_mc <= 1.0 + 3.0 * se;
        if (!r.correlated)
        {
            const double gap = std::abs(r.eta_mc / r.eta_finite_n - 1.0);
            worst_gap = std::max(worst_gap, gap);
            gap_ok = gap_ok && gap < 0.03;
            if (r.beta_min == 1.0)
                unit_ok = unit_ok && std::abs(r.gamma_practical_mc - r.gamma_ideal_theory) <= 3.0 * r.stderr_mc;
        }
    }
    out.checks.push_back({"eta <= 1 (theory, finite-N theory, Monte Carlo within 3 se)", bounded, ""});
    out.checks.push_back({"Monte Carlo / finite-N theory gap < 3% (uncorrelated rows)", gap_ok,
                          "worst relative gap " + num(worst_gap)});
    out.checks.push_back({"beta_min = 1 rows: Monte Carlo matches ideal theory within 3 se", unit_ok, ""});
    out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

CampaignResult run_sumrate_vs_power(const ExperimentConfig &config)
{
    std::vector<PointSetup> points;
    for (double p : config.power_grid_dbm)
        points.push_back({p, {config.profile, config.impairments}, dbm_to_watt(p), config.gamma_th});
    auto r = run_paired(config, "power-sweep", "p_max_dbm", points);

    const auto &robust = config.arms[reference_arm(config.arms)].label;
    const auto means = arm_means(r, robust);
    r.checks.push_back({robust + " mean sum rate nondecreasing in P_max", monotone(means, true), join(means)});
    add_scheme_checks(config, r);
    return r;
}

CampaignResult run_parameter_sweep(const ExperimentConfig &config)
{
    std::vector<PointSetup> points;
    for (double v : config.sweep_values)
    {
        PointSetup s{v, {config.profile, config.impairments}, dbm_to_watt(config.max_power_dbm), config.gamma_th};
        switch (config.sweep_axis)
        {
        case SweepAxis::distortion:
            s.truth.impairments.m_t = s.truth.impairments.m_r = v;
            break;
        case SweepAxis::delta_sic:
            s.truth.impairments.delta_sic = v;
            break;
        case SweepAxis::beta_min:
            s.truth.profile = RisHardwareProfile(v, config.profile.delta(), config.profile.alpha());
            break;
        }
        points.push_back(s);
    }
    const std::string axis = to_string(config.sweep_axis);
    auto r = run_paired(config, "param-sweep-" + axis, axis, points);

    const auto &robust = config.arms[reference_arm(config.arms)].label;
    const auto means = arm_means(r, robust);
    switch (config.sweep_axis)
    {
    case SweepAxis::distortion:
        r.checks.push_back({robust + " mean sum rate nonincreasing in m_t = m_r", monotone(means, false), join(means)});
        break;
    case SweepAxis::beta_min: {
        const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
        const double variation = means.empty() ? 0.0 : (*hi - *lo) / *hi;
        r.checks.push_back({robust + " mean sum rate varies < 10% across beta_min", variation < 0.10,
                            "relative variation " + num(variation)});
        break;
    }
    case SweepAxis::delta_sic: {
        const auto share = arm_means(r, robust, true);
        const bool ok = monotone(share, false) && !share.empty() && share.back() < 0.05;
        r.checks.push_back({robust + " common-stream share nonincreasing in delta_sic, terminal < 0.05", ok, join(share)});
        break;
    }
    }
    add_scheme_checks(config, r);
    return r;
}

ConvergenceResult run_convergence_trace(const ExperimentConfig &config)
{
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    const std::uint64_t stream = hash_string("convergence");
    const std::uint64_t phase_stream = hash_string("convergence/phases");
    const double noise_w = dbm_to_watt(config.noise_dbm);
    const HardwareModel truth{config.profile, config.impairments};
    const std::vector<ArmSpec> arms{{"practical_aware", Scheme::rsma, {true, true, true}},
                                    {"ideal_ris", Scheme::rsma, {true, true, false}}};

    AoConfig base = config.ao;
    base.max_power = dbm_to_watt(config.max_power_dbm);
    base.gamma_th = config.gamma_th;
    base.enforce_qos = config.gamma_th > 0.0;

    struct Slot
    {
        std::vector<AoResult> runs;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(config.trials));
    parallel_for(slots.size(), config.workers, [&](std::size_t i) {
        for (int attempt = 0; attempt <= config.max_redraws; ++attempt)
        {
            const auto channel =
                draw_channel(config.geometry, config.fading, noise_w, derive_seed(config.master_seed, stream, i, attempt));
            const auto seed = derive_seed(config.master_seed, phase_stream, i, attempt);
            std::vector<AoResult> runs;
            for (const auto &arm : arms)
            {
                AoConfig c = base;
                c.flags = arm.flags;
                runs.push_back(run_baseline(channel, truth, c, seed));
                if (runs.front().best_effort)
                    break;
            }
            if (!runs.front().best_effort)
            {
                slots[i].runs = std::move(runs);
                return;
            }
        }
    });

    ConvergenceResult out;
    out.config_hash = config_hash(config);
    out.master_seed = config.master_seed;
    int traces = 0, monotone_traces = 0, plateaued = 0, paired = 0;
    double aware_final = 0.0, ideal_final = 0.0, worst_drop = 0.0;
    for (std::size_t i = 0; i < slots.size(); ++i)
    {
        if (slots[i].runs.empty())
            continue;
        for (std::size_t a = 0; a < arms.size(); ++a)
            for (const auto &e : slots[i].runs[a].trace.entries)
                out.rows.push_back({static_cast<int>(i), arms[a].label, e});
        const auto &aware = slots[i].runs[0];
        ++traces;
        worst_drop = std::max(worst_drop, aware.trace.worst_decrease());
        monotone_traces += aware.trace.worst_decrease() <= 1e-8 ? 1 : 0;
        const auto rates = aware.trace.sum_rates();
        const std::size_t n = rates.size();
        const double last5 = n > 5 ? rates[n - 1] - rates[n - 6] : 0.0;
        plateaued += (aware.converged || last5 < config.ao.outer_tolerance) ? 1 : 0;
        aware_final += aware.report.sum_rate;
        ideal_final += slots[i].runs[1].report.sum_rate;
        ++paired;
    }
    out.checks.push_back({"practical-aware traces nondecreasing within 1e-8", traces > 0 && monotone_traces == traces,
                          std::to_string(monotone_traces) + " of " + std::to_string(traces) + ", worst drop " +
                              num(worst_drop)});
    out.checks.push_back({"practical-aware final >= ideal-RIS final (mean over seeds)",
                          paired > 0 && aware_final >= ideal_final,
                          num(paired ? aware_final / paired : 0.0) + " vs " + num(paired ? ideal_final / paired : 0.0)});
    out.checks.push_back({"practical-aware traces plateau (converged or last-5 change < tolerance)",
                          traces > 0 && plateaued == traces,
                          std::to_string(plateaued) + " of " + std::to_string(traces)});
    out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::vector<std::filesystem::path> write_result(const Fig2Result &r, const std::filesystem::path &out_dir)
{
    prepare(out_dir);
    const auto csv = out_dir / "fig2.csv";
    auto os = open_out(csv);
    os << "# campaign=fig2 config_hash=" << r.config_hash << " seed=" << r.master_seed << '\n';
    os << "beta_min,correlated,N,gamma_ideal_theory_lin,gamma_practical_mc_lin,stderr_lin,eta_theory,eta_finite_n,"
          "eta_mc\n";
    for (const auto &row : r.rows)
        os << num(row.beta_min) << ',' << (row.correlated ? 1 : 0) << ',' << row.elements << ','
           << num(row.gamma_ideal_theory) << ',' << num(row.gamma_practical_mc) << ',' << num(row.stderr_mc) << ','
           << num(row.eta_theory) << ',' << num(row.eta_finite_n) << ',' << num(row.eta_mc) << '\n';
    auto files = write_checks("fig2", r.config_hash, r.checks, out_dir);
    files.insert(files.begin(), csv);
    return files;
}

std::vector<std::filesystem::path> write_result(const CampaignResult &r, const std::filesystem::path &out_dir)
{
    prepare(out_dir);
    const auto header = "# campaign=" + r.campaign + " config_hash=" + r.config_hash +
                        " seed=" + std::to_string(r.master_seed) + '\n';
    const auto trials = out_dir / (r.campaign + "_trials.csv");
    {
        auto os = open_out(trials);
        os << header << "point," << r.x_column << ",trial,attempts,arm,scheme,sum_rate_bps_hz,rate_c_bps_hz";
        for (int k = 0; k < r.users; ++k)
            os << ",rate_p" << k + 1 << "_bps_hz";
        os << ",common_share,best_effort,converged,outer_iterations\n";
        for (const auto &t : r.trials)
        {
            os << t.point << ',' << num(t.x) << ',' << t.trial << ',' << t.attempts << ',' << t.arm << ','
               << to_string(t.report.scheme) << ',' << num(t.report.sum_rate) << ',' << num(t.report.rate_c);
            for (int k = 0; k < r.users; ++k)
                os << ',' << num(k < static_cast<int>(t.report.rate_p.size()) ? t.report.rate_p[k] : std::nan(""));
            os << ',' << num(t.share) << ',' << (t.best_effort ? 1 : 0) << ',' << (t.converged ? 1 : 0) << ','
               << t.iterations << '\n';
        }
    }
    const auto aggregate = out_dir / (r.campaign + "_aggregate.csv");
    {
        auto os = open_out(aggregate);
        os << header << "point," << r.x_column
           << ",arm,trials,mean_sum_rate_bps_hz,stderr_sum_rate_bps_hz,mean_rate_c_bps_hz,mean_common_share,"
              "best_effort_trials\n";
        for (const auto &a : r.aggregate)
            os << a.point << ',' << num(a.x) << ',' << a.arm << ',' << a.count << ',' << num(a.mean_sum_rate) << ','
               << num(a.stderr_sum_rate) << ',' << num(a.mean_rate_c) << ',' << num(a.mean_share) << ','
               << a.best_effort << '\n';
    }
    const auto summary = out_dir / (r.campaign + "_summary.json");
    {
        ojson agg = ojson::array();
        for (const auto &a : r.aggregate)
            agg.push_back({{"point", a.point},
                           {r.x_column, a.x},
                           {"arm", a.arm},
                           {"trials", a.count},
                           {"mean_sum_rate_bps_hz", a.mean_sum_rate},
                           {"stderr_sum_rate_bps_hz", a.stderr_sum_rate},
                           {"mean_common_share", a.mean_share}});
        ojson j;
        j["campaign"] = r.campaign;
        j["config_hash"] = r.config_hash;
        j["master_seed"] = r.master_seed;
        j["redraws"] = r.redraws;
        j["dropped_trials"] = r.dropped_trials;
        j["checks"] = checks_json(r.checks);
        j["aggregate"] = agg;
        auto os = open_out(summary);
        os << j.dump(2) << '\n';
    }
    return {trials, aggregate, summary};
}

std::vector<std::filesystem::path> write_result(const ConvergenceResult &r, const std::filesystem::path &out_dir)
{
    prepare(out_dir);
    const auto csv = out_dir / "convergence.csv";
    auto os = open_out(csv);
    os << "# campaign=convergence config_hash=" << r.config_hash << " seed=" << r.master_seed << '\n';
    os << "trial,arm,iteration,sum_rate_bps_hz,model_sum_rate_bps_hz,rate_c_bps_hz,common_power_w,admm_iterations,"
          "admm_primal_residual\n";
    for (const auto &row : r.rows)
        os << row.trial << ',' << row.arm << ',' << row.entry.iteration << ',' << num(row.entry.sum_rate) << ','
           << num(row.entry.model_sum_rate) << ',' << num(row.entry.rate_c) << ',' << num(row.entry.common_power)
           << ',' << row.entry.admm_iterations << ',' << num(row.entry.admm_residual) << '\n';
    auto files = write_checks("convergence", r.config_hash, r.checks, out_dir);
    files.insert(files.begin(), csv);
    return files;
}

std::vector<std::filesystem::path> write_checks(const std::string &name, const std::string &hash,
                                                const std::vector<Check> &checks, const std::filesystem::path &out_dir)
{
    prepare(out_dir);
    const auto path = out_dir / (name + "_summary.json");
    bool all = true;
    for (const auto &c : checks)
        all = all && c.passed;
    ojson j;
    j["campaign"] = name;
    j["config_hash"] = hash;
    j["all_passed"] = all;
    j["checks"] = checks_json(checks);
    auto os = open_out(path);
    os << j.dump(2) << '\n';
    return {path};
}

namespace {

BeamformingState random_state(std::mt19937_64 &rng, int users, int antennas, int elements, double power)
{
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(-pi, pi);
    auto vec = [&](int m) {
        CVec v(m);
        for (int i = 0; i < m; ++i)
            v(i) = cplx(n(rng), n(rng));
        return v;
    };
    BeamformingState s;
    s.w_c = vec(antennas);
    for (int k = 0; k < users; ++k)
        s.w.push_back(vec(antennas));
    const double scale = std::sqrt(power / s.total_power());
    s.w_c *= scale;
    for (auto &w : s.w)
        w *= scale;
    std::vector<double> theta(elements);
    for (auto &t : theta)
        t = u(rng);
    s.theta = PhaseVector(theta);
    return s;
}

Check summarize(const std::string &name, int failures, int cases, double worst, const std::string &metric)
{
    return {name, failures == 0,
            std::to_string(cases - failures) + " of " + std::to_string(cases) + " passed, worst " + metric + " " +
                num(worst)};
}

} // namespace

std::vector<Check> run_validation_suites(const ExperimentConfig &config)
{
    config.validate();
    std::vector<Check> checks;
    const int T = config.trials;
    const double noise_w = dbm_to_watt(config.noise_dbm);
    const double power = dbm_to_watt(config.max_power_dbm);
    const auto &g = config.geometry;
    std::mt19937_64 rng(derive_seed(config.master_seed, hash_string("validate"), 0));
    auto channel_for = [&](int i) {
        return draw_channel(g, config.fading, noise_w, derive_seed(config.master_seed, hash_string("validate/channel"), i));
    };

    {
        // Taylor moments against Monte Carlo over the configured profile.
        int fail = 0, cases = 0;
        double worst = 0.0;
        std::uniform_real_distribution<double> u(-pi, pi);
        for (double bmin : {0.2, 0.5, 0.8, 1.0})
        {
            const RisHardwareProfile p(bmin, config.profile.delta(), config.profile.alpha());
            const int draws = 200000;
            double m1 = 0.0, m2 = 0.0;
            for (int i = 0; i < draws; ++i)
            {
                const double b = amplitude(p, u(rng));
                m1 += b;
                m2 += b * b;
            }
            m1 /= draws;
            m2 /= draws;
            for (const double err : {std::abs(taylor_mean_beta(p) / m1 - 1.0), std::abs(taylor_mean_beta_sq(p) / m2 - 1.0)})
            {
                ++cases;
                worst = std::max(worst, err);
                fail += err > 0.01 ? 1 : 0;
            }
        }
        checks.push_back(summarize("taylor: S=5 moments within 1% of Monte Carlo", fail, cases, worst, "relative error"));
    }

    {
        // Ideal hardware must reduce the practical model to the ideal one.
        int fail = 0;
        double worst = 0.0;
        const RisHardwareProfile unit(1.0, config.profile.delta(), config.profile.alpha());
        for (int i = 0; i < T; ++i)
        {
            const auto ch = channel_for(i);
            auto s = random_state(rng, g.users, g.bs_antennas, g.ris_elements, power);
            double err = (reflection_vector(unit, s.theta) - ideal_reflection_vector(s.theta)).cwiseAbs().maxCoeff();
            const auto ideal = evaluate(ch, s, unit, ImpairmentProfile::ideal(), Scheme::rsma);
            auto silent = s;
            silent.w_c.setZero();
            const auto no_common = evaluate(ch, silent, config.profile, config.impairments, Scheme::rsma);
            const auto sdma = evaluate(ch, silent, config.profile, config.impairments, Scheme::sdma);
            err = std::max(err, std::abs(no_common.sum_rate - no_common.rate_c - sdma.sum_rate));
            // With zero distortion the closed-form private SINR is signal over interference plus noise.
            s.ris_mode = RisMode::ideal;
            const auto h = effective_channel(ch, s, unit);
            for (int k = 0; k < g.users; ++k)
            {
                double interf = 0.0;
                for (int j = 0; j < g.users; ++j)
                    if (j != k)
                        interf += std::norm(h[k].dot(s.w[j]));
                const double sinr = std::norm(h[k].dot(s.w[k])) / (interf + ch.noise_power[k]);
                err = std::max(err, std::abs(ideal.gamma_p[k] - sinr) / std::max(1.0, sinr));
            }
            worst = std::max(worst, err);
            fail += err > 1e-9 ? 1 : 0;
        }
        checks.push_back(summarize("degeneracy: ideal hardware and silent common stream reduce exactly", fail, T, worst,
                                   "abs error"));
    }

    {
        // Quadratic transform is tight at the optimal multiplier and a lower bound elsewhere.
        int fail = 0;
        double worst = 0.0;
        std::normal_distribution<double> n(0.0, 1.0);
        for (int i = 0; i < T; ++i)
        {
            const auto ch = channel_for(i);
            const auto s = random_state(rng, g.users, g.bs_antennas, g.ris_elements, power);
            PrecoderProblem prob;
            prob.h = effective_channel(ch, s, config.profile);
            prob.sigma_sq = ch.noise_power;
            prob.impairments = config.impairments;
            prob.max_power = power;
            prob.scheme = Scheme::rsma;
            const auto program = prob.program();
            const CVec x = prob.pack(s);
            bool bad = false;
            for (std::size_t t = 0; t < program.terms.size(); ++t)
            {
                const auto &term = program.terms[t];
                const double sinr = program.sinr(t, x);
                const double tight = std::abs(surrogate(term, optimal_multiplier(term, x), x) - sinr) / std::max(1.0, sinr);
                const cplx other = optimal_multiplier(term, x) + cplx(n(rng), n(rng));
                const double excess = std::max(0.0, surrogate(term, other, x) - sinr);
                worst = std::max({worst, tight, excess});
                bad = bad || tight > 1e-10 || excess > 1e-10;
            }
            fail += bad ? 1 : 0;
        }
        checks.push_back(summarize("fp_tightness: surrogate equals SINR at the optimal multiplier, bounds it elsewhere",
                                   fail, T, worst, "violation"));
    }

    {
        // Projection against a dense brute-force scan.
        const ManifoldProjector projector(config.profile);
        const int grid = 200000;
        std::vector<cplx> points(grid);
        for (int i = 0; i < grid; ++i)
        {
            const double th = -pi + 2.0 * pi * i / grid;
            points[i] = amplitude(config.profile, th) * std::polar(1.0, th);
        }
        std::normal_distribution<double> n(0.0, 1.0);
        int fail = 0;
        double worst = 0.0;
        for (int i = 0; i < T; ++i)
        {
            const cplx target(n(rng), n(rng));
            double best = std::numeric_limits<double>::infinity();
            for (const auto &p : points)
                best = std::min(best, std::norm(p - target));
            const double got = projector.distance(projector.project(target), target);
            const double excess = got - best;
            worst = std::max(worst, excess);
            fail += excess > 1e-8 ? 1 : 0;
        }
        checks.push_back(summarize("projection: no worse than a 2e5-point scan", fail, T, worst, "excess distance"));
    }

    AoConfig ao = config.ao;
    ao.max_power = power;
    ao.gamma_th = config.gamma_th;
    ao.enforce_qos = config.gamma_th > 0.0;
    const HardwareModel truth{config.profile, config.impairments};
    {
        int fail = 0, model_fail = 0, cases = 0;
        double worst = 0.0, worst_share = 0.0;
        int dominance_fail = 0;
        double worst_gap = 0.0;
        const std::uint64_t stream = hash_string("validate/ao");
        for (int i = 0; i < T; ++i)
        {
            const auto ch = channel_for(i);
            AoConfig sdma_cfg = ao;
            sdma_cfg.scheme = Scheme::sdma;
            const auto sdma = run_baseline(ch, truth, sdma_cfg, derive_seed(config.master_seed, stream, i));
            const auto rsma = run_multistart(ch, truth, ao, derive_seed(config.master_seed, stream, i), {sdma.state});
            if (rsma.best_effort)
                continue;
            ++cases;
            double drop = 0.0;
            for (std::size_t e = 1; e < rsma.trace.entries.size(); ++e)
                drop = std::max(drop, rsma.trace.entries[e - 1].model_sum_rate - rsma.trace.entries[e].model_sum_rate);
            worst = std::max(worst, drop);
            model_fail += drop > 1e-8 ? 1 : 0;
            const double share = common_stream_share(rsma.state);
            worst_share = std::max(worst_share, rsma.state.total_power() / power - 1.0);
            fail += (share < 0.0 || share > 1.0 || rsma.state.total_power() > power * (1.0 + 1e-9)) ? 1 : 0;
            if (!sdma.best_effort)
            {
                const double gap = sdma.report.sum_rate - rsma.report.sum_rate;
                worst_gap = std::max(worst_gap, gap);
                dominance_fail += gap > 1e-6 ? 1 : 0;
            }
        }
        checks.push_back(summarize("ao_monotonicity: optimizer-model sum rate nondecreasing", model_fail, cases, worst,
                                   "drop"));
        checks.push_back(summarize("ao_monotonicity: power budget and share bounds hold", fail, cases, worst_share,
                                   "relative power excess"));
        checks.push_back(summarize("scheme_dominance: robust RSMA >= SDMA - 1e-6", dominance_fail, cases, worst_gap,
                                   "gap"));
    }

    {
        // Rate bookkeeping and monotonicity in the distortion levels.
        int fail = 0;
        double worst = 0.0;
        for (int i = 0; i < T; ++i)
        {
            const auto ch = channel_for(i);
            auto s = random_state(rng, g.users, g.bs_antennas, g.ris_elements, power);
            for (const auto scheme : {Scheme::rsma, Scheme::sdma, Scheme::noma})
            {
                if (scheme == Scheme::noma)
                    s.w_c.setZero();
                const auto r = evaluate(ch, s, config.profile, config.impairments, scheme);
                double sum = r.rate_c, err = 0.0;
                for (double rp : r.rate_p)
                {
                    sum += rp;
                    err = std::max(err, -rp);
                }
                err = std::max({err, std::abs(sum - r.sum_rate), -r.rate_c});
                if (scheme == Scheme::rsma)
                {
                    double common = std::numeric_limits<double>::infinity();
                    for (double gc : r.gamma_c)
                        common = std::min(common, std::log2(1.0 + gc));
                    err = std::max(err, std::abs(common - r.rate_c));
                }
                auto worse = config.impairments;
                worse.m_t = std::min(0.08, worse.m_t + 0.02);
                worse.m_r = std::min(0.08, worse.m_r + 0.02);
                err = std::max(err, evaluate(ch, s, config.profile, worse, scheme).sum_rate - r.sum_rate);
                worst = std::max(worst, err);
                fail += err > 1e-12 ? 1 : 0;
            }
        }
        checks.push_back(summarize("rate_invariants: rates nonnegative, sums consistent, nonincreasing in m", fail, 3 * T,
                                   worst, "violation"));
    }
    return checks;
}

} // namespace risrsma
