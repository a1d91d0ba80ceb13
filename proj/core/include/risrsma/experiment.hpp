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
#include <filesystem>
#include <string>
#include <vector>

#include "risrsma/ao_driver.hpp"
#include "risrsma/asymptotic.hpp"
#include "risrsma/channel.hpp"

namespace risrsma {

/// One optimizer variant evaluated on every trial.
struct ArmSpec
{
    std::string label;
    Scheme scheme = Scheme::rsma;
    ModelFlags flags;
};

enum class SweepAxis
{
    distortion, // m_t = m_r
    delta_sic,
    beta_min
};

const char *to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string &name);
std::vector<double> default_sweep_values(SweepAxis axis);

struct Fig2Config
{
    std::vector<int> elements{16, 32, 64, 128, 256};
    std::vector<double> beta_min{0.2, 0.5, 0.8, 1.0};
    std::size_t trials = 100000;
    double correlation = 0.7; // extra correlated-channel rows for the first beta_min
    int taylor_order = 5;
};

struct ExperimentConfig
{
    ScenarioGeometry geometry;
    FadingSpec fading = FadingSpec::rician();
    RisHardwareProfile profile = RisHardwareProfile::reference();
    ImpairmentProfile impairments{0.01, 0.01, 0.1};
    double noise_dbm = -110.0;
    double max_power_dbm = 30.0;
    double gamma_th = 1.0;
    std::vector<double> power_grid_dbm{20.0, 22.5, 25.0, 27.5, 30.0, 32.5, 35.0, 37.5, 40.0};
    SweepAxis sweep_axis = SweepAxis::delta_sic;
    std::vector<double> sweep_values{0.04, 0.2, 0.35, 0.5, 0.7, 0.9};
    std::vector<ArmSpec> arms;
    AoConfig ao;
    Fig2Config fig2;
    int trials = 200;
    std::uint64_t master_seed = 1;
    std::filesystem::path out_dir = "results";
    unsigned workers = 0;
    int max_redraws = 20;

    /// Robust RSMA, "w/n HWI" RSMA (HWI only), SDMA and NOMA.
    static std::vector<ArmSpec> default_arms();

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

/// Parses the JSON config; missing keys keep their defaults, unknown keys
/// are rejected.
ExperimentConfig parse_config(const std::string &json_text);
ExperimentConfig load_config(const std::filesystem::path &path);
/// Canonical JSON of every field.
std::string config_to_json(const ExperimentConfig &config);
/// 16 hex digits of FNV-1a over the canonical JSON.
std::string config_hash(const ExperimentConfig &config);

struct Check
{
    std::string name;
    bool passed = false;
    std::string detail;
};

struct TrialRecord
{
    int point = 0;
    double x = 0.0; // P_max in dBm or the swept parameter
    int trial = 0;
    int attempts = 1; // channel draws used, including redraws
    std::string arm;
    RateReport report;
    double share = 0.0; // common-stream power share
    bool best_effort = false;
    bool converged = false;
    int iterations = 0;
};

struct AggregateRow
{
    int point = 0;
    double x = 0.0;
    std::string arm;
    int count = 0;
    double mean_sum_rate = 0.0;
    double stderr_sum_rate = 0.0;
    double mean_rate_c = 0.0;
    double mean_share = 0.0;
    int best_effort = 0;
};

struct CampaignResult
{
    std::string campaign;
    std::string x_column; // header of the x column including units
    std::string config_hash;
    std::uint64_t master_seed = 0;
    int users = 0;
    std::vector<TrialRecord> trials;
    std::vector<AggregateRow> aggregate;
    std::vector<Check> checks;
    int dropped_trials = 0; // no QoS-feasible draw within max_redraws
    int redraws = 0;
    double wall_time_s = 0.0; // console only, never written to files
};

struct Fig2Row
{
    double beta_min = 0.0;
    bool correlated = false;
    int elements = 0;
    double gamma_ideal_theory = 0.0;
    double gamma_practical_mc = 0.0;
    double stderr_mc = 0.0;
    double eta_theory = 0.0;
    double eta_finite_n = 0.0;
    double eta_mc = 0.0;
};

struct Fig2Result
{
    std::string config_hash;
    std::uint64_t master_seed = 0;
    std::vector<Fig2Row> rows;
    std::vector<Check> checks;
    double wall_time_s = 0.0;
};

struct ConvergenceRow
{
    int trial = 0;
    std::string arm;
    AoTraceEntry entry;
};

struct ConvergenceResult
{
    std::string config_hash;
    std::uint64_t master_seed = 0;
    std::vector<ConvergenceRow> rows;
    std::vector<Check> checks;
    double wall_time_s = 0.0;
};

Fig2Result run_fig2_campaign(const ExperimentConfig &config);
/// Paired trials over power_grid_dbm; every arm sees the same channel.
CampaignResult run_sumrate_vs_power(const ExperimentConfig &config);
/// Paired trials over sweep_values of sweep_axis at max_power_dbm.
CampaignResult run_parameter_sweep(const ExperimentConfig &config);
/// Practical-aware and ideal-RIS robust RSMA traces, one run per trial.
ConvergenceResult run_convergence_trace(const ExperimentConfig &config);

/// Invariant suites sized by config.trials; used by `validate`.
std::vector<Check> run_validation_suites(const ExperimentConfig &config);

/// Each writer creates out_dir and returns the files it wrote.
std::vector<std::filesystem::path> write_result(const Fig2Result &result, const std::filesystem::path &out_dir);
std::vector<std::filesystem::path> write_result(const CampaignResult &result, const std::filesystem::path &out_dir);
std::vector<std::filesystem::path> write_result(const ConvergenceResult &result, const std::filesystem::path &out_dir);
std::vector<std::filesystem::path> write_checks(const std::string &name, const std::string &hash,
                                                const std::vector<Check> &checks, const std::filesystem::path &out_dir);

/// Mean and standard error of the mean. NaN for no values, stderr 0 for one.
std::pair<double, double> mean_stderr(const std::vector<double> &values);

} // namespace risrsma
