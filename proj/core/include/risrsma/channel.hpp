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
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "risrsma/types.hpp"

namespace risrsma {

using Point3 = Eigen::Vector3d;

/// Node placement and array sizes. Users are dropped uniformly (by area) in
/// a horizontal disc around user_center on every draw.
struct ScenarioGeometry
{
    Point3 bs_position{0.0, 0.0, 0.0};
    Point3 ris_position{40.0, 40.0, 0.0};
    Point3 user_center{50.0, 0.0, 0.0};
    double user_radius = 8.0;
    int users = 2;        // K
    int bs_antennas = 8;  // M
    int ris_elements = 16; // N

    /// Throws std::invalid_argument on non-positive sizes, negative radius,
    /// or coincident BS / RIS / user-disc nodes.
    void validate() const;
};

enum class FadingModel
{
    rayleigh,
    rician,
    rician_los_dominant
};

struct FadingSpec
{
    FadingModel model = FadingModel::rician;
    double rician_k_factor = db_to_linear(3.0); // linear
    /// Exponential correlation coefficient r, [R]_ij = r^|i-j| across RIS
    /// elements. Only used by the Rayleigh model.
    std::optional<double> correlation;

    static FadingSpec rayleigh(std::optional<double> correlation = std::nullopt);
    static FadingSpec rician(double k_factor_db = 3.0);
    static FadingSpec los_dominant(double k_factor_db = 20.0);

    void validate() const;
};

/// One draw of the cascaded BS -> RIS -> user channels, in physical units.
struct ChannelRealization
{
    CMat G;                          // N x M, BS -> RIS
    std::vector<CVec> f;             // K vectors of length N, RIS -> user k
    std::vector<double> noise_power; // sigma_k^2 in watts
    std::vector<Point3> user_positions;

    int users() const { return static_cast<int>(f.size()); }
    int bs_antennas() const { return static_cast<int>(G.cols()); }
    int ris_elements() const { return static_cast<int>(G.rows()); }

    /// Same SINRs with unit noise: f_k / sigma_k and sigma_k^2 = 1.
    ChannelRealization normalized() const;
};

/// 37.3 + 22.0 log10(d); throws std::domain_error for d <= 0.
double path_loss_db(double distance_m);

/// Linear power gain 10^(-PL/10).
double path_gain(double distance_m);

/// Deterministic given the seed: draws user positions, small-scale fading and
/// applies the per-hop path gains.
ChannelRealization draw_channel(const ScenarioGeometry &geometry,
                                const FadingSpec &fading,
                                double noise_power_w,
                                std::uint64_t seed);

/// f ~ CN(0, tau_f^2 R), g ~ CN(0, tau_g^2 R) with R = I unless an exponential
/// correlation coefficient is given. tau_f, tau_g are standard deviations.
std::pair<CVec, CVec> draw_iid_pair(int n, double tau_f, double tau_g, std::uint64_t seed,
                                    std::optional<double> correlation = std::nullopt);

/// Lower Cholesky factor of [R]_ij = r^|i-j|.
RMat exponential_correlation_factor(int n, double r);

/// Half-wavelength ULA response exp(j pi n cos_angle), n = 0..size-1, where
/// cos_angle is the direction cosine between the link and the array axis.
CVec ula_response(int size, double cos_angle);

/// splitmix64 finalizer over (master, stream, index, attempt).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index,
                          std::uint64_t attempt = 0);

/// FNV-1a, used to turn campaign names into seed streams.
std::uint64_t hash_string(std::string_view text);

/// Debug dump of G followed by each f_k. Layout: 8-byte magic "RISCHAN1",
/// uint32 dtype tag (1 = complex128 interleaved re/im), uint32 K, uint32 N,
/// uint32 M, then K doubles of noise power, then G row-major (N x M) and the
/// K vectors f_k. Little-endian host order.
void write_channel_dump(const std::filesystem::path &path, const ChannelRealization &channel);
ChannelRealization read_channel_dump(const std::filesystem::path &path);

} // namespace risrsma
