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

#include <optional>
#include <string>
#include <vector>

#include "risrsma/channel.hpp"
#include "risrsma/ris_model.hpp"

namespace risrsma {

/// Transceiver distortion ratios and the residual-SIC coefficient.
struct ImpairmentProfile
{
    double m_t = 0.0;       // transmit distortion / signal power
    double m_r = 0.0;       // receive distortion / signal power
    double delta_sic = 0.0; // residual amplitude of a cancelled stream

    static ImpairmentProfile ideal() { return {}; }

    /// m_t, m_r in [0, 1), delta_sic in [0, 1]; throws std::invalid_argument.
    void validate() const;
};

enum class Scheme
{
    rsma,
    sdma,
    noma
};

const char *to_string(Scheme scheme);
Scheme scheme_from_string(const std::string &name);

/// Precoders and RIS phases. w_c is all-zero for SDMA and NOMA.
struct BeamformingState
{
    CVec w_c;
    std::vector<CVec> w;
    PhaseVector theta;
    RisMode ris_mode = RisMode::practical;

    double common_power() const { return w_c.squaredNorm(); }
    double total_power() const;
};

/// Per-user SINRs, distortion powers (watts) and rates (bits/s/Hz).
struct RateReport
{
    Scheme scheme = Scheme::rsma;
    std::vector<double> gamma_c; // common-stream SINR at each user (RSMA only)
    std::vector<double> gamma_p; // private SINR (NOMA: min over decoding users)
    std::vector<double> phi_c;
    std::vector<double> phi_p;
    double rate_c = 0.0;
    std::vector<double> rate_p;
    double sum_rate = 0.0;
};

/// h_k = G^H diag(phi) f_k, i.e. h_k^H = f_k^H diag(phi^H) G.
std::vector<CVec> effective_channel(const ChannelRealization &channel, const BeamformingState &state,
                                    const RisHardwareProfile &profile);

std::vector<CVec> effective_channel(const ChannelRealization &channel, const CVec &phi);

struct DistortionPowers
{
    double common;  // Phi_c,k
    double private_; // Phi_p,k
};

/// Phi_c = h^H [m_r A + m_t (1 + m_r) diag(A)] h + (1 + m_r) sigma^2,
/// Phi_p = delta_sic^2 |h^H w_c|^2 + Phi_c, A = sum of all stream covariances.
DistortionPowers distortion_powers(const CVec &h, const BeamformingState &state,
                                   const ImpairmentProfile &impairments, double sigma_sq);

struct RsmaSinr
{
    double common;
    double private_;
};

std::vector<RsmaSinr> rsma_sinrs(const std::vector<CVec> &h, const BeamformingState &state,
                                 const ImpairmentProfile &impairments, const std::vector<double> &sigma_sq);

/// R_c = min_k log2(1 + gamma_c,k), sum = R_c + sum_k log2(1 + gamma_p,k).
RateReport rsma_rates(const std::vector<RsmaSinr> &sinrs);

/// SINR table for ordered SIC. order[p] is the user decoded at position p;
/// gamma(p, q) is the SINR of stream order[p] at user order[q] for q >= p
/// (NaN below the diagonal).
struct NomaSinrs
{
    std::vector<int> order;
    RMat gamma;
    std::vector<double> phi; // distortion + noise at each user, no residual terms

    /// min over decoding users for each stream, indexed by user
    std::vector<double> effective() const;
};

/// Throws std::invalid_argument when order is not a permutation of 0..K-1.
NomaSinrs noma_sinrs(const std::vector<CVec> &h, const BeamformingState &state,
                     const ImpairmentProfile &impairments, const std::vector<double> &sigma_sq,
                     const std::vector<int> &order);

RateReport noma_rates(const NomaSinrs &sinrs);

/// Decoding order with the weakest effective channel first.
std::vector<int> gain_ordered_decoding(const std::vector<CVec> &h);

/// Full evaluation of a state under a hardware model. For NOMA an empty
/// order means gain_ordered_decoding on the current effective channels.
RateReport evaluate(const ChannelRealization &channel, const BeamformingState &state,
                    const RisHardwareProfile &profile, const ImpairmentProfile &impairments,
                    Scheme scheme, const std::vector<int> &noma_order = {});

/// Structure of one SINR in a scheme, in terms of precoder blocks. RSMA
/// blocks are [w_c, w_1, ..., w_K]; SDMA and NOMA blocks are [w_1, ..., w_K].
/// The denominator is sum_b coeff_b |h_user^H w_b|^2 plus the HWI distortion
/// of every block plus (1 + m_r) sigma_user^2.
struct SinrSpec
{
    int stream = 0; // rate slack this SINR bounds
    int user = 0;   // receiving user
    int signal = 0; // block carrying the desired stream
    std::vector<std::pair<int, double>> interference;
};

struct SchemeLayout
{
    Scheme scheme = Scheme::rsma;
    int users = 0;
    int blocks = 0;
    int streams = 0;
    std::vector<SinrSpec> sinrs;
    std::vector<int> noma_order;

    /// QoS rows as (coefficient per stream) with threshold gamma_th:
    /// RSMA xi_c / K + xi_k, SDMA / NOMA xi_k.
    std::vector<std::vector<double>> qos_coefficients() const;

    std::vector<CVec> blocks_of(const BeamformingState &state) const;
    /// Writes blocks back into a state; w_c is zeroed for SDMA / NOMA.
    void assign(BeamformingState &state, const std::vector<CVec> &blocks) const;
};

SchemeLayout scheme_layout(Scheme scheme, int users, double delta_sic, const std::vector<int> &noma_order = {});

/// Flat record: scheme, sum_rate, rate_c, then per-user columns.
std::string csv_header(int users);
std::string to_csv_row(const RateReport &report);
std::string to_json(const RateReport &report);

} // namespace risrsma
