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

#include "risrsma/rate_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace risrsma {

namespace {

double abs2(cplx z) { return std::norm(z); }

// h^H [m_r A + m_t (1 + m_r) diag(A)] h + (1 + m_r) sigma^2 for A built from
// the given stream set.
double hwi_noise(const CVec &h, const std::vector<const CVec *> &streams, const ImpairmentProfile &imp,
                 double sigma_sq)
{
    double coherent = 0.0;
    double diagonal = 0.0;
    for (const CVec *w : streams)
    {
        if (w->size() == 0)
            continue;
        coherent += abs2(h.dot(*w));
        diagonal += (h.cwiseAbs2().array() * w->cwiseAbs2().array()).sum();
    }
    return imp.m_r * coherent + imp.m_t * (1.0 + imp.m_r) * diagonal + (1.0 + imp.m_r) * sigma_sq;
}

double log2p1(double x) { return std::log2(1.0 + x); }

void check_dimensions(const std::vector<CVec> &h, const BeamformingState &state, const std::vector<double> &sigma_sq)
{
    if (h.size() != state.w.size() || h.size() != sigma_sq.size())
        throw std::invalid_argument("user count mismatch between channels, precoders and noise");
    for (std::size_t k = 0; k < h.size(); ++k)
        if (h[k].size() != state.w[k].size())
            throw std::invalid_argument("precoder length does not match BS antenna count");
}

} // namespace

void ImpairmentProfile::validate() const
{
    if (!(m_t >= 0.0 && m_t < 1.0) || !(m_r >= 0.0 && m_r < 1.0))
        throw std::invalid_argument("distortion ratios must lie in [0, 1)");
    if (!(delta_sic >= 0.0 && delta_sic <= 1.0))
        throw std::invalid_argument("delta_sic must lie in [0, 1]");
}

const char *to_string(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::rsma:
        return "rsma";
    case Scheme::sdma:
        return "sdma";
    case Scheme::noma:
        return "noma";
    }
    return "?";
}

Scheme scheme_from_string(const std::string &name)
{
    if (name == "rsma")
        return Scheme::rsma;
    if (name == "sdma")
        return Scheme::sdma;
    if (name == "noma")
        return Scheme::noma;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

double BeamformingState::total_power() const
{
    double p = w_c.squaredNorm();
    for (const auto &wk : w)
        p += wk.squaredNorm();
    return p;
}

std::vector<CVec> effective_channel(const ChannelRealization &channel, const CVec &phi)
{
    if (phi.size() != channel.G.rows())
        throw std::invalid_argument("reflection vector length does not match RIS size");
    std::vector<CVec> h;
    h.reserve(channel.f.size());
    for (const auto &fk : channel.f)
    {
        if (fk.size() != phi.size())
            throw std::invalid_argument("RIS->user channel length does not match RIS size");
        h.push_back(channel.G.adjoint() * phi.cwiseProduct(fk));
    }
    return h;
}

std::vector<CVec> effective_channel(const ChannelRealization &channel, const BeamformingState &state,
                                    const RisHardwareProfile &profile)
{
    if (state.theta.size() != static_cast<std::size_t>(channel.G.rows()))
        throw std::invalid_argument("phase vector length does not match RIS size");
    return effective_channel(channel, reflection_vector(state.ris_mode, profile, state.theta));
}

DistortionPowers distortion_powers(const CVec &h, const BeamformingState &state, const ImpairmentProfile &impairments,
                                   double sigma_sq)
{
    std::vector<const CVec *> streams{&state.w_c};
    for (const auto &wk : state.w)
        streams.push_back(&wk);
    const double phi_c = hwi_noise(h, streams, impairments, sigma_sq);
    const double residual = state.w_c.size() ? abs2(h.dot(state.w_c)) : 0.0;
    return {phi_c, impairments.delta_sic * impairments.delta_sic * residual + phi_c};
}

std::vector<RsmaSinr> rsma_sinrs(const std::vector<CVec> &h, const BeamformingState &state,
                                 const ImpairmentProfile &impairments, const std::vector<double> &sigma_sq)
{
    check_dimensions(h, state, sigma_sq);
    const std::size_t K = h.size();
    std::vector<RsmaSinr> out(K);
    for (std::size_t k = 0; k < K; ++k)
    {
        const auto phi = distortion_powers(h[k], state, impairments, sigma_sq[k]);
        std::vector<double> gains(K);
        for (std::size_t i = 0; i < K; ++i)
            gains[i] = abs2(h[k].dot(state.w[i]));
        const double all_private = std::accumulate(gains.begin(), gains.end(), 0.0);
        const double common = state.w_c.size() ? abs2(h[k].dot(state.w_c)) : 0.0;
        out[k].common = common / (all_private + phi.common);
        out[k].private_ = gains[k] / (all_private - gains[k] + phi.private_);
    }
    return out;
}

RateReport rsma_rates(const std::vector<RsmaSinr> &sinrs)
{
    RateReport r;
    r.scheme = Scheme::rsma;
    r.rate_c = std::numeric_limits<double>::infinity();
    for (const auto &s : sinrs)
    {
        r.gamma_c.push_back(s.common);
        r.gamma_p.push_back(s.private_);
        r.rate_p.push_back(log2p1(s.private_));
        r.rate_c = std::min(r.rate_c, log2p1(s.common));
    }
    if (sinrs.empty())
        r.rate_c = 0.0;
    r.sum_rate = r.rate_c + std::accumulate(r.rate_p.begin(), r.rate_p.end(), 0.0);
    return r;
}

std::vector<double> NomaSinrs::effective() const
{
    const auto K = static_cast<Eigen::Index>(order.size());
    std::vector<double> out(order.size());
    for (Eigen::Index p = 0; p < K; ++p)
    {
        double g = std::numeric_limits<double>::infinity();
        for (Eigen::Index q = p; q < K; ++q)
            g = std::min(g, gamma(p, q));
        out[static_cast<std::size_t>(order[p])] = g;
    }
    return out;
}

NomaSinrs noma_sinrs(const std::vector<CVec> &h, const BeamformingState &state, const ImpairmentProfile &impairments,
                     const std::vector<double> &sigma_sq, const std::vector<int> &order)
{
    check_dimensions(h, state, sigma_sq);
    const int K = static_cast<int>(h.size());
    {
        std::vector<int> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> expected(K);
        std::iota(expected.begin(), expected.end(), 0);
        if (sorted != expected)
            throw std::invalid_argument("NOMA decoding order must be a permutation of the users");
    }
    if (state.w_c.size() && state.w_c.squaredNorm() > 0.0)
        throw std::invalid_argument("NOMA states carry no common stream");

    std::vector<const CVec *> streams;
    for (const auto &wk : state.w)
        streams.push_back(&wk);
    const double d2 = impairments.delta_sic * impairments.delta_sic;

    NomaSinrs out;
    out.order = order;
    out.gamma = RMat::Constant(K, K, std::numeric_limits<double>::quiet_NaN());
    out.phi.resize(K);
    for (int q = 0; q < K; ++q)
    {
        const int user = order[q];
        out.phi[user] = hwi_noise(h[user], streams, impairments, sigma_sq[user]);
    }
    for (int p = 0; p < K; ++p)
    {
        const int stream = order[p];
        for (int q = p; q < K; ++q)
        {
            const CVec &hl = h[order[q]];
            double interference = 0.0;
            for (int i = p + 1; i < K; ++i)
                interference += abs2(hl.dot(state.w[order[i]]));
            double residual = 0.0;
            for (int i = 0; i < p; ++i)
                residual += d2 * abs2(hl.dot(state.w[order[i]]));
            out.gamma(p, q) = abs2(hl.dot(state.w[stream])) / (interference + residual + out.phi[order[q]]);
        }
    }
    return out;
}

RateReport noma_rates(const NomaSinrs &sinrs)
{
    RateReport r;
    r.scheme = Scheme::noma;
    r.gamma_p = sinrs.effective();
    r.gamma_c.assign(r.gamma_p.size(), 0.0);
    r.phi_c = sinrs.phi;
    r.phi_p = sinrs.phi;
    for (double g : r.gamma_p)
        r.rate_p.push_back(log2p1(g));
    r.sum_rate = std::accumulate(r.rate_p.begin(), r.rate_p.end(), 0.0);
    return r;
}

std::vector<int> gain_ordered_decoding(const std::vector<CVec> &h)
{
    std::vector<int> order(h.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return h[a].squaredNorm() < h[b].squaredNorm(); });
    return order;
}

RateReport evaluate(const ChannelRealization &channel, const BeamformingState &state,
                    const RisHardwareProfile &profile, const ImpairmentProfile &impairments, Scheme scheme,
                    const std::vector<int> &noma_order)
{
    const auto h = effective_channel(channel, state, profile);
    if (scheme == Scheme::noma)
    {
        const auto order = noma_order.empty() ? gain_ordered_decoding(h) : noma_order;
        return noma_rates(noma_sinrs(h, state, impairments, channel.noise_power, order));
    }
    BeamformingState s = state;
    if (scheme == Scheme::sdma)
        s.w_c = CVec::Zero(channel.bs_antennas());
    RateReport r = rsma_rates(rsma_sinrs(h, s, impairments, channel.noise_power));
    for (std::size_t k = 0; k < h.size(); ++k)
    {
        const auto phi = distortion_powers(h[k], s, impairments, channel.noise_power[k]);
        r.phi_c.push_back(phi.common);
        r.phi_p.push_back(phi.private_);
    }
    r.scheme = scheme;
    return r;
}

std::vector<std::vector<double>> SchemeLayout::qos_coefficients() const
{
    std::vector<std::vector<double>> rows;
    for (int k = 0; k < users; ++k)
    {
        std::vector<double> c(streams, 0.0);
        if (scheme == Scheme::rsma)
        {
            c[0] = 1.0 / users;
            c[k + 1] = 1.0;
        }
        else
        {
            c[k] = 1.0;
        }
        rows.push_back(std::move(c));
    }
    return rows;
}

std::vector<CVec> SchemeLayout::blocks_of(const BeamformingState &state) const
{
    std::vector<CVec> out;
    if (scheme == Scheme::rsma)
        out.push_back(state.w_c);
    for (const auto &wk : state.w)
        out.push_back(wk);
    return out;
}

void SchemeLayout::assign(BeamformingState &state, const std::vector<CVec> &blocks) const
{
    const int offset = scheme == Scheme::rsma ? 1 : 0;
    const Eigen::Index M = blocks.front().size();
    state.w_c = scheme == Scheme::rsma ? blocks[0] : CVec::Zero(M);
    state.w.assign(blocks.begin() + offset, blocks.end());
}

SchemeLayout scheme_layout(Scheme scheme, int users, double delta_sic, const std::vector<int> &noma_order)
{
    if (users < 1)
        throw std::invalid_argument("need at least one user");
    SchemeLayout layout;
    layout.scheme = scheme;
    layout.users = users;
    const double d2 = delta_sic * delta_sic;
    switch (scheme)
    {
    case Scheme::rsma:
        layout.blocks = users + 1;
        layout.streams = users + 1;
        for (int k = 0; k < users; ++k)
        {
            SinrSpec common{0, k, 0, {}};
            for (int i = 0; i < users; ++i)
                common.interference.emplace_back(i + 1, 1.0);
            layout.sinrs.push_back(common);
        }
        for (int k = 0; k < users; ++k)
        {
            SinrSpec priv{k + 1, k, k + 1, {}};
            if (d2 > 0.0)
                priv.interference.emplace_back(0, d2);
            for (int i = 0; i < users; ++i)
                if (i != k)
                    priv.interference.emplace_back(i + 1, 1.0);
            layout.sinrs.push_back(priv);
        }
        break;
    case Scheme::sdma:
        layout.blocks = users;
        layout.streams = users;
        for (int k = 0; k < users; ++k)
        {
            SinrSpec priv{k, k, k, {}};
            for (int i = 0; i < users; ++i)
                if (i != k)
                    priv.interference.emplace_back(i, 1.0);
            layout.sinrs.push_back(priv);
        }
        break;
    case Scheme::noma:
    {
        layout.blocks = users;
        layout.streams = users;
        std::vector<int> order = noma_order;
        if (order.empty())
        {
            order.resize(users);
            std::iota(order.begin(), order.end(), 0);
        }
        std::vector<int> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < users; ++i)
            if (static_cast<int>(sorted.size()) != users || sorted[i] != i)
                throw std::invalid_argument("NOMA decoding order must be a permutation of the users");
        layout.noma_order = order;
        for (int p = 0; p < users; ++p)
            for (int q = p; q < users; ++q)
            {
                SinrSpec s{order[p], order[q], order[p], {}};
                for (int i = p + 1; i < users; ++i)
                    s.interference.emplace_back(order[i], 1.0);
                if (d2 > 0.0)
                    for (int i = 0; i < p; ++i)
                        s.interference.emplace_back(order[i], d2);
                layout.sinrs.push_back(s);
            }
        break;
    }
    }
    return layout;
}

std::string csv_header(int users)
{
    std::ostringstream os;
    os << "scheme,sum_rate_bps_hz,rate_c_bps_hz";
    for (int k = 0; k < users; ++k)
        os << ",rate_p" << k << "_bps_hz,gamma_c" << k << ",gamma_p" << k << ",phi_c" << k << "_w,phi_p" << k << "_w";
    return os.str();
}

std::string to_csv_row(const RateReport &r)
{
    std::ostringstream os;
    os.precision(12);
    os << to_string(r.scheme) << ',' << r.sum_rate << ',' << r.rate_c;
    for (std::size_t k = 0; k < r.rate_p.size(); ++k)
    {
        auto at = [](const std::vector<double> &v, std::size_t i) { return i < v.size() ? v[i] : 0.0; };
        os << ',' << r.rate_p[k] << ',' << at(r.gamma_c, k) << ',' << at(r.gamma_p, k) << ',' << at(r.phi_c, k) << ','
           << at(r.phi_p, k);
    }
    return os.str();
}

std::string to_json(const RateReport &r)
{
    nlohmann::json j;
    j["scheme"] = to_string(r.scheme);
    j["sum_rate"] = r.sum_rate;
    j["rate_c"] = r.rate_c;
    j["rate_p"] = r.rate_p;
    j["gamma_c"] = r.gamma_c;
    j["gamma_p"] = r.gamma_p;
    j["phi_c"] = r.phi_c;
    j["phi_p"] = r.phi_p;
    return j.dump();
}

} // namespace risrsma
