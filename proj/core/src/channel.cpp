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

#include "risrsma/channel.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

namespace risrsma {

namespace {

constexpr std::array<char, 8> dump_magic{'R', 'I', 'S', 'C', 'H', 'A', 'N', '1'};
constexpr std::uint32_t dtype_complex128 = 1;

// Array axes for the LoS steering vectors: BS ULA along y, RIS ULA along x.
const Point3 bs_array_axis{0.0, 1.0, 0.0};
const Point3 ris_array_axis{1.0, 0.0, 0.0};

class ComplexGaussian
{
public:
    explicit ComplexGaussian(std::uint64_t seed) : engine_(seed) {}

    // CN(0, 1)
    cplx operator()()
    {
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {re * std::sqrt(0.5), im * std::sqrt(0.5)};
    }

    double uniform() { return uniform_(engine_); }

    CMat matrix(Eigen::Index rows, Eigen::Index cols)
    {
        CMat m(rows, cols);
        // column-major fill; fixed order keeps draws reproducible
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
                m(r, c) = (*this)();
        return m;
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

double direction_cosine(const Point3 &from, const Point3 &to, const Point3 &axis)
{
    const Point3 d = to - from;
    return d.dot(axis) / d.norm();
}

CMat small_scale(ComplexGaussian &rng, const CMat &los, double k_factor)
{
    const double w_los = std::sqrt(k_factor / (k_factor + 1.0));
    const double w_nlos = std::sqrt(1.0 / (k_factor + 1.0));
    return w_los * los + w_nlos * rng.matrix(los.rows(), los.cols());
}

template <typename T>
void write_pod(std::ofstream &out, const T &value)
{
    out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream &in)
{
    T value{};
    in.read(reinterpret_cast<char *>(&value), sizeof(T));
    if (!in)
        throw std::runtime_error("truncated channel dump");
    return value;
}

} // namespace

void ScenarioGeometry::validate() const
{
    if (users < 1 || bs_antennas < 1 || ris_elements < 1)
        throw std::invalid_argument("K, M and N must all be >= 1");
    if (!(user_radius >= 0.0))
        throw std::invalid_argument("user_radius must be >= 0");
    if ((bs_position - ris_position).norm() <= 0.0)
        throw std::invalid_argument("BS and RIS positions coincide");
    if ((ris_position - user_center).norm() <= user_radius)
        throw std::invalid_argument("RIS lies inside the user disc");
}

FadingSpec FadingSpec::rayleigh(std::optional<double> correlation)
{
    FadingSpec spec;
    spec.model = FadingModel::rayleigh;
    spec.rician_k_factor = 0.0;
    spec.correlation = correlation;
    return spec;
}

FadingSpec FadingSpec::rician(double k_factor_db)
{
    FadingSpec spec;
    spec.model = FadingModel::rician;
    spec.rician_k_factor = db_to_linear(k_factor_db);
    return spec;
}

FadingSpec FadingSpec::los_dominant(double k_factor_db)
{
    FadingSpec spec;
    spec.model = FadingModel::rician_los_dominant;
    spec.rician_k_factor = db_to_linear(k_factor_db);
    return spec;
}

void FadingSpec::validate() const
{
    if (!(rician_k_factor >= 0.0) || !std::isfinite(rician_k_factor))
        throw std::invalid_argument("Rician K-factor must be finite and >= 0");
    if (correlation && !(*correlation >= 0.0 && *correlation < 1.0))
        throw std::invalid_argument("correlation coefficient must lie in [0, 1)");
}

ChannelRealization ChannelRealization::normalized() const
{
    ChannelRealization out = *this;
    for (std::size_t k = 0; k < out.f.size(); ++k)
    {
        out.f[k] /= std::sqrt(noise_power[k]);
        out.noise_power[k] = 1.0;
    }
    return out;
}

double path_loss_db(double distance_m)
{
    if (!(distance_m > 0.0))
        throw std::domain_error("path loss needs a positive distance");
    return 37.3 + 22.0 * std::log10(distance_m);
}

double path_gain(double distance_m) { return std::pow(10.0, -path_loss_db(distance_m) / 10.0); }

RMat exponential_correlation_factor(int n, double r)
{
    RMat corr(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            corr(i, j) = std::pow(r, std::abs(i - j));
    Eigen::LLT<RMat> llt(corr);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("correlation matrix is not positive definite");
    return llt.matrixL();
}

CVec ula_response(int size, double cos_angle)
{
    CVec a(size);
    for (int n = 0; n < size; ++n)
        a(n) = std::polar(1.0, pi * n * cos_angle);
    return a;
}

ChannelRealization draw_channel(const ScenarioGeometry &geometry, const FadingSpec &fading,
                                double noise_power_w, std::uint64_t seed)
{
    geometry.validate();
    fading.validate();
    if (!(noise_power_w > 0.0))
        throw std::invalid_argument("noise power must be positive");

    const int K = geometry.users;
    const int M = geometry.bs_antennas;
    const int N = geometry.ris_elements;
    ComplexGaussian rng(seed);

    ChannelRealization out;
    out.user_positions.reserve(K);
    for (int k = 0; k < K; ++k)
    {
        const double r = geometry.user_radius * std::sqrt(rng.uniform());
        const double phi = 2.0 * pi * rng.uniform();
        out.user_positions.push_back(geometry.user_center + Point3(r * std::cos(phi), r * std::sin(phi), 0.0));
    }

    const double gain_br = path_gain((geometry.ris_position - geometry.bs_position).norm());

    if (fading.model == FadingModel::rayleigh)
    {
        CMat g = rng.matrix(N, M);
        if (fading.correlation)
            g = exponential_correlation_factor(N, *fading.correlation).cast<cplx>() * g;
        out.G = std::sqrt(gain_br) * g;
    }
    else
    {
        const CVec a_ris = ula_response(N, direction_cosine(geometry.ris_position, geometry.bs_position, ris_array_axis));
        const CVec a_bs = ula_response(M, direction_cosine(geometry.bs_position, geometry.ris_position, bs_array_axis));
        const CMat los = a_ris * a_bs.adjoint();
        out.G = std::sqrt(gain_br) * small_scale(rng, los, fading.rician_k_factor);
    }

    const RMat corr_factor = (fading.model == FadingModel::rayleigh && fading.correlation)
                                 ? exponential_correlation_factor(N, *fading.correlation)
                                 : RMat();
    for (int k = 0; k < K; ++k)
    {
        const Point3 &user = out.user_positions[k];
        const double gain = path_gain((user - geometry.ris_position).norm());
        CVec fk;
        if (fading.model == FadingModel::rayleigh)
        {
            fk = rng.matrix(N, 1);
            if (corr_factor.size() > 0)
                fk = corr_factor.cast<cplx>() * fk;
        }
        else
        {
            const CVec los = ula_response(N, direction_cosine(geometry.ris_position, user, ris_array_axis));
            fk = small_scale(rng, los, fading.rician_k_factor);
        }
        out.f.push_back(std::sqrt(gain) * fk);
    }
    out.noise_power.assign(K, noise_power_w);
    return out;
}

std::pair<CVec, CVec> draw_iid_pair(int n, double tau_f, double tau_g, std::uint64_t seed,
                                    std::optional<double> correlation)
{
    if (n < 1)
        throw std::invalid_argument("N must be >= 1");
    if (!(tau_f > 0.0) || !(tau_g > 0.0))
        throw std::invalid_argument("channel standard deviations must be positive");
    ComplexGaussian rng(seed);
    CVec f = tau_f * rng.matrix(n, 1);
    CVec g = tau_g * rng.matrix(n, 1);
    if (correlation)
    {
        const CMat l = exponential_correlation_factor(n, *correlation).cast<cplx>();
        f = l * f;
        g = l * g;
    }
    return {std::move(f), std::move(g)};
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index, std::uint64_t attempt)
{
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(master);
    h = mix(h ^ stream);
    h = mix(h ^ index);
    h = mix(h ^ attempt);
    return h;
}

std::uint64_t hash_string(std::string_view text)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text)
    {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void write_channel_dump(const std::filesystem::path &path, const ChannelRealization &channel)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(dump_magic.data(), dump_magic.size());
    write_pod(out, dtype_complex128);
    write_pod(out, static_cast<std::uint32_t>(channel.users()));
    write_pod(out, static_cast<std::uint32_t>(channel.ris_elements()));
    write_pod(out, static_cast<std::uint32_t>(channel.bs_antennas()));
    for (double p : channel.noise_power)
        write_pod(out, p);
    for (Eigen::Index r = 0; r < channel.G.rows(); ++r)
        for (Eigen::Index c = 0; c < channel.G.cols(); ++c)
            write_pod(out, channel.G(r, c));
    for (const auto &fk : channel.f)
        for (Eigen::Index n = 0; n < fk.size(); ++n)
            write_pod(out, fk(n));
    if (!out)
        throw std::runtime_error("failed writing " + path.string());
}

ChannelRealization read_channel_dump(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != dump_magic)
        throw std::runtime_error(path.string() + " is not a channel dump");
    if (read_pod<std::uint32_t>(in) != dtype_complex128)
        throw std::runtime_error("unsupported dtype tag in " + path.string());
    const auto K = read_pod<std::uint32_t>(in);
    const auto N = read_pod<std::uint32_t>(in);
    const auto M = read_pod<std::uint32_t>(in);
    ChannelRealization ch;
    for (std::uint32_t k = 0; k < K; ++k)
        ch.noise_power.push_back(read_pod<double>(in));
    ch.G.resize(N, M);
    for (std::uint32_t r = 0; r < N; ++r)
        for (std::uint32_t c = 0; c < M; ++c)
            ch.G(r, c) = read_pod<cplx>(in);
    for (std::uint32_t k = 0; k < K; ++k)
    {
        CVec fk(N);
        for (std::uint32_t n = 0; n < N; ++n)
            fk(n) = read_pod<cplx>(in);
        ch.f.push_back(std::move(fk));
    }
    return ch;
}

} // namespace risrsma
