// SPDX-License-Identifier: Apache-2.0
//
// starris - impedance-level modeling of simultaneously transmitting and
// reflecting surfaces, with uplink NOMA outage analysis and simulation
// Copyright (C) 2026 the starris contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "starris/access.hpp"

#include <cmath>
#include <stdexcept>

namespace starris::access
{

double complement_amplitude(double beta)
{
    if (beta < 0.0 || beta > 1.0)
        throw std::invalid_argument("amplitude must lie in [0, 1]");
    return std::sqrt(1.0 - beta * beta);
}

double threshold_noma(double rate)
{
    return std::exp2(rate) - 1.0;
}

double threshold_oma(double rate)
{
    return std::exp2(2.0 * rate) - 1.0;
}

void validate(const UplinkScenario &sc)
{
    if (sc.m_elements == 0)
        throw std::invalid_argument("scenario needs at least one element");
    if (sc.beta_t < 0.0 || sc.beta_t > 1.0 || sc.beta_r < 0.0 || sc.beta_r > 1.0)
        throw std::invalid_argument("amplitudes must lie in [0, 1]");
    if (sc.beta_t * sc.beta_t + sc.beta_r * sc.beta_r > 1.0 + default_tolerances.passivity)
        throw std::invalid_argument("amplitude split exceeds the energy budget: beta_t^2 + beta_r^2 > 1");
    if (!(sc.p > 0.0) || !(sc.noise > 0.0))
        throw std::invalid_argument("transmit and noise power must be positive");
    if (sc.alpha0 < 0.0 || sc.alpha0 > 1.0)
        throw std::invalid_argument("alpha0 must lie in [0, 1]");
    if (!(sc.rate_r > 0.0) || !(sc.rate_t > 0.0))
        throw std::invalid_argument("target rates must be positive");
    if (sc.mode == AmplitudeMode::mode_switching &&
        !(sc.transmit_fraction > 0.0 && sc.transmit_fraction < 1.0))
        throw std::invalid_argument("mode switching needs a transmit fraction strictly inside (0, 1)");
}

UplinkScenario with_derived_amplitudes(UplinkScenario sc)
{
    if (sc.beta_r == 0.0 && sc.beta_t > 0.0)
        sc.beta_r = complement_amplitude(sc.beta_t);
    return sc;
}

std::vector<std::pair<double, double>> build_surface(const UplinkScenario &sc,
                                                     std::optional<std::uint64_t> permute_seed)
{
    validate(sc);
    std::vector<std::pair<double, double>> amps;
    amps.reserve(sc.m_elements);
    if (sc.mode == AmplitudeMode::uniform)
    {
        amps.assign(sc.m_elements, {sc.beta_t, sc.beta_r});
    }
    else
    {
        std::size_t m_t = std::size_t(std::ceil(sc.transmit_fraction * double(sc.m_elements)));
        if (m_t == 0 || m_t >= sc.m_elements)
            throw std::domain_error("mode switching partition is degenerate: one group is empty");
        for (std::size_t i = 0; i < sc.m_elements; ++i)
            amps.push_back(i < m_t ? std::make_pair(1.0, 0.0) : std::make_pair(0.0, 1.0));
    }
    if (permute_seed)
    {
        RngStream rng(*permute_seed);
        for (std::size_t i = amps.size() - 1; i > 0; --i)
            std::swap(amps[i], amps[rng.next_u64() % (i + 1)]);
    }
    return amps;
}

cplx received_signal(const channels::ChannelRealization &real, const UplinkScenario &sc,
                     const std::vector<em::StarCoefficients> &coeffs, cplx s_r, cplx s_t,
                     cplx noise_draw)
{
    std::size_t m = real.h.size();
    if (coeffs.size() != m || real.g_r.size() != m || real.g_t.size() != m)
        throw std::invalid_argument("realization and coefficient arrays must share a length");
    cplx acc_r = 0.0;
    cplx acc_t = 0.0;
    for (std::size_t i = 0; i < m; ++i)
    {
        acc_r += real.g_r[i] * real.h[i] * coeffs[i].r;
        acc_t += real.g_t[i] * real.h[i] * coeffs[i].t;
    }
    double amp = std::sqrt(sc.p);
    return amp * s_r * acc_r + amp * s_t * acc_t + noise_draw;
}

std::pair<double, double> channel_gains(const channels::ChannelRealization &real,
                                        const std::vector<em::StarCoefficients> &coeffs)
{
    std::size_t m = real.h.size();
    if (coeffs.size() != m || real.g_r.size() != m || real.g_t.size() != m)
        throw std::invalid_argument("realization and coefficient arrays must share a length");
    cplx acc_r = 0.0;
    cplx acc_t = 0.0;
    for (std::size_t i = 0; i < m; ++i)
    {
        acc_r += real.g_r[i] * real.h[i] * coeffs[i].r;
        acc_t += real.g_t[i] * real.h[i] * coeffs[i].t;
    }
    return {std::norm(acc_r), std::norm(acc_t)};
}

SinrPair noma_sinrs_from_gains(double gain_r, double gain_t, const UplinkScenario &sc)
{
    SinrPair s;
    s.sinr_r = sc.p * gain_r / (sc.p * gain_t + sc.noise);
    double residual = (sc.sic_residual == SicResidual::own_gain) ? gain_t : gain_r;
    s.sinr_t = sc.p * gain_t / (sc.alpha0 * sc.p * residual + sc.noise);
    return s;
}

SinrPair noma_sinrs(const channels::ChannelRealization &real, const UplinkScenario &sc,
                    const std::vector<em::StarCoefficients> &coeffs)
{
    auto [gain_r, gain_t] = channel_gains(real, coeffs);
    return noma_sinrs_from_gains(gain_r, gain_t, sc);
}

std::pair<bool, bool> noma_outage_events(const SinrPair &s, const UplinkScenario &sc)
{
    bool r_ok = s.sinr_r > threshold_noma(sc.rate_r);
    bool t_ok = r_ok && s.sinr_t > threshold_noma(sc.rate_t);
    return {!r_ok, !t_ok};
}

std::pair<bool, bool> high_snr_outage_event(double h_r, double h_t, const UplinkScenario &sc)
{
    bool ratio_fail = !(h_r * h_r > threshold_noma(sc.rate_r) * h_t * h_t);
    bool hard_sic = sc.alpha0 > 0.0 && 1.0 / sc.alpha0 <= threshold_noma(sc.rate_t);
    return {ratio_fail, ratio_fail || hard_sic};
}

std::pair<double, bool> oma_snr_and_outage(const channels::ChannelRealization &real,
                                           const UplinkScenario &sc, User user)
{
    std::size_t m = real.h.size();
    const auto &g = (user == User::r) ? real.g_r : real.g_t;
    if (g.size() != m || m == 0)
        throw std::invalid_argument("realization vectors must share a length M >= 1");
    // dedicated slot: every element serves this user at unit amplitude with
    // ideal cophasing, so the products add up as plain amplitudes
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        s += std::abs(real.h[i]) * std::abs(g[i]);
    double snr = sc.p * s * s / sc.noise;
    double rate = (user == User::r) ? sc.rate_r : sc.rate_t;
    return {snr, !(snr > threshold_oma(rate))};
}

} // namespace starris::access
