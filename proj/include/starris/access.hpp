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

#ifndef STARRIS_ACCESS_HPP
#define STARRIS_ACCESS_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "starris/channels.hpp"
#include "starris/em_core.hpp"

namespace starris::access
{

using cplx = std::complex<double>;

enum class Scheme
{
    noma,
    oma
};

enum class User
{
    r, // served by the reflection side
    t  // served by the transmission side
};

// amplitude layout across elements: one shared split, or a hard partition
// where a fraction of elements transmit at full amplitude and the rest reflect
enum class AmplitudeMode
{
    uniform,
    mode_switching
};

// How residual interference after imperfect SIC enters the decode of user t:
// `own_gain` scales user t's own channel gain (the form the analysis uses),
// `cross_gain` scales user r's gain (residual of the cancelled signal). Kept
// selectable for comparison; all headline results use own_gain.
enum class SicResidual
{
    own_gain,
    cross_gain
};

struct UplinkScenario
{
    Scheme scheme = Scheme::noma;
    std::size_t m_elements = 64;
    double beta_t = 0.2;              // transmission amplitude
    double beta_r = 0.0;              // reflection amplitude; 0 = derive as complement
    double p = 1.0;                   // per-user transmit power, W
    double noise = 1.0;               // noise power at the BS, W
    double alpha0 = 0.0;              // residual interference factor after SIC, in [0, 1]
    double rate_r = 1.5;              // target rate of user r, bit/s/Hz
    double rate_t = 1.5;              // target rate of user t, bit/s/Hz
    AmplitudeMode mode = AmplitudeMode::uniform;
    double transmit_fraction = 0.25;  // mode_switching only
    SicResidual sic_residual = SicResidual::own_gain;
};

// energy-preserving counterpart of one amplitude: sqrt(1 - beta^2)
double complement_amplitude(double beta);

// SINR threshold for a NOMA target rate: 2^rate - 1
double threshold_noma(double rate);

// threshold when the user only gets half the resource: 2^(2 rate) - 1
double threshold_oma(double rate);

// throws std::invalid_argument when amplitudes, powers, alpha0 or the
// mode-switching fraction are out of range
void validate(const UplinkScenario &sc);

// scenario with beta_r filled in as the complement when left at 0
UplinkScenario with_derived_amplitudes(UplinkScenario sc);

// Per-element (beta_t_m, beta_r_m) amplitude pairs. Uniform mode repeats the
// shared split; mode switching dedicates ceil(fraction*M) elements to
// transmission at full amplitude and the rest to reflection. The optional
// seed permutes the assignment for robustness checks; outage statistics are
// permutation invariant because the element draws are exchangeable.
std::vector<std::pair<double, double>> build_surface(const UplinkScenario &sc,
                                                     std::optional<std::uint64_t> permute_seed = {});

struct SinrPair
{
    double sinr_r = 0.0;
    double sinr_t = 0.0;
};

// superposed uplink signal at the BS for one element coefficient set:
//   y = sqrt(p) s_r sum_m g_r[m] h[m] r_m + sqrt(p) s_t sum_m g_t[m] h[m] t_m + noise_draw
cplx received_signal(const channels::ChannelRealization &real, const UplinkScenario &sc,
                     const std::vector<em::StarCoefficients> &coeffs, cplx s_r, cplx s_t,
                     cplx noise_draw);

// composite channel gains |sum g h c|^2 for both users
std::pair<double, double> channel_gains(const channels::ChannelRealization &real,
                                        const std::vector<em::StarCoefficients> &coeffs);

// decode SINRs: user r is decoded against user t's full interference, user t
// after SIC with residual factor alpha0
SinrPair noma_sinrs_from_gains(double gain_r, double gain_t, const UplinkScenario &sc);
SinrPair noma_sinrs(const channels::ChannelRealization &real, const UplinkScenario &sc,
                    const std::vector<em::StarCoefficients> &coeffs);

// outage events at the target rates; the boundary SINR == threshold counts as
// outage, and user t is in outage whenever user r's decode already failed
std::pair<bool, bool> noma_outage_events(const SinrPair &s, const UplinkScenario &sc);

// Asymptotic (noise-free) outage events from the cophased composite
// amplitudes: user r fails on the gain ratio |H_r|^2 / |H_t|^2 < gamma_r;
// user t additionally always fails when 1/alpha0 <= gamma_t (hard SIC limit).
std::pair<bool, bool> high_snr_outage_event(double h_r, double h_t, const UplinkScenario &sc);

// orthogonal-access reference: each user alone on half the resource, all
// element amplitude put to 1; returns (snr, outage)
std::pair<double, bool> oma_snr_and_outage(const channels::ChannelRealization &real,
                                           const UplinkScenario &sc, User user);

} // namespace starris::access

#endif
