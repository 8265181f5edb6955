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

#ifndef STARRIS_SIM_ENGINE_HPP
#define STARRIS_SIM_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "starris/access.hpp"
#include "starris/channels.hpp"

namespace starris::sim
{

// outage probability estimate with a 95% confidence interval
struct OutageEstimate
{
    double p_hat = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double ci_half_width = 0.0;
};

// Normal-approximation interval, replaced by the Wilson interval half-width
// when either outcome count drops below 10 (the normal width collapses to
// zero at the boundaries and would overstate certainty).
OutageEstimate make_estimate(std::uint64_t successes, std::uint64_t trials);

// the three fading links of one scenario
struct LinkSet
{
    channels::RicianLink bs;     // element - BS hop, shared by both users
    channels::RicianLink user_r; // user r - element hop
    channels::RicianLink user_t; // user t - element hop
};

struct PointResult
{
    OutageEstimate user_r;
    OutageEstimate user_t;
};

// Generic deterministic trial runner: trial i draws from a stream derived
// purely from (seed, i), and outcomes are counted as integers, so the result
// is bit-identical for any worker count or scheduling order. workers = 0
// picks the hardware concurrency.
using TrialEvent = std::function<std::pair<bool, bool>(RngStream &)>;
PointResult run_trials(std::uint64_t trials, std::uint64_t seed, const TrialEvent &event,
                       unsigned workers = 0);

// One operating point of the configured scenario: draws realizations, forms
// the cophased composite channels, and counts the outage events of both
// users under the scenario's scheme (full SINR expressions including noise,
// not the asymptotic shortcut).
PointResult run_point(const access::UplinkScenario &sc, const LinkSet &links, std::uint64_t trials,
                      std::uint64_t seed, unsigned workers = 0);

enum class Variant
{
    noma_perfect,   // NOMA, alpha0 = 0
    noma_imperfect, // NOMA, alpha0 as configured
    oma
};

const char *variant_name(Variant v);

enum class SweepVariable
{
    transmit_snr_db, // p = noise * 10^(value/10)
    beta_t,          // transmission amplitude, beta_r = complement
    m_elements
};

struct SweepSpec
{
    access::UplinkScenario scenario; // base scenario; p is overridden by an SNR sweep
    LinkSet links;
    SweepVariable variable = SweepVariable::transmit_snr_db;
    std::vector<double> grid;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
    unsigned workers = 0;
};

struct SweepRow
{
    double value = 0.0;
    Variant variant = Variant::noma_perfect;
    access::User user = access::User::r;
    double p_hat = 0.0;
    double ci_half_width = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    std::uint64_t point_seed = 0; // derived seed actually used for this point
};

// Full sweep over the grid and the fixed variant set {NOMA perfect SIC,
// NOMA imperfect SIC, OMA}. Each (point, variant) pair gets its own seed
// derived from (seed, point index, variant index), so single points can be
// reproduced in isolation.
std::vector<SweepRow> run_sweep(const SweepSpec &spec);

} // namespace starris::sim

#endif
