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

#ifndef STARRIS_ANALYSIS_HPP
#define STARRIS_ANALYSIS_HPP

#include "starris/channels.hpp"

namespace starris::analysis
{

// standard normal CDF via the complementary error function
double normal_cdf(double y);

// Joint Gaussian model of two correlated positive composites (W1, W2).
struct RatioNormalParams
{
    double mu1 = 0.0;
    double sigma1 = 1.0;
    double mu2 = 0.0;
    double sigma2 = 1.0;
    double rho = 0.0;
};

// One-Phi approximation of Pr{W1/W2 < x} for jointly Gaussian (W1, W2) with
// W2 almost surely positive:
//   Phi( (mu2 x - mu1) / (sigma1 sigma2 xi(x)) ),
//   xi(x) = sqrt( x^2/sigma1^2 - 2 rho x/(sigma1 sigma2) + 1/sigma2^2 )
// The approximation needs the denominator to stay positive; *regime_ok is
// cleared when mu2/sigma2 < 3 and the result should be treated as indicative.
double ratio_cdf(double x, const RatioNormalParams &p, bool *regime_ok = nullptr);

// Whether the floor uses moments of the M-element composite sums (the
// simulation-faithful choice and the default everywhere) or the single
// element moments. The per-element convention is retained only so the two
// can be compared side by side; it is never used for quantitative results.
enum class MomentConvention
{
    sum_level,
    per_element
};

struct FloorQuery
{
    int m = 64;                      // element count
    double beta_t = 0.2;             // transmission amplitude
    double beta_r = 0.0;             // reflection amplitude, must be > 0
    double gamma_r = 0.0;            // SINR threshold of user r
    double gamma_t = 0.0;            // SINR threshold of user t
    double alpha0 = 0.0;             // residual interference factor
    channels::CascadedStats stats_r; // per-element cascade moments, user r
    channels::CascadedStats stats_t; // per-element cascade moments, user t
};

struct FloorResult
{
    double p_floor_r = 0.0;
    double p_floor_t = 0.0;
    bool regime_ok = true; // false when the ratio approximation left its regime
};

// High-SNR outage floor of both users. User r's floor is the probability of
// the composite gain ratio falling below its threshold; user t shares it
// when SIC leaves enough headroom (1/alpha0 > gamma_t) and is pinned at 1
// otherwise. Independent of transmit power by construction. Throws
// std::domain_error when beta_r == 0 (the gain ratio degenerates).
FloorResult error_floor(const FloorQuery &q, MomentConvention convention = MomentConvention::sum_level);

// Floor under mode switching: ceil(fraction*M) elements transmit at unit
// amplitude, the rest reflect. The two composites then ride on disjoint
// element sets, so their correlation is zero and the ratio threshold loses
// its amplitude weighting. Amplitude fields of the query are ignored.
// Throws std::domain_error when either group of the partition is empty.
FloorResult floor_for_ms(double transmit_fraction, const FloorQuery &q);

} // namespace starris::analysis

#endif
