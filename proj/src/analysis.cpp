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

#include "starris/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace starris::analysis
{

namespace
{
constexpr double inv_sqrt2 = 0.70710678118654752440084436210485;

void check_params(const RatioNormalParams &p)
{
    if (!(p.sigma1 > 0.0) || !(p.sigma2 > 0.0))
        throw std::invalid_argument("ratio params need positive standard deviations");
    if (!(p.rho >= -1.0 && p.rho <= 1.0))
        throw std::invalid_argument("ratio params need a correlation in [-1, 1]");
}

double floor_t_from_r(double floor_r, double alpha0, double gamma_t)
{
    // perfect SIC (alpha0 = 0) always leaves headroom; otherwise the decode
    // of user t saturates at 1/alpha0 and an insufficient cap means certain
    // outage regardless of the channel
    bool headroom = (alpha0 == 0.0) || (1.0 / alpha0 > gamma_t);
    return headroom ? floor_r : 1.0;
}
} // namespace

double normal_cdf(double y)
{
    return 0.5 * std::erfc(-y * inv_sqrt2);
}

double ratio_cdf(double x, const RatioNormalParams &p, bool *regime_ok)
{
    check_params(p);
    if (regime_ok != nullptr)
        *regime_ok = (p.mu2 / p.sigma2 >= 3.0);
    double xi_sq = x * x / (p.sigma1 * p.sigma1) - 2.0 * p.rho * x / (p.sigma1 * p.sigma2) +
                   1.0 / (p.sigma2 * p.sigma2);
    double num = p.mu2 * x - p.mu1;
    if (!(xi_sq > 0.0))
        return num < 0.0 ? 0.0 : (num > 0.0 ? 1.0 : 0.5); // degenerate only at |rho| = 1
    return normal_cdf(num / (p.sigma1 * p.sigma2 * std::sqrt(xi_sq)));
}

FloorResult error_floor(const FloorQuery &q, MomentConvention convention)
{
    if (q.m < 1)
        throw std::invalid_argument("floor query needs at least one element");
    if (!(q.beta_r > 0.0))
        throw std::domain_error("outage floor undefined for beta_r = 0: the gain ratio degenerates");
    if (!(q.beta_t >= 0.0) || !(q.gamma_r > 0.0) || !(q.gamma_t > 0.0))
        throw std::invalid_argument("floor query needs non-negative beta_t and positive thresholds");
    if (q.alpha0 < 0.0 || q.alpha0 > 1.0)
        throw std::invalid_argument("alpha0 must lie in [0, 1]");

    double scale = (convention == MomentConvention::sum_level) ? double(q.m) : 1.0;
    RatioNormalParams p;
    p.mu1 = scale * q.stats_r.mu;
    p.sigma1 = std::sqrt(scale) * q.stats_r.sigma;
    p.mu2 = scale * q.stats_t.mu;
    p.sigma2 = std::sqrt(scale) * q.stats_t.sigma;
    p.rho = q.stats_r.rho;

    double x0 = std::sqrt(q.gamma_r) * q.beta_t / q.beta_r;
    FloorResult res;
    res.p_floor_r = ratio_cdf(x0, p, &res.regime_ok);
    res.p_floor_t = floor_t_from_r(res.p_floor_r, q.alpha0, q.gamma_t);
    return res;
}

FloorResult floor_for_ms(double transmit_fraction, const FloorQuery &q)
{
    if (q.m < 1)
        throw std::invalid_argument("floor query needs at least one element");
    if (!(transmit_fraction > 0.0 && transmit_fraction < 1.0))
        throw std::invalid_argument("transmit fraction must lie strictly inside (0, 1)");
    int m_t = int(std::ceil(transmit_fraction * double(q.m)));
    int m_r = q.m - m_t;
    if (m_t == 0 || m_r <= 0)
        throw std::domain_error("mode switching partition is degenerate: one group is empty");

    // disjoint element groups: correlation gone, amplitudes pinned at 1
    RatioNormalParams p;
    p.mu1 = double(m_r) * q.stats_r.mu;
    p.sigma1 = std::sqrt(double(m_r)) * q.stats_r.sigma;
    p.mu2 = double(m_t) * q.stats_t.mu;
    p.sigma2 = std::sqrt(double(m_t)) * q.stats_t.sigma;
    p.rho = 0.0;

    FloorResult res;
    res.p_floor_r = ratio_cdf(std::sqrt(q.gamma_r), p, &res.regime_ok);
    res.p_floor_t = floor_t_from_r(res.p_floor_r, q.alpha0, q.gamma_t);
    return res;
}

} // namespace starris::analysis
