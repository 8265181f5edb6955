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

#ifndef STARRIS_CHANNELS_HPP
#define STARRIS_CHANNELS_HPP

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "starris/rng.hpp"
#include "starris/tolerances.hpp"

namespace starris::channels
{

using cplx = std::complex<double>;

// One Rician fading link. k is the linear K factor (line-of-sight to scatter
// power ratio), omega the mean power E|h|^2. Path loss is folded into omega,
// so a link built from a distance already carries its large-scale attenuation.
struct RicianLink
{
    double k = 0.0;     // K factor, linear, >= 0
    double omega = 1.0; // mean power, > 0
};

// throws std::invalid_argument on k < 0, non-finite k, or omega <= 0
void validate(const RicianLink &link);

double k_from_db(double k_db);
double omega_from_distance(double distance, double exponent);

// line-of-sight power alpha^2 = k*omega/(k+1)
double los_power(const RicianLink &link);

// per-component scatter variance beta = omega/(2(k+1))
double scatter_variance(const RicianLink &link);

// E|h| = sqrt(beta) * sqrt(pi/2) * L_half(k)
double mean_amplitude(const RicianLink &link);

// Laguerre polynomial of order 1/2 at -x, for x >= 0:
//   L_half(x) = e^{-x/2} [ (1+x) I0(x/2) + x I1(x/2) ]
// Evaluated through exponentially scaled Bessel functions so large x cannot
// overflow; grows like 2 sqrt(x/pi) for x -> inf.
double laguerre_half(double x);

// one complex channel draw: Rician amplitude, uniform phase
cplx sample_rician(const RicianLink &link, RngStream &rng);

// First two moments of the per-element cascade |h||g| plus the correlation
// rho between the two users' cascaded sums (they share the element-BS hop h).
struct CascadedStats
{
    double mu = 0.0;    // E |h||g|
    double sigma = 0.0; // std of |h||g|
    double rho = 0.0;   // correlation with the other user's cascade
};

// (mu, sigma) of |h||g| for one BS link and one user link
std::pair<double, double> cascaded_moments(const RicianLink &bs, const RicianLink &user);

// correlation between |h||g_r| and |h||g_t| induced by the shared h
double correlation_rho(const RicianLink &bs, const RicianLink &user_r, const RicianLink &user_t);

// convenience: both users' stats with the shared rho filled in
std::pair<CascadedStats, CascadedStats> cascaded_stats_pair(const RicianLink &bs,
                                                            const RicianLink &user_r,
                                                            const RicianLink &user_t);

// Exact density of the product |h||g| of two independent Rician amplitudes,
// evaluated as a double Bessel series in log space. Truncation stops once the
// current term drops below tol times the running sum; if the series is still
// live at the index caps (200 each), *converged is set to false.
double product_rician_pdf(double x, const RicianLink &bs, const RicianLink &user,
                          double tol = default_tolerances.series_tail, bool *converged = nullptr);

// all element channels of one scenario draw; vectors share the length M
struct ChannelRealization
{
    std::vector<cplx> h;   // element - BS
    std::vector<cplx> g_r; // element - user r
    std::vector<cplx> g_t; // element - user t
};

ChannelRealization sample_realization(std::size_t m, const RicianLink &bs, const RicianLink &user_r,
                                      const RicianLink &user_t, RngStream &rng);

// Cophased composite channels (H_r, H_t) = (beta_r * sum |h||g_r|,
// beta_t * sum |h||g_t|): with per-element phase alignment each product
// contributes its amplitude
std::pair<double, double> cophased_channel(const ChannelRealization &real, double beta_r, double beta_t);

// uniform grid on [0, x_max]; x_j = j * x_max/(points-1)
struct GridSpec
{
    double x_max = 0.0;
    std::size_t points = 0;
};

// default grid for an M-fold sum: [0, M*(mu + 8 sigma)], 2^15 points
GridSpec default_sum_grid(int m, const RicianLink &bs, const RicianLink &user);

struct DiscretizedDensity
{
    std::vector<double> x;
    std::vector<double> f;
    double mass = 0.0; // trapezoid integral of f over the grid
};

// Exact density of sum_{i=1..M} |h_i||g_i| by M-fold self-convolution of the
// product density on the grid (cyclic FFT convolution on a zero-padded copy).
// Throws std::domain_error when the grid is too coarse to hold the single
// element density (mass drift beyond the configured tolerance).
DiscretizedDensity sum_pdf_exact(int m, const RicianLink &bs, const RicianLink &user,
                                 const GridSpec &grid);

// Divergence integral of a Gaussian(mean, var) against a discretized exact
// density: integral of f_gauss * ln(f_gauss / f_exact) over grid points where
// f_exact > 1e-300. Quantifies how well the Gaussian stands in for the sum.
double kl_vs_gaussian(const DiscretizedDensity &exact, double mean, double var);

// end-to-end: exact M-fold sum density vs Gaussian(M mu, M sigma^2)
double kl_gaussian_approx(int m, const RicianLink &bs, const RicianLink &user);

} // namespace starris::channels

#endif
