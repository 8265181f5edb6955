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

#include "starris/channels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fftw3.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

namespace starris::channels
{

namespace
{
constexpr double two_pi = 6.283185307179586476925286766559;
constexpr double pi = 3.141592653589793238462643383280;

// GSL must not abort the process on a range error; domains are guarded here.
const int gsl_handler_disabled = [] {
    gsl_set_error_handler_off();
    return 0;
}();

// Lazily grown table of ln K_n(z) for integer orders. Seeds come from the
// scaled K0/K1 evaluations; higher orders use the upward recurrence
//   K_{n+1} = K_{n-1} + (2n/z) K_n
// carried in log space, which is stable because K_n grows with n.
class LogBesselK
{
  public:
    explicit LogBesselK(double z) : z_(z)
    {
        ln_.reserve(64);
        ln_.push_back(std::log(gsl_sf_bessel_K0_scaled(z)) - z);
        ln_.push_back(std::log(gsl_sf_bessel_K1_scaled(z)) - z);
    }

    double operator()(int n)
    {
        while (ln_.size() <= static_cast<std::size_t>(n))
        {
            std::size_t m = ln_.size() - 1; // next order is m+1
            double step = std::log(2.0 * double(m) / z_ + std::exp(ln_[m - 1] - ln_[m]));
            ln_.push_back(ln_[m] + step);
        }
        return ln_[static_cast<std::size_t>(n)];
    }

  private:
    double z_;
    std::vector<double> ln_;
};

double trapezoid_mass(const std::vector<double> &f, double dx)
{
    double s = 0.0;
    for (double v : f)
        s += v;
    if (!f.empty())
        s -= 0.5 * (f.front() + f.back());
    return s * dx;
}

std::size_t next_pow2(std::size_t n)
{
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}
} // namespace

void validate(const RicianLink &link)
{
    if (!(link.k >= 0.0) || !std::isfinite(link.k))
        throw std::invalid_argument("rician link: k factor must be finite and >= 0");
    if (!(link.omega > 0.0) || !std::isfinite(link.omega))
        throw std::invalid_argument("rician link: omega must be finite and > 0");
}

double k_from_db(double k_db)
{
    return std::pow(10.0, k_db / 10.0);
}

double omega_from_distance(double distance, double exponent)
{
    if (!(distance > 0.0))
        throw std::invalid_argument("link distance must be positive");
    if (!(exponent > 0.0))
        throw std::invalid_argument("path loss exponent must be positive");
    return std::pow(distance, -exponent);
}

double los_power(const RicianLink &link)
{
    return link.k * link.omega / (link.k + 1.0);
}

double scatter_variance(const RicianLink &link)
{
    return link.omega / (2.0 * (link.k + 1.0));
}

double laguerre_half(double x)
{
    if (!(x >= 0.0))
        throw std::domain_error("laguerre_half is evaluated for x >= 0");
    // the e^{-x/2} factor is absorbed by the scaled Bessel evaluations,
    // so the expression stays finite for arbitrarily large x
    double h = 0.5 * x;
    return (1.0 + x) * gsl_sf_bessel_I0_scaled(h) + x * gsl_sf_bessel_I1_scaled(h);
}

double mean_amplitude(const RicianLink &link)
{
    validate(link);
    return std::sqrt(scatter_variance(link) * pi / 2.0) * laguerre_half(link.k);
}

cplx sample_rician(const RicianLink &link, RngStream &rng)
{
    double nu = std::sqrt(los_power(link));
    double sigma = std::sqrt(scatter_variance(link));
    double re = nu + sigma * rng.next_normal();
    double im = sigma * rng.next_normal();
    double amplitude = std::hypot(re, im);
    double phase = two_pi * rng.next_double();
    return std::polar(amplitude, phase);
}

std::pair<double, double> cascaded_moments(const RicianLink &bs, const RicianLink &user)
{
    double mu = mean_amplitude(bs) * mean_amplitude(user);
    double second = bs.omega * user.omega; // E|h|^2 E|g|^2
    double var = second - mu * mu;
    return {mu, std::sqrt(var > 0.0 ? var : 0.0)};
}

double correlation_rho(const RicianLink &bs, const RicianLink &user_r, const RicianLink &user_t)
{
    auto [mu_r, sigma_r] = cascaded_moments(bs, user_r);
    auto [mu_t, sigma_t] = cascaded_moments(bs, user_t);
    double num = bs.omega * mean_amplitude(user_r) * mean_amplitude(user_t) - mu_r * mu_t;
    return num / (sigma_r * sigma_t);
}

std::pair<CascadedStats, CascadedStats> cascaded_stats_pair(const RicianLink &bs,
                                                            const RicianLink &user_r,
                                                            const RicianLink &user_t)
{
    auto [mu_r, sigma_r] = cascaded_moments(bs, user_r);
    auto [mu_t, sigma_t] = cascaded_moments(bs, user_t);
    double rho = correlation_rho(bs, user_r, user_t);
    return {CascadedStats{mu_r, sigma_r, rho}, CascadedStats{mu_t, sigma_t, rho}};
}

double product_rician_pdf(double x, const RicianLink &bs, const RicianLink &user, double tol,
                          bool *converged)
{
    validate(bs);
    validate(user);
    if (!(tol > 0.0))
        throw std::invalid_argument("series tolerance must be positive");
    if (x < 0.0)
        throw std::domain_error("product density is defined for x >= 0");
    if (converged != nullptr)
        *converged = true;
    if (x == 0.0)
        return 0.0; // continuous limit: the x prefactor wins over the K_0 log singularity

    const double bh = scatter_variance(bs);
    const double bg = scatter_variance(user);
    const double z = x / std::sqrt(bh * bg);
    const double ln_pref = std::log(x / (bh * bg)) - (bs.k + user.k);
    const double half_ln_ratio = 0.5 * (std::log(bh) - std::log(bg));

    // series coefficients a^i b^l / (i! l!)^2 with
    // a = alpha_h^2 x / (2 beta_h)^2 and b = alpha_g^2 x / (2 beta_g)^2
    const double a = los_power(bs) * x / (4.0 * bh * bh);
    const double b = los_power(user) * x / (4.0 * bg * bg);
    const int cap = 200;
    const int i_max = (a > 0.0) ? cap : 0;
    const int l_max = (b > 0.0) ? cap : 0;
    const double ln_a = (a > 0.0) ? std::log(a) : 0.0;
    const double ln_b = (b > 0.0) ? std::log(b) : 0.0;

    LogBesselK ln_k(z);
    double total = 0.0;
    double prev_row = std::numeric_limits<double>::infinity();
    bool tail_live = false;

    for (int i = 0; i <= i_max; ++i)
    {
        const double base = ln_pref + double(i) * ln_a - 2.0 * std::lgamma(double(i) + 1.0);
        double row = 0.0;
        double prev_term = std::numeric_limits<double>::infinity();
        int l = 0;
        for (; l <= l_max; ++l)
        {
            double lt = base + double(l) * ln_b - 2.0 * std::lgamma(double(l) + 1.0) +
                        double(i - l) * half_ln_ratio + ln_k(std::abs(i - l));
            double term = std::exp(lt);
            row += term;
            // terms rise towards the joint peak and then decay monotonically;
            // only trust smallness after the peak has passed
            if (l >= i && term < prev_term && term < tol * (total + row))
                break;
            prev_term = term;
        }
        if (l > l_max && l_max == cap)
            tail_live = true;
        total += row;
        if (i >= 1 && row < prev_row && row < tol * total)
            break;
        prev_row = row;
        if (i == i_max && i_max == cap)
            tail_live = true;
    }

    if (tail_live && converged != nullptr)
        *converged = false;
    return total;
}

ChannelRealization sample_realization(std::size_t m, const RicianLink &bs, const RicianLink &user_r,
                                      const RicianLink &user_t, RngStream &rng)
{
    if (m == 0)
        throw std::invalid_argument("a realization needs at least one element");
    ChannelRealization real;
    real.h.reserve(m);
    real.g_r.reserve(m);
    real.g_t.reserve(m);
    // fixed draw order (h, g_r, g_t per element) keeps realizations
    // reproducible for a given stream state
    for (std::size_t i = 0; i < m; ++i)
    {
        real.h.push_back(sample_rician(bs, rng));
        real.g_r.push_back(sample_rician(user_r, rng));
        real.g_t.push_back(sample_rician(user_t, rng));
    }
    return real;
}

std::pair<double, double> cophased_channel(const ChannelRealization &real, double beta_r, double beta_t)
{
    std::size_t m = real.h.size();
    if (m == 0 || real.g_r.size() != m || real.g_t.size() != m)
        throw std::invalid_argument("realization vectors must share a length M >= 1");
    double sum_r = 0.0;
    double sum_t = 0.0;
    for (std::size_t i = 0; i < m; ++i)
    {
        double ha = std::abs(real.h[i]);
        sum_r += ha * std::abs(real.g_r[i]);
        sum_t += ha * std::abs(real.g_t[i]);
    }
    return {beta_r * sum_r, beta_t * sum_t};
}

GridSpec default_sum_grid(int m, const RicianLink &bs, const RicianLink &user)
{
    auto [mu, sigma] = cascaded_moments(bs, user);
    return {double(m) * (mu + 8.0 * sigma), std::size_t(1) << 15};
}

DiscretizedDensity sum_pdf_exact(int m, const RicianLink &bs, const RicianLink &user,
                                 const GridSpec &grid)
{
    if (m < 1)
        throw std::invalid_argument("sum over M >= 1 elements required");
    if (grid.points < 16 || !(grid.x_max > 0.0))
        throw std::invalid_argument("grid needs a positive extent and at least 16 points");

    const std::size_t n = grid.points;
    const double dx = grid.x_max / double(n - 1);

    DiscretizedDensity d;
    d.x.resize(n);
    d.f.resize(n);
    bool converged = true;
    for (std::size_t j = 0; j < n; ++j)
    {
        d.x[j] = double(j) * dx;
        bool ok = true;
        d.f[j] = product_rician_pdf(d.x[j], bs, user, default_tolerances.series_tail, &ok);
        converged = converged && ok;
    }
    if (!converged)
        throw std::domain_error("product density series did not converge on the grid");

    double mass1 = trapezoid_mass(d.f, dx);
    if (std::abs(mass1 - 1.0) > default_tolerances.grid_mass_drift)
        throw std::domain_error("grid too coarse: single-element density mass drifts beyond tolerance");

    // cyclic convolution on a zero-padded copy; the grid spans the full sum
    // range, so wrap-around mass is negligible by construction
    const std::size_t len = next_pow2(2 * n);
    std::vector<double> in(len, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        in[j] = d.f[j];
    std::vector<std::complex<double>> spec(len / 2 + 1);

    fftw_plan fwd = fftw_plan_dft_r2c_1d(int(len), in.data(),
                                         reinterpret_cast<fftw_complex *>(spec.data()), FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);

    for (auto &s : spec)
        s = std::pow(s * dx, double(m));

    std::vector<double> out(len, 0.0);
    fftw_plan bwd = fftw_plan_dft_c2r_1d(int(len), reinterpret_cast<fftw_complex *>(spec.data()),
                                         out.data(), FFTW_ESTIMATE);
    fftw_execute(bwd);
    fftw_destroy_plan(bwd);

    const double scale = 1.0 / (double(len) * dx);
    for (std::size_t j = 0; j < n; ++j)
    {
        double v = out[j] * scale;
        d.f[j] = (v > 0.0) ? v : 0.0; // clip FFT ringing below zero
    }
    d.mass = trapezoid_mass(d.f, dx);
    return d;
}

double kl_vs_gaussian(const DiscretizedDensity &exact, double mean, double var)
{
    if (exact.x.size() != exact.f.size() || exact.x.size() < 2)
        throw std::invalid_argument("discretized density needs matching x/f arrays");
    if (!(var > 0.0))
        throw std::invalid_argument("gaussian variance must be positive");

    const double dx = exact.x[1] - exact.x[0];
    const double norm = 1.0 / std::sqrt(two_pi * var);
    double acc = 0.0;
    for (std::size_t j = 0; j < exact.x.size(); ++j)
    {
        double fe = exact.f[j];
        if (!(fe > 1e-300))
            continue; // outside the support of the exact density
        double u = exact.x[j] - mean;
        double fg = norm * std::exp(-0.5 * u * u / var);
        if (fg > 0.0)
            acc += fg * std::log(fg / fe);
    }
    return acc * dx;
}

double kl_gaussian_approx(int m, const RicianLink &bs, const RicianLink &user)
{
    auto [mu, sigma] = cascaded_moments(bs, user);
    DiscretizedDensity d = sum_pdf_exact(m, bs, user, default_sum_grid(m, bs, user));
    return kl_vs_gaussian(d, double(m) * mu, double(m) * sigma * sigma);
}

} // namespace starris::channels
