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

#include "starris/em_core.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace starris::em
{

namespace
{
constexpr double two_pi = 6.283185307179586476925286766559;
constexpr double pi = 3.141592653589793238462643383280;

double wrap_to_positive(double phase)
{
    double w = std::fmod(phase, two_pi);
    if (w < 0.0)
        w += two_pi;
    return w;
}
} // namespace

void validate(const ElementImpedance &imp)
{
    if (!(imp.eta > 0.0))
        throw std::invalid_argument("element impedance: eta must be positive");
    if (imp.z_e.real() < 0.0 || imp.z_m.real() < 0.0)
        throw std::invalid_argument("element impedance: negative resistance (non-passive element)");
}

double StarCoefficients::phi_t() const
{
    return wrap_to_positive(std::arg(t));
}

double StarCoefficients::phi_r() const
{
    return wrap_to_positive(std::arg(r));
}

StarCoefficients StarCoefficients::from_polar(double beta_t, double phi_t, double beta_r, double phi_r)
{
    if (beta_t < 0.0 || beta_r < 0.0)
        throw std::invalid_argument("coefficient amplitudes must be non-negative");
    return {std::polar(beta_t, phi_t), std::polar(beta_r, phi_r)};
}

const StarCoefficients &AngleCoefficientTable::at(double angle) const
{
    auto it = table_.find(angle);
    if (it == table_.end())
    {
        std::ostringstream msg;
        msg.precision(17);
        msg << "no coefficient entry for incidence angle " << angle;
        throw std::invalid_argument(msg.str());
    }
    return it->second;
}

StarCoefficients coefficients_from_impedance(const ElementImpedance &imp)
{
    const cplx den_e = 2.0 * imp.z_e + imp.eta;
    const cplx den_m = imp.z_m + 2.0 * imp.eta;
    if (std::abs(den_e) == 0.0)
        throw std::domain_error("element response undefined: 2*z_e + eta = 0");
    if (std::abs(den_m) == 0.0)
        throw std::domain_error("element response undefined: z_m + 2*eta = 0");

    StarCoefficients c;
    c.t = 2.0 * imp.z_e / den_e - imp.z_m / den_m;
    c.r = imp.z_m / den_m - imp.eta / den_e;
    return c;
}

FieldState induced_fields(const ElementImpedance &imp, cplx e1, cplx e2)
{
    const cplx den_e = 2.0 * imp.z_e + imp.eta;
    const cplx den_m = imp.z_m + 2.0 * imp.eta;
    if (std::abs(den_e) == 0.0)
        throw std::domain_error("element response undefined: 2*z_e + eta = 0");
    if (std::abs(den_m) == 0.0)
        throw std::domain_error("element response undefined: z_m + 2*eta = 0");

    FieldState f;
    f.e_inc_1 = e1;
    f.e_inc_2 = e2;
    f.e_j = -imp.eta * (e1 + e2) / den_e;
    f.e_k1 = imp.z_m * (e1 - e2) / den_m;
    f.e_k2 = -f.e_k1;
    // side A sees the reradiated fields plus the wave arriving from side 2,
    // side B the one arriving from side 1
    f.e_rec_a = f.e_j + f.e_k1 + e2;
    f.e_rec_b = f.e_j + f.e_k2 + e1;
    return f;
}

std::pair<cplx, cplx> scatter(const StarCoefficients &c, cplx s_a, cplx s_b)
{
    return {c.r * s_a + c.t * s_b, c.t * s_a + c.r * s_b};
}

std::pair<cplx, cplx> superpose(const IncidentSet &side_a, const IncidentSet &side_b,
                                const AngleCoefficientTable &coeffs)
{
    cplx out_a = 0.0;
    cplx out_b = 0.0;
    for (const auto &w : side_a)
    {
        const StarCoefficients &c = coeffs.at(w.angle);
        out_a += c.r * w.signal;
        out_b += c.t * w.signal;
    }
    for (const auto &w : side_b)
    {
        const StarCoefficients &c = coeffs.at(w.angle);
        out_a += c.t * w.signal;
        out_b += c.r * w.signal;
    }
    return {out_a, out_b};
}

double passivity_excess(const StarCoefficients &c)
{
    return std::norm(c.t) + std::norm(c.r) - 1.0;
}

double lossless_phase_gap(const StarCoefficients &c)
{
    if (std::abs(c.t) == 0.0 || std::abs(c.r) == 0.0)
        throw std::domain_error("phase gap undefined: a coefficient amplitude is zero");
    double gap = std::remainder(std::arg(c.t) - std::arg(c.r), two_pi);
    if (gap <= -pi)
        gap = pi; // wrap convention: report the boundary as +pi
    return gap;
}

DualCoefficients effective_dual_coefficients(cplx t0, cplx r0, cplx beta)
{
    if (std::abs(beta) == 0.0)
        throw std::domain_error("effective dual coefficients undefined for beta = 0");
    DualCoefficients d;
    d.t_ab = t0 + beta * r0;
    d.t_ba = t0 + r0 / beta;
    d.r_a = r0 + beta * t0;
    d.r_b = r0 + t0 / beta;
    return d;
}

} // namespace starris::em
