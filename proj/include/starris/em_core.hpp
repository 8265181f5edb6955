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

#ifndef STARRIS_EM_CORE_HPP
#define STARRIS_EM_CORE_HPP

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "starris/tolerances.hpp"

namespace starris::em
{

using cplx = std::complex<double>;

// free-space wave impedance, ohm
inline constexpr double free_space_impedance = 376.730313668;

// Electric and magnetic surface impedance of one element, plus the wave
// impedance of the surrounding medium. A passive element has non-negative
// resistances; purely reactive impedances model the lossless case.
struct ElementImpedance
{
    cplx z_e;                           // electric surface impedance, ohm
    cplx z_m;                           // magnetic surface impedance, ohm
    double eta = free_space_impedance;  // wave impedance of the medium, ohm
};

// throws std::invalid_argument when eta <= 0 or a resistance is negative
void validate(const ElementImpedance &imp);

// Complex transmission / reflection response of one element. The amplitude
// and phase views are derived on demand; phases are reported in [0, 2*pi).
struct StarCoefficients
{
    cplx t; // transmission coefficient
    cplx r; // reflection coefficient

    double beta_t() const { return std::abs(t); }
    double beta_r() const { return std::abs(r); }
    double phi_t() const;
    double phi_r() const;

    static StarCoefficients from_polar(double beta_t, double phi_t, double beta_r, double phi_r);
};

// Field balance at a single element for a pair of incident fields, one from
// each side. The incident fields drive an electric current (radiating the
// same field e_j into both half-spaces) and a magnetic current (radiating
// fields of opposite sign, e_k1 = -e_k2).
struct FieldState
{
    cplx e_inc_1; // incident field from side 1
    cplx e_inc_2; // incident field from side 2
    cplx e_j;     // field radiated by the electric current
    cplx e_k1;    // magnetic-current field on side 1
    cplx e_k2;    // magnetic-current field on side 2
    cplx e_rec_a; // total field received on side A
    cplx e_rec_b; // total field received on side B
};

// one incident wave: arrival angle (radians) and complex signal amplitude
struct Incident
{
    double angle;
    cplx signal;
};

using IncidentSet = std::vector<Incident>;

// Angle-resolved coefficient lookup. Responses are stored per exact incidence
// angle; lookups for an angle without an entry are a configuration error.
class AngleCoefficientTable
{
  public:
    void set(double angle, const StarCoefficients &c) { table_[angle] = c; }

    // throws std::invalid_argument naming the angle when no entry exists
    const StarCoefficients &at(double angle) const;

    std::size_t size() const { return table_.size(); }

  private:
    std::map<double, StarCoefficients> table_;
};

// Element response from its surface impedances:
//   t = 2 z_e / (2 z_e + eta) - z_m / (z_m + 2 eta)
//   r = z_m / (z_m + 2 eta) - eta / (2 z_e + eta)
// Throws std::domain_error when a denominator vanishes (series resonance of
// a non-passive impedance; a passive element never reaches either pole).
StarCoefficients coefficients_from_impedance(const ElementImpedance &imp);

// Full field balance for incident fields e1 (side 1) and e2 (side 2).
// The received fields satisfy e_rec_a = r*e1 + t*e2 and e_rec_b = t*e1 + r*e2
// with (t, r) = coefficients_from_impedance(imp); kept as two independent
// computation routes so the consistency can be asserted in tests.
FieldState induced_fields(const ElementImpedance &imp, cplx e1, cplx e2);

// scattered fields for simultaneous illumination from both sides:
//   s'_a = r*s_a + t*s_b,  s'_b = t*s_a + r*s_b
std::pair<cplx, cplx> scatter(const StarCoefficients &c, cplx s_a, cplx s_b);

// angle-resolved superposition of two incident sets through a coefficient table
std::pair<cplx, cplx> superpose(const IncidentSet &side_a, const IncidentSet &side_b,
                                const AngleCoefficientTable &coeffs);

// energy conservation check: |t|^2 + |r|^2 - 1, positive when non-passive
double passivity_excess(const StarCoefficients &c);

// Phase gap phi_t - phi_r wrapped to (-pi, pi]. For a lossless element this
// is +-pi/2. Throws std::domain_error when either amplitude is zero, because
// the gap is undefined there.
double lossless_phase_gap(const StarCoefficients &c);

// Effective coefficients when both sides are illuminated with amplitude
// ratio beta = e2/e1 (nonzero). The pair (t_ab, r_a) acts on the side-1
// signal, (t_ba, r_b) on the side-2 signal; the asymmetry is what lets one
// physical element present different responses to the two half-spaces.
struct DualCoefficients
{
    cplx t_ab; // effective transmission, side 1 -> side 2
    cplx t_ba; // effective transmission, side 2 -> side 1
    cplx r_a;  // effective reflection seen on side A
    cplx r_b;  // effective reflection seen on side B
};

// throws std::domain_error when beta == 0
DualCoefficients effective_dual_coefficients(cplx t0, cplx r0, cplx beta);

} // namespace starris::em

#endif
