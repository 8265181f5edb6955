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

#include "starris/fieldmap.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace starris::fieldmap
{

namespace
{
constexpr double two_pi = 6.283185307179586476925286766559;
constexpr double four_pi = 12.566370614359172953850573533118;

double wrap_to_positive(double phase)
{
    double w = std::fmod(phase, two_pi);
    if (w < 0.0)
        w += two_pi;
    return w;
}
} // namespace

double distance(const Vec3 &a, const Vec3 &b)
{
    double dx = a.x - b.x;
    double dy = a.y - b.y;
    double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void validate(const ArrayGeometry &geo)
{
    if (geo.rows == 0 || geo.cols == 0)
        throw std::invalid_argument("array needs at least one element");
    if (!(geo.spacing > 0.0) || !(geo.wavelength > 0.0))
        throw std::invalid_argument("element pitch and wavelength must be positive");
}

std::vector<Vec3> ArrayGeometry::element_positions() const
{
    validate(*this);
    std::vector<Vec3> pos;
    pos.reserve(rows * cols);
    double x0 = -0.5 * double(cols - 1) * spacing;
    double z0 = -0.5 * double(rows - 1) * spacing;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            pos.push_back({x0 + double(c) * spacing, 0.0, z0 + double(r) * spacing});
    return pos;
}

std::vector<double> cophase_toward(const ArrayGeometry &geo, const Vec3 &source, const Vec3 &target)
{
    auto elements = geo.element_positions();
    double k = two_pi / geo.wavelength;
    std::vector<double> phases;
    phases.reserve(elements.size());
    // propagation accumulates -k*d per hop, so the canceling element phase is
    // +k*(path length); with it every contribution arrives at zero phase
    for (const auto &e : elements)
        phases.push_back(wrap_to_positive(k * (distance(source, e) + distance(e, target))));
    return phases;
}

FieldGrid compute_power_map(const ArrayGeometry &geo, const std::vector<em::StarCoefficients> &coeffs,
                            const std::vector<Source> &sources, const MapGrid &grid)
{
    validate(geo);
    auto elements = geo.element_positions();
    if (coeffs.size() != elements.size())
        throw std::invalid_argument("one coefficient set per element required");
    if (sources.empty())
        throw std::invalid_argument("at least one source required");
    if (grid.nx < 2 || grid.ny < 2 || !(grid.extent_x > 0.0) || !(grid.extent_y > 0.0))
        throw std::invalid_argument("grid needs positive extents and at least 2x2 cells");
    for (const auto &s : sources)
        if (!(s.power > 0.0))
            throw std::invalid_argument("source power must be positive");

    const double k = two_pi / geo.wavelength;
    const double exclusion = geo.wavelength / 100.0;

    FieldGrid out;
    out.xs.resize(grid.nx);
    out.ys.resize(grid.ny);
    for (std::size_t i = 0; i < grid.nx; ++i)
        out.xs[i] = -0.5 * grid.extent_x + (double(i) + 0.5) * grid.extent_x / double(grid.nx);
    for (std::size_t j = 0; j < grid.ny; ++j)
        out.ys[j] = -0.5 * grid.extent_y + (double(j) + 0.5) * grid.extent_y / double(grid.ny);
    out.power.assign(grid.nx * grid.ny, 0.0);

    // per source: the element illumination sqrt(p) e^{-jk d_sm} / d_sm and
    // which half-space the source sits in
    struct Illumination
    {
        std::vector<std::complex<double>> amp;
        bool side_a = true;
    };
    std::vector<Illumination> illum(sources.size());
    for (std::size_t s = 0; s < sources.size(); ++s)
    {
        illum[s].side_a = sources[s].position.y >= 0.0;
        illum[s].amp.resize(elements.size());
        for (std::size_t m = 0; m < elements.size(); ++m)
        {
            double d = distance(sources[s].position, elements[m]);
            if (d == 0.0)
                throw std::invalid_argument("a source coincides with an element");
            illum[s].amp[m] = std::sqrt(sources[s].power) * std::polar(1.0 / d, -k * d);
        }
    }

    for (std::size_t j = 0; j < grid.ny; ++j)
    {
        for (std::size_t i = 0; i < grid.nx; ++i)
        {
            Vec3 q{out.xs[i], out.ys[j], grid.z};
            bool q_side_a = q.y >= 0.0;
            bool excluded = false;
            for (const auto &e : elements)
                if (distance(q, e) < exclusion)
                {
                    excluded = true;
                    break;
                }
            if (!excluded)
                for (const auto &s : sources)
                    if (distance(q, s.position) < exclusion)
                    {
                        excluded = true;
                        break;
                    }
            if (excluded)
            {
                out.excluded.push_back(j * grid.nx + i);
                continue;
            }

            std::complex<double> field = 0.0;
            for (std::size_t m = 0; m < elements.size(); ++m)
            {
                double d = distance(q, elements[m]);
                std::complex<double> hop = std::polar(1.0 / d, -k * d);
                for (std::size_t s = 0; s < sources.size(); ++s)
                {
                    const auto &c = (illum[s].side_a == q_side_a) ? coeffs[m].r : coeffs[m].t;
                    field += c * illum[s].amp[m] * hop;
                }
            }
            field /= four_pi;
            out.power[j * grid.nx + i] = std::norm(field);
        }
    }
    return out;
}

} // namespace starris::fieldmap
