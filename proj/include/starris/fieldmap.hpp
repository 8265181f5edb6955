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

#ifndef STARRIS_FIELDMAP_HPP
#define STARRIS_FIELDMAP_HPP

#include <cstddef>
#include <vector>

#include "starris/em_core.hpp"

namespace starris::fieldmap
{

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double distance(const Vec3 &a, const Vec3 &b);

// Planar element array in the x-z plane, centered at the origin, with its
// two faces looking along +y (side A, reflection half-space) and -y (side B).
// Rows run along z, columns along x.
struct ArrayGeometry
{
    std::size_t rows = 8;
    std::size_t cols = 8;
    double spacing = 0.05;    // element pitch, m
    double wavelength = 0.1;  // carrier wavelength, m

    std::size_t element_count() const { return rows * cols; }
    std::vector<Vec3> element_positions() const;
};

// throws std::invalid_argument for empty arrays or non-positive lengths
void validate(const ArrayGeometry &geo);

// isotropic point source: position and radiated power, W
struct Source
{
    Vec3 position;
    double power = 1.0;
};

// horizontal observation window (the x-y plane at height z), sampled at the
// centers of nx-by-ny cells
struct MapGrid
{
    double extent_x = 40.0;
    double extent_y = 40.0;
    std::size_t nx = 200;
    std::size_t ny = 200;
    double z = 0.0;
};

struct FieldGrid
{
    std::vector<double> xs;              // cell center x coordinates, length nx
    std::vector<double> ys;              // cell center y coordinates, length ny
    std::vector<double> power;           // |field|^2, row-major [iy * nx + ix]
    std::vector<std::size_t> excluded;   // flat indices inside an exclusion disk

    double &at(std::size_t ix, std::size_t iy) { return power[iy * xs.size() + ix]; }
    double at(std::size_t ix, std::size_t iy) const { return power[iy * xs.size() + ix]; }
};

// Per-element phases that cophase the source-element-target path: the phase
// k (d_source,m + d_m,target) wrapped to [0, 2*pi), which cancels the
// propagation delay so each element contributes with zero total phase at the
// target.
std::vector<double> cophase_toward(const ArrayGeometry &geo, const Vec3 &source, const Vec3 &target);

// Scalar power map of the re-radiated fields. Every source illuminates every
// element; a grid cell on the source's side of the surface accumulates the
// element's reflection response, a cell on the far side its transmission
// response, with spherical spreading over both hops:
//   field(q) = sum_src sum_m c_m sqrt(p_src) e^{-jk(d_sm + d_mq)} / (4 pi d_sm d_mq)
// Cells closer than wavelength/100 to an element or a source are excluded
// (power 0) and reported in `excluded`. Direct source-to-cell propagation is
// not part of the map; it shows the surface-scattered field only.
FieldGrid compute_power_map(const ArrayGeometry &geo, const std::vector<em::StarCoefficients> &coeffs,
                            const std::vector<Source> &sources, const MapGrid &grid);

} // namespace starris::fieldmap

#endif
