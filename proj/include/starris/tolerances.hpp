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

#ifndef STARRIS_TOLERANCES_HPP
#define STARRIS_TOLERANCES_HPP

namespace starris
{

// Numeric tolerances used by validation helpers. Kept in one record so the
// acceptance thresholds are pinned in a single place instead of being
// scattered as magic numbers.
struct Tolerances
{
    double passivity = 1.0e-12;      // allowed excess of |t|^2 + |r|^2 over 1
    double phase_coupling = 1.0e-9;  // allowed deviation of the lossless phase gap from pi/2
    double round_trip = 1.0e-12;     // amplitude/phase round-trip reconstruction error
    double series_tail = 1.0e-12;    // series truncation: stop when term < tail * running sum
    double grid_mass_drift = 1.0e-3; // discretized density mass error that aborts a convolution
};

inline constexpr Tolerances default_tolerances{};

} // namespace starris

#endif
