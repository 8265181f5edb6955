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

#ifndef STARRIS_RUN_CONFIG_HPP
#define STARRIS_RUN_CONFIG_HPP

#include <string>

#include "starris/sim_engine.hpp"

namespace starris::cli
{

// name of the environment variable that overrides the built-in default seed;
// a seed given in the config always wins over both
inline constexpr const char *seed_env_var = "STARRIS_SEED";
inline constexpr std::uint64_t builtin_default_seed = 1;

// A fully resolved outage run: sweep specification plus output paths and the
// canonical config text used for the metadata echo. Parsed from an INI-style
// document with [surface], [links], [access], [sweep] and [output] sections;
// unknown sections or keys are rejected, dB-valued keys are converted to
// linear units here and nowhere else.
struct RunConfig
{
    sim::SweepSpec spec;
    std::string csv_path;
    std::string meta_path;
    std::string canonical; // normalized config text; reparsing it reproduces the run
};

// throws std::invalid_argument with the offending section/key in the message
RunConfig parse_run_config(const std::string &text);

// reads the file and parses it; throws std::runtime_error when unreadable
RunConfig load_run_config(const std::string &path);

} // namespace starris::cli

#endif
