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

#ifndef STARRIS_TABLE_IO_HPP
#define STARRIS_TABLE_IO_HPP

#include <string>

namespace starris::io
{

inline constexpr const char *tool_version = "0.1.0";

// %.17g: enough digits to reproduce the double exactly on reparse
std::string format_full(double v);

// %.<sig>g with a fixed significand count; deterministic across runs
std::string format_g(double v, int significant);

// RFC 4180 quoting: wraps the field in quotes when it contains a comma,
// a quote or a line break, doubling any embedded quotes
std::string csv_escape(const std::string &field);

// whole-file helpers; both throw std::runtime_error with the path on failure
std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &content);

} // namespace starris::io

#endif
