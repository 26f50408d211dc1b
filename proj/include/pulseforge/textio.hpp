// Copyright 2026 The Pulseforge Authors
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

#ifndef PULSEFORGE_TEXTIO_HPP
#define PULSEFORGE_TEXTIO_HPP

#include <string>

namespace pulseforge::util {

// Shortest round-trip decimal representation, locale independent (std::to_chars).
std::string format_double(double v);

// Strict double parse of a whole token; throws ConfigError on trailing junk.
double parse_double(const std::string& token);

std::string read_file(const std::string& path);           // throws ConfigError
void write_file(const std::string& path, const std::string& text);

}  // namespace pulseforge::util

#endif  // PULSEFORGE_TEXTIO_HPP
