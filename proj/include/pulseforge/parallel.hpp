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

#ifndef PULSEFORGE_PARALLEL_HPP
#define PULSEFORGE_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace pulseforge::util {

// Runs fn(i) for i in [0, n). workers <= 0 selects the hardware count. Tasks
// write to index-addressed slots, so results do not depend on scheduling; the
// first exception is rethrown after all threads join.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

// SplitMix64 step; used to derive independent, order-free RNG streams.
std::uint64_t splitmix64(std::uint64_t& state);
// Collapses (seed, salt) into a stream seed for one task index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt);

}  // namespace pulseforge::util

#endif  // PULSEFORGE_PARALLEL_HPP
