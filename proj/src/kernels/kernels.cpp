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

#include "pulseforge/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace pulseforge::kernels {

#ifdef PULSEFORGE_HAVE_AVX2
const Kernels* avx2_kernels_build();
#endif

const Kernels* avx2_kernels() {
#ifdef PULSEFORGE_HAVE_AVX2
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return avx2_kernels_build();
  }
#endif
  return nullptr;
}

const Kernels& active() {
  static const Kernels* selected = [] {
    const char* req = std::getenv("PULSEFORGE_KERNELS");
    if (req != nullptr && std::strcmp(req, "scalar") == 0) {
      return &scalar_kernels();
    }
    const Kernels* avx2 = avx2_kernels();
    if (req != nullptr && std::strcmp(req, "avx2") == 0 && avx2 == nullptr) {
      return &scalar_kernels();  // requested but unavailable
    }
    return avx2 != nullptr ? avx2 : &scalar_kernels();
  }();
  return *selected;
}

}  // namespace pulseforge::kernels
