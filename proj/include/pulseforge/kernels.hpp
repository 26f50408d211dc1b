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

#ifndef PULSEFORGE_KERNELS_HPP
#define PULSEFORGE_KERNELS_HPP

#include <complex>
#include <vector>

namespace pulseforge::kernels {

using cxd = std::complex<double>;

// One dissipation channel lowered to kernel form: either a dense diagonal
// (duplicated per double lane so the term is a plain elementwise fma) or a
// short real-valued COO list. The model's jump operators are all real.
struct JumpPlan {
  struct Coo {
    int row, col;
    double val;
  };
  std::vector<Coo> entries;       // used when diag_dup is empty
  std::vector<double> diag_dup;   // 2*n*n weights d_i*d_j, each duplicated
};

// Dense complex kernels for small square matrices (n <= 16), row major,
// interleaved re/im. These sit in the inner loop of the master-equation
// integrator, so each comes in a scalar reference flavor and an AVX2+FMA
// flavor selected at runtime. Outputs must not alias inputs.
struct Kernels {
  const char* name;

  // c = a * b
  void (*matmul)(int n, const cxd* a, const cxd* b, cxd* c);
  // c += a * b
  void (*matmul_acc)(int n, const cxd* a, const cxd* b, cxd* c);

  // Master-equation right-hand side with K = k0 + f*b (drive structure b is
  // Hermitian, so K^dag = k0adj + f*b):
  //   out = -i (K rho - rho K^dag) + sum_j L_j rho L_j^dag
  void (*lindblad_apply)(int n, const cxd* k0, const cxd* k0adj, const cxd* b, double f,
                         const JumpPlan* jumps, int njumps, const cxd* rho, cxd* out);

  // Runge-Kutta stage combination over raw double lanes:
  //   out = y + h * sum_{i<m} c[i] * k[i]
  void (*rk_comb)(int n2, double* out, const double* y, double h, int m, const double* c,
                  const double* const* k);

  // Scaled RMS error of the embedded pair:
  //   sqrt(mean_i (h * sum_j e[j] k[j][i] / (atol + rtol*max(|y_i|,|ynew_i|)))^2)
  double (*rk_error)(int n2, double h, const double* e, const double* const* k,
                     const double* y, const double* ynew, double atol, double rtol);
};

// Reference implementation, always available.
const Kernels& scalar_kernels();

// AVX2+FMA implementation; nullptr when the build or the CPU lacks support.
const Kernels* avx2_kernels();

// Kernel set picked once per process: the fastest supported one, unless the
// environment variable PULSEFORGE_KERNELS (= "scalar" | "avx2") says
// otherwise. An unsupported request falls back to scalar.
const Kernels& active();

}  // namespace pulseforge::kernels

#endif  // PULSEFORGE_KERNELS_HPP
