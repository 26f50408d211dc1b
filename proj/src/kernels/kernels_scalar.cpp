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

#include <algorithm>
#include <cmath>

#include "pulseforge/kernels.hpp"

namespace pulseforge::kernels {

namespace {

constexpr int kMaxDim = 16;

// i-k-j loop order keeps the b row hot and lets the compiler vectorize the
// innermost accumulation.
void matmul_acc_scalar(int n, const cxd* a, const cxd* b, cxd* c) {
  for (int i = 0; i < n; ++i) {
    cxd* crow = c + static_cast<std::size_t>(i) * n;
    const cxd* arow = a + static_cast<std::size_t>(i) * n;
    for (int k = 0; k < n; ++k) {
      const double ar = arow[k].real();
      const double ai = arow[k].imag();
      const cxd* brow = b + static_cast<std::size_t>(k) * n;
      for (int j = 0; j < n; ++j) {
        const double br = brow[j].real();
        const double bi = brow[j].imag();
        crow[j] += cxd(ar * br - ai * bi, ar * bi + ai * br);
      }
    }
  }
}

void matmul_scalar(int n, const cxd* a, const cxd* b, cxd* c) {
  std::fill(c, c + static_cast<std::size_t>(n) * n, cxd(0.0));
  matmul_acc_scalar(n, a, b, c);
}

void apply_jump_scalar(int n, const JumpPlan& jump, const cxd* rho, cxd* out, cxd* scratch) {
  const int nn = n * n;
  if (!jump.diag_dup.empty()) {
    const double* w = jump.diag_dup.data();
    const double* r = reinterpret_cast<const double*>(rho);
    double* o = reinterpret_cast<double*>(out);
    for (int i = 0; i < 2 * nn; ++i) o[i] += w[i] * r[i];
    return;
  }
  std::fill(scratch, scratch + nn, cxd(0.0));
  for (const auto& e : jump.entries) {  // scratch = L rho
    const cxd* rrow = rho + static_cast<std::size_t>(e.col) * n;
    cxd* trow = scratch + static_cast<std::size_t>(e.row) * n;
    for (int j = 0; j < n; ++j) trow[j] += e.val * rrow[j];
  }
  for (const auto& e : jump.entries) {  // out += scratch L^dag
    for (int i = 0; i < n; ++i) out[i * n + e.row] += e.val * scratch[i * n + e.col];
  }
}

void lindblad_apply_scalar(int n, const cxd* k0, const cxd* k0adj, const cxd* b, double f,
                           const JumpPlan* jumps, int njumps, const cxd* rho, cxd* out) {
  const int nn = n * n;
  cxd kmat[kMaxDim * kMaxDim], kadj[kMaxDim * kMaxDim];
  cxd t1[kMaxDim * kMaxDim], t2[kMaxDim * kMaxDim];
  for (int i = 0; i < nn; ++i) {
    kmat[i] = k0[i] + f * b[i];
    kadj[i] = k0adj[i] + f * b[i];
  }
  matmul_scalar(n, kmat, rho, t1);
  matmul_scalar(n, rho, kadj, t2);
  for (int i = 0; i < nn; ++i) {
    const cxd d = t1[i] - t2[i];
    out[i] = cxd(d.imag(), -d.real());  // -i * d
  }
  for (int j = 0; j < njumps; ++j) apply_jump_scalar(n, jumps[j], rho, out, t1);
}

void rk_comb_scalar(int n2, double* out, const double* y, double h, int m, const double* c,
                    const double* const* k) {
  for (int i = 0; i < n2; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += c[j] * k[j][i];
    out[i] = y[i] + h * acc;
  }
}

double rk_error_scalar(int n2, double h, const double* e, const double* const* k,
                       const double* y, const double* ynew, double atol, double rtol) {
  double sum = 0.0;
  for (int i = 0; i < n2; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 6; ++j) acc += e[j] * k[j][i];
    const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
    const double q = h * acc / sc;
    sum += q * q;
  }
  return std::sqrt(sum / n2);
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar",         matmul_scalar, matmul_acc_scalar,
                         lindblad_apply_scalar, rk_comb_scalar, rk_error_scalar};
  return k;
}

}  // namespace pulseforge::kernels
