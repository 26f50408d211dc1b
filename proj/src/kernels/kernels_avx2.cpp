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

// Compiled with -mavx2 -mfma (see src/CMakeLists.txt); entered only after the
// dispatcher has verified CPU support.

#include "pulseforge/kernels.hpp"

#ifdef PULSEFORGE_HAVE_AVX2

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace pulseforge::kernels {

namespace {

constexpr int kMaxDim = 16;

// One __m256d holds two interleaved complex doubles. Complex products are
// split into two FMA streams against B's rows and a swapped (im, re) copy,
// merged once per accumulator with addsub:
//   even lanes: accR - accI = sum(ar*br - ai*bi)   (real part)
//   odd lanes:  accR + accI = sum(ar*bi + ai*br)   (imag part)

void make_swapped(int nn, const cxd* b, double* bs) {
  const double* bd = reinterpret_cast<const double*>(b);
  for (int i = 0; i < 2 * nn; i += 4) {
    const __m256d v = _mm256_loadu_pd(bd + i);
    _mm256_storeu_pd(bs + i, _mm256_permute_pd(v, 0b0101));
  }
  for (int i = (2 * nn) & ~3; i < 2 * nn; i += 2) {
    bs[i] = bd[i + 1];
    bs[i + 1] = bd[i];
  }
}

// C rows accumulated in pairs over column blocks of 4 (two vectors), sharing
// every B load between the two rows.
template <bool kAccumulate>
void matmul_core(int n, const cxd* a, const cxd* b, const double* bswap, cxd* c) {
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  const int vecs = n / 2;

  for (int jb = 0; jb < vecs; jb += 2) {
    const int nb = std::min(2, vecs - jb);
    int i = 0;
    for (; i + 1 < n; i += 2) {
      __m256d r0[2], s0[2], r1[2], s1[2];
      for (int v = 0; v < nb; ++v) {
        r0[v] = _mm256_setzero_pd();
        s0[v] = _mm256_setzero_pd();
        r1[v] = _mm256_setzero_pd();
        s1[v] = _mm256_setzero_pd();
      }
      const cxd* arow0 = a + static_cast<std::size_t>(i) * n;
      const cxd* arow1 = arow0 + n;
      for (int k = 0; k < n; ++k) {
        const __m256d ar0 = _mm256_set1_pd(arow0[k].real());
        const __m256d ai0 = _mm256_set1_pd(arow0[k].imag());
        const __m256d ar1 = _mm256_set1_pd(arow1[k].real());
        const __m256d ai1 = _mm256_set1_pd(arow1[k].imag());
        const double* brow = bd + 2 * k * n + 4 * jb;
        const double* srow = bswap + 2 * k * n + 4 * jb;
        for (int v = 0; v < nb; ++v) {
          const __m256d bv = _mm256_loadu_pd(brow + 4 * v);
          const __m256d sv = _mm256_loadu_pd(srow + 4 * v);
          r0[v] = _mm256_fmadd_pd(ar0, bv, r0[v]);
          s0[v] = _mm256_fmadd_pd(ai0, sv, s0[v]);
          r1[v] = _mm256_fmadd_pd(ar1, bv, r1[v]);
          s1[v] = _mm256_fmadd_pd(ai1, sv, s1[v]);
        }
      }
      double* crow0 = cd + 2 * i * n + 4 * jb;
      double* crow1 = crow0 + 2 * n;
      for (int v = 0; v < nb; ++v) {
        __m256d m0 = _mm256_addsub_pd(r0[v], s0[v]);
        __m256d m1 = _mm256_addsub_pd(r1[v], s1[v]);
        if (kAccumulate) {
          m0 = _mm256_add_pd(m0, _mm256_loadu_pd(crow0 + 4 * v));
          m1 = _mm256_add_pd(m1, _mm256_loadu_pd(crow1 + 4 * v));
        }
        _mm256_storeu_pd(crow0 + 4 * v, m0);
        _mm256_storeu_pd(crow1 + 4 * v, m1);
      }
    }
    if (i < n) {  // odd trailing row
      __m256d r0[2], s0[2];
      for (int v = 0; v < nb; ++v) {
        r0[v] = _mm256_setzero_pd();
        s0[v] = _mm256_setzero_pd();
      }
      const cxd* arow = a + static_cast<std::size_t>(i) * n;
      for (int k = 0; k < n; ++k) {
        const __m256d ar = _mm256_set1_pd(arow[k].real());
        const __m256d ai = _mm256_set1_pd(arow[k].imag());
        const double* brow = bd + 2 * k * n + 4 * jb;
        const double* srow = bswap + 2 * k * n + 4 * jb;
        for (int v = 0; v < nb; ++v) {
          r0[v] = _mm256_fmadd_pd(ar, _mm256_loadu_pd(brow + 4 * v), r0[v]);
          s0[v] = _mm256_fmadd_pd(ai, _mm256_loadu_pd(srow + 4 * v), s0[v]);
        }
      }
      double* crow = cd + 2 * i * n + 4 * jb;
      for (int v = 0; v < nb; ++v) {
        __m256d m = _mm256_addsub_pd(r0[v], s0[v]);
        if (kAccumulate) m = _mm256_add_pd(m, _mm256_loadu_pd(crow + 4 * v));
        _mm256_storeu_pd(crow + 4 * v, m);
      }
    }
  }

  if (n & 1) {  // odd trailing column, scalar dots
    const int j = n - 1;
    for (int i = 0; i < n; ++i) {
      const cxd* arow = a + static_cast<std::size_t>(i) * n;
      double re = 0.0, im = 0.0;
      for (int k = 0; k < n; ++k) {
        const cxd bv = b[static_cast<std::size_t>(k) * n + j];
        re += arow[k].real() * bv.real() - arow[k].imag() * bv.imag();
        im += arow[k].real() * bv.imag() + arow[k].imag() * bv.real();
      }
      cxd& out = c[static_cast<std::size_t>(i) * n + j];
      out = kAccumulate ? out + cxd(re, im) : cxd(re, im);
    }
  }
}

void matmul_avx2(int n, const cxd* a, const cxd* b, cxd* c) {
  alignas(32) double bswap[2 * kMaxDim * kMaxDim];
  make_swapped(n * n, b, bswap);
  matmul_core<false>(n, a, b, bswap, c);
}

void matmul_acc_avx2(int n, const cxd* a, const cxd* b, cxd* c) {
  alignas(32) double bswap[2 * kMaxDim * kMaxDim];
  make_swapped(n * n, b, bswap);
  matmul_core<true>(n, a, b, bswap, c);
}

void apply_jump_avx2(int n, const JumpPlan& jump, const cxd* rho, cxd* out, cxd* scratch) {
  const int nn = n * n;
  const int n2 = 2 * nn;
  double* o = reinterpret_cast<double*>(out);
  const double* r = reinterpret_cast<const double*>(rho);

  if (!jump.diag_dup.empty()) {
    const double* w = jump.diag_dup.data();
    int i = 0;
    for (; i + 4 <= n2; i += 4) {
      const __m256d acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(r + i),
                                          _mm256_loadu_pd(o + i));
      _mm256_storeu_pd(o + i, acc);
    }
    for (; i < n2; ++i) o[i] += w[i] * r[i];
    return;
  }

  std::fill(scratch, scratch + nn, cxd(0.0));
  double* t = reinterpret_cast<double*>(scratch);
  const int row_len = 2 * n;
  for (const auto& e : jump.entries) {  // scratch = L rho, real row fma
    const double* rrow = r + e.col * row_len;
    double* trow = t + e.row * row_len;
    const __m256d v = _mm256_set1_pd(e.val);
    int j = 0;
    for (; j + 4 <= row_len; j += 4) {
      _mm256_storeu_pd(trow + j,
                       _mm256_fmadd_pd(v, _mm256_loadu_pd(rrow + j), _mm256_loadu_pd(trow + j)));
    }
    for (; j < row_len; ++j) trow[j] += e.val * rrow[j];
  }
  for (const auto& e : jump.entries) {  // out += scratch L^dag
    for (int i = 0; i < n; ++i) out[i * n + e.row] += e.val * scratch[i * n + e.col];
  }
}

void lindblad_apply_avx2(int n, const cxd* k0, const cxd* k0adj, const cxd* b, double f,
                         const JumpPlan* jumps, int njumps, const cxd* rho, cxd* out) {
  const int nn = n * n;
  const int n2 = 2 * nn;
  alignas(32) cxd kmat[kMaxDim * kMaxDim], kadj[kMaxDim * kMaxDim];
  alignas(32) cxd t1[kMaxDim * kMaxDim], t2[kMaxDim * kMaxDim];
  alignas(32) double swapbuf[2 * kMaxDim * kMaxDim];

  {
    const double* k0d = reinterpret_cast<const double*>(k0);
    const double* kad = reinterpret_cast<const double*>(k0adj);
    const double* bd = reinterpret_cast<const double*>(b);
    double* km = reinterpret_cast<double*>(kmat);
    double* ka = reinterpret_cast<double*>(kadj);
    const __m256d fv = _mm256_set1_pd(f);
    int i = 0;
    for (; i + 4 <= n2; i += 4) {
      const __m256d bv = _mm256_loadu_pd(bd + i);
      _mm256_storeu_pd(km + i, _mm256_fmadd_pd(fv, bv, _mm256_loadu_pd(k0d + i)));
      _mm256_storeu_pd(ka + i, _mm256_fmadd_pd(fv, bv, _mm256_loadu_pd(kad + i)));
    }
    for (; i < n2; ++i) {
      km[i] = k0d[i] + f * bd[i];
      ka[i] = kad[i] + f * bd[i];
    }
  }

  make_swapped(nn, rho, swapbuf);
  matmul_core<false>(n, kmat, rho, swapbuf, t1);  // K rho
  make_swapped(nn, kadj, swapbuf);
  matmul_core<false>(n, rho, kadj, swapbuf, t2);  // rho K^dag

  {
    // out = -i (t1 - t2): per complex (re, im) -> (im, -re)
    const double* a1 = reinterpret_cast<const double*>(t1);
    const double* a2 = reinterpret_cast<const double*>(t2);
    double* o = reinterpret_cast<double*>(out);
    const __m256d signmask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    int i = 0;
    for (; i + 4 <= n2; i += 4) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a1 + i), _mm256_loadu_pd(a2 + i));
      const __m256d sw = _mm256_permute_pd(d, 0b0101);
      _mm256_storeu_pd(o + i, _mm256_xor_pd(sw, signmask));
    }
    for (; i < n2; i += 2) {
      const double dre = a1[i] - a2[i];
      const double dim = a1[i + 1] - a2[i + 1];
      o[i] = dim;
      o[i + 1] = -dre;
    }
  }

  for (int j = 0; j < njumps; ++j) apply_jump_avx2(n, jumps[j], rho, out, t1);
}

void rk_comb_avx2(int n2, double* out, const double* y, double h, int m, const double* c,
                  const double* const* k) {
  const __m256d hv = _mm256_set1_pd(h);
  __m256d cv[6];
  for (int j = 0; j < m; ++j) cv[j] = _mm256_set1_pd(c[j]);
  int i = 0;
  for (; i + 4 <= n2; i += 4) {
    __m256d acc = _mm256_mul_pd(cv[0], _mm256_loadu_pd(k[0] + i));
    for (int j = 1; j < m; ++j) acc = _mm256_fmadd_pd(cv[j], _mm256_loadu_pd(k[j] + i), acc);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(hv, acc, _mm256_loadu_pd(y + i)));
  }
  for (; i < n2; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += c[j] * k[j][i];
    out[i] = y[i] + h * acc;
  }
}

double rk_error_avx2(int n2, double h, const double* e, const double* const* k, const double* y,
                     const double* ynew, double atol, double rtol) {
  const __m256d hv = _mm256_set1_pd(h);
  const __m256d av = _mm256_set1_pd(atol);
  const __m256d rv = _mm256_set1_pd(rtol);
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));
  __m256d ev[6];
  for (int j = 0; j < 6; ++j) ev[j] = _mm256_set1_pd(e[j]);

  __m256d sum = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= n2; i += 4) {
    __m256d acc = _mm256_mul_pd(ev[0], _mm256_loadu_pd(k[0] + i));
    for (int j = 1; j < 6; ++j) acc = _mm256_fmadd_pd(ev[j], _mm256_loadu_pd(k[j] + i), acc);
    acc = _mm256_mul_pd(acc, hv);
    const __m256d ya = _mm256_and_pd(absmask, _mm256_loadu_pd(y + i));
    const __m256d na = _mm256_and_pd(absmask, _mm256_loadu_pd(ynew + i));
    const __m256d sc = _mm256_fmadd_pd(rv, _mm256_max_pd(ya, na), av);
    const __m256d q = _mm256_div_pd(acc, sc);
    sum = _mm256_fmadd_pd(q, q, sum);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, sum);
  double total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n2; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 6; ++j) acc += e[j] * k[j][i];
    const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
    const double q = h * acc / sc;
    total += q * q;
  }
  return std::sqrt(total / n2);
}

}  // namespace

const Kernels* avx2_kernels_build() {
  static const Kernels k{"avx2",          matmul_avx2, matmul_acc_avx2,
                         lindblad_apply_avx2, rk_comb_avx2, rk_error_avx2};
  return &k;
}

}  // namespace pulseforge::kernels

#endif  // PULSEFORGE_HAVE_AVX2
