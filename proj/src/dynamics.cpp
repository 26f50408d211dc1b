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

#include "pulseforge/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pulseforge/kernels.hpp"

namespace pulseforge::dynamics {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kDim = basis::dim;
constexpr int kDim2 = kDim * kDim;

// Angular rates in rad/us.
double angular_v(const SystemParams& p) { return kTwoPi * p.v_mhz; }
double angular_delta(const SystemParams& p) { return kTwoPi * p.delta_khz * 1e-3; }
double angular_gamma(double hz) { return kTwoPi * hz * 1e-6; }

// Embed a single-qutrit operator on the control (slot 0) or target (slot 1).
ComplexMatrix embed(const ComplexMatrix& op, int slot) {
  const ComplexMatrix eye = ComplexMatrix::identity(3);
  return slot == 0 ? linalg::kron(op, eye) : linalg::kron(eye, op);
}

ComplexMatrix qutrit_op(int row, int col) { return ComplexMatrix::unit(3, row, col); }

}  // namespace

namespace basis {
const char* label(int i) {
  static const char* names[kDim] = {"00", "01", "0e", "10", "11", "1e", "e0", "e1", "ee"};
  return names[i];
}
}  // namespace basis

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  DensityMatrix rho;
  rho.mat = linalg::outer(psi, psi);
  return rho;
}

double DensityMatrix::trace_real() const { return mat.trace().real(); }

double DensityMatrix::purity() const {
  double p = 0.0;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) p += (mat(i, j) * mat(j, i)).real();
  return p;
}

double DensityMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (int i = 0; i < kDim; ++i)
    for (int j = i; j < kDim; ++j)
      worst = std::max(worst, std::abs(mat(i, j) - std::conj(mat(j, i))));
  return worst;
}

double DensityMatrix::min_eigenvalue() const {
  ComplexMatrix sym = mat;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) sym(i, j) = 0.5 * (mat(i, j) + std::conj(mat(j, i)));
  return linalg::hermitian_eig(sym).eigenvalues.front();
}

ComplexMatrix hamiltonian_at(double t, const SystemParams& params,
                             const pulse::SegmentSchedule& schedule,
                             const pulse::PchCoefficients& coeffs) {
  const pulse::FieldSample f = pulse::fields_at(schedule, coeffs, t);
  ComplexMatrix h(kDim, kDim);

  // Drive couplings, raising entries <e|H|g> carry the field value. The |ee>
  // row/column is kept in the full model and dropped under the RWA.
  const bool full = params.model == Model::full;
  auto add = [&](int row, int col, cxd v) {
    h(row, col) += v;
    h(col, row) += std::conj(v);
  };
  for (int tgt = 0; tgt < 3; ++tgt) {
    const int row = basis::index(2, tgt);
    if (full || row != basis::index(2, 2)) add(row, basis::index(0, tgt), f.omega_c);
  }
  for (int ctl = 0; ctl < 3; ++ctl) {
    const int row = basis::index(ctl, 2);
    if (full || row != basis::index(2, 2)) {
      add(row, basis::index(ctl, 0), f.omega_0t);
      add(row, basis::index(ctl, 1), f.omega_1t);
    }
  }

  const double delta = angular_delta(params);
  for (int i : {basis::index(0, 2), basis::index(1, 2), basis::index(2, 0), basis::index(2, 1)}) {
    h(i, i) += delta;
  }
  if (full) h(kDim - 1, kDim - 1) += angular_v(params);
  if (params.ee_detuning) h(kDim - 1, kDim - 1) += 2.0 * delta;
  return h;
}

std::vector<ComplexMatrix> jump_operators(const SystemParams& params) {
  const ComplexMatrix decay = qutrit_op(0, 2) + qutrit_op(1, 2);
  const ComplexMatrix dephase = qutrit_op(2, 2) - qutrit_op(0, 0) - qutrit_op(1, 1);
  const ComplexMatrix relax = qutrit_op(0, 1);

  auto collective = [](const ComplexMatrix& op, double rate) {
    ComplexMatrix l = embed(op, 0) + embed(op, 1);
    return l * cxd(std::sqrt(rate), 0.0);
  };
  return {collective(decay, angular_gamma(params.gamma1_hz)),
          collective(dephase, angular_gamma(params.gamma2_hz)),
          collective(relax, angular_gamma(params.gamma3_hz))};
}

LindbladContext::LindbladContext(const SystemParams& params,
                                 const pulse::SegmentSchedule& schedule,
                                 const pulse::PchCoefficients& coeffs)
    : params_(params), schedule_(schedule), coeffs_(coeffs) {
  const bool full = params.model == Model::full;

  // Static part: detuning diagonal, blockade shift, -(i/2) sum L^dag L.
  ComplexMatrix a(kDim, kDim);
  const double delta = angular_delta(params);
  for (int i : {basis::index(0, 2), basis::index(1, 2), basis::index(2, 0), basis::index(2, 1)}) {
    a(i, i) += delta;
  }
  if (full) a(kDim - 1, kDim - 1) += angular_v(params);
  if (params.ee_detuning) a(kDim - 1, kDim - 1) += 2.0 * delta;

  ComplexMatrix g(kDim, kDim);
  for (const auto& l : jump_operators(params)) {
    if (l.max_abs() == 0.0) continue;
    g += l.adjoint() * l;

    kernels::JumpPlan plan;
    bool diagonal = true;
    for (int i = 0; i < kDim && diagonal; ++i)
      for (int j = 0; j < kDim; ++j) {
        const cxd v = l(i, j);
        if (std::abs(v.imag()) > 1e-14 * l.max_abs()) {
          throw Error("jump operators with complex entries are not supported");
        }
        if (i != j && v != cxd(0.0)) {
          diagonal = false;
          break;
        }
      }
    if (diagonal) {
      plan.diag_dup.assign(2 * kDim2, 0.0);
      for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j) {
          const double w = l(i, i).real() * l(j, j).real();
          plan.diag_dup[2 * (static_cast<std::size_t>(i) * kDim + j)] = w;
          plan.diag_dup[2 * (static_cast<std::size_t>(i) * kDim + j) + 1] = w;
        }
    } else {
      for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
          if (l(i, j) != cxd(0.0)) plan.entries.push_back({i, j, l(i, j).real()});
    }
    jump_plans_.push_back(std::move(plan));
  }
  k0_ = a - cxd(0.0, 0.5) * g;
  k0_adj_ = k0_.adjoint();

  // Per-segment drive structure at unit envelope; Hermitian by construction.
  for (const auto& seg : schedule_.segments) {
    ComplexMatrix b(kDim, kDim);
    auto add = [&](int row, int col, cxd v) {
      b(row, col) += v;
      b(col, row) += std::conj(v);
    };
    const cxd uc = std::sqrt(3.0) * std::polar(1.0, seg.phi_c);
    const cxd u0 = std::sin(seg.theta / 2.0) * std::polar(1.0, seg.phi_0t);
    const cxd u1 = -std::cos(seg.theta / 2.0) * std::polar(1.0, seg.phi_1t);
    for (int tgt = 0; tgt < 3; ++tgt) {
      const int row = basis::index(2, tgt);
      if (full || row != kDim - 1) add(row, basis::index(0, tgt), uc);
    }
    for (int ctl = 0; ctl < 3; ++ctl) {
      const int row = basis::index(ctl, 2);
      if (full || row != kDim - 1) {
        add(row, basis::index(ctl, 0), u0);
        add(row, basis::index(ctl, 1), u1);
      }
    }
    b_.push_back(b);
  }

  // Step cap: resolve the blockade phase in the full model; the RWA model has
  // no fast scale beyond the envelope.
  const double tau = params.tau_us;
  h_max_ = full ? 1.0 / (20.0 * kTwoPi * params.v_mhz) : tau / 16.0;
}

double LindbladContext::envelope(int segment, double t) const {
  const auto& seg = schedule_.segments[static_cast<std::size_t>(segment)];
  const auto& blk = coeffs_.blocks[static_cast<std::size_t>(seg.block_index)];
  // cos(k pi t/tau) for k = 1..4 by angle doubling/addition; one sincos.
  const double x = kPi * (t - seg.start) / seg.duration;
  const double c1 = std::cos(x);
  const double s1 = std::sin(x);
  const double c2 = c1 * c1 - s1 * s1;
  const double s2 = 2.0 * s1 * c1;
  const double c3 = c2 * c1 - s2 * s1;
  const double c4 = c2 * c2 - s2 * s2;
  const double pt = kPi / seg.duration;
  return 0.5 * pt +
         pt * (blk.a[0] * c1 + 2.0 * blk.a[1] * c2 + 3.0 * blk.a[2] * c3 + 4.0 * blk.a[3] * c4);
}

void LindbladContext::rhs_segment(int segment, double t, const cxd* rho, cxd* out) const {
  const double f = envelope(segment, t);
  kernels::active().lindblad_apply(kDim, k0_.data(), k0_adj_.data(),
                                   b_[static_cast<std::size_t>(segment)].data(), f,
                                   jump_plans_.data(), static_cast<int>(jump_plans_.size()),
                                   rho, out);
}

void LindbladContext::rhs(double t, const cxd* rho, cxd* out) const {
  rhs_segment(schedule_.segment_at(t), t, rho, out);
}

void LindbladContext::rhs_unitary(int segment, double t, const cxd* psi, cxd* out,
                                  int ncols) const {
  const double f = envelope(segment, t);
  const cxd* k0 = k0_.data();
  const cxd* b = b_[static_cast<std::size_t>(segment)].data();
  alignas(32) cxd kmat[kDim2];
  for (int i = 0; i < kDim2; ++i) kmat[i] = k0[i] + f * b[i];

  if (ncols == kDim) {
    alignas(32) cxd t1[kDim2];
    kernels::active().matmul(kDim, kmat, psi, t1);
    for (int i = 0; i < kDim2; ++i) out[i] = cxd(t1[i].imag(), -t1[i].real());
    return;
  }
  for (int i = 0; i < kDim; ++i) {
    for (int c = 0; c < ncols; ++c) {
      cxd s = 0.0;
      for (int j = 0; j < kDim; ++j) s += kmat[i * kDim + j] * psi[j * ncols + c];
      out[i * ncols + c] = cxd(s.imag(), -s.real());
    }
  }
}

ComplexMatrix lindblad_rhs(const DensityMatrix& rho, double t, const LindbladContext& ctx) {
  ComplexMatrix out(kDim, kDim);
  ctx.rhs(t, rho.mat.data(), out.data());
  return out;
}

// ---------------------------------------------------------------------------
// Dormand-Prince 4(5) with PI step control (the ode45 pair), FSAL layout.
// ---------------------------------------------------------------------------

namespace {

struct Dopri5Tableau {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b*: weights of the embedded error estimate.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

// One integration interval with a fixed right-hand side. `post` runs after
// each accepted step and may adjust y in place (re-symmetrization).
template <typename Rhs, typename Post>
void dopri5(int n, std::vector<cxd>& y, double t0, double t1, double rtol, double atol,
            double h_max, Rhs&& rhs, Post&& post) {
  using T = Dopri5Tableau;
  const double span = t1 - t0;
  if (span <= 0.0) return;
  if (h_max <= 0.0) h_max = span;

  const int n2 = 2 * n;
  std::vector<cxd> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);
  auto d = [](std::vector<cxd>& v) { return reinterpret_cast<double*>(v.data()); };
  double* yd = d(y);
  double* k1d = d(k1);
  double* k2d = d(k2);
  double* k3d = d(k3);
  double* k4d = d(k4);
  double* k5d = d(k5);
  double* k6d = d(k6);
  double* k7d = d(k7);
  double* ytd = d(ytmp);
  double* ynd = d(ynew);

  double t = t0;
  double h = std::min(h_max, span / 100.0);
  rhs(t, y.data(), k1.data());

  const auto& kern = kernels::active();
  static constexpr double kC2[] = {T::a21};
  static constexpr double kC3[] = {T::a31, T::a32};
  static constexpr double kC4[] = {T::a41, T::a42, T::a43};
  static constexpr double kC5[] = {T::a51, T::a52, T::a53, T::a54};
  static constexpr double kC6[] = {T::a61, T::a62, T::a63, T::a64, T::a65};
  static constexpr double kC7[] = {T::b1, T::b3, T::b4, T::b5, T::b6};
  static constexpr double kErrC[] = {T::e1, T::e3, T::e4, T::e5, T::e6, T::e7};

  constexpr double kSafe = 0.9, kBeta = 0.04, kExpo1 = 0.2 - kBeta * 0.75;
  constexpr double kFacc1 = 5.0;   // max shrink per step: 1/5
  constexpr double kFacc2 = 0.1;   // max growth per step: 10x
  double facold = 1e-4;
  bool rejected = false;

  while (t < t1) {
    if (h < 1e-14 * std::max(std::abs(t1), 1.0)) {
      throw StepSizeUnderflowError("integration step size underflow");
    }
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }

    {
      const double* s2[] = {k1d};
      kern.rk_comb(n2, ytd, yd, h, 1, kC2, s2);
      rhs(t + T::c2 * h, ytmp.data(), k2.data());
      const double* s3[] = {k1d, k2d};
      kern.rk_comb(n2, ytd, yd, h, 2, kC3, s3);
      rhs(t + T::c3 * h, ytmp.data(), k3.data());
      const double* s4[] = {k1d, k2d, k3d};
      kern.rk_comb(n2, ytd, yd, h, 3, kC4, s4);
      rhs(t + T::c4 * h, ytmp.data(), k4.data());
      const double* s5[] = {k1d, k2d, k3d, k4d};
      kern.rk_comb(n2, ytd, yd, h, 4, kC5, s5);
      rhs(t + T::c5 * h, ytmp.data(), k5.data());
      const double* s6[] = {k1d, k2d, k3d, k4d, k5d};
      kern.rk_comb(n2, ytd, yd, h, 5, kC6, s6);
      rhs(t + h, ytmp.data(), k6.data());
      const double* s7[] = {k1d, k3d, k4d, k5d, k6d};
      kern.rk_comb(n2, ynd, yd, h, 5, kC7, s7);
      rhs(t + h, ynew.data(), k7.data());
    }

    const double* se[] = {k1d, k3d, k4d, k5d, k6d, k7d};
    double err = kern.rk_error(n2, h, kErrC, se, yd, ynd, atol, rtol);
    if (!(err == err)) err = 1e10;  // NaN guard: force rejection

    const double fac11 = std::pow(err, kExpo1);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::max(kFacc2, std::min(kFacc1, fac / kSafe));
      double hnew = h / fac;
      facold = std::max(err, 1e-4);

      t = last ? t1 : t + h;
      y.swap(ynew);
      yd = d(y);
      ynd = d(ynew);
      k1.swap(k7);
      std::swap(k1d, k7d);
      post(t, y);

      if (rejected) hnew = std::min(hnew, h);
      rejected = false;
      h = std::min(hnew, h_max);
    } else {
      h = h / std::min(kFacc1, fac11 / kSafe);
      rejected = true;
    }
  }
}

void resymmetrize(std::vector<cxd>& y) {
  for (int i = 0; i < kDim; ++i) {
    for (int j = i + 1; j < kDim; ++j) {
      const cxd m = 0.5 * (y[static_cast<std::size_t>(i) * kDim + j] +
                           std::conj(y[static_cast<std::size_t>(j) * kDim + i]));
      y[static_cast<std::size_t>(i) * kDim + j] = m;
      y[static_cast<std::size_t>(j) * kDim + i] = std::conj(m);
    }
    auto& dgn = y[static_cast<std::size_t>(i) * kDim + i];
    dgn = cxd(dgn.real(), 0.0);
  }
}

// Splits [t0, t1] at segment boundaries; the envelope is only piecewise
// smooth and the error estimator should never straddle a kink.
template <typename SegRhs, typename Post>
void integrate_segments(const pulse::SegmentSchedule& schedule, int n, std::vector<cxd>& y,
                        double t0, double t1, Tolerances tol, double h_max, SegRhs&& seg_rhs,
                        Post&& post) {
  const double total = schedule.total_duration();
  const double slack = 1e-12 * std::max(total, 1.0);
  if (t0 < -slack || t1 > total + slack || t1 < t0) {
    throw OutOfRangeError("integration span outside schedule");
  }
  for (std::size_t s = 0; s < schedule.segments.size(); ++s) {
    const auto& seg = schedule.segments[s];
    const double a = std::max(t0, seg.start);
    const double b = std::min(t1, seg.start + seg.duration);
    if (b - a <= slack) continue;
    dopri5(
        n, y, a, b, tol.rel, tol.abs, h_max,
        [&](double t, const cxd* in, cxd* out) { seg_rhs(static_cast<int>(s), t, in, out); },
        post);
  }
}

void require_no_dissipation(const SystemParams& p) {
  if (p.gamma1_hz != 0.0 || p.gamma2_hz != 0.0 || p.gamma3_hz != 0.0) {
    throw DissipationPresentError("pure-state propagation requires all rates zero");
  }
}

}  // namespace

DensityMatrix integrate(const DensityMatrix& rho0, double t0, double t1,
                        const SystemParams& params, const pulse::SegmentSchedule& schedule,
                        const pulse::PchCoefficients& coeffs, Tolerances tol) {
  LindbladContext ctx(params, schedule, coeffs);
  std::vector<cxd> y(rho0.mat.data(), rho0.mat.data() + kDim2);
  integrate_segments(
      schedule, kDim2, y, t0, t1, tol, ctx.max_step(),
      [&](int seg, double t, const cxd* in, cxd* out) { ctx.rhs_segment(seg, t, in, out); },
      [](double, std::vector<cxd>& state) { resymmetrize(state); });
  DensityMatrix out;
  std::copy(y.begin(), y.end(), out.mat.data());
  return out;
}

DensityMatrix integrate_generic(const DensityMatrix& rho0, double t0, double t1,
                                const std::function<ComplexMatrix(double)>& hamiltonian,
                                const std::vector<ComplexMatrix>& jumps, Tolerances tol,
                                double h_max) {
  // Reference-path RHS built from whole matrices; used by closed-form checks,
  // not by production sweeps.
  ComplexMatrix g(kDim, kDim);
  for (const auto& l : jumps) g += l.adjoint() * l;

  auto rhs = [&](double t, const cxd* in, cxd* out) {
    ComplexMatrix rho(kDim, kDim);
    std::copy(in, in + kDim2, rho.data());
    const ComplexMatrix h = hamiltonian(t);
    ComplexMatrix acc = cxd(0.0, -1.0) * (h * rho - rho * h);
    acc -= cxd(0.5, 0.0) * (g * rho + rho * g);
    for (const auto& l : jumps) acc += l * rho * l.adjoint();
    std::copy(acc.data(), acc.data() + kDim2, out);
  };

  std::vector<cxd> y(rho0.mat.data(), rho0.mat.data() + kDim2);
  dopri5(kDim2, y, t0, t1, tol.rel, tol.abs, h_max, rhs,
         [](double, std::vector<cxd>& state) { resymmetrize(state); });
  DensityMatrix out;
  std::copy(y.begin(), y.end(), out.mat.data());
  return out;
}

StateVector propagate_pure(const StateVector& psi0, double t0, double t1,
                           const SystemParams& params, const pulse::SegmentSchedule& schedule,
                           const pulse::PchCoefficients& coeffs, Tolerances tol) {
  require_no_dissipation(params);
  if (psi0.dim() != kDim) throw DimensionMismatchError("state dimension must be 9");
  LindbladContext ctx(params, schedule, coeffs);
  std::vector<cxd> y(psi0.amplitudes);
  integrate_segments(
      schedule, kDim, y, t0, t1, tol, ctx.max_step(),
      [&](int seg, double t, const cxd* in, cxd* out) { ctx.rhs_unitary(seg, t, in, out, 1); },
      [](double, std::vector<cxd>&) {});
  StateVector out(kDim);
  out.amplitudes = std::move(y);
  return out;
}

ComplexMatrix propagate_unitary(double t0, double t1, const SystemParams& params,
                                const pulse::SegmentSchedule& schedule,
                                const pulse::PchCoefficients& coeffs, Tolerances tol) {
  require_no_dissipation(params);
  LindbladContext ctx(params, schedule, coeffs);
  const ComplexMatrix eye = ComplexMatrix::identity(kDim);
  std::vector<cxd> y(eye.data(), eye.data() + kDim2);
  integrate_segments(
      schedule, kDim2, y, t0, t1, tol, ctx.max_step(),
      [&](int seg, double t, const cxd* in, cxd* out) {
        ctx.rhs_unitary(seg, t, in, out, kDim);
      },
      [](double, std::vector<cxd>&) {});
  ComplexMatrix u(kDim, kDim);
  std::copy(y.begin(), y.end(), u.data());
  return u;
}

}  // namespace pulseforge::dynamics
