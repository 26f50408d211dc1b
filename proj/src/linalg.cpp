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

#include "pulseforge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pulseforge/kernels.hpp"

namespace pulseforge::linalg {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatchError("matrix shapes differ");
  }
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::unit(int n, int row, int col) {
  ComplexMatrix m(n, n);
  m(row, col) = 1.0;
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cxd s) {
  for (auto& v : data_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatchError("matmul shape mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  if (a.square() && b.square()) {
    kernels::active().matmul(a.rows(), a.data(), b.data(), c.data());
    return c;
  }
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const cxd av = a(i, k);
      for (int j = 0; j < b.cols(); ++j) c(i, j) += av * b(k, j);
    }
  }
  return c;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

cxd ComplexMatrix::trace() const {
  cxd t = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool ComplexMatrix::is_hermitian(double rel_tol) const {
  if (!square()) return false;
  const double scale = max_abs();
  if (scale == 0.0) return true;
  double worst = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = i; j < cols_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return worst <= rel_tol * scale;
}

double ComplexMatrix::unitarity_defect() const {
  ComplexMatrix p = adjoint() * (*this);
  double worst = 0.0;
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j)
      worst = std::max(worst, std::abs(p(i, j) - (i == j ? cxd(1.0) : cxd(0.0))));
  return worst;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& o) const {
  require_same_shape(*this, o);
  double worst = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i)
    worst = std::max(worst, std::abs(data_[i] - o.data_[i]));
  return worst;
}

StateVector StateVector::basis(int dim, int k) {
  StateVector v(dim);
  v[k] = 1.0;
  return v;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

StateVector& StateVector::normalize() {
  const double n = norm();
  if (n > 0.0)
    for (auto& a : amplitudes) a /= n;
  return *this;
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

cxd inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatchError("inner product dim mismatch");
  cxd s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

ComplexMatrix outer(const StateVector& a, const StateVector& b) {
  ComplexMatrix m(a.dim(), b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) m(i, j) = a[i] * std::conj(b[j]);
  return m;
}

StateVector apply(const ComplexMatrix& m, const StateVector& v) {
  if (m.cols() != v.dim()) throw DimensionMismatchError("apply dim mismatch");
  StateVector out(m.rows());
  for (int i = 0; i < m.rows(); ++i) {
    cxd s = 0.0;
    for (int j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double expectation(const ComplexMatrix& m, const StateVector& a) {
  return inner(a, apply(m, a)).real();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const cxd av = a(i, j);
      if (av == cxd(0.0)) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = av * b(k, l);
    }
  return c;
}

EigResult hermitian_eig(const ComplexMatrix& m) {
  if (!m.square()) throw DimensionMismatchError("eigendecomposition needs a square matrix");
  if (!m.is_hermitian()) throw NotHermitianError("matrix is not Hermitian within 1e-12");

  const int n = m.rows();
  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::identity(n);

  // Cyclic Jacobi sweeps. Each rotation zeroes a(p,q) exactly; convergence
  // for Hermitian input is quadratic once the off-diagonal mass is small.
  const double frob = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += std::norm(a(i, j));
    return std::sqrt(s);
  }();
  const double stop = 1e-15 * std::max(frob, 1e-300);

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += 2.0 * std::norm(a(p, q));
    if (std::sqrt(off) <= stop) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cxd apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= stop / (n * n)) continue;

        // Phase that makes the 2x2 block real, then a symmetric Givens angle.
        const cxd phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Rotation columns: |p'> = c|p> - s*conj(phase)|q>, |q'> = s*phase|p> + c|q>.
        const cxd sp = s * phase;
        const cxd spc = s * std::conj(phase);
        for (int i = 0; i < n; ++i) {
          const cxd aip = a(i, p);
          const cxd aiq = a(i, q);
          a(i, p) = c * aip - spc * aiq;
          a(i, q) = sp * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {
          const cxd apj = a(p, j);
          const cxd aqj = a(q, j);
          a(p, j) = c * apj - sp * aqj;
          a(q, j) = spc * apj + c * aqj;
        }
        for (int i = 0; i < n; ++i) {
          const cxd vip = v(i, p);
          const cxd viq = v(i, q);
          v(i, p) = c * vip - spc * viq;
          v(i, q) = sp * vip + c * viq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  EigResult res;
  res.eigenvalues.resize(static_cast<std::size_t>(n));
  res.eigenvectors = ComplexMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    res.eigenvalues[static_cast<std::size_t>(j)] = a(order[static_cast<std::size_t>(j)],
                                                     order[static_cast<std::size_t>(j)])
                                                       .real();
    for (int i = 0; i < n; ++i) res.eigenvectors(i, j) = v(i, order[static_cast<std::size_t>(j)]);
  }
  return res;
}

ComplexMatrix expm_unitary(const ComplexMatrix& h, double scale) {
  const EigResult eig = hermitian_eig(h);
  const int n = h.rows();
  ComplexMatrix u(n, n);
  // U = V exp(-i s Lambda) V^dag
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cxd s = 0.0;
      for (int k = 0; k < n; ++k) {
        const cxd ph = std::polar(1.0, -scale * eig.eigenvalues[static_cast<std::size_t>(k)]);
        s += eig.eigenvectors(i, k) * ph * std::conj(eig.eigenvectors(j, k));
      }
      u(i, j) = s;
    }
  }
  return u;
}

}  // namespace pulseforge::linalg
