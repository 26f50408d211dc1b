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

#ifndef PULSEFORGE_LINALG_HPP
#define PULSEFORGE_LINALG_HPP

#include <complex>
#include <vector>

#include "pulseforge/errors.hpp"

namespace pulseforge::linalg {

using cxd = std::complex<double>;

// Dense row-major complex matrix. Everything in this project lives in
// dimension <= 16 (two qutrits: 9), so there is no sparse path and no
// blocking; operations are plain value semantics.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

  static ComplexMatrix identity(int n);
  static ComplexMatrix zero(int n) { return ComplexMatrix(n, n); }
  // Single basis transition |row><col| in dimension n.
  static ComplexMatrix unit(int n, int row, int col);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cxd& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const cxd& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }
  cxd* data() { return data_.data(); }
  const cxd* data() const { return data_.data(); }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cxd s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cxd s) { return a *= s; }
  friend ComplexMatrix operator*(cxd s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  ComplexMatrix adjoint() const;
  cxd trace() const;
  double max_abs() const;

  // max_ij |M_ij - conj(M_ji)| <= tol * max|M|
  bool is_hermitian(double rel_tol = 1e-12) const;
  // max-norm of U^dag U - I
  double unitarity_defect() const;

  double max_abs_diff(const ComplexMatrix& o) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cxd> data_;
};

// Normalized-when-flagged complex amplitude vector.
struct StateVector {
  std::vector<cxd> amplitudes;

  StateVector() = default;
  explicit StateVector(int dim) : amplitudes(static_cast<std::size_t>(dim)) {}
  static StateVector basis(int dim, int k);

  int dim() const { return static_cast<int>(amplitudes.size()); }
  cxd& operator[](int i) { return amplitudes[static_cast<std::size_t>(i)]; }
  const cxd& operator[](int i) const { return amplitudes[static_cast<std::size_t>(i)]; }

  double norm() const;
  StateVector& normalize();
  bool is_normalized(double tol = 1e-10) const;
};

cxd inner(const StateVector& a, const StateVector& b);           // <a|b>
ComplexMatrix outer(const StateVector& a, const StateVector& b);  // |a><b|
StateVector apply(const ComplexMatrix& m, const StateVector& v);
// <a| M |a>, real part (M Hermitian in all uses).
double expectation(const ComplexMatrix& m, const StateVector& a);

// Tensor product: entry ((i*b.rows+k), (j*b.cols+l)) = a(i,j) * b(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, orthonormal
};

// Cyclic Jacobi on a Hermitian matrix. Throws NotHermitianError when the
// input fails the 1e-12 relative Hermiticity check.
EigResult hermitian_eig(const ComplexMatrix& m);

// exp(-i * scale * h) for Hermitian h, via the eigendecomposition.
ComplexMatrix expm_unitary(const ComplexMatrix& h, double scale);

}  // namespace pulseforge::linalg

#endif  // PULSEFORGE_LINALG_HPP
