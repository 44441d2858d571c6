// Copyright 2026 The sicsim authors
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

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "sicsim/constants.hpp"

namespace sicsim {

using cxd = std::complex<double>;

/// Dense row-major complex matrix. Everything in this project is at most
/// 36x36, so there is no sparse path and no blocking; operations are plain
/// loops that the compiler vectorizes well enough at these sizes.
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}
    CMatrix(std::initializer_list<std::initializer_list<cxd>> rows);

    static CMatrix identity(std::size_t n);
    static CMatrix zero(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }
    static CMatrix diag(const std::vector<cxd>& d);
    /// Rank-one |v><v| from a column vector.
    static CMatrix outer(const std::vector<cxd>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cxd& operator()(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
    const cxd& operator()(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

    std::vector<cxd>& entries() { return e_; }
    const std::vector<cxd>& entries() const { return e_; }

    CMatrix dagger() const;
    CMatrix transpose() const;
    CMatrix conjugate() const;

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cxd s);
    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, cxd s) { return a *= s; }
    friend CMatrix operator*(cxd s, CMatrix a) { return a *= s; }
    CMatrix operator*(const CMatrix& b) const;

    double max_abs() const;
    double frob_norm() const;
    /// Largest |A - A^dag| entry; 0 for exactly Hermitian input.
    double hermiticity_error() const;
    bool all_finite() const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cxd> e_;
};

/// A square matrix that has been symmetrized to (A + A^dag)/2 on
/// construction. Rejects inputs whose asymmetry exceeds 1e-6, which always
/// indicates a logic error upstream rather than numerical noise.
class Hermitian {
  public:
    Hermitian() = default;
    explicit Hermitian(const CMatrix& m);

    std::size_t dim() const { return m_.rows(); }
    const CMatrix& matrix() const { return m_; }

  private:
    CMatrix m_;
};

struct EigResult {
    std::vector<double> eigenvalues;  // ascending
    CMatrix eigenvectors;             // columns; eigenvectors.col(i) <-> eigenvalues[i]
};

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);
cxd trace(const CMatrix& a);
/// tr(a^dag b).
cxd frob_inner(const CMatrix& a, const CMatrix& b);
/// Real part of tr(a b); exact for Hermitian pairs where the trace is real.
double real_inner(const CMatrix& a, const CMatrix& b);

/// Trace out all subsystems not listed in `keep`. `dims` are the tensor
/// factor dimensions in order; `keep` is a strictly increasing index list.
CMatrix partial_trace(const CMatrix& m, const std::vector<std::size_t>& dims,
                      const std::vector<std::size_t>& keep);

/// Hermitian eigendecomposition by Householder tridiagonalization followed
/// by implicit-shift QL sweeps; throws after 30 sweeps for any single
/// eigenvalue, which only happens for numerically pathological input.
EigResult eig_hermitian(const Hermitian& h);

/// Nearest (Frobenius) positive semidefinite matrix: clip negative
/// eigenvalues to zero.
Hermitian psd_project(const Hermitian& h);

/// Principal square root of a PSD matrix. Eigenvalues in
/// [-sqrt_reject_tol, 0) are treated as zero; anything more negative throws.
Hermitian sqrt_psd(const Hermitian& h);

/// Inverse principal square root; eigenvalues are floored at `floor_eig`
/// before inversion to keep MLE-style iterations finite.
Hermitian inv_sqrt_psd(const Hermitian& h, double floor_eig = 1e-14);

/// Lower-triangular L with L L^dag = A; throws if a pivot drops below
/// `min_pivot` times the largest diagonal entry.
CMatrix cholesky(const CMatrix& a, double min_pivot = 1e-14);

/// Solve L x = b (resp. L^dag x = b) for lower-triangular L.
std::vector<cxd> solve_lower(const CMatrix& L, const std::vector<cxd>& b);
std::vector<cxd> solve_lower_adjoint(const CMatrix& L, const std::vector<cxd>& b);

/// Smallest eigenvalue of a Hermitian matrix (convenience wrapper).
double min_eigenvalue(const Hermitian& h);

}  // namespace sicsim
