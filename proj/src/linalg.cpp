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

#include "sicsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sicsim {

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cxd>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    e_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw std::invalid_argument("CMatrix: ragged initializer");
        }
        e_.insert(e_.end(), r.begin(), r.end());
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

CMatrix CMatrix::diag(const std::vector<cxd>& d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        m(i, i) = d[i];
    }
    return m;
}

CMatrix CMatrix::outer(const std::vector<cxd>& v) {
    CMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            m(i, j) = v[i] * std::conj(v[j]);
        }
    }
    return m;
}

CMatrix CMatrix::dagger() const {
    CMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            m(c, r) = std::conj((*this)(r, c));
        }
    }
    return m;
}

CMatrix CMatrix::transpose() const {
    CMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            m(c, r) = (*this)(r, c);
        }
    }
    return m;
}

CMatrix CMatrix::conjugate() const {
    CMatrix m = *this;
    for (auto& z : m.e_) {
        z = std::conj(z);
    }
    return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
        throw std::invalid_argument("CMatrix add: shape mismatch");
    }
    for (std::size_t i = 0; i < e_.size(); ++i) {
        e_[i] += o.e_[i];
    }
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
        throw std::invalid_argument("CMatrix sub: shape mismatch");
    }
    for (std::size_t i = 0; i < e_.size(); ++i) {
        e_[i] -= o.e_[i];
    }
    return *this;
}

CMatrix& CMatrix::operator*=(cxd s) {
    for (auto& z : e_) {
        z *= s;
    }
    return *this;
}

CMatrix CMatrix::operator*(const CMatrix& b) const { return matmul(*this, b); }

double CMatrix::max_abs() const {
    double m = 0;
    for (const auto& z : e_) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

double CMatrix::frob_norm() const {
    double s = 0;
    for (const auto& z : e_) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

double CMatrix::hermiticity_error() const {
    if (!is_square()) {
        return std::numeric_limits<double>::infinity();
    }
    double m = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = r; c < cols_; ++c) {
            m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        }
    }
    return m;
}

bool CMatrix::all_finite() const {
    for (const auto& z : e_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            return false;
        }
    }
    return true;
}

Hermitian::Hermitian(const CMatrix& m) {
    if (!m.is_square()) {
        throw std::invalid_argument("Hermitian: matrix must be square");
    }
    if (!m.all_finite()) {
        throw std::invalid_argument("Hermitian: non-finite entries");
    }
    double asym = m.hermiticity_error();
    if (asym > 1e-6) {
        throw std::invalid_argument("Hermitian: asymmetry " + std::to_string(asym) +
                                    " too large to be numerical noise");
    }
    m_ = CMatrix(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        m_(r, r) = m(r, r).real();
        for (std::size_t c = r + 1; c < m.cols(); ++c) {
            cxd v = 0.5 * (m(r, c) + std::conj(m(c, r)));
            m_(r, c) = v;
            m_(c, r) = std::conj(v);
        }
    }
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: inner dimensions disagree (" +
                                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                    ")");
    }
    CMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            cxd arc = a(r, k);
            if (arc == 0.0) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols(); ++c) {
                out(r, c) += arc * b(k, c);
            }
        }
    }
    return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            cxd v = a(ar, ac);
            if (v == 0.0) {
                continue;
            }
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = v * b(br, bc);
                }
            }
        }
    }
    return out;
}

cxd trace(const CMatrix& a) {
    if (!a.is_square()) {
        throw std::invalid_argument("trace: matrix must be square");
    }
    cxd t = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        t += a(i, i);
    }
    return t;
}

cxd frob_inner(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("frob_inner: shape mismatch");
    }
    cxd s = 0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
        s += std::conj(a.entries()[i]) * b.entries()[i];
    }
    return s;
}

double real_inner(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.cols() || a.cols() != b.rows()) {
        throw std::invalid_argument("real_inner: shape mismatch");
    }
    // Re tr(a b) = Re sum_{rc} a(r,c) b(c,r)
    double s = 0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            s += (a(r, c) * b(c, r)).real();
        }
    }
    return s;
}

CMatrix partial_trace(const CMatrix& m, const std::vector<std::size_t>& dims,
                      const std::vector<std::size_t>& keep) {
    std::size_t total = 1;
    for (auto d : dims) {
        total *= d;
    }
    if (m.rows() != total || m.cols() != total) {
        throw std::invalid_argument("partial_trace: dims do not match matrix size");
    }
    std::size_t kdim = 1;
    for (auto k : keep) {
        if (k >= dims.size()) {
            throw std::invalid_argument("partial_trace: keep index out of range");
        }
        kdim *= dims[k];
    }
    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) {
        kept[k] = true;
    }

    auto unpack = [&](std::size_t flat, std::vector<std::size_t>& idx) {
        for (std::size_t s = dims.size(); s-- > 0;) {
            idx[s] = flat % dims[s];
            flat /= dims[s];
        }
    };
    auto pack_kept = [&](const std::vector<std::size_t>& idx) {
        std::size_t flat = 0;
        for (std::size_t s = 0; s < dims.size(); ++s) {
            if (kept[s]) {
                flat = flat * dims[s] + idx[s];
            }
        }
        return flat;
    };

    CMatrix out(kdim, kdim);
    std::vector<std::size_t> ri(dims.size()), ci(dims.size());
    for (std::size_t r = 0; r < total; ++r) {
        unpack(r, ri);
        for (std::size_t c = 0; c < total; ++c) {
            unpack(c, ci);
            bool diag_on_traced = true;
            for (std::size_t s = 0; s < dims.size(); ++s) {
                if (!kept[s] && ri[s] != ci[s]) {
                    diag_on_traced = false;
                    break;
                }
            }
            if (diag_on_traced) {
                out(pack_kept(ri), pack_kept(ci)) += m(r, c);
            }
        }
    }
    return out;
}

namespace {

// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
// form. On return d holds the diagonal, e the (real, nonnegative) subdiagonal,
// and q the accumulated unitary with q^dag A q tridiagonal.
void tridiagonalize(const CMatrix& a_in, std::vector<double>& d, std::vector<double>& e,
                    CMatrix& q) {
    const std::size_t n = a_in.rows();
    CMatrix a = a_in;
    q = CMatrix::identity(n);
    std::vector<cxd> v(n), p(n), w(n);

    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm2 = 0;
        for (std::size_t i = k + 1; i < n; ++i) {
            xnorm2 += std::norm(a(i, k));
        }
        double xnorm = std::sqrt(xnorm2);
        if (xnorm < 1e-300) {
            continue;
        }
        cxd alpha = a(k + 1, k);
        cxd phase = std::abs(alpha) > 0 ? alpha / std::abs(alpha) : cxd(1, 0);

        double vnorm2 = 0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = a(i, k);
        }
        v[k + 1] += phase * xnorm;
        for (std::size_t i = k + 1; i < n; ++i) {
            vnorm2 += std::norm(v[i]);
        }
        if (vnorm2 < 1e-300) {
            continue;
        }
        double tau = 2.0 / vnorm2;

        // Hermitian rank-2 update of the trailing block: A -= v w^dag + w v^dag
        // with p = tau A v and w = p - (tau/2)(v^dag p) v.
        cxd vp = 0;
        for (std::size_t i = k + 1; i < n; ++i) {
            cxd s = 0;
            for (std::size_t j = k + 1; j < n; ++j) {
                s += a(i, j) * v[j];
            }
            p[i] = tau * s;
            vp += std::conj(v[i]) * p[i];
        }
        cxd kk = 0.5 * tau * vp;
        for (std::size_t i = k + 1; i < n; ++i) {
            w[i] = p[i] - kk * v[i];
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) -= v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]);
            }
        }
        a(k + 1, k) = -phase * xnorm;
        a(k, k + 1) = std::conj(a(k + 1, k));
        for (std::size_t i = k + 2; i < n; ++i) {
            a(i, k) = 0;
            a(k, i) = 0;
        }

        // q <- q (I - tau v v^dag), restricted to columns k+1..n-1.
        for (std::size_t r = 0; r < n; ++r) {
            cxd qv = 0;
            for (std::size_t c = k + 1; c < n; ++c) {
                qv += q(r, c) * v[c];
            }
            qv *= tau;
            for (std::size_t c = k + 1; c < n; ++c) {
                q(r, c) -= qv * std::conj(v[c]);
            }
        }
    }

    d.assign(n, 0.0);
    e.assign(n > 0 ? n - 1 : 0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = a(i, i).real();
    }
    // Diagonal phase similarity making the subdiagonal real nonnegative,
    // folded into the accumulated q.
    cxd ph = 1.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        cxd sd = a(k + 1, k);
        double m = std::abs(sd);
        e[k] = m;
        ph = m > 0 ? ph * (sd / m) : ph;
        for (std::size_t r = 0; r < n; ++r) {
            q(r, k + 1) *= ph;
        }
    }
}

// Implicit-shift QL on a real symmetric tridiagonal (d, e), rotations
// accumulated into the complex columns of q. Classic EISPACK tql2 scheme.
void tql2(std::vector<double>& d, std::vector<double>& e, CMatrix& q) {
    const std::size_t n = d.size();
    if (n <= 1) {
        return;
    }
    e.push_back(0.0);
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-16 * dd) {
                    break;
                }
            }
            if (m != l) {
                if (iter++ == 30) {
                    throw std::runtime_error(
                        "eig_hermitian: QL sweep did not converge in 30 iterations");
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (std::size_t row = 0; row < q.rows(); ++row) {
                        cxd qf = q(row, i + 1);
                        q(row, i + 1) = s * q(row, i) + c * qf;
                        q(row, i) = c * q(row, i) - s * qf;
                    }
                }
                if (r == 0.0 && m - l > 1) {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    e.pop_back();
}

}  // namespace

EigResult eig_hermitian(const Hermitian& h) {
    const std::size_t n = h.dim();
    EigResult out;
    if (n == 0) {
        out.eigenvectors = CMatrix(0, 0);
        return out;
    }
    std::vector<double> d, e;
    CMatrix q;
    tridiagonalize(h.matrix(), d, e, q);
    tql2(d, e, q);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    out.eigenvalues.resize(n);
    out.eigenvectors = CMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = d[order[j]];
        for (std::size_t r = 0; r < n; ++r) {
            out.eigenvectors(r, j) = q(r, order[j]);
        }
    }
    return out;
}

namespace {

Hermitian apply_spectral(const Hermitian& h, double (*f)(double)) {
    EigResult eg = eig_hermitian(h);
    const std::size_t n = h.dim();
    CMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double fk = f(eg.eigenvalues[k]);
        if (fk == 0.0) {
            continue;
        }
        for (std::size_t r = 0; r < n; ++r) {
            cxd vr = eg.eigenvectors(r, k) * fk;
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += vr * std::conj(eg.eigenvectors(c, k));
            }
        }
    }
    return Hermitian(out);
}

}  // namespace

Hermitian psd_project(const Hermitian& h) {
    return apply_spectral(h, [](double x) { return x > 0 ? x : 0.0; });
}

Hermitian sqrt_psd(const Hermitian& h) {
    EigResult eg = eig_hermitian(h);
    if (!eg.eigenvalues.empty() && eg.eigenvalues.front() < -kTol.sqrt_reject) {
        throw std::invalid_argument("sqrt_psd: input has eigenvalue " +
                                    std::to_string(eg.eigenvalues.front()) +
                                    " below the PSD rejection threshold");
    }
    const std::size_t n = h.dim();
    CMatrix out(n, n);
    // Eigenvalues at roundoff scale are true zeros of rank-deficient input;
    // without the cutoff their square roots would inflate to ~1e-8.
    double cutoff = std::max(eg.eigenvalues.back(), 0.0) * 1e-13;
    for (std::size_t k = 0; k < n; ++k) {
        double lam = eg.eigenvalues[k];
        if (lam <= cutoff) {
            continue;
        }
        double s = std::sqrt(lam);
        for (std::size_t r = 0; r < n; ++r) {
            cxd vr = eg.eigenvectors(r, k) * s;
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += vr * std::conj(eg.eigenvectors(c, k));
            }
        }
    }
    return Hermitian(out);
}

Hermitian inv_sqrt_psd(const Hermitian& h, double floor_eig) {
    EigResult eg = eig_hermitian(h);
    const std::size_t n = h.dim();
    CMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double lam = std::max(eg.eigenvalues[k], floor_eig);
        double s = 1.0 / std::sqrt(lam);
        for (std::size_t r = 0; r < n; ++r) {
            cxd vr = eg.eigenvectors(r, k) * s;
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += vr * std::conj(eg.eigenvectors(c, k));
            }
        }
    }
    return Hermitian(out);
}

CMatrix cholesky(const CMatrix& a, double min_pivot) {
    if (!a.is_square()) {
        throw std::invalid_argument("cholesky: matrix must be square");
    }
    const std::size_t n = a.rows();
    double dmax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        dmax = std::max(dmax, a(i, i).real());
    }
    CMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double djj = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) {
            djj -= std::norm(l(j, k));
        }
        if (!(djj > min_pivot * std::max(dmax, 1e-300))) {
            throw std::runtime_error("cholesky: matrix not positive definite");
        }
        double ljj = std::sqrt(djj);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cxd s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l(i, k) * std::conj(l(j, k));
            }
            l(i, j) = s / ljj;
        }
    }
    return l;
}

std::vector<cxd> solve_lower(const CMatrix& L, const std::vector<cxd>& b) {
    const std::size_t n = L.rows();
    std::vector<cxd> x(b);
    for (std::size_t i = 0; i < n; ++i) {
        cxd s = x[i];
        for (std::size_t k = 0; k < i; ++k) {
            s -= L(i, k) * x[k];
        }
        x[i] = s / L(i, i);
    }
    return x;
}

std::vector<cxd> solve_lower_adjoint(const CMatrix& L, const std::vector<cxd>& b) {
    const std::size_t n = L.rows();
    std::vector<cxd> x(b);
    for (std::size_t i = n; i-- > 0;) {
        cxd s = x[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            s -= std::conj(L(k, i)) * x[k];
        }
        x[i] = s / std::conj(L(i, i));
    }
    return x;
}

double min_eigenvalue(const Hermitian& h) {
    return eig_hermitian(h).eigenvalues.front();
}

}  // namespace sicsim
