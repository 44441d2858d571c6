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

#include "sicsim/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sicsim::sdp {

std::size_t Problem::add_block(const std::string& name, std::size_t dim) {
    blocks.push_back({name, dim});
    return blocks.size() - 1;
}

std::size_t Problem::add_scalar(const std::string& name) {
    scalars.push_back(name);
    return scalars.size() - 1;
}

void Problem::add_constraint(LinearTerm lhs, double rhs) {
    constraints.push_back({std::move(lhs), rhs});
}

void Problem::add_matrix_equality(
    const std::vector<std::pair<std::size_t, double>>& block_weights,
    const std::vector<std::pair<std::size_t, CMatrix>>& scalar_coeffs, const CMatrix& rhs) {
    const std::size_t d = rhs.rows();
    for (const auto& [j, w] : block_weights) {
        if (j >= blocks.size() || blocks[j].dim != d) {
            throw std::invalid_argument("add_matrix_equality: block/rhs dimension mismatch");
        }
        (void)w;
    }
    // Basis of real functionals on Hermitian matrices: diagonal entries, then
    // real and imaginary parts of each strict upper entry.
    auto emit = [&](const CMatrix& probe, double rhs_val) {
        Constraint c;
        for (const auto& [j, w] : block_weights) {
            c.lhs.block_terms.emplace_back(j, probe * cxd(w));
        }
        for (const auto& [k, mcoef] : scalar_coeffs) {
            c.lhs.scalar_terms.emplace_back(k, real_inner(probe, mcoef));
        }
        c.rhs = rhs_val;
        constraints.push_back(std::move(c));
    };
    for (std::size_t p = 0; p < d; ++p) {
        CMatrix probe(d, d);
        probe(p, p) = 1.0;
        emit(probe, rhs(p, p).real());
        for (std::size_t q = p + 1; q < d; ++q) {
            CMatrix re(d, d);
            re(p, q) = 0.5;
            re(q, p) = 0.5;
            emit(re, rhs(p, q).real());
            CMatrix im(d, d);
            im(p, q) = cxd(0, 0.5);
            im(q, p) = cxd(0, -0.5);
            emit(im, rhs(p, q).imag());
        }
    }
}

void Problem::validate() const {
    auto check_term = [&](const LinearTerm& t, const char* where) {
        for (const auto& [j, c] : t.block_terms) {
            if (j >= blocks.size()) {
                throw std::invalid_argument(std::string(where) + ": block index out of range");
            }
            if (c.rows() != blocks[j].dim || c.cols() != blocks[j].dim) {
                throw std::invalid_argument(std::string(where) + ": coefficient shape mismatch");
            }
            if (c.hermiticity_error() > 1e-9) {
                throw std::invalid_argument(std::string(where) +
                                            ": coefficient matrix is not Hermitian");
            }
            if (!c.all_finite()) {
                throw std::invalid_argument(std::string(where) + ": non-finite coefficient");
            }
        }
        for (const auto& [k, v] : t.scalar_terms) {
            if (k >= scalars.size()) {
                throw std::invalid_argument(std::string(where) + ": scalar index out of range");
            }
            if (!std::isfinite(v)) {
                throw std::invalid_argument(std::string(where) + ": non-finite scalar coeff");
            }
        }
    };
    for (const auto& bl : blocks) {
        if (bl.dim == 0) {
            throw std::invalid_argument("Problem: zero-dimensional block");
        }
    }
    check_term(objective, "objective");
    for (const auto& c : constraints) {
        check_term(c.lhs, "constraint");
        if (!std::isfinite(c.rhs)) {
            throw std::invalid_argument("constraint: non-finite right-hand side");
        }
    }
    if (constraints.empty()) {
        throw std::invalid_argument("Problem: at least one constraint is required");
    }
}

namespace {

// ---------------------------------------------------------------------
// Dense real symmetric Cholesky used for the Schur complement.
// ---------------------------------------------------------------------

struct RealChol {
    std::size_t n = 0;
    std::vector<double> l;  // row-major, lower triangle holds the factor

    bool factor(const std::vector<double>& a, std::size_t n_in, double reg) {
        n = n_in;
        l = a;
        for (std::size_t i = 0; i < n; ++i) {
            l[i * n + i] += reg;
        }
        for (std::size_t j = 0; j < n; ++j) {
            double d = l[j * n + j];
            const double* lj = l.data() + j * n;
            for (std::size_t k = 0; k < j; ++k) {
                d -= lj[k] * lj[k];
            }
            if (!(d > 0)) {
                return false;
            }
            double inv = 1.0 / std::sqrt(d);
            l[j * n + j] = std::sqrt(d);
            for (std::size_t i = j + 1; i < n; ++i) {
                double s = l[i * n + j];
                const double* li = l.data() + i * n;
                for (std::size_t k = 0; k < j; ++k) {
                    s -= li[k] * lj[k];
                }
                l[i * n + j] = s * inv;
            }
        }
        return true;
    }

    std::vector<double> solve(std::vector<double> x) const {
        for (std::size_t i = 0; i < n; ++i) {
            double s = x[i];
            const double* li = l.data() + i * n;
            for (std::size_t k = 0; k < i; ++k) {
                s -= li[k] * x[k];
            }
            x[i] = s / li[i];
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x[i];
            for (std::size_t k = i + 1; k < n; ++k) {
                s -= l[k * n + i] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        return x;
    }
};

// ---------------------------------------------------------------------
// One-sided Jacobi SVD for the small complex factors of the NT scaling.
// ---------------------------------------------------------------------

void jacobi_svd(const CMatrix& m, CMatrix& u, std::vector<double>& sig, CMatrix& v) {
    const std::size_t n = m.rows();
    CMatrix g = m;
    v = CMatrix::identity(n);
    for (int sweep = 0; sweep < 64; ++sweep) {
        bool converged = true;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double a = 0, b = 0;
                cxd c = 0;
                for (std::size_t r = 0; r < n; ++r) {
                    a += std::norm(g(r, p));
                    b += std::norm(g(r, q));
                    c += std::conj(g(r, p)) * g(r, q);
                }
                double cm = std::abs(c);
                if (cm <= 1e-300 || cm <= 1e-16 * std::sqrt(a * b)) {
                    continue;
                }
                converged = false;
                cxd ph = c / cm;
                double zeta = (b - a) / (2.0 * cm);
                double t = std::copysign(1.0, zeta) /
                           (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double cs = 1.0 / std::sqrt(1.0 + t * t);
                double sn = cs * t;
                for (std::size_t r = 0; r < n; ++r) {
                    cxd gp = g(r, p), gq = g(r, q);
                    g(r, p) = cs * gp - sn * std::conj(ph) * gq;
                    g(r, q) = sn * ph * gp + cs * gq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    cxd vp = v(r, p), vq = v(r, q);
                    v(r, p) = cs * vp - sn * std::conj(ph) * vq;
                    v(r, q) = sn * ph * vp + cs * vq;
                }
            }
        }
        if (converged) {
            break;
        }
    }
    sig.assign(n, 0.0);
    u = CMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        double s = 0;
        for (std::size_t r = 0; r < n; ++r) {
            s += std::norm(g(r, c));
        }
        s = std::sqrt(s);
        sig[c] = s;
        if (s < 1e-300) {
            throw std::runtime_error("sdp: singular factor in NT scaling");
        }
        for (std::size_t r = 0; r < n; ++r) {
            u(r, c) = g(r, c) / s;
        }
    }
}

// ---------------------------------------------------------------------
// Nesterov-Todd scaling of one PSD block.
// ---------------------------------------------------------------------

struct Scaling {
    CMatrix r;     // scaled coordinates: R^-1 X R^-dag = R^dag Z R = diag(lam)
    CMatrix rinv;  // explicit inverse, assembled from the same factors
    CMatrix h;     // R R^dag, the sandwich operator of the Newton system
    std::vector<double> lam;
};

Scaling nt_scaling(const CMatrix& x, const CMatrix& z) {
    CMatrix l1 = cholesky(x);
    CMatrix l2 = cholesky(z);
    CMatrix m = l2.dagger() * l1;
    CMatrix u, v;
    std::vector<double> sig;
    jacobi_svd(m, u, sig, v);

    const std::size_t n = x.rows();
    Scaling sc;
    sc.lam = sig;
    CMatrix sinv_half(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        sinv_half(i, i) = 1.0 / std::sqrt(sig[i]);
    }
    sc.r = l1 * v * sinv_half;
    sc.rinv = sinv_half * u.dagger() * l2.dagger();
    sc.h = sc.r * sc.r.dagger();
    return sc;
}

CMatrix hermitize(const CMatrix& m) {
    CMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out(r, r) = m(r, r).real();
        for (std::size_t c = r + 1; c < m.cols(); ++c) {
            cxd v = 0.5 * (m(r, c) + std::conj(m(c, r)));
            out(r, c) = v;
            out(c, r) = std::conj(v);
        }
    }
    return out;
}

struct RowRef {
    std::size_t row;
    CMatrix coeff;
};

struct Direction {
    std::vector<double> dy, du;
    double dtau = 0, dkappa = 0;
    std::vector<CMatrix> dx, dz;
};

double min_eig_of(const CMatrix& m) { return eig_hermitian(Hermitian(m)).eigenvalues.front(); }

}  // namespace

Solution solve(const Problem& prob, const SolveOptions& opts) {
    prob.validate();
    if (opts.tol < 1e-10) {
        throw std::invalid_argument("sdp::solve: tolerance below 1e-10 is not supported");
    }

    const std::size_t nblk = prob.blocks.size();
    const std::size_t m = prob.constraints.size();
    const std::size_t f = prob.scalars.size();

    // Internal minimization form: c_min = -objective.
    std::vector<CMatrix> cmin(nblk);
    for (std::size_t j = 0; j < nblk; ++j) {
        cmin[j] = CMatrix::zero(prob.blocks[j].dim, prob.blocks[j].dim);
    }
    std::vector<double> cf(f, 0.0);
    for (const auto& [j, c] : prob.objective.block_terms) {
        cmin[j] -= c;
    }
    for (const auto& [k, v] : prob.objective.scalar_terms) {
        cf[k] -= v;
    }

    std::vector<std::vector<RowRef>> rows(nblk);
    std::vector<double> b(m, 0.0);
    std::vector<double> bmat(m * f, 0.0);  // free-variable columns of A
    for (std::size_t i = 0; i < m; ++i) {
        const auto& con = prob.constraints[i];
        b[i] = con.rhs;
        for (const auto& [j, c] : con.lhs.block_terms) {
            rows[j].push_back({i, hermitize(c)});
        }
        for (const auto& [k, v] : con.lhs.scalar_terms) {
            bmat[i * f + k] += v;
        }
    }

    double norm_b = 0, norm_c = 0;
    for (double v : b) {
        norm_b = std::max(norm_b, std::abs(v));
    }
    for (std::size_t j = 0; j < nblk; ++j) {
        norm_c = std::max(norm_c, cmin[j].max_abs());
    }
    for (double v : cf) {
        norm_c = std::max(norm_c, std::abs(v));
    }

    // Homogeneous embedding state.
    std::vector<CMatrix> x(nblk), z(nblk);
    double nu = 0;
    for (std::size_t j = 0; j < nblk; ++j) {
        x[j] = CMatrix::identity(prob.blocks[j].dim);
        z[j] = CMatrix::identity(prob.blocks[j].dim);
        nu += static_cast<double>(prob.blocks[j].dim);
    }
    std::vector<double> y(m, 0.0), u(f, 0.0);
    double tau = 1.0, kappa = 1.0;

    Solution sol;
    sol.detail = "max iterations reached";

    std::size_t iter = 0;
    int stalls = 0;
    for (; iter < opts.max_iterations; ++iter) {
        // ---- residuals ----
        std::vector<double> ax(m, 0.0);
        for (std::size_t j = 0; j < nblk; ++j) {
            for (const auto& rr : rows[j]) {
                ax[rr.row] += real_inner(rr.coeff, x[j]);
            }
        }
        for (std::size_t i = 0; i < m && f > 0; ++i) {
            double s = 0;
            for (std::size_t k = 0; k < f; ++k) {
                s += bmat[i * f + k] * u[k];
            }
            ax[i] += s;
        }
        std::vector<double> rp(m);
        double rp_max = 0;
        for (std::size_t i = 0; i < m; ++i) {
            rp[i] = ax[i] - b[i] * tau;
            rp_max = std::max(rp_max, std::abs(rp[i]));
        }

        std::vector<CMatrix> rd(nblk);
        double rd_max = 0;
        for (std::size_t j = 0; j < nblk; ++j) {
            CMatrix acc = z[j] - cmin[j] * cxd(tau);
            for (const auto& rr : rows[j]) {
                acc += rr.coeff * cxd(y[rr.row]);
            }
            rd[j] = acc;
            rd_max = std::max(rd_max, acc.max_abs());
        }
        std::vector<double> rf(f, 0.0);
        for (std::size_t k = 0; k < f; ++k) {
            double s = -cf[k] * tau;
            for (std::size_t i = 0; i < m; ++i) {
                s += bmat[i * f + k] * y[i];
            }
            rf[k] = s;
            rd_max = std::max(rd_max, std::abs(s));
        }

        double cx = 0;
        for (std::size_t j = 0; j < nblk; ++j) {
            cx += real_inner(cmin[j], x[j]);
        }
        for (std::size_t k = 0; k < f; ++k) {
            cx += cf[k] * u[k];
        }
        double by = 0;
        for (std::size_t i = 0; i < m; ++i) {
            by += b[i] * y[i];
        }
        double rg = cx - by + kappa;

        double xz = 0;
        for (std::size_t j = 0; j < nblk; ++j) {
            xz += real_inner(x[j], z[j]);
        }
        double mu = (xz + tau * kappa) / (nu + 1.0);

        double pobj_user = -cx / tau;
        double dobj_user = -by / tau;
        double pres = rp_max / (tau * (1.0 + norm_b));
        double dres = rd_max / (tau * (1.0 + norm_c));
        double gap_rel =
            std::abs(cx - by) / (tau * (1.0 + std::abs(cx / tau) + std::abs(by / tau)));

        if (opts.record_trace) {
            double comp_gap = (xz + tau * kappa) / (tau * tau);
            sol.trace.push_back({pobj_user, dobj_user, pobj_user + comp_gap, gap_rel, pres, dres,
                                 tau, kappa, mu});
        }

        if (pres <= opts.tol && dres <= opts.tol && gap_rel <= opts.tol) {
            sol.status = SolveStatus::optimal;
            sol.detail = "converged";
            sol.primal_residual = pres;
            sol.duality_gap = gap_rel;
            break;
        }

        if (tau <= 1e-9 * std::max(1.0, kappa) && mu <= 1e-10) {
            sol.status = SolveStatus::infeasible;
            if (by > 1e-12) {
                sol.detail = "primal infeasible (dual improving ray)";
            } else if (cx < -1e-12) {
                sol.detail = "dual infeasible (primal objective unbounded)";
            } else {
                sol.detail = "ill-posed: tau and kappa both vanished";
            }
            sol.primal_residual = pres;
            sol.duality_gap = gap_rel;
            break;
        }

        // ---- NT scalings, Schur complement, free-variable reduction ----
        std::vector<Scaling> sc(nblk);
        for (std::size_t j = 0; j < nblk; ++j) {
            sc[j] = nt_scaling(x[j], z[j]);
        }

        std::vector<double> schur(m * m, 0.0);
        std::vector<double> vc(m, 0.0);
        double gamma_c = 0;
        for (std::size_t j = 0; j < nblk; ++j) {
            const auto& rj = rows[j];
            CMatrix hc = sc[j].h * cmin[j] * sc[j].h;
            gamma_c += real_inner(cmin[j], hc);
            std::vector<CMatrix> g(rj.size());
            for (std::size_t a = 0; a < rj.size(); ++a) {
                g[a] = sc[j].h * rj[a].coeff * sc[j].h;
                vc[rj[a].row] += real_inner(rj[a].coeff, hc);
            }
            for (std::size_t a = 0; a < rj.size(); ++a) {
                for (std::size_t b2 = a; b2 < rj.size(); ++b2) {
                    double val = real_inner(rj[a].coeff, g[b2]);
                    std::size_t lo = std::min(rj[a].row, rj[b2].row);
                    std::size_t hi = std::max(rj[a].row, rj[b2].row);
                    schur[hi * m + lo] += val;
                }
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t k = i + 1; k < m; ++k) {
                schur[i * m + k] = schur[k * m + i];
            }
        }

        double diag_scale = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            diag_scale = std::max(diag_scale, schur[i * m + i]);
        }
        RealChol schol;
        double reg = 1e-13 * diag_scale;
        bool ok = false;
        for (int attempt = 0; attempt < 6 && !ok; ++attempt) {
            ok = schol.factor(schur, m, reg);
            reg *= 100.0;
        }
        if (!ok) {
            sol.detail = "Schur complement factorization failed";
            break;
        }

        std::vector<std::vector<double>> sinv_b(f);
        RealChol gchol;
        if (f > 0) {
            for (std::size_t k = 0; k < f; ++k) {
                std::vector<double> col(m);
                for (std::size_t i = 0; i < m; ++i) {
                    col[i] = bmat[i * f + k];
                }
                sinv_b[k] = schol.solve(std::move(col));
            }
            std::vector<double> gram(f * f, 0.0);
            for (std::size_t k = 0; k < f; ++k) {
                for (std::size_t k2 = k; k2 < f; ++k2) {
                    double s = 0;
                    for (std::size_t i = 0; i < m; ++i) {
                        s += bmat[i * f + k] * sinv_b[k2][i];
                    }
                    gram[k * f + k2] = s;
                    gram[k2 * f + k] = s;
                }
            }
            double gscale = 1.0;
            for (std::size_t k = 0; k < f; ++k) {
                gscale = std::max(gscale, gram[k * f + k]);
            }
            double greg = 1e-13 * gscale;
            bool gok = false;
            for (int attempt = 0; attempt < 6 && !gok; ++attempt) {
                gok = gchol.factor(gram, f, greg);
                greg *= 100.0;
            }
            if (!gok) {
                sol.detail = "free-variable Gram factorization failed";
                break;
            }
        }

        auto ksolve = [&](const std::vector<double>& a1, const std::vector<double>& a2,
                          std::vector<double>& dy, std::vector<double>& du) {
            std::vector<double> t = schol.solve(a1);
            if (f == 0) {
                dy = std::move(t);
                du.clear();
                return;
            }
            std::vector<double> rhs_u(f, 0.0);
            for (std::size_t k = 0; k < f; ++k) {
                double s = a2[k];
                for (std::size_t i = 0; i < m; ++i) {
                    s += bmat[i * f + k] * t[i];
                }
                rhs_u[k] = s;
            }
            du = gchol.solve(std::move(rhs_u));
            dy = std::move(t);
            for (std::size_t k = 0; k < f; ++k) {
                for (std::size_t i = 0; i < m; ++i) {
                    dy[i] -= sinv_b[k][i] * du[k];
                }
            }
        };

        std::vector<double> h1(m), h2(f);
        for (std::size_t i = 0; i < m; ++i) {
            h1[i] = b[i] + vc[i];
        }
        for (std::size_t k = 0; k < f; ++k) {
            h2[k] = -cf[k];
        }
        std::vector<double> py, pu;
        ksolve(h1, h2, py, pu);
        double denom = gamma_c + kappa / tau;
        for (std::size_t i = 0; i < m; ++i) {
            denom += (b[i] - vc[i]) * py[i];
        }
        for (std::size_t k = 0; k < f; ++k) {
            denom -= cf[k] * pu[k];
        }
        if (!(denom > 1e-300)) {
            sol.detail = "degenerate Newton system (nonpositive tau pivot)";
            break;
        }

        auto direction = [&](double res_scale, const std::vector<CMatrix>& e, double dt,
                             Direction& dir) {
            std::vector<CMatrix> rer(nblk), hr2h(nblk);
            for (std::size_t j = 0; j < nblk; ++j) {
                rer[j] = sc[j].r * e[j] * sc[j].r.dagger();
                hr2h[j] = sc[j].h * (rd[j] * cxd(res_scale)) * sc[j].h;
            }
            std::vector<double> rhs1(m);
            for (std::size_t i = 0; i < m; ++i) {
                rhs1[i] = -res_scale * rp[i];
            }
            double rhs3 = res_scale * rg + dt / tau;
            for (std::size_t j = 0; j < nblk; ++j) {
                for (const auto& rr : rows[j]) {
                    rhs1[rr.row] -= real_inner(rr.coeff, rer[j]) + real_inner(rr.coeff, hr2h[j]);
                }
                rhs3 += real_inner(cmin[j], rer[j]) + real_inner(cmin[j], hr2h[j]);
            }
            std::vector<double> rhs2(f);
            for (std::size_t k = 0; k < f; ++k) {
                rhs2[k] = res_scale * rf[k];
            }
            std::vector<double> qy, qu;
            ksolve(rhs1, rhs2, qy, qu);
            double num = rhs3;
            for (std::size_t i = 0; i < m; ++i) {
                num -= (b[i] - vc[i]) * qy[i];
            }
            for (std::size_t k = 0; k < f; ++k) {
                num += cf[k] * qu[k];
            }
            dir.dtau = num / denom;
            dir.dy.assign(m, 0.0);
            for (std::size_t i = 0; i < m; ++i) {
                dir.dy[i] = qy[i] + dir.dtau * py[i];
            }
            dir.du.assign(f, 0.0);
            for (std::size_t k = 0; k < f; ++k) {
                dir.du[k] = qu[k] + dir.dtau * pu[k];
            }
            dir.dz.assign(nblk, CMatrix());
            dir.dx.assign(nblk, CMatrix());
            for (std::size_t j = 0; j < nblk; ++j) {
                CMatrix dzj = cmin[j] * cxd(dir.dtau) - rd[j] * cxd(res_scale);
                for (const auto& rr : rows[j]) {
                    dzj -= rr.coeff * cxd(dir.dy[rr.row]);
                }
                dir.dz[j] = hermitize(dzj);
                dir.dx[j] = hermitize(rer[j] - sc[j].h * dir.dz[j] * sc[j].h);
            }
            dir.dkappa = (dt - kappa * dir.dtau) / tau;
        };

        auto step_bound = [&](const Direction& dir) {
            double alpha = 1e30;
            for (std::size_t j = 0; j < nblk; ++j) {
                const std::size_t d = prob.blocks[j].dim;
                CMatrix dxs = sc[j].rinv * dir.dx[j] * sc[j].rinv.dagger();
                CMatrix dzs = sc[j].r.dagger() * dir.dz[j] * sc[j].r;
                for (std::size_t r = 0; r < d; ++r) {
                    double sr = std::sqrt(sc[j].lam[r]);
                    for (std::size_t c = 0; c < d; ++c) {
                        double s = sr * std::sqrt(sc[j].lam[c]);
                        dxs(r, c) /= s;
                        dzs(r, c) /= s;
                    }
                }
                double ex = min_eig_of(dxs);
                double ez = min_eig_of(dzs);
                if (ex < 0) {
                    alpha = std::min(alpha, -1.0 / ex);
                }
                if (ez < 0) {
                    alpha = std::min(alpha, -1.0 / ez);
                }
            }
            if (dir.dtau < 0) {
                alpha = std::min(alpha, -tau / dir.dtau);
            }
            if (dir.dkappa < 0) {
                alpha = std::min(alpha, -kappa / dir.dkappa);
            }
            return alpha;
        };

        // ---- predictor ----
        std::vector<CMatrix> e_aff(nblk);
        for (std::size_t j = 0; j < nblk; ++j) {
            const std::size_t d = prob.blocks[j].dim;
            e_aff[j] = CMatrix(d, d);
            for (std::size_t r = 0; r < d; ++r) {
                e_aff[j](r, r) = -sc[j].lam[r];
            }
        }
        Direction aff;
        direction(1.0, e_aff, -tau * kappa, aff);
        double a_aff = std::min(1.0, step_bound(aff));

        double xz_aff = 0;
        for (std::size_t j = 0; j < nblk; ++j) {
            CMatrix xn = x[j] + aff.dx[j] * cxd(a_aff);
            CMatrix zn = z[j] + aff.dz[j] * cxd(a_aff);
            xz_aff += real_inner(xn, zn);
        }
        double mu_aff =
            (xz_aff + (tau + a_aff * aff.dtau) * (kappa + a_aff * aff.dkappa)) / (nu + 1.0);
        double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

        // ---- corrector ----
        std::vector<CMatrix> e_comb(nblk);
        for (std::size_t j = 0; j < nblk; ++j) {
            const std::size_t d = prob.blocks[j].dim;
            CMatrix dxs = sc[j].rinv * aff.dx[j] * sc[j].rinv.dagger();
            CMatrix dzs = sc[j].r.dagger() * aff.dz[j] * sc[j].r;
            CMatrix cross = dxs * dzs;
            e_comb[j] = CMatrix(d, d);
            for (std::size_t r = 0; r < d; ++r) {
                for (std::size_t c = 0; c < d; ++c) {
                    cxd sym = 0.5 * (cross(r, c) + std::conj(cross(c, r)));
                    cxd target = -sym;
                    if (r == c) {
                        target += sigma * mu - sc[j].lam[r] * sc[j].lam[r];
                    }
                    e_comb[j](r, c) = 2.0 * target / (sc[j].lam[r] + sc[j].lam[c]);
                }
            }
        }
        double dt_comb = sigma * mu - tau * kappa - aff.dtau * aff.dkappa;
        Direction comb;
        direction(1.0 - sigma, e_comb, dt_comb, comb);
        double alpha = std::min(1.0, 0.99 * step_bound(comb));

        if (alpha < 1e-9) {
            if (++stalls >= 3) {
                sol.detail = "step length collapsed";
                break;
            }
        } else {
            stalls = 0;
        }

        for (std::size_t j = 0; j < nblk; ++j) {
            x[j] = hermitize(x[j] + comb.dx[j] * cxd(alpha));
            z[j] = hermitize(z[j] + comb.dz[j] * cxd(alpha));
        }
        for (std::size_t i = 0; i < m; ++i) {
            y[i] += alpha * comb.dy[i];
        }
        for (std::size_t k = 0; k < f; ++k) {
            u[k] += alpha * comb.du[k];
        }
        tau += alpha * comb.dtau;
        kappa += alpha * comb.dkappa;
    }

    sol.iterations = iter;
    if (sol.status == SolveStatus::optimal) {
        sol.block_values.resize(nblk);
        for (std::size_t j = 0; j < nblk; ++j) {
            sol.block_values[j] = x[j] * cxd(1.0 / tau);
        }
        sol.scalar_values.assign(f, 0.0);
        for (std::size_t k = 0; k < f; ++k) {
            sol.scalar_values[k] = u[k] / tau;
        }
        double obj = 0;
        for (const auto& [j, c] : prob.objective.block_terms) {
            obj += real_inner(c, sol.block_values[j]);
        }
        for (const auto& [k, v] : prob.objective.scalar_terms) {
            obj += v * sol.scalar_values[k];
        }
        sol.objective_value = obj;
    } else if (sol.status == SolveStatus::infeasible) {
        sol.scalar_values.assign(f, 0.0);
    }
    return sol;
}

Problem complex_to_real(const Problem& p) {
    p.validate();
    auto embed = [](const CMatrix& c) {
        const std::size_t n = c.rows();
        CMatrix out(2 * n, 2 * n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t col = 0; col < n; ++col) {
                double re = 0.5 * c(r, col).real();
                double im = 0.5 * c(r, col).imag();
                out(r, col) = re;
                out(n + r, n + col) = re;
                out(r, n + col) = -im;
                out(n + r, col) = im;
            }
        }
        return out;
    };
    Problem out;
    for (const auto& bl : p.blocks) {
        out.add_block(bl.name + "_re", 2 * bl.dim);
    }
    out.scalars = p.scalars;
    for (const auto& [j, c] : p.objective.block_terms) {
        out.objective.block_terms.emplace_back(j, embed(c));
    }
    out.objective.scalar_terms = p.objective.scalar_terms;
    for (const auto& con : p.constraints) {
        Constraint rc;
        for (const auto& [j, c] : con.lhs.block_terms) {
            rc.lhs.block_terms.emplace_back(j, embed(c));
        }
        rc.lhs.scalar_terms = con.lhs.scalar_terms;
        rc.rhs = con.rhs;
        out.constraints.push_back(std::move(rc));
    }
    return out;
}

Solution lift_real_solution(const Problem& p, const Solution& real_sol) {
    Solution out = real_sol;
    out.block_values.clear();
    if (real_sol.status != SolveStatus::optimal) {
        return out;
    }
    out.block_values.resize(p.blocks.size());
    for (std::size_t j = 0; j < p.blocks.size(); ++j) {
        const std::size_t n = p.blocks[j].dim;
        const CMatrix& big = real_sol.block_values[j];
        if (big.rows() != 2 * n) {
            throw std::invalid_argument("lift_real_solution: block shape mismatch");
        }
        CMatrix c(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t col = 0; col < n; ++col) {
                double re = 0.5 * (big(r, col).real() + big(n + r, n + col).real());
                double im = 0.5 * (big(n + r, col).real() - big(r, n + col).real());
                c(r, col) = cxd(re, im);
            }
        }
        out.block_values[j] = hermitize(c);
    }
    return out;
}

}  // namespace sicsim::sdp
