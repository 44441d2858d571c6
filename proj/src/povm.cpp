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

#include "sicsim/povm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sicsim {

namespace {

const cxd kOmega = std::polar(1.0, 2.0 * M_PI / 3.0);

std::vector<cxd> fix_phase(std::vector<cxd> v) {
    for (const auto& z : v) {
        double m = std::abs(z);
        if (m > 1e-12) {
            cxd ph = std::conj(z) / m;
            for (auto& w : v) {
                w *= ph;
            }
            break;
        }
    }
    return v;
}

}  // namespace

Ket::Ket(std::vector<cxd> amplitudes) : amps_(fix_phase(std::move(amplitudes))) {
    double n2 = 0;
    for (const auto& z : amps_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw std::invalid_argument("Ket: non-finite amplitude");
        }
        n2 += std::norm(z);
    }
    if (std::abs(n2 - 1.0) > 1e-8) {
        if (n2 < 1e-20) {
            throw std::invalid_argument("Ket: zero vector");
        }
        double inv = 1.0 / std::sqrt(n2);
        for (auto& z : amps_) {
            z *= inv;
        }
    } else if (std::abs(n2 - 1.0) > kTol.atol) {
        double inv = 1.0 / std::sqrt(n2);
        for (auto& z : amps_) {
            z *= inv;
        }
    }
}

cxd inner(const Ket& a, const Ket& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("inner: dimension mismatch");
    }
    cxd s = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

double overlap2(const Ket& a, const Ket& b) { return std::norm(inner(a, b)); }

DensityMatrix::DensityMatrix(const Hermitian& m) : m_(m) {
    if (std::abs(trace(m.matrix()).real() - 1.0) > kTol.atol * 10) {
        throw std::invalid_argument("DensityMatrix: trace != 1");
    }
    if (min_eigenvalue(m) < -kTol.psd) {
        throw std::invalid_argument("DensityMatrix: not positive semidefinite");
    }
}

Povm::Povm(std::size_t dim, std::vector<Hermitian> effects)
    : dim_(dim), effects_(std::move(effects)) {
    if (effects_.empty()) {
        throw std::invalid_argument("Povm: needs at least one effect");
    }
    for (const auto& e : effects_) {
        if (e.dim() != dim_) {
            throw std::invalid_argument("Povm: effect dimension mismatch");
        }
        if (min_eigenvalue(e) < -kTol.psd) {
            throw std::invalid_argument("Povm: effect not positive semidefinite");
        }
    }
    if (completeness_error() > kTol.completeness) {
        throw std::invalid_argument("Povm: effects do not sum to identity (error " +
                                    std::to_string(completeness_error()) + ")");
    }
}

double Povm::completeness_error() const {
    CMatrix s = CMatrix::zero(dim_, dim_);
    for (const auto& e : effects_) {
        s += e.matrix();
    }
    s -= CMatrix::identity(dim_);
    return s.max_abs();
}

std::vector<double> Povm::probabilities(const DensityMatrix& rho) const {
    if (rho.dim() != dim_) {
        throw std::invalid_argument("Povm::probabilities: dimension mismatch");
    }
    std::vector<double> p(effects_.size());
    for (std::size_t a = 0; a < effects_.size(); ++a) {
        p[a] = real_inner(rho.matrix(), effects_[a].matrix());
    }
    return p;
}

std::vector<double> Povm::probabilities(const Ket& psi) const {
    return probabilities(DensityMatrix(psi));
}

std::vector<Ket> sic_states() {
    const cxd w = kOmega, w2 = kOmega * kOmega;
    const std::vector<std::vector<cxd>> raw = {
        {0, 1, -1.0}, {0, 1, -w},  {0, 1, -w2},  //
        {-1.0, 0, 1}, {-w, 0, 1},  {-w2, 0, 1},  //
        {1, -1.0, 0}, {1, -w, 0},  {1, -w2, 0},
    };
    std::vector<Ket> out;
    out.reserve(9);
    for (const auto& v : raw) {
        out.emplace_back(v);
    }
    return out;
}

Povm sic_povm() {
    std::vector<Hermitian> eff;
    eff.reserve(9);
    for (const auto& psi : sic_states()) {
        eff.emplace_back(psi.projector() * cxd(1.0 / 3.0));
    }
    return Povm(3, std::move(eff));
}

NaimarkUnitary naimark_unitary() {
    const cxd w = kOmega, w2 = kOmega * kOmega;
    const double r2 = std::sqrt(2.0);
    // The dilation in analysis convention: columns of the system rows
    // (0, 3, 6) are the SIC vectors scaled by 1/sqrt(3).
    CMatrix analysis = {
        {0, 0, 0, -1.0, -w2, -w, 1, w, w2},
        {r2, r2, r2, 0, 0, 0, 0, 0, 0},
        {1, w2, w, 1, w, w2, 0, 0, 0},
        {1, w, w2, 0, 0, 0, -1.0, -w2, -w},
        {0, 0, 0, r2, r2, r2, 0, 0, 0},
        {0, 0, 0, 1, w2, w, 1, w, w2},
        {-1.0, -w2, -w, 1, w, w2, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, r2, r2, r2},
        {1, w, w2, 0, 0, 0, 1, w2, w},
    };
    analysis *= cxd(1.0 / std::sqrt(6.0));
    // Output-port amplitude a for input |psi> on the system ports is
    // <column a of the system rows | psi>, i.e. the transfer matrix is the
    // adjoint of the displayed dilation.
    return NaimarkUnitary{analysis.dagger(), {0, 3, 6}};
}

std::vector<std::vector<Ket>> mub_bases() {
    const cxd w = kOmega, w2 = kOmega * kOmega;
    const std::vector<CMatrix> mats = {
        {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
        {{1, 1, 1}, {1, w, w2}, {1, w2, w}},
        {{1, w, w}, {w, 1, w}, {w, w, 1}},
        {{1, w2, w2}, {w2, 1, w2}, {w2, w2, 1}},
    };
    std::vector<std::vector<Ket>> out;
    for (const auto& m : mats) {
        std::vector<Ket> basis;
        for (std::size_t c = 0; c < 3; ++c) {
            basis.emplace_back(std::vector<cxd>{m(0, c), m(1, c), m(2, c)});
        }
        out.push_back(std::move(basis));
    }
    return out;
}

std::vector<Ket> equiangular_states(std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("equiangular_states: n must be >= 2");
    }
    std::vector<Ket> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<cxd> v(n - 1);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            v[j] = std::polar(1.0, 2.0 * M_PI * static_cast<double>(j * k) / n);
        }
        out.emplace_back(std::move(v));
    }
    return out;
}

std::vector<DensityMatrix> exclusion_states() {
    std::vector<DensityMatrix> out;
    out.reserve(9);
    for (const auto& psi : sic_states()) {
        CMatrix m = (CMatrix::identity(3) - psi.projector()) * cxd(0.5);
        out.emplace_back(Hermitian(m));
    }
    return out;
}

Povm depolarize(const Povm& p, double v) {
    if (v < 0.0 || v > 1.0) {
        throw std::invalid_argument("depolarize: visibility must lie in [0, 1]");
    }
    std::vector<Hermitian> eff;
    eff.reserve(p.num_outcomes());
    CMatrix eye = CMatrix::identity(p.dim());
    for (const auto& e : p.effects()) {
        double t = trace(e.matrix()).real();
        CMatrix m = e.matrix() * cxd(v) + eye * cxd((1.0 - v) * t / static_cast<double>(p.dim()));
        eff.emplace_back(m);
    }
    return Povm(p.dim(), std::move(eff));
}

double state_fidelity_matrices(const Hermitian& a, const Hermitian& b) {
    Hermitian ra = sqrt_psd(a);
    CMatrix inner_m = ra.matrix() * b.matrix() * ra.matrix();
    Hermitian s = sqrt_psd(Hermitian(inner_m));
    double t = trace(s.matrix()).real();
    return t * t;
}

double povm_fidelity(const Povm& p, const Povm& q) {
    if (p.dim() != q.dim() || p.num_outcomes() != q.num_outcomes()) {
        throw std::invalid_argument("povm_fidelity: shape mismatch");
    }
    const double d = static_cast<double>(p.dim());
    double acc = 0;
    for (std::size_t j = 0; j < p.num_outcomes(); ++j) {
        double tp = trace(p.effect(j).matrix()).real();
        double tq = trace(q.effect(j).matrix()).real();
        if (tp < 1e-12 || tq < 1e-12) {
            continue;  // zero effect contributes nothing to either sum
        }
        Hermitian np(p.effect(j).matrix() * cxd(1.0 / tp));
        Hermitian nq(q.effect(j).matrix() * cxd(1.0 / tq));
        double fj = state_fidelity_matrices(np, nq);
        acc += std::sqrt(tp * tq) / d * std::sqrt(std::max(fj, 0.0));
    }
    double f = acc * acc;
    if (f > 1.0 + 1e-8) {
        throw std::runtime_error("povm_fidelity: value " + std::to_string(f) +
                                 " exceeds 1 beyond numerical noise");
    }
    return std::clamp(f, 0.0, 1.0);
}

int zero_outcome_rule(int x, int y) {
    if (x < 1 || x > 9 || y < 1 || y > 4) {
        throw std::invalid_argument("zero_outcome_rule: x in 1..9, y in 1..4 required");
    }
    int x0 = (x - 1) / 3, x1 = (x - 1) % 3;
    int y0 = (y - 1) / 2, y1 = (y - 1) % 2;
    if (y0 == 0) {
        return y1 == 0 ? x0 : x1;
    }
    int s = y1 == 0 ? x0 + x1 : x0 - x1;
    return ((s % 3) + 3) % 3;
}

}  // namespace sicsim
