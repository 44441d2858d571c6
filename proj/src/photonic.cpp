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

#include "sicsim/photonic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sicsim/rng.hpp"

namespace sicsim {

namespace {

const cxd kOmega = std::polar(1.0, 2.0 * M_PI / 3.0);
const cxd kI(0.0, 1.0);

CMatrix balanced_splitter() {
    CMatrix bs = {{1.0, kI}, {kI, 1.0}};
    return bs * cxd(M_SQRT1_2);
}

CMatrix splitter(double r) {
    double t = std::sqrt(std::max(1.0 - r, 0.0));
    CMatrix bs = {{std::sqrt(r), kI * t}, {kI * t, std::sqrt(r)}};
    return bs;
}

bool is_permutation(const std::vector<std::size_t>& p, std::size_t width) {
    if (p.size() != width) {
        return false;
    }
    std::vector<bool> seen(width, false);
    for (auto v : p) {
        if (v >= width || seen[v]) {
            return false;
        }
        seen[v] = true;
    }
    return true;
}

}  // namespace

CMatrix mzi_unitary(const MziSetting& s) {
    if (s.visibility < 0.0 || s.visibility > 1.0) {
        throw std::invalid_argument("mzi_unitary: visibility must lie in [0, 1]");
    }
    double r = 0.5 * (1.0 + std::sqrt(std::max(1.0 - s.visibility * s.visibility, 0.0)));
    return balanced_splitter() * CMatrix::diag({std::polar(1.0, s.theta), 1.0}) * splitter(r) *
           CMatrix::diag({std::polar(1.0, s.phi), 1.0});
}

CMatrix subspace_embed(const CMatrix& u, const std::vector<std::size_t>& ports,
                       std::size_t width) {
    if (!u.is_square() || u.rows() != ports.size()) {
        throw std::invalid_argument("subspace_embed: payload shape does not match port count");
    }
    std::vector<bool> seen(width, false);
    for (auto p : ports) {
        if (p >= width || seen[p]) {
            throw std::invalid_argument("subspace_embed: invalid or repeated port");
        }
        seen[p] = true;
    }
    if ((u * u.dagger() - CMatrix::identity(u.rows())).max_abs() > 1e-10) {
        throw std::invalid_argument("subspace_embed: payload is not unitary");
    }
    CMatrix out = CMatrix::identity(width);
    for (std::size_t i = 0; i < ports.size(); ++i) {
        for (std::size_t j = 0; j < ports.size(); ++j) {
            out(ports[i], ports[j]) = u(i, j);
        }
    }
    return out;
}

void PhotonicCircuit::validate() const {
    std::vector<bool> seen(width, false);
    for (auto p : input_ports) {
        if (p >= width || seen[p]) {
            throw std::invalid_argument("PhotonicCircuit: invalid or repeated input port");
        }
        seen[p] = true;
    }
    if (!is_permutation(outcome_ports, width)) {
        throw std::invalid_argument("PhotonicCircuit: outcome_ports must enumerate every port");
    }
    for (const auto& s : stages) {
        switch (s.kind) {
            case StageKind::SubspaceUnitary:
                subspace_embed(s.unitary, s.ports, width);  // validates
                break;
            case StageKind::PortPermutation:
                if (!is_permutation(s.permutation, width)) {
                    throw std::invalid_argument("PhotonicCircuit: bad permutation stage");
                }
                break;
            case StageKind::PhaseLayer:
                if (s.phases.size() != s.ports.size()) {
                    throw std::invalid_argument("PhotonicCircuit: phase count != port count");
                }
                for (auto p : s.ports) {
                    if (p >= width) {
                        throw std::invalid_argument("PhotonicCircuit: phase port out of range");
                    }
                }
                break;
        }
    }
}

CMatrix stage_unitary(const CircuitStage& stage, std::size_t width, bool noisy,
                      double visibility) {
    switch (stage.kind) {
        case StageKind::SubspaceUnitary: {
            if (!noisy || visibility >= 1.0) {
                return subspace_embed(stage.unitary, stage.ports, width);
            }
            MziMesh mesh = decompose_unitary(stage.unitary);
            return subspace_embed(recompose_mesh(mesh, visibility), stage.ports, width);
        }
        case StageKind::PortPermutation: {
            CMatrix m(width, width);
            for (std::size_t p = 0; p < width; ++p) {
                m(stage.permutation[p], p) = 1.0;
            }
            return m;
        }
        case StageKind::PhaseLayer: {
            CMatrix m = CMatrix::identity(width);
            for (std::size_t i = 0; i < stage.ports.size(); ++i) {
                m(stage.ports[i], stage.ports[i]) = std::polar(1.0, stage.phases[i]);
            }
            return m;
        }
    }
    throw std::logic_error("stage_unitary: unreachable");
}

CMatrix compile_unitary(const PhotonicCircuit& c) {
    c.validate();
    CMatrix w = CMatrix::identity(c.width);
    for (const auto& s : c.stages) {
        w = stage_unitary(s, c.width) * w;
    }
    return w;
}

Povm induced_povm_from_matrix(const CMatrix& w, const std::vector<std::size_t>& input_ports,
                              const std::vector<std::size_t>& outcome_ports) {
    std::vector<Hermitian> effects;
    effects.reserve(outcome_ports.size());
    for (auto port : outcome_ports) {
        std::vector<cxd> row(input_ports.size());
        for (std::size_t j = 0; j < input_ports.size(); ++j) {
            row[j] = std::conj(w(port, input_ports[j]));
        }
        effects.emplace_back(CMatrix::outer(row));
    }
    return Povm(input_ports.size(), std::move(effects));
}

Povm induced_povm(const PhotonicCircuit& c) {
    return induced_povm_from_matrix(compile_unitary(c), c.input_ports, c.outcome_ports);
}

namespace {

CMatrix subspace_q(int which) {
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    const cxd w2 = kOmega * kOmega;
    CMatrix q;
    switch (which) {
        case 1:
            q = {{0, kI * r3, -kI * r3}, {r2, r2, r2}, {2.0, -1.0, -1.0}};
            break;
        case 2:
            q = {{-kI * r3, 0, kI * r3}, {r2, r2, r2}, {-w2, 2.0 * w2, -w2}};
            break;
        default:
            q = {{kI * r3, -kI * r3, 0}, {r2, r2, r2}, {-kOmega, -kOmega, 2.0 * kOmega}};
            break;
    }
    return q * cxd(1.0 / std::sqrt(6.0));
}

CMatrix subspace_p() {
    CMatrix p = {{1, 1, 1}, {kOmega * kOmega, kOmega, 1}, {kOmega, kOmega * kOmega, 1}};
    return p * cxd(1.0 / std::sqrt(3.0));
}

CMatrix block_diag3(const CMatrix& a, const CMatrix& b, const CMatrix& c) {
    CMatrix out(9, 9);
    const CMatrix* blocks[3] = {&a, &b, &c};
    for (int t = 0; t < 3; ++t) {
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                out(3 * t + i, 3 * t + j) = (*blocks[t])(i, j);
            }
        }
    }
    return out;
}

std::vector<std::size_t> iota_ports(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = i;
    }
    return v;
}

}  // namespace

PhotonicCircuit build_sic_circuit() {
    CMatrix p = subspace_p();

    PhotonicCircuit c;
    c.width = 9;
    c.input_ports = {0, 3, 6};

    CircuitStage analysis;
    analysis.kind = StageKind::SubspaceUnitary;
    analysis.ports = {0, 3, 6};
    analysis.unitary = p.dagger();

    CircuitStage q_triple;
    q_triple.kind = StageKind::SubspaceUnitary;
    q_triple.ports = iota_ports(9);
    q_triple.unitary =
        block_diag3(subspace_q(1).dagger(), subspace_q(2).dagger(), subspace_q(3).dagger());

    // Regroup so final triple k collects output k of each three-mode block.
    CircuitStage swap;
    swap.kind = StageKind::PortPermutation;
    swap.permutation.resize(9);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            swap.permutation[3 * i + k] = 3 * k + i;
        }
    }

    CircuitStage p_triple;
    p_triple.kind = StageKind::SubspaceUnitary;
    p_triple.ports = iota_ports(9);
    p_triple.unitary = block_diag3(p, p, p);

    c.stages = {analysis, q_triple, swap, p_triple};
    // Detector labeling: outcome x-1 = 3*x0 + x1 fires at port 3*(2 - x1) + x0.
    c.outcome_ports = {6, 3, 0, 7, 4, 1, 8, 5, 2};
    c.validate();
    return c;
}

PhotonicCircuit build_mub_circuit(int y) {
    if (y < 1 || y > 4) {
        throw std::invalid_argument("build_mub_circuit: basis index must be 1..4");
    }
    PhotonicCircuit c;
    c.width = 3;
    c.input_ports = {0, 1, 2};
    c.outcome_ports = {0, 1, 2};
    if (y > 1) {
        auto bases = mub_bases();
        CMatrix b(3, 3);
        for (std::size_t col = 0; col < 3; ++col) {
            for (std::size_t row = 0; row < 3; ++row) {
                b(row, col) = bases[y - 1][col][row];
            }
        }
        CircuitStage s;
        s.kind = StageKind::SubspaceUnitary;
        s.ports = {0, 1, 2};
        s.unitary = b.dagger();
        c.stages.push_back(std::move(s));
    }
    c.validate();
    return c;
}

PhotonicCircuit build_prep_circuit(const Ket& psi) {
    if (psi.dim() != 3) {
        throw std::invalid_argument("build_prep_circuit: qutrit states only");
    }
    PhotonicCircuit c;
    c.width = 3;
    c.input_ports = {0};
    c.outcome_ports = {0, 1, 2};

    double a0 = std::abs(psi[0]);
    double rest = std::sqrt(std::max(1.0 - a0 * a0, 0.0));
    double a1 = rest > 1e-12 ? std::abs(psi[1]) / rest : 0.0;

    CircuitStage m01;
    m01.kind = StageKind::SubspaceUnitary;
    m01.ports = {0, 1};
    m01.unitary = mzi_unitary({2.0 * std::asin(std::clamp(a0, 0.0, 1.0)), 0.0, 1.0});

    CircuitStage m12;
    m12.kind = StageKind::SubspaceUnitary;
    m12.ports = {1, 2};
    m12.unitary = mzi_unitary({2.0 * std::asin(std::clamp(a1, 0.0, 1.0)), 0.0, 1.0});

    c.stages = {m01, m12};

    // Trailing phase shifters absorb whatever phases the two MZIs produced.
    CMatrix w = compile_unitary(c);
    CircuitStage phases;
    phases.kind = StageKind::PhaseLayer;
    phases.ports = {0, 1, 2};
    phases.phases.resize(3, 0.0);
    for (std::size_t port = 0; port < 3; ++port) {
        cxd actual = w(port, 0);
        if (std::abs(actual) > 1e-12 && std::abs(psi[port]) > 1e-12) {
            phases.phases[port] = std::arg(psi[port]) - std::arg(actual);
        }
    }
    c.stages.push_back(std::move(phases));

    Ket check = prepared_state(c);
    if (overlap2(check, psi) < 1.0 - 1e-12) {
        throw std::runtime_error("build_prep_circuit: synthesis failed to reach target state");
    }
    return c;
}

Ket prepared_state(const PhotonicCircuit& prep) {
    if (prep.input_ports.size() != 1) {
        throw std::invalid_argument("prepared_state: expects a single source port");
    }
    CMatrix w = compile_unitary(prep);
    std::vector<cxd> out(prep.width);
    for (std::size_t r = 0; r < prep.width; ++r) {
        out[r] = w(r, prep.input_ports[0]);
    }
    return Ket(out);
}

MziMesh decompose_unitary(const CMatrix& u) {
    if (!u.is_square()) {
        throw std::invalid_argument("decompose_unitary: square matrix required");
    }
    const std::size_t n = u.rows();
    if ((u * u.dagger() - CMatrix::identity(n)).max_abs() > 1e-10) {
        throw std::invalid_argument("decompose_unitary: input is not unitary");
    }
    MziMesh mesh;
    mesh.dim = n;
    CMatrix work = u;
    // Null the strict lower triangle by right-multiplying adjoint MZIs on
    // adjacent column pairs; what remains is the output phase diagonal and
    // work = D * M_k ... M_1 with the elements in application order.
    for (std::size_t r = n; r-- > 1;) {
        for (std::size_t p = 0; p < r; ++p) {
            cxd a = work(r, p), b = work(r, p + 1);
            if (std::abs(a) < 1e-13) {
                continue;  // entry already null, no element needed
            }
            double theta = 2.0 * std::atan2(std::abs(b), std::abs(a));
            double phi = std::abs(b) > 1e-13 ? std::arg(a) - std::arg(b) - M_PI : 0.0;
            MziMesh::Element el{p, p + 1, {theta, phi, 1.0}};
            CMatrix gd = mzi_unitary(el.setting).dagger();
            // work <- work * G^dag on columns (p, p+1)
            for (std::size_t row = 0; row < n; ++row) {
                cxd cp = work(row, p), cq = work(row, p + 1);
                work(row, p) = cp * gd(0, 0) + cq * gd(1, 0);
                work(row, p + 1) = cp * gd(0, 1) + cq * gd(1, 1);
            }
            mesh.elements.push_back(el);
        }
    }
    mesh.output_phases.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        mesh.output_phases[i] = std::arg(work(i, i));
    }
    return mesh;
}

CMatrix recompose_mesh(const MziMesh& mesh, double visibility) {
    CMatrix out = CMatrix::identity(mesh.dim);
    for (const auto& el : mesh.elements) {
        MziSetting s = el.setting;
        s.visibility = visibility;
        out = subspace_embed(mzi_unitary(s), {el.port_a, el.port_b}, mesh.dim) * out;
    }
    CMatrix d(mesh.dim, mesh.dim);
    for (std::size_t i = 0; i < mesh.dim; ++i) {
        d(i, i) = std::polar(1.0, mesh.output_phases[i]);
    }
    return d * out;
}

NoisyTransfer apply_visibility_noise(const PhotonicCircuit& c,
                                     const std::vector<double>& v_map) {
    c.validate();
    if (v_map.size() != c.stages.size()) {
        throw std::invalid_argument("apply_visibility_noise: one visibility per stage required");
    }
    for (double v : v_map) {
        if (v < 0.0 || v > 1.0) {
            throw std::invalid_argument("apply_visibility_noise: visibility outside [0, 1]");
        }
    }
    CMatrix w = CMatrix::identity(c.width);
    for (std::size_t i = 0; i < c.stages.size(); ++i) {
        w = stage_unitary(c.stages[i], c.width, true, v_map[i]) * w;
    }
    return NoisyTransfer{std::move(w), c.input_ports, c.outcome_ports};
}

NoisyTransfer apply_uniform_visibility(const PhotonicCircuit& c, double v) {
    return apply_visibility_noise(c, std::vector<double>(c.stages.size(), v));
}

std::vector<double> NoisyTransfer::probabilities(const Ket& psi) const {
    if (psi.dim() != input_ports.size()) {
        throw std::invalid_argument("NoisyTransfer: input dimension mismatch");
    }
    std::vector<cxd> amps(matrix.rows(), 0.0);
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        for (std::size_t j = 0; j < input_ports.size(); ++j) {
            amps[r] += matrix(r, input_ports[j]) * psi[j];
        }
    }
    std::vector<double> p(outcome_ports.size());
    for (std::size_t a = 0; a < outcome_ports.size(); ++a) {
        p[a] = std::norm(amps[outcome_ports[a]]);
    }
    return p;
}

std::vector<std::uint64_t> sample_counts(const std::vector<double>& probabilities,
                                         std::uint64_t n_total, std::uint64_t seed,
                                         bool poisson_total) {
    double sum = 0;
    for (double p : probabilities) {
        if (p < -kTol.prob_sum) {
            throw std::invalid_argument("sample_counts: negative probability");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kTol.prob_sum) {
        throw std::invalid_argument("sample_counts: probabilities sum to " + std::to_string(sum));
    }
    Rng rng(derive_seed(seed, 0xC0117ULL));
    std::uint64_t n = poisson_total ? poisson(static_cast<double>(n_total), rng) : n_total;
    std::vector<double> renorm(probabilities);
    for (auto& p : renorm) {
        p = std::max(p, 0.0) / sum;
    }
    return multinomial(renorm, n, rng);
}

}  // namespace sicsim
