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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sicsim/photonic.hpp"
#include "sicsim/rng.hpp"
#include "test_support.hpp"

using namespace sicsim;
using namespace sicsim::testing;

namespace {

// Two matrices equal up to left/right diagonal phase freedom: moduli match
// and all 2x2 cross ratios agree.
bool phase_equivalent(const CMatrix& a, const CMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return false;
    }
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (std::abs(std::abs(a(r, c)) - std::abs(b(r, c))) > tol) {
                return false;
            }
        }
    }
    for (std::size_t r = 1; r < a.rows(); ++r) {
        for (std::size_t c = 1; c < a.cols(); ++c) {
            cxd num_a = a(0, 0) * a(r, c), den_a = a(0, c) * a(r, 0);
            cxd num_b = b(0, 0) * b(r, c), den_b = b(0, c) * b(r, 0);
            if (std::abs(den_a) < 1e-12 || std::abs(den_b) < 1e-12) {
                continue;
            }
            if (std::abs(num_a / den_a - num_b / den_b) > tol) {
                return false;
            }
        }
    }
    return true;
}

// Calibration fringe: light enters one port, the internal phase is swept.
double bar_probability(const MziSetting& s) { return std::norm(mzi_unitary(s)(0, 0)); }

}  // namespace

TEST_CASE("MZI: reflective setting, fringe law, reference splitters") {
    // theta = pi routes each input back to its own port.
    CMatrix bar = mzi_unitary({M_PI, 0.0, 1.0});
    CHECK(std::abs(std::abs(bar(0, 0)) - 1.0) < 1e-12);
    CHECK(std::abs(bar(0, 1)) < 1e-12);
    CHECK(std::abs(bar(1, 0)) < 1e-12);

    // Internal-phase fringe is exactly 1/2 - (V/2) cos(theta).
    for (double vis : {1.0, 0.9, 0.5, 0.0}) {
        for (int k = 0; k < 48; ++k) {
            double theta = 2.0 * M_PI * k / 48.0;
            CHECK(std::abs(bar_probability({theta, 0.3, vis}) -
                           (0.5 - 0.5 * vis * std::cos(theta))) < 1e-12);
        }
    }

    CMatrix m1 = {{M_SQRT1_2, M_SQRT1_2}, {M_SQRT1_2, -M_SQRT1_2}};
    CHECK(phase_equivalent(mzi_unitary({M_PI / 2, 0.0, 1.0}), m1, 1e-10));

    double s3 = 1.0 / std::sqrt(3.0), s23 = std::sqrt(2.0 / 3.0);
    CMatrix m2 = {{s3, s23}, {s23, -s3}};
    CHECK(phase_equivalent(mzi_unitary({2.0 * std::asin(s3), 0.0, 1.0}), m2, 1e-10));
}

TEST_CASE("subspace_embed places the payload and preserves unitarity") {
    CMatrix eye9 = CMatrix::identity(9);
    CHECK(max_diff(subspace_embed(CMatrix::identity(3), {2, 5, 7}, 9), eye9) == 0.0);

    Rng rng(2);
    CMatrix u = random_unitary(3, rng);
    CMatrix emb = subspace_embed(u, {0, 3, 6}, 9);
    CHECK(is_unitary(emb, 1e-10));
    // Identity outside the listed ports, payload inside.
    std::vector<std::size_t> ports = {0, 3, 6};
    for (std::size_t r = 0; r < 9; ++r) {
        for (std::size_t c = 0; c < 9; ++c) {
            bool r_in = r % 3 == 0, c_in = c % 3 == 0;
            if (r_in && c_in) {
                CHECK(std::abs(emb(r, c) - u(r / 3, c / 3)) < 1e-15);
            } else {
                CHECK(std::abs(emb(r, c) - cxd(r == c ? 1.0 : 0.0)) < 1e-15);
            }
        }
    }
    CHECK_THROWS_AS(subspace_embed(u, {0, 0, 1}, 9), std::invalid_argument);
    CHECK_THROWS_AS(subspace_embed(u, {0, 1, 9}, 9), std::invalid_argument);
}

TEST_CASE("SIC circuit: structure per the staged decomposition") {
    PhotonicCircuit c = build_sic_circuit();
    CHECK(c.width == 9);
    CHECK(c.input_ports == std::vector<std::size_t>{0, 3, 6});
    REQUIRE(c.stages.size() == 4);
    CHECK(c.stages[0].kind == StageKind::SubspaceUnitary);
    CHECK(c.stages[0].ports == std::vector<std::size_t>{0, 3, 6});
    CHECK(c.stages[1].kind == StageKind::SubspaceUnitary);
    CHECK(c.stages[1].ports.size() == 9);
    CHECK(c.stages[2].kind == StageKind::PortPermutation);
    CHECK(c.stages[3].kind == StageKind::SubspaceUnitary);
    CHECK(c.stages[3].ports.size() == 9);
    // The parallel triple applies the same three-mode unitary to each block.
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(c.stages[3].unitary(i, j) - c.stages[3].unitary(3 + i, 3 + j)) <
                  1e-15);
            CHECK(std::abs(c.stages[3].unitary(i, j) - c.stages[3].unitary(6 + i, 6 + j)) <
                  1e-15);
        }
    }
}

TEST_CASE("SIC circuit induces the SIC measurement") {
    PhotonicCircuit c = build_sic_circuit();
    CMatrix w = compile_unitary(c);
    CHECK(is_unitary(w, 1e-10));

    Povm from_circuit = induced_povm(c);
    NaimarkUnitary nu = naimark_unitary();
    Povm from_dilation = induced_povm_from_matrix(
        nu.matrix, {nu.system_ports.begin(), nu.system_ports.end()},
        {0, 1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(povm_fidelity(from_circuit, from_dilation) >= 1.0 - 1e-9);
    CHECK(povm_fidelity(from_circuit, sic_povm()) >= 1.0 - 1e-9);

    // Moduli of the compiled rows match the dilation rows up to per-row phase.
    for (std::size_t a = 0; a < 9; ++a) {
        for (std::size_t j : {0, 1, 2}) {
            CHECK(std::abs(std::abs(w(c.outcome_ports[a], c.input_ports[j])) -
                           std::abs(nu.matrix(a, nu.system_ports[j]))) < 1e-10);
        }
    }
}

TEST_CASE("dilation matrix itself induces the SIC measurement") {
    NaimarkUnitary nu = naimark_unitary();
    Povm p = induced_povm_from_matrix(nu.matrix, {0, 3, 6}, {0, 1, 2, 3, 4, 5, 6, 7, 8});
    Povm sic = sic_povm();
    for (std::size_t a = 0; a < 9; ++a) {
        CHECK(max_diff(p.effect(a).matrix(), sic.effect(a).matrix()) < 1e-10);
    }
}

TEST_CASE("identity transfer gives input-port projectors plus zero effects") {
    Povm p = induced_povm_from_matrix(CMatrix::identity(9), {0, 3, 6},
                                      {0, 1, 2, 3, 4, 5, 6, 7, 8});
    int rank_one = 0, zero = 0;
    for (const auto& e : p.effects()) {
        double t = trace(e.matrix()).real();
        if (t > 0.5) {
            ++rank_one;
        } else {
            CHECK(e.matrix().max_abs() < 1e-15);
            ++zero;
        }
    }
    CHECK(rank_one == 3);
    CHECK(zero == 6);
}

TEST_CASE("random transfer matrices induce valid measurements") {
    Rng rng(6);
    std::vector<std::size_t> all = {0, 1, 2, 3, 4, 5, 6, 7, 8};
    for (int rep = 0; rep < 10; ++rep) {
        CMatrix w = random_unitary(9, rng);
        Povm p = induced_povm_from_matrix(w, {0, 3, 6}, all);  // constructor validates
        CHECK(p.completeness_error() <= 1e-9);
        double tr_sum = 0;
        for (const auto& e : p.effects()) {
            tr_sum += trace(e.matrix()).real();
        }
        CHECK(std::abs(tr_sum - 3.0) < 1e-9);
    }
}

TEST_CASE("MUB circuits project onto their bases") {
    auto bases = mub_bases();
    for (int y = 1; y <= 4; ++y) {
        PhotonicCircuit c = build_mub_circuit(y);
        CHECK(c.width == 3);
        Povm p = induced_povm(c);
        std::vector<Hermitian> proj;
        for (int a = 0; a < 3; ++a) {
            proj.emplace_back(bases[y - 1][a].projector());
        }
        CHECK(povm_fidelity(p, Povm(3, proj)) >= 1.0 - 1e-9);
    }
    CHECK(build_mub_circuit(1).stages.empty());
    CHECK_THROWS_AS(build_mub_circuit(5), std::invalid_argument);
}

TEST_CASE("MUB circuits starve the forbidden port for every SIC input") {
    auto states = sic_states();
    for (int y = 1; y <= 4; ++y) {
        NoisyTransfer ideal = apply_uniform_visibility(build_mub_circuit(y), 1.0);
        for (int x = 1; x <= 9; ++x) {
            auto probs = ideal.probabilities(states[x - 1]);
            CHECK(probs[zero_outcome_rule(x, y)] <= 1e-10);
        }
    }
}

TEST_CASE("preparation circuits reach their targets") {
    PhotonicCircuit trivial = build_prep_circuit(Ket(std::vector<cxd>{1, 0, 0}));
    CHECK(overlap2(prepared_state(trivial), Ket(std::vector<cxd>{1, 0, 0})) ==
          doctest::Approx(1.0).epsilon(1e-12));

    Ket target(std::vector<cxd>{0, M_SQRT1_2, -M_SQRT1_2});
    CHECK(overlap2(prepared_state(build_prep_circuit(target)), target) >= 1.0 - 1e-10);

    Rng rng(13);
    for (int rep = 0; rep < 100; ++rep) {
        Ket hk(random_ket(3, rng));
        CHECK(overlap2(prepared_state(build_prep_circuit(hk)), hk) >= 1.0 - 1e-10);
    }
}

TEST_CASE("compile_unitary basics") {
    PhotonicCircuit empty;
    empty.width = 4;
    empty.input_ports = {0};
    empty.outcome_ports = {0, 1, 2, 3};
    CHECK(max_diff(compile_unitary(empty), CMatrix::identity(4)) == 0.0);

    Rng rng(91);
    CMatrix u = random_unitary(3, rng);
    PhotonicCircuit single;
    single.width = 9;
    single.input_ports = {0, 3, 6};
    single.outcome_ports = {0, 1, 2, 3, 4, 5, 6, 7, 8};
    CircuitStage s;
    s.kind = StageKind::SubspaceUnitary;
    s.ports = {0, 3, 6};
    s.unitary = u;
    single.stages = {s};
    CHECK(max_diff(compile_unitary(single), subspace_embed(u, {0, 3, 6}, 9)) == 0.0);
}

TEST_CASE("mesh decomposition reproduces unitaries and respects blocks") {
    Rng rng(37);
    for (std::size_t n : {2, 3, 5, 9}) {
        CMatrix u = random_unitary(n, rng);
        MziMesh mesh = decompose_unitary(u);
        CHECK(mesh.elements.size() == n * (n - 1) / 2);
        CHECK(max_diff(recompose_mesh(mesh, 1.0), u) < 1e-12);
    }
    // Block-diagonal payloads produce no elements across the blocks.
    CMatrix a = random_unitary(3, rng), b = random_unitary(3, rng);
    CMatrix blk(6, 6);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            blk(i, j) = a(i, j);
            blk(3 + i, 3 + j) = b(i, j);
        }
    }
    MziMesh mesh = decompose_unitary(blk);
    CHECK(mesh.elements.size() == 6);
    for (const auto& el : mesh.elements) {
        CHECK(el.port_a / 3 == el.port_b / 3);
    }
    CHECK(max_diff(recompose_mesh(mesh, 1.0), blk) < 1e-12);
}

TEST_CASE("visibility noise: ideal limit, conservation, degraded discrimination") {
    PhotonicCircuit c = build_sic_circuit();
    auto states = sic_states();

    NoisyTransfer ideal = apply_uniform_visibility(c, 1.0);
    Povm sic = sic_povm();
    for (int x = 0; x < 9; ++x) {
        auto probs = ideal.probabilities(states[x]);
        auto expect = sic.probabilities(states[x]);
        for (int a = 0; a < 9; ++a) {
            CHECK(std::abs(probs[a] - expect[a]) < 1e-10);
        }
    }

    NoisyTransfer noisy = apply_uniform_visibility(c, 0.99);
    CHECK(is_unitary(noisy.matrix, 1e-10));
    for (int x = 0; x < 9; ++x) {
        auto probs = noisy.probabilities(states[x]);
        double sum = 0;
        for (double p : probs) {
            sum += p;
        }
        CHECK(std::abs(sum - 1.0) < 1e-9);
    }
    double p_correct = noisy.probabilities(states[0])[0];
    CHECK(p_correct < 1.0 / 3.0);
    CHECK(p_correct > 0.30);
    // Regression pin for the frozen noise model (first computed value).
    CHECK(p_correct == doctest::Approx(0.330121187019).epsilon(1e-9));

    CHECK_THROWS_AS(apply_uniform_visibility(c, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(apply_visibility_noise(c, {1.0}), std::invalid_argument);
}

TEST_CASE("sample_counts: determinism, edge distributions, validation") {
    std::vector<double> sure(9, 0.0);
    sure[0] = 1.0;
    auto counts = sample_counts(sure, 100, 5);
    CHECK(counts[0] == 100);
    for (int a = 1; a < 9; ++a) {
        CHECK(counts[a] == 0);
    }

    std::vector<double> uniform(9, 1.0 / 9.0);
    auto c1 = sample_counts(uniform, 900000, 123);
    auto c2 = sample_counts(uniform, 900000, 123);
    CHECK(c1 == c2);
    double sigma = std::sqrt(900000.0 / 9.0 * (8.0 / 9.0));
    for (auto c : c1) {
        CHECK(std::abs(static_cast<double>(c) - 100000.0) < 5 * sigma);
    }

    auto cp = sample_counts(uniform, 900000, 123, true);
    std::uint64_t total = 0;
    for (auto c : cp) {
        total += c;
    }
    CHECK(std::abs(static_cast<double>(total) - 900000.0) < 5 * std::sqrt(900000.0));

    std::vector<double> bad = {0.7, 0.4};
    CHECK_THROWS_AS(sample_counts(bad, 10, 1), std::invalid_argument);
    std::vector<double> neg = {1.1, -0.1};
    CHECK_THROWS_AS(sample_counts(neg, 10, 1), std::invalid_argument);
}

TEST_CASE("random stage programs compile to unitaries") {
    Rng rng(55);
    for (int rep = 0; rep < 10; ++rep) {
        PhotonicCircuit c;
        c.width = 6;
        c.input_ports = {0, 1, 2};
        c.outcome_ports = {0, 1, 2, 3, 4, 5};
        for (int s = 0; s < 4; ++s) {
            CircuitStage st;
            int kind = static_cast<int>(rng.below(3));
            if (kind == 0) {
                st.kind = StageKind::SubspaceUnitary;
                st.ports = {rng.below(2), 2 + rng.below(2), 4 + rng.below(2)};
                st.unitary = random_unitary(3, rng);
            } else if (kind == 1) {
                st.kind = StageKind::PortPermutation;
                st.permutation = {0, 1, 2, 3, 4, 5};
                for (std::size_t i = 5; i > 0; --i) {
                    std::swap(st.permutation[i], st.permutation[rng.below(i + 1)]);
                }
            } else {
                st.kind = StageKind::PhaseLayer;
                st.ports = {0, 1, 2, 3, 4, 5};
                st.phases.resize(6);
                for (auto& ph : st.phases) {
                    ph = rng.uniform01() * 2 * M_PI;
                }
            }
            c.stages.push_back(std::move(st));
        }
        CHECK(is_unitary(compile_unitary(c), 1e-10));
    }
}
