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

#include "sicsim/povm.hpp"
#include "sicsim/rng.hpp"
#include "test_support.hpp"

using namespace sicsim;
using namespace sicsim::testing;

namespace {

Povm random_povm(std::size_t dim, std::size_t outcomes, Rng& rng) {
    // Congruence-normalized random PSD pieces: E_a = S^-1/2 G_a S^-1/2.
    std::vector<Hermitian> gs;
    CMatrix total(dim, dim);
    for (std::size_t a = 0; a < outcomes; ++a) {
        CMatrix g(dim, dim);
        for (auto& z : g.entries()) {
            z = cxd(rng.gauss(), rng.gauss());
        }
        CMatrix p = g * g.dagger();
        gs.emplace_back(p);
        total += p;
    }
    Hermitian s = inv_sqrt_psd(Hermitian(total));
    std::vector<Hermitian> eff;
    for (const auto& g : gs) {
        eff.emplace_back(s.matrix() * g.matrix() * s.matrix());
    }
    return Povm(dim, std::move(eff));
}

}  // namespace

TEST_CASE("SIC states have uniform pairwise overlap 1/4") {
    auto states = sic_states();
    REQUIRE(states.size() == 9);
    for (std::size_t j = 0; j < 9; ++j) {
        CHECK(overlap2(states[j], states[j]) == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t k = j + 1; k < 9; ++k) {
            CHECK(std::abs(overlap2(states[j], states[k]) - 0.25) < 1e-10);
        }
    }
}

TEST_CASE("SIC projectors sum to three times the maximally mixed state") {
    auto states = sic_states();
    CMatrix sum(3, 3);
    for (const auto& s : states) {
        sum += s.projector() * cxd(1.0 / 3.0);
    }
    CHECK(max_diff(sum, CMatrix::identity(3)) < 1e-10);
}

TEST_CASE("SIC measurement effects are rank-one with trace 1/3") {
    Povm p = sic_povm();
    auto states = sic_states();
    CHECK(p.completeness_error() < 1e-9);
    for (std::size_t a = 0; a < 9; ++a) {
        CHECK(trace(p.effect(a).matrix()).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        auto eg = eig_hermitian(p.effect(a));
        CHECK(eg.eigenvalues[1] < 1e-10);  // rank one
        CHECK(real_inner(p.effect(a).matrix(), states[a].projector()) ==
              doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    }
}

TEST_CASE("dilation unitary analyzes the SIC states") {
    NaimarkUnitary nu = naimark_unitary();
    CHECK(max_diff(nu.matrix * nu.matrix.dagger(), CMatrix::identity(9)) < 1e-10);
    CHECK(nu.matrix(2, 1).real() == doctest::Approx(std::sqrt(2.0 / 6.0)).epsilon(1e-12));
    CHECK(std::abs(nu.matrix(2, 1).imag()) < 1e-15);

    // Rows at the system ports, restricted to the system ports and
    // renormalized, are SIC states up to a global phase.
    auto states = sic_states();
    const std::size_t expect[3] = {0, 3, 6};
    for (int i = 0; i < 3; ++i) {
        std::size_t r = nu.system_ports[i];
        std::vector<cxd> v;
        for (auto c : nu.system_ports) {
            v.push_back(nu.matrix(r, c));
        }
        Ket k(v);
        CHECK(overlap2(k, states[expect[i]]) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("MUB bases: computational first, unbiased across bases") {
    auto bases = mub_bases();
    REQUIRE(bases.size() == 4);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            CHECK(std::abs(bases[0][a][b] - cxd(a == b ? 1.0 : 0.0)) < 1e-15);
        }
    }
    for (std::size_t y = 0; y < 4; ++y) {
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                double ov = overlap2(bases[y][a], bases[y][b]);
                CHECK(std::abs(ov - (a == b ? 1.0 : 0.0)) < 1e-10);
            }
        }
        for (std::size_t z = y + 1; z < 4; ++z) {
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    CHECK(std::abs(overlap2(bases[y][a], bases[z][b]) - 1.0 / 3.0) < 1e-10);
                }
            }
        }
    }
    CHECK(overlap2(bases[1][0], bases[2][1]) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("equiangular states: overlaps, resolution, and the n=4 family") {
    for (std::size_t n : {2, 3, 4, 5, 6}) {
        auto st = equiangular_states(n);
        REQUIRE(st.size() == n);
        double target = 1.0 / ((n - 1.0) * (n - 1.0));
        CMatrix sum(n - 1, n - 1);
        for (std::size_t y = 0; y < n; ++y) {
            sum += st[y].projector();
            for (std::size_t z = y + 1; z < n; ++z) {
                CHECK(std::abs(overlap2(st[y], st[z]) - target) < 1e-10);
            }
        }
        CHECK(max_diff(sum, CMatrix::identity(n - 1) * cxd(n / (n - 1.0))) < 1e-10);
    }

    // n=4 matches (1, i^a, (-1)^a)/sqrt(3) exactly.
    auto st = equiangular_states(4);
    for (int a = 0; a < 4; ++a) {
        std::vector<cxd> ref = {1.0, std::pow(cxd(0, 1), a), std::pow(cxd(-1, 0), a)};
        for (auto& z : ref) {
            z /= std::sqrt(3.0);
        }
        for (int j = 0; j < 3; ++j) {
            CHECK(std::abs(st[a][j] - ref[j]) < 1e-12);
        }
    }
    CHECK_THROWS_AS(equiangular_states(1), std::invalid_argument);
}

TEST_CASE("exclusion states are orthogonal mixtures with spectrum {0, 1/2, 1/2}") {
    auto rho = exclusion_states();
    auto states = sic_states();
    Povm sic = sic_povm();
    for (std::size_t x = 0; x < 9; ++x) {
        CHECK(trace(rho[x].matrix()).real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(real_inner(rho[x].matrix(), states[x].projector()) < 1e-10);
        auto eg = eig_hermitian(rho[x].hermitian());
        CHECK(std::abs(eg.eigenvalues[0]) < 1e-10);
        CHECK(eg.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(eg.eigenvalues[2] == doctest::Approx(0.5).epsilon(1e-10));

        auto p = sic.probabilities(rho[x]);
        for (std::size_t a = 0; a < 9; ++a) {
            CHECK(std::abs(p[a] - (a == x ? 0.0 : 1.0 / 8.0)) < 1e-10);
        }
    }
}

TEST_CASE("exclusion state 1 is the even mixture of its orthogonal pair") {
    auto rho = exclusion_states();
    Ket a(std::vector<cxd>{1, 0, 0});
    Ket b(std::vector<cxd>{0, 1, 1});
    CMatrix mix = (a.projector() + b.projector()) * cxd(0.5);
    CHECK(max_diff(rho[0].matrix(), mix) < 1e-12);
}

TEST_CASE("depolarize endpoints and composition") {
    Povm sic = sic_povm();
    Povm same = depolarize(sic, 1.0);
    for (std::size_t a = 0; a < 9; ++a) {
        CHECK(max_diff(same.effect(a).matrix(), sic.effect(a).matrix()) < 1e-14);
    }
    Povm flat = depolarize(sic, 0.0);
    for (std::size_t a = 0; a < 9; ++a) {
        CHECK(max_diff(flat.effect(a).matrix(), CMatrix::identity(3) * cxd(1.0 / 9.0)) < 1e-14);
    }
    Povm two_step = depolarize(depolarize(sic, 0.8), 0.65);
    Povm one_step = depolarize(sic, 0.8 * 0.65);
    for (std::size_t a = 0; a < 9; ++a) {
        CHECK(max_diff(two_step.effect(a).matrix(), one_step.effect(a).matrix()) < 1e-10);
    }
    CHECK_THROWS_AS(depolarize(sic, 1.5), std::invalid_argument);

    // At v = 1/2 each effect has purity tr(E^2) = 1/18.
    Povm half = depolarize(sic, 0.5);
    for (std::size_t a = 0; a < 9; ++a) {
        CHECK(real_inner(half.effect(a).matrix(), half.effect(a).matrix()) ==
              doctest::Approx(1.0 / 18.0).epsilon(1e-10));
    }
}

TEST_CASE("povm_fidelity: identity, monotonicity, hand-computed qubit pair") {
    Povm sic = sic_povm();
    CHECK(povm_fidelity(sic, sic) == doctest::Approx(1.0).epsilon(1e-10));

    double prev = 1.0;
    for (double v : {0.99, 0.98, 0.97, 0.96, 0.95, 0.94, 0.93, 0.92, 0.91, 0.90}) {
        double f = povm_fidelity(sic, depolarize(sic, v));
        CHECK(f < prev);
        prev = f;
    }

    // Qubit example with closed form: {|0><0|, |1><1|} against
    // {|+><+|, |-><-|} has w_j = 1/2, F_j = 1/2, so F = (2 * 1/2 / sqrt 2)^2.
    std::vector<Hermitian> za = {Hermitian(CMatrix::diag({1.0, 0.0})),
                                 Hermitian(CMatrix::diag({0.0, 1.0}))};
    Ket plus(std::vector<cxd>{M_SQRT1_2, M_SQRT1_2});
    Ket minus(std::vector<cxd>{M_SQRT1_2, -M_SQRT1_2});
    std::vector<Hermitian> xa = {Hermitian(plus.projector()), Hermitian(minus.projector())};
    CHECK(povm_fidelity(Povm(2, za), Povm(2, xa)) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("povm_fidelity is symmetric on random pairs") {
    Rng rng(12);
    for (int rep = 0; rep < 5; ++rep) {
        Povm p = random_povm(3, 5, rng);
        Povm q = random_povm(3, 5, rng);
        CHECK(std::abs(povm_fidelity(p, q) - povm_fidelity(q, p)) < 1e-10);
    }
    Povm p = random_povm(3, 5, rng);
    Povm q = random_povm(3, 4, rng);
    CHECK_THROWS_AS(povm_fidelity(p, q), std::invalid_argument);
}

TEST_CASE("zero-outcome rule cases and exhaustive verification") {
    CHECK(zero_outcome_rule(1, 1) == 0);
    // <0|psi_1> with psi_1 = (0,1,-1)/sqrt(2) vanishes.
    auto states = sic_states();
    CHECK(std::abs(states[0][0]) < 1e-12);
    CHECK(zero_outcome_rule(5, 3) == 2);  // x0=1, x1=1 -> x0+x1 mod 3

    auto bases = mub_bases();
    for (int x = 1; x <= 9; ++x) {
        for (int y = 1; y <= 4; ++y) {
            int zero_count = 0, zero_at = -1;
            for (int a = 0; a < 3; ++a) {
                double p = overlap2(bases[y - 1][a], states[x - 1]);
                if (p < 1e-10) {
                    ++zero_count;
                    zero_at = a;
                } else {
                    CHECK(p == doctest::Approx(0.5).epsilon(1e-10));
                }
            }
            CHECK(zero_count == 1);
            CHECK(zero_at == zero_outcome_rule(x, y));
        }
    }
    CHECK_THROWS_AS(zero_outcome_rule(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(zero_outcome_rule(1, 5), std::invalid_argument);
}

TEST_CASE("constructed POVMs always satisfy completeness") {
    Rng rng(4);
    for (int rep = 0; rep < 10; ++rep) {
        Povm p = random_povm(3, 6, rng);
        CHECK(p.completeness_error() <= 1e-9);
    }
    // An incomplete set must be rejected.
    std::vector<Hermitian> eff = {Hermitian(CMatrix::diag({0.5, 0.0})),
                                  Hermitian(CMatrix::diag({0.0, 0.5}))};
    CHECK_THROWS_AS(Povm(2, eff), std::invalid_argument);
}
