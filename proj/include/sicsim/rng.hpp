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

#include <cstdint>
#include <random>
#include <vector>

#include "sicsim/linalg.hpp"

namespace sicsim {

/// Deterministic random source. All randomized code paths take an explicit
/// Rng (or a seed from which one is derived), never a global; samples drawn
/// here use hand-rolled transforms on the raw 64-bit stream so sequences are
/// identical across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller.
    double gauss();

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    std::mt19937_64& raw() { return gen_; }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0;
};

/// Stream derivation: hash (seed, stream ids) into a fresh seed so parallel
/// tasks get independent, schedule-independent generators.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

/// Haar-random unit vector.
std::vector<cxd> random_ket(std::size_t dim, Rng& rng);

/// Haar-random unitary (QR of a Ginibre matrix with positive R diagonal).
CMatrix random_unitary(std::size_t dim, Rng& rng);

/// GUE-style random Hermitian with entries of the given scale.
Hermitian random_hermitian(std::size_t dim, Rng& rng, double scale = 1.0);

/// Multinomial sample by n independent categorical draws; counts sum to n.
std::vector<std::uint64_t> multinomial(const std::vector<double>& probs, std::uint64_t n,
                                       Rng& rng);

/// Poisson sample (used by the optional fluctuating-total counting mode).
std::uint64_t poisson(double mean, Rng& rng);

}  // namespace sicsim
