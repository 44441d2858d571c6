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

#include "sicsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sicsim {

double Rng::gauss() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 1e-300) {
        u1 = uniform01();
    }
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("Rng::below: n must be positive");
    }
    // Rejection to avoid modulo bias.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = gen_();
    } while (x >= limit);
    return x % n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    // splitmix64 finalizer over the mixed words.
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(seed);
    h = mix(h ^ mix(a + 0x1000));
    h = mix(h ^ mix(b + 0x2000));
    h = mix(h ^ mix(c + 0x3000));
    return h;
}

std::vector<cxd> random_ket(std::size_t dim, Rng& rng) {
    std::vector<cxd> v(dim);
    double n2 = 0;
    for (auto& z : v) {
        z = cxd(rng.gauss(), rng.gauss());
        n2 += std::norm(z);
    }
    double inv = 1.0 / std::sqrt(n2);
    for (auto& z : v) {
        z *= inv;
    }
    return v;
}

CMatrix random_unitary(std::size_t dim, Rng& rng) {
    CMatrix g(dim, dim);
    for (auto& z : g.entries()) {
        z = cxd(rng.gauss(), rng.gauss());
    }
    // Modified Gram-Schmidt on columns, R diagonal forced positive so the
    // distribution is Haar.
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            cxd ip = 0;
            for (std::size_t r = 0; r < dim; ++r) {
                ip += std::conj(g(r, prev)) * g(r, c);
            }
            for (std::size_t r = 0; r < dim; ++r) {
                g(r, c) -= ip * g(r, prev);
            }
        }
        double n2 = 0;
        for (std::size_t r = 0; r < dim; ++r) {
            n2 += std::norm(g(r, c));
        }
        double inv = 1.0 / std::sqrt(n2);
        for (std::size_t r = 0; r < dim; ++r) {
            g(r, c) *= inv;
        }
    }
    return g;
}

Hermitian random_hermitian(std::size_t dim, Rng& rng, double scale) {
    CMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        m(r, r) = scale * rng.gauss();
        for (std::size_t c = r + 1; c < dim; ++c) {
            cxd z = scale * cxd(rng.gauss(), rng.gauss()) * M_SQRT1_2;
            m(r, c) = z;
            m(c, r) = std::conj(z);
        }
    }
    return Hermitian(m);
}

std::vector<std::uint64_t> multinomial(const std::vector<double>& probs, std::uint64_t n,
                                       Rng& rng) {
    std::vector<double> cum(probs.size());
    double acc = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] < -kTol.prob_sum) {
            throw std::invalid_argument("multinomial: negative probability");
        }
        acc += std::max(probs[i], 0.0);
        cum[i] = acc;
    }
    if (std::abs(acc - 1.0) > kTol.prob_sum) {
        throw std::invalid_argument("multinomial: probabilities sum to " + std::to_string(acc));
    }
    std::vector<std::uint64_t> counts(probs.size(), 0);
    for (std::uint64_t k = 0; k < n; ++k) {
        double u = rng.uniform01() * acc;
        std::size_t lo = 0, hi = probs.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (u < cum[mid]) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        ++counts[lo];
    }
    return counts;
}

std::uint64_t poisson(double mean, Rng& rng) {
    if (mean < 0) {
        throw std::invalid_argument("poisson: negative mean");
    }
    // Normal approximation is fine at the count scales used here; exact
    // inversion below the crossover.
    if (mean > 256) {
        double x = std::round(mean + std::sqrt(mean) * rng.gauss());
        return x < 0 ? 0 : static_cast<std::uint64_t>(x);
    }
    double l = std::exp(-mean);
    double p = 1.0;
    std::uint64_t k = 0;
    do {
        ++k;
        p *= rng.uniform01();
    } while (p > l);
    return k - 1;
}

}  // namespace sicsim
