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

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sicsim/povm.hpp"
#include "sicsim/sdp.hpp"

namespace sicsim {

/// All n-element subsets of {1..m}, lexicographic, stored 0-based.
struct SubsetFamily {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> tuples;
};

SubsetFamily subset_family(std::size_t m, std::size_t n);

/// Per-preparation infidelity allowances.
struct DistrustVector {
    std::array<double, 9> eps{};

    void validate() const;
};

/// Distrust levels measured on the reference hardware run.
DistrustVector reference_distrust();

/// Per-cell radii softening the observed-probability constraints.
struct ToleranceRegion {
    std::vector<std::vector<double>> radii;  // [x][a], nonnegative

    void validate() const;
};

/// Radii proportional to each observed frequency.
ToleranceRegion tolerance_region_fraction(const std::vector<std::vector<double>>& freq,
                                          double fraction);
/// Poissonian radii: k standard deviations of each relative frequency, with
/// separate multipliers on and off the diagonal (the excluded outcome has a
/// much smaller mean).
ToleranceRegion tolerance_region_poisson(const std::vector<std::vector<std::uint64_t>>& counts,
                                         double k_diag = 5.0, double k_offdiag = 12.0);

struct CertifyOptions {
    double sdp_tol = 1e-8;
    std::size_t threads = 0;  // 0 = hardware concurrency
};

/// One n-outcome simulation component: the subset of live outcomes, its
/// probability weight, and the subnormalized effects on the live positions.
struct SimulationComponent {
    std::vector<std::size_t> tuple;
    double weight = 0.0;
    std::vector<CMatrix> effects;
};

struct VisibilitySimulation {
    double v_crit = 0.0;
    std::vector<SimulationComponent> components;
    sdp::Solution diagnostics;
};

/// Largest depolarizing visibility at which the measurement can be written
/// as a classical mixture of n-outcome measurements. Solved as one joint
/// semidefinite program over all C(9, n) outcome supports.
VisibilitySimulation critical_visibility_simulation(const Povm& p, std::size_t n,
                                                    const CertifyOptions& opts = {});
double critical_visibility(const Povm& p, std::size_t n, const CertifyOptions& opts = {});

struct SubsetValue {
    std::vector<std::size_t> tuple;
    double value = 0.0;
};

struct DiscriminationResult {
    double p_suc = 0.0;
    std::vector<SubsetValue> per_subset;
};

/// Best state-discrimination success probability over measurements with at
/// most n live outcomes, for exactly known preparations: the maximum of
/// C(9, n) independent semidefinite programs.
DiscriminationResult discrimination_bound_detailed(const std::vector<Ket>& states, std::size_t n,
                                                   const CertifyOptions& opts = {});
double discrimination_bound(const std::vector<Ket>& states, std::size_t n,
                            const CertifyOptions& opts = {});

/// Seesaw lower bound on the same quantity when every preparation may be
/// any state within its distrust ball. Alternates measurement and state
/// programs from boundary-biased random starts; the best value over all
/// restarts and subsets is returned.
DiscriminationResult discrimination_bound_distrust_detailed(const std::vector<Ket>& states,
                                                            const DistrustVector& d,
                                                            std::size_t n, std::size_t restarts,
                                                            std::uint64_t seed,
                                                            const CertifyOptions& opts = {});
double discrimination_bound_distrust(const std::vector<Ket>& states, const DistrustVector& d,
                                     std::size_t n, std::size_t restarts, std::uint64_t seed,
                                     const CertifyOptions& opts = {});

/// Observed table admits no quantum model (within the given radii).
class InfeasibleDataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct MdiRandomness {
    double guessing_probability = 0.0;
    double bits = 0.0;
};

/// Measurement-device-independent guessing probability for the outcome of
/// input x_star (1..9), given trusted probe states and the observed
/// response table; bits = -log2 P_g.
MdiRandomness mdi_guessing_probability(const std::vector<DensityMatrix>& states,
                                       const std::vector<std::vector<double>>& observed,
                                       int x_star,
                                       const std::optional<ToleranceRegion>& tol_region = {},
                                       const CertifyOptions& opts = {});

/// (v, R) samples of the randomness extracted from the depolarized
/// exclusion table at x* = 1.
std::vector<std::pair<double, double>> randomness_vs_visibility_curve(
    const std::vector<double>& grid, const CertifyOptions& opts = {});

/// Visibility at which the curve crosses `bits`, located by bisection to
/// the requested resolution.
double randomness_crossing_visibility(double bits, double v_lo, double v_hi, double xtol,
                                      const CertifyOptions& opts = {});

/// Exact depolarized exclusion-protocol table p(a|x) at visibility v.
std::vector<std::vector<double>> exclusion_table(double v);

}  // namespace sicsim
