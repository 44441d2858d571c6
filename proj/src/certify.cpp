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

#include "sicsim/certify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sicsim/parallel.hpp"
#include "sicsim/rng.hpp"

namespace sicsim {

namespace {

std::string tuple_name(const std::vector<std::size_t>& t) {
    std::string s = "T";
    for (auto v : t) {
        s += "_" + std::to_string(v + 1);
    }
    return s;
}

void check_nine_qutrit_povm(const Povm& p) {
    if (p.dim() != 3 || p.num_outcomes() != 9) {
        throw std::invalid_argument("expected a nine-outcome qutrit measurement");
    }
}

sdp::Solution solve_or_throw(const sdp::Problem& prob, double tol, const std::string& context) {
    sdp::Solution sol = sdp::solve(prob, sdp::SolveOptions{tol});
    if (sol.status != sdp::SolveStatus::optimal) {
        throw std::runtime_error("sdp solve failed (" + sol.detail + ") in " + context);
    }
    return sol;
}

}  // namespace

SubsetFamily subset_family(std::size_t m, std::size_t n) {
    if (n < 1 || n > m) {
        throw std::invalid_argument("subset_family: need 1 <= n <= m");
    }
    SubsetFamily fam;
    fam.m = m;
    fam.n = n;
    std::vector<std::size_t> cur(n);
    for (std::size_t i = 0; i < n; ++i) {
        cur[i] = i;
    }
    for (;;) {
        fam.tuples.push_back(cur);
        std::size_t i = n;
        bool advanced = false;
        while (i-- > 0) {
            if (cur[i] + (n - i) < m) {
                ++cur[i];
                for (std::size_t k = i + 1; k < n; ++k) {
                    cur[k] = cur[k - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            return fam;
        }
    }
}

void DistrustVector::validate() const {
    for (double e : eps) {
        if (!(e >= 0.0 && e <= 1.0)) {
            throw std::invalid_argument("DistrustVector: entries must lie in [0, 1]");
        }
    }
}

DistrustVector reference_distrust() {
    return DistrustVector{{0.0084, 0.002, 0.011, 0.008, 0.0061, 0.0115, 0.0058, 0.0089, 0.004}};
}

void ToleranceRegion::validate() const {
    if (radii.size() != 9) {
        throw std::invalid_argument("ToleranceRegion: nine rows required");
    }
    for (const auto& row : radii) {
        if (row.size() != 9) {
            throw std::invalid_argument("ToleranceRegion: nine columns required");
        }
        for (double r : row) {
            if (!(r >= 0.0) || !std::isfinite(r)) {
                throw std::invalid_argument("ToleranceRegion: radii must be nonnegative");
            }
        }
    }
}

ToleranceRegion tolerance_region_fraction(const std::vector<std::vector<double>>& freq,
                                          double fraction) {
    if (fraction < 0) {
        throw std::invalid_argument("tolerance_region_fraction: negative fraction");
    }
    ToleranceRegion out;
    out.radii.assign(9, std::vector<double>(9, 0.0));
    for (std::size_t x = 0; x < 9; ++x) {
        for (std::size_t a = 0; a < 9; ++a) {
            out.radii[x][a] = fraction * freq.at(x).at(a);
        }
    }
    out.validate();
    return out;
}

ToleranceRegion tolerance_region_poisson(const std::vector<std::vector<std::uint64_t>>& counts,
                                         double k_diag, double k_offdiag) {
    ToleranceRegion out;
    out.radii.assign(9, std::vector<double>(9, 0.0));
    for (std::size_t x = 0; x < 9; ++x) {
        double total = 0;
        for (std::size_t a = 0; a < 9; ++a) {
            total += static_cast<double>(counts.at(x).at(a));
        }
        if (total <= 0) {
            throw std::invalid_argument("tolerance_region_poisson: empty setting");
        }
        for (std::size_t a = 0; a < 9; ++a) {
            double fr = static_cast<double>(counts[x][a]) / total;
            double sigma = std::sqrt(std::max(fr * (1.0 - fr), 0.0) / total);
            out.radii[x][a] = (a == x ? k_diag : k_offdiag) * sigma;
        }
    }
    out.validate();
    return out;
}

// ---------------------------------------------------------------------
// Critical visibility (joint program over all outcome supports)
// ---------------------------------------------------------------------

VisibilitySimulation critical_visibility_simulation(const Povm& p, std::size_t n,
                                                    const CertifyOptions& opts) {
    check_nine_qutrit_povm(p);
    if (n < 2 || n > 9) {
        throw std::invalid_argument("critical_visibility: n must be in 2..9");
    }
    SubsetFamily fam = subset_family(9, n);
    const std::size_t nt = fam.tuples.size();

    sdp::Problem prob;
    std::size_t v_idx = prob.add_scalar("v");
    // One subnormalized effect per (tuple, live outcome) and one weight
    // scalar per tuple.
    std::vector<std::vector<std::size_t>> blk(nt);
    std::vector<std::size_t> weight_idx(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        weight_idx[t] = prob.add_scalar("p_" + tuple_name(fam.tuples[t]));
        blk[t].resize(n);
        for (std::size_t pos = 0; pos < n; ++pos) {
            blk[t][pos] = prob.add_block(
                tuple_name(fam.tuples[t]) + "_a" + std::to_string(fam.tuples[t][pos] + 1), 3);
        }
    }
    CMatrix eye = CMatrix::identity(3);
    // The mixture must reproduce the depolarized effect for every outcome.
    for (std::size_t a = 0; a < 9; ++a) {
        std::vector<std::pair<std::size_t, double>> weights;
        for (std::size_t t = 0; t < nt; ++t) {
            for (std::size_t pos = 0; pos < n; ++pos) {
                if (fam.tuples[t][pos] == a) {
                    weights.emplace_back(blk[t][pos], 1.0);
                }
            }
        }
        double tr_e = trace(p.effect(a).matrix()).real();
        CMatrix noise_part = eye * cxd(tr_e / 3.0);
        CMatrix v_coeff = (p.effect(a).matrix() - noise_part) * cxd(-1.0);
        prob.add_matrix_equality(weights, {{v_idx, v_coeff}}, noise_part);
    }
    // Each component is a subnormalized measurement: its effects sum to a
    // multiple of the identity, the multiple being the tuple weight.
    for (std::size_t t = 0; t < nt; ++t) {
        std::vector<std::pair<std::size_t, double>> weights;
        for (std::size_t pos = 0; pos < n; ++pos) {
            weights.emplace_back(blk[t][pos], 1.0);
        }
        prob.add_matrix_equality(weights, {{weight_idx[t], eye * cxd(-1.0)}},
                                 CMatrix::zero(3, 3));
    }
    prob.objective.scalar_terms.emplace_back(v_idx, 1.0);

    sdp::Solution sol =
        solve_or_throw(prob, opts.sdp_tol, "critical_visibility n=" + std::to_string(n));
    VisibilitySimulation out;
    out.v_crit = std::clamp(sol.objective_value, 0.0, 1.0);
    out.components.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        SimulationComponent comp;
        comp.tuple = fam.tuples[t];
        comp.weight = sol.scalar_values[weight_idx[t]];
        for (std::size_t pos = 0; pos < n; ++pos) {
            comp.effects.push_back(sol.block_values[blk[t][pos]]);
        }
        out.components.push_back(std::move(comp));
    }
    out.diagnostics = std::move(sol);
    out.diagnostics.block_values.clear();  // already exposed via components
    return out;
}

double critical_visibility(const Povm& p, std::size_t n, const CertifyOptions& opts) {
    return critical_visibility_simulation(p, n, opts).v_crit;
}

// ---------------------------------------------------------------------
// State discrimination with exact preparations
// ---------------------------------------------------------------------

namespace {

struct MeasurementStep {
    double value = 0.0;
    std::vector<CMatrix> effects;  // aligned with tuple positions
};

// max (1/9) sum_{a in T} tr(target_a E_a) over measurements supported on T.
MeasurementStep best_measurement_on_support(const std::vector<CMatrix>& targets,
                                            const std::vector<std::size_t>& tuple, double tol) {
    sdp::Problem prob;
    std::vector<std::size_t> blk(tuple.size());
    for (std::size_t pos = 0; pos < tuple.size(); ++pos) {
        blk[pos] = prob.add_block("E_a" + std::to_string(tuple[pos] + 1), 3);
        prob.objective.block_terms.emplace_back(blk[pos], targets[tuple[pos]] * cxd(1.0 / 9.0));
    }
    std::vector<std::pair<std::size_t, double>> weights;
    for (std::size_t pos = 0; pos < tuple.size(); ++pos) {
        weights.emplace_back(blk[pos], 1.0);
    }
    prob.add_matrix_equality(weights, {}, CMatrix::identity(3));

    sdp::Solution sol = solve_or_throw(prob, tol, "discrimination " + tuple_name(tuple));
    MeasurementStep out;
    out.value = sol.objective_value;
    for (std::size_t pos = 0; pos < tuple.size(); ++pos) {
        out.effects.push_back(sol.block_values[blk[pos]]);
    }
    return out;
}

}  // namespace

DiscriminationResult discrimination_bound_detailed(const std::vector<Ket>& states, std::size_t n,
                                                   const CertifyOptions& opts) {
    if (states.size() != 9) {
        throw std::invalid_argument("discrimination_bound: nine states required");
    }
    if (n < 2 || n > 9) {
        throw std::invalid_argument("discrimination_bound: n must be in 2..9");
    }
    std::vector<CMatrix> targets;
    targets.reserve(9);
    for (const auto& s : states) {
        targets.push_back(s.projector());
    }
    SubsetFamily fam = subset_family(9, n);
    DiscriminationResult out;
    out.per_subset.resize(fam.tuples.size());
    parallel_for(fam.tuples.size(), opts.threads, [&](std::size_t t) {
        out.per_subset[t] = {
            fam.tuples[t],
            best_measurement_on_support(targets, fam.tuples[t], opts.sdp_tol).value};
    });
    out.p_suc = 0.0;
    for (const auto& sv : out.per_subset) {
        out.p_suc = std::max(out.p_suc, sv.value);
    }
    return out;
}

double discrimination_bound(const std::vector<Ket>& states, std::size_t n,
                            const CertifyOptions& opts) {
    return discrimination_bound_detailed(states, n, opts).p_suc;
}

// ---------------------------------------------------------------------
// Seesaw for distrusted preparations
// ---------------------------------------------------------------------

namespace {

// max tr(rho C) s.t. tr rho = 1, tr(rho P_target) >= 1 - eps, rho >= 0.
double best_state_in_ball(const CMatrix& c, const CMatrix& target_proj, double eps, double tol,
                          CMatrix& rho_out) {
    sdp::Problem prob;
    std::size_t rho = prob.add_block("rho", 3);
    std::size_t slack = prob.add_block("s", 1);
    prob.objective.block_terms.emplace_back(rho, c);
    sdp::LinearTerm tr_row;
    tr_row.block_terms.emplace_back(rho, CMatrix::identity(3));
    prob.add_constraint(std::move(tr_row), 1.0);
    sdp::LinearTerm fid_row;
    fid_row.block_terms.emplace_back(rho, target_proj);
    fid_row.block_terms.emplace_back(slack, CMatrix::identity(1) * cxd(-1.0));
    prob.add_constraint(std::move(fid_row), 1.0 - eps);

    sdp::Solution sol = solve_or_throw(prob, tol, "distrust state step");
    rho_out = sol.block_values[rho];
    return sol.objective_value;
}

std::vector<CMatrix> random_states_in_balls(const std::vector<Ket>& targets,
                                            const DistrustVector& d, Rng& rng) {
    std::vector<CMatrix> out;
    out.reserve(9);
    for (std::size_t a = 0; a < 9; ++a) {
        auto chi = random_ket(3, rng);
        cxd ip = 0;
        for (int i = 0; i < 3; ++i) {
            ip += std::conj(targets[a][i]) * chi[i];
        }
        double n2 = 0;
        for (int i = 0; i < 3; ++i) {
            chi[i] -= ip * targets[a][i];
            n2 += std::norm(chi[i]);
        }
        std::vector<cxd> amp(3);
        if (n2 < 1e-20) {
            for (int i = 0; i < 3; ++i) {
                amp[i] = targets[a][i];
            }
        } else {
            // Boundary-biased radius: most restarts begin near the edge of
            // the allowed infidelity ball.
            double s = d.eps[a] * std::pow(rng.uniform01(), 0.25);
            double c0 = std::sqrt(1.0 - s), c1 = std::sqrt(s / n2);
            for (int i = 0; i < 3; ++i) {
                amp[i] = c0 * targets[a][i] + c1 * chi[i];
            }
        }
        out.push_back(CMatrix::outer(amp));
    }
    return out;
}

double seesaw_once(const std::vector<Ket>& targets, const DistrustVector& d,
                   const std::vector<std::size_t>& tuple, std::uint64_t seed, double tol) {
    Rng rng(seed);
    std::vector<CMatrix> proj;
    proj.reserve(9);
    for (const auto& t : targets) {
        proj.push_back(t.projector());
    }
    std::vector<CMatrix> rho = random_states_in_balls(targets, d, rng);
    double prev = -1.0, value = 0.0;
    for (int it = 0; it < 200; ++it) {
        MeasurementStep ms = best_measurement_on_support(rho, tuple, tol);
        value = 0.0;
        for (std::size_t pos = 0; pos < tuple.size(); ++pos) {
            std::size_t a = tuple[pos];
            CMatrix rho_new;
            value += best_state_in_ball(ms.effects[pos] * cxd(1.0 / 9.0), proj[a], d.eps[a], tol,
                                        rho_new);
            rho[a] = rho_new;
        }
        if (value - prev < 1e-7) {
            break;
        }
        prev = value;
    }
    return value;
}

}  // namespace

DiscriminationResult discrimination_bound_distrust_detailed(const std::vector<Ket>& states,
                                                            const DistrustVector& d,
                                                            std::size_t n, std::size_t restarts,
                                                            std::uint64_t seed,
                                                            const CertifyOptions& opts) {
    if (states.size() != 9) {
        throw std::invalid_argument("discrimination_bound_distrust: nine states required");
    }
    if (restarts < 1) {
        throw std::invalid_argument("discrimination_bound_distrust: restarts must be >= 1");
    }
    d.validate();
    SubsetFamily fam = subset_family(9, n);
    const std::size_t nt = fam.tuples.size();
    std::vector<double> best(nt * restarts, 0.0);
    parallel_for(nt * restarts, opts.threads, [&](std::size_t task) {
        std::size_t t = task / restarts;
        std::size_t r = task % restarts;
        best[task] = seesaw_once(states, d, fam.tuples[t], derive_seed(seed, t, r), opts.sdp_tol);
    });
    DiscriminationResult out;
    out.per_subset.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        double v = 0;
        for (std::size_t r = 0; r < restarts; ++r) {
            v = std::max(v, best[t * restarts + r]);
        }
        out.per_subset[t] = {fam.tuples[t], v};
        out.p_suc = std::max(out.p_suc, v);
    }
    return out;
}

double discrimination_bound_distrust(const std::vector<Ket>& states, const DistrustVector& d,
                                     std::size_t n, std::size_t restarts, std::uint64_t seed,
                                     const CertifyOptions& opts) {
    return discrimination_bound_distrust_detailed(states, d, n, restarts, seed, opts).p_suc;
}

// ---------------------------------------------------------------------
// Measurement-device-independent randomness
// ---------------------------------------------------------------------

MdiRandomness mdi_guessing_probability(const std::vector<DensityMatrix>& states,
                                       const std::vector<std::vector<double>>& observed,
                                       int x_star, const std::optional<ToleranceRegion>& region,
                                       const CertifyOptions& opts) {
    if (states.size() != 9 || observed.size() != 9) {
        throw std::invalid_argument("mdi_guessing_probability: nine states and table rows");
    }
    if (x_star < 1 || x_star > 9) {
        throw std::invalid_argument("mdi_guessing_probability: x_star must be in 1..9");
    }
    if (region) {
        region->validate();
    }
    for (std::size_t x = 0; x < 9; ++x) {
        if (observed[x].size() != 9) {
            throw std::invalid_argument("mdi_guessing_probability: table must be 9x9");
        }
        double sum = 0, slack = 1e-6;
        for (std::size_t a = 0; a < 9; ++a) {
            sum += observed[x][a];
            if (region) {
                slack += region->radii[x][a];
            }
        }
        if (std::abs(sum - 1.0) > slack) {
            throw std::invalid_argument("mdi_guessing_probability: row " + std::to_string(x + 1) +
                                        " sums to " + std::to_string(sum));
        }
    }

    sdp::Problem prob;
    std::vector<std::size_t> blk(81);
    for (std::size_t a = 0; a < 9; ++a) {
        for (std::size_t e = 0; e < 9; ++e) {
            blk[a * 9 + e] =
                prob.add_block("M_" + std::to_string(a + 1) + "_" + std::to_string(e + 1), 3);
        }
    }
    std::vector<std::size_t> pe(9);
    for (std::size_t e = 0; e < 9; ++e) {
        pe[e] = prob.add_scalar("p_e" + std::to_string(e + 1));
    }
    // The device-side marginal per eavesdropper symbol is a subnormalized
    // measurement.
    CMatrix eye = CMatrix::identity(3);
    for (std::size_t e = 0; e < 9; ++e) {
        std::vector<std::pair<std::size_t, double>> weights;
        for (std::size_t a = 0; a < 9; ++a) {
            weights.emplace_back(blk[a * 9 + e], 1.0);
        }
        prob.add_matrix_equality(weights, {{pe[e], eye * cxd(-1.0)}}, CMatrix::zero(3, 3));
    }
    // Observed marginals. With a tolerance region each cell becomes a pair
    // of slack inequalities and the weight normalization must be explicit;
    // without one it is implied by the unit row sums.
    for (std::size_t x = 0; x < 9; ++x) {
        for (std::size_t a = 0; a < 9; ++a) {
            sdp::LinearTerm lhs;
            for (std::size_t e = 0; e < 9; ++e) {
                lhs.block_terms.emplace_back(blk[a * 9 + e], states[x].matrix());
            }
            double r = region ? region->radii[x][a] : 0.0;
            if (r <= 1e-12) {
                prob.add_constraint(std::move(lhs), observed[x][a]);
            } else {
                sdp::LinearTerm upper = lhs;
                std::size_t s_up =
                    prob.add_block("up_" + std::to_string(x + 1) + "_" + std::to_string(a + 1), 1);
                upper.block_terms.emplace_back(s_up, CMatrix::identity(1));
                prob.add_constraint(std::move(upper), observed[x][a] + r);
                std::size_t s_lo =
                    prob.add_block("lo_" + std::to_string(x + 1) + "_" + std::to_string(a + 1), 1);
                lhs.block_terms.emplace_back(s_lo, CMatrix::identity(1) * cxd(-1.0));
                prob.add_constraint(std::move(lhs), observed[x][a] - r);
            }
        }
    }
    if (region) {
        sdp::LinearTerm norm_row;
        for (std::size_t e = 0; e < 9; ++e) {
            norm_row.scalar_terms.emplace_back(pe[e], 1.0);
        }
        prob.add_constraint(std::move(norm_row), 1.0);
    }
    for (std::size_t a = 0; a < 9; ++a) {
        prob.objective.block_terms.emplace_back(
            blk[a * 9 + a], states[static_cast<std::size_t>(x_star - 1)].matrix());
    }

    sdp::Solution sol = sdp::solve(prob, sdp::SolveOptions{opts.sdp_tol});
    if (sol.status == sdp::SolveStatus::infeasible) {
        throw InfeasibleDataError("observed table admits no quantum model: " + sol.detail);
    }
    if (sol.status != sdp::SolveStatus::optimal) {
        throw std::runtime_error("mdi_guessing_probability: solver failed (" + sol.detail + ")");
    }
    MdiRandomness out;
    out.guessing_probability = std::clamp(sol.objective_value, 1.0 / 9.0, 1.0);
    out.bits = -std::log2(out.guessing_probability);
    return out;
}

std::vector<std::vector<double>> exclusion_table(double v) {
    std::vector<std::vector<double>> t(9, std::vector<double>(9, 0.0));
    for (std::size_t x = 0; x < 9; ++x) {
        for (std::size_t a = 0; a < 9; ++a) {
            t[x][a] = v * (a == x ? 0.0 : 1.0 / 8.0) + (1.0 - v) / 9.0;
        }
    }
    return t;
}

std::vector<std::pair<double, double>> randomness_vs_visibility_curve(
    const std::vector<double>& grid, const CertifyOptions& opts) {
    auto rho = exclusion_states();
    std::vector<std::pair<double, double>> out(grid.size());
    parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
        double v = grid[i];
        if (v < 0.0 || v > 1.0) {
            throw std::invalid_argument("randomness_vs_visibility_curve: grid outside [0, 1]");
        }
        MdiRandomness r = mdi_guessing_probability(rho, exclusion_table(v), 1, {}, opts);
        out[i] = {v, r.bits};
    });
    return out;
}

double randomness_crossing_visibility(double bits, double v_lo, double v_hi, double xtol,
                                      const CertifyOptions& opts) {
    auto rho = exclusion_states();
    auto bits_at = [&](double v) {
        return mdi_guessing_probability(rho, exclusion_table(v), 1, {}, opts).bits;
    };
    double lo = v_lo, hi = v_hi;
    if (bits_at(lo) > bits || bits_at(hi) < bits) {
        throw std::invalid_argument("randomness_crossing_visibility: target not bracketed");
    }
    while (hi - lo > xtol) {
        double mid = 0.5 * (lo + hi);
        if (bits_at(mid) >= bits) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace sicsim
