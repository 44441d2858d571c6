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

#include <string>
#include <vector>

#include "sicsim/linalg.hpp"

// Block-structured semidefinite programming with free scalar variables.
//
// A problem is
//
//     maximize    sum_j tr(C_j X_j) + sum_k c_k s_k
//     subject to  sum_j tr(A_ij X_j) + sum_k a_ik s_k = b_i   (i = 1..m)
//                 X_j >= 0 (Hermitian PSD blocks),  s free reals
//
// with Hermitian coefficient matrices. The solver runs a homogeneous
// self-dual embedding with Nesterov-Todd scaling and a Mehrotra
// predictor-corrector, so it needs no feasible start and classifies
// infeasible instances by the direction of the (tau, kappa) ray. Free
// scalars stay in the Newton system: after the PSD blocks are eliminated
// through the scaling, the remaining saddle system in (dy, du) is solved
// with a Cholesky factor of the Schur complement S = A H A^T and a second
// small factorization of B^T S^-1 B.
namespace sicsim::sdp {

struct BlockSpec {
    std::string name;
    std::size_t dim = 0;
};

/// sum_j tr(block_terms[j] X_j) + sum_k scalar_terms[k] s_k.
struct LinearTerm {
    std::vector<std::pair<std::size_t, CMatrix>> block_terms;
    std::vector<std::pair<std::size_t, double>> scalar_terms;
};

struct Constraint {
    LinearTerm lhs;
    double rhs = 0.0;
};

struct Problem {
    std::vector<BlockSpec> blocks;
    std::vector<std::string> scalars;
    LinearTerm objective;  // maximized
    std::vector<Constraint> constraints;

    std::size_t add_block(const std::string& name, std::size_t dim);
    std::size_t add_scalar(const std::string& name);

    /// Append the real scalar constraint lhs == rhs.
    void add_constraint(LinearTerm lhs, double rhs);

    /// Append the Hermitian matrix equality
    ///     sum_j w_j X_{block_j} + sum_k s_k M_k == rhs
    /// expanded into dim^2 real constraints (diagonal, real and imaginary
    /// off-diagonal parts).
    void add_matrix_equality(const std::vector<std::pair<std::size_t, double>>& block_weights,
                             const std::vector<std::pair<std::size_t, CMatrix>>& scalar_coeffs,
                             const CMatrix& rhs);

    void validate() const;
};

enum class SolveStatus { optimal, infeasible, max_iterations };

/// Objective values seen at one interior-point iteration (maximization
/// convention). `dual_objective` is the raw dual value of the scaled
/// iterate; `dual_bound` is the certified bracket primal + complementarity
/// gap, which dominates the primal objective at every iteration and
/// coincides with the dual objective once the residuals vanish.
struct IterationStat {
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double dual_bound = 0.0;
    double gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double tau = 0.0;
    double kappa = 0.0;
    double mu = 0.0;
};

struct Solution {
    SolveStatus status = SolveStatus::max_iterations;
    double objective_value = 0.0;
    std::vector<CMatrix> block_values;
    std::vector<double> scalar_values;
    double primal_residual = 0.0;
    double duality_gap = 0.0;
    std::size_t iterations = 0;
    std::string detail;
    std::vector<IterationStat> trace;
};

struct SolveOptions {
    double tol = 1e-8;
    std::size_t max_iterations = 200;
    bool record_trace = false;
};

Solution solve(const Problem& p, const SolveOptions& opts = {});
inline Solution solve(const Problem& p, double tol) { return solve(p, SolveOptions{tol}); }

/// Standard Hermitian-to-real-symmetric embedding
/// H -> [[Re H, -Im H], [Im H, Re H]] applied to every block and
/// coefficient (with a factor 1/2 so objective and constraint values are
/// preserved). The optimum of the embedded problem equals the original.
Problem complex_to_real(const Problem& p);

/// Recover a solution of `p` from a solution of complex_to_real(p).
Solution lift_real_solution(const Problem& p, const Solution& real_sol);

}  // namespace sicsim::sdp
