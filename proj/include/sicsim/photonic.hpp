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
#include <vector>

#include "sicsim/povm.hpp"

namespace sicsim {

/// One Mach-Zehnder interferometer: external phase phi on the first input
/// arm, internal phase theta, and a fringe visibility. At visibility 1 the
/// transfer is BS P(theta) BS P(phi) with balanced splitters; below 1 the
/// inner splitter ratio is detuned to r = (1 + sqrt(1 - V^2))/2, which is
/// exactly the imbalance that produces a 1/2 - (V/2) cos(theta) fringe.
struct MziSetting {
    double theta = 0.0;
    double phi = 0.0;
    double visibility = 1.0;
};

enum class StageKind { SubspaceUnitary, PortPermutation, PhaseLayer };

/// A single layer of the staged interferometer program. Exactly one payload
/// field is meaningful depending on `kind`:
///   SubspaceUnitary: `unitary` acts on the listed ports (identity elsewhere)
///   PortPermutation: `permutation` is a full-width map, out[perm[p]] = in[p]
///   PhaseLayer:      `phases[i]` multiplies port ports[i] by e^{i phase}
struct CircuitStage {
    StageKind kind = StageKind::SubspaceUnitary;
    std::vector<std::size_t> ports;
    CMatrix unitary;
    std::vector<std::size_t> permutation;
    std::vector<double> phases;
};

/// Staged interferometer program. Ports not listed in `input_ports` are
/// ancilla ports starting in vacuum. `outcome_ports[a]` names the output
/// port whose detector carries outcome label a; it must be a permutation of
/// all ports so that outcome probabilities are conserved.
struct PhotonicCircuit {
    std::size_t width = 0;
    std::vector<CircuitStage> stages;
    std::vector<std::size_t> input_ports;
    std::vector<std::size_t> outcome_ports;

    void validate() const;
};

/// 2x2 MZI transfer for the given setting.
CMatrix mzi_unitary(const MziSetting& s);

/// Embed a k x k unitary on the listed ports of a width-wide identity.
CMatrix subspace_embed(const CMatrix& u, const std::vector<std::size_t>& ports,
                       std::size_t width);

/// Transfer matrix of one stage at the given width. When `noisy` is set,
/// subspace stages are rebuilt from their MZI mesh at the stage visibility.
CMatrix stage_unitary(const CircuitStage& stage, std::size_t width, bool noisy = false,
                      double visibility = 1.0);

/// Ideal compiled transfer matrix: ordered product of the stage unitaries.
CMatrix compile_unitary(const PhotonicCircuit& c);

/// POVM induced on the input-port subspace by a transfer matrix: outcome a
/// is detection at outcome_ports[a], with effect given by that row of the
/// matrix restricted to the input ports.
Povm induced_povm_from_matrix(const CMatrix& w, const std::vector<std::size_t>& input_ports,
                              const std::vector<std::size_t>& outcome_ports);
Povm induced_povm(const PhotonicCircuit& c);

/// The cascaded subspace-unitary program realizing the SIC measurement:
/// analysis stage on the input triple, a triple of three-mode unitaries, a
/// port swap, and a parallel triple of Fourier-type unitaries.
PhotonicCircuit build_sic_circuit();

/// Projective measurement circuit for MUB basis y in 1..4 (width 3,
/// outcomes on ports 0, 1, 2).
PhotonicCircuit build_mub_circuit(int y);

/// Two-MZI-plus-phases preparation circuit mapping the source port (port 0)
/// to the requested pure state.
PhotonicCircuit build_prep_circuit(const Ket& psi);

/// State produced by a preparation circuit from its source port.
Ket prepared_state(const PhotonicCircuit& prep);

/// MZI mesh of a small unitary: U = diag(e^{i out_phases}) M_k ... M_1 with
/// each element an MZI on an adjacent local port pair, applied in order.
struct MziMesh {
    struct Element {
        std::size_t port_a = 0, port_b = 0;  // local indices, port_b = port_a + 1
        MziSetting setting;
    };
    std::size_t dim = 0;
    std::vector<Element> elements;
    std::vector<double> output_phases;
};

MziMesh decompose_unitary(const CMatrix& u);
/// Rebuild the mesh transfer with every MZI at the given visibility.
CMatrix recompose_mesh(const MziMesh& mesh, double visibility);

/// Compiled transfer of a circuit with per-stage fringe visibilities; the
/// result stays unitary (splitter imbalance is coherent), so output
/// probabilities are conserved without renormalization.
struct NoisyTransfer {
    CMatrix matrix;
    std::vector<std::size_t> input_ports;
    std::vector<std::size_t> outcome_ports;

    /// Outcome-ordered output probabilities for a pure input on the
    /// input ports.
    std::vector<double> probabilities(const Ket& psi) const;
};

NoisyTransfer apply_visibility_noise(const PhotonicCircuit& c, const std::vector<double>& v_map);
NoisyTransfer apply_uniform_visibility(const PhotonicCircuit& c, double v);

/// Multinomial counts at fixed total (default) or with a Poisson-fluctuating
/// total when `poisson_total` is set.
std::vector<std::uint64_t> sample_counts(const std::vector<double>& probabilities,
                                         std::uint64_t n_total, std::uint64_t seed,
                                         bool poisson_total = false);

}  // namespace sicsim
