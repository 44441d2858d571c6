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
#include <vector>

#include "sicsim/linalg.hpp"

namespace sicsim {

/// Normalized pure state. Constructors fix the global phase so the first
/// nonzero amplitude is real positive, making serialized kets comparable.
class Ket {
  public:
    Ket() = default;
    explicit Ket(std::vector<cxd> amplitudes);

    std::size_t dim() const { return amps_.size(); }
    const std::vector<cxd>& amplitudes() const { return amps_; }
    const cxd& operator[](std::size_t i) const { return amps_[i]; }

    CMatrix projector() const { return CMatrix::outer(amps_); }

  private:
    std::vector<cxd> amps_;
};

cxd inner(const Ket& a, const Ket& b);
/// |<a|b>|^2.
double overlap2(const Ket& a, const Ket& b);

/// Unit-trace PSD matrix; validated on construction.
class DensityMatrix {
  public:
    DensityMatrix() = default;
    explicit DensityMatrix(const Hermitian& m);
    explicit DensityMatrix(const Ket& k) : DensityMatrix(Hermitian(k.projector())) {}

    std::size_t dim() const { return m_.dim(); }
    const CMatrix& matrix() const { return m_.matrix(); }
    const Hermitian& hermitian() const { return m_; }

  private:
    Hermitian m_;
};

/// Ordered collection of PSD effects summing to the identity; both
/// properties are validated on construction.
class Povm {
  public:
    Povm() = default;
    Povm(std::size_t dim, std::vector<Hermitian> effects);

    std::size_t dim() const { return dim_; }
    std::size_t num_outcomes() const { return effects_.size(); }
    const std::vector<Hermitian>& effects() const { return effects_; }
    const Hermitian& effect(std::size_t a) const { return effects_[a]; }

    /// Entrywise deviation of sum(E_a) from the identity.
    double completeness_error() const;
    /// p(a) = tr(rho E_a) for every outcome.
    std::vector<double> probabilities(const DensityMatrix& rho) const;
    std::vector<double> probabilities(const Ket& psi) const;

  private:
    std::size_t dim_ = 0;
    std::vector<Hermitian> effects_;
};

/// 9x9 transfer matrix realizing the qutrit SIC measurement on a system
/// encoded on three of nine ports, the rest starting in vacuum.
struct NaimarkUnitary {
    CMatrix matrix;                          // 9x9 unitary
    std::array<std::size_t, 3> system_ports;  // ports carrying the qutrit
};

/// The nine symmetric qutrit states, outcome order matching the 3x3
/// row-major display (rows select the zero component).
std::vector<Ket> sic_states();

/// E_a = |psi_a><psi_a| / 3.
Povm sic_povm();

/// Transfer matrix whose output-port amplitudes analyze the SIC states:
/// detection at port a has amplitude <psi_{a+1}|in> / sqrt(3) for input on
/// the system ports (0, 3, 6).
NaimarkUnitary naimark_unitary();

/// Four mutually unbiased qutrit bases; bases[0] is computational, each
/// basis is an orthonormal triple.
std::vector<std::vector<Ket>> mub_bases();

/// n unit vectors in dimension n-1 with |<phi_y|phi_y'>|^2 = 1/(n-1)^2,
/// built from the Fourier matrix with its last row removed.
std::vector<Ket> equiangular_states(std::size_t n);

/// rho_x = (I - |psi_x><psi_x|)/2 for the nine SIC states.
std::vector<DensityMatrix> exclusion_states();

/// E_a -> v E_a + (1-v) tr(E_a) I/d.
Povm depolarize(const Povm& p, double v);

/// Measurement fidelity F = (sum_j w_j sqrt(F_j))^2 with
/// w_j = sqrt(tr E_j tr E'_j)/d and F_j the Uhlmann fidelity of the
/// normalized effects.
double povm_fidelity(const Povm& p, const Povm& q);

/// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2 of two density-like
/// PSD matrices of unit trace.
double state_fidelity_matrices(const Hermitian& a, const Hermitian& b);

/// The basis outcome a in {0,1,2} that never fires when SIC state x (1..9)
/// is measured in MUB basis y (1..4).
int zero_outcome_rule(int x, int y);

}  // namespace sicsim
