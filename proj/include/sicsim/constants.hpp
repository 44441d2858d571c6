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

namespace sicsim {

// Central numeric tolerance record. Every module reads its thresholds from
// here so the whole test suite has a single knob.
struct Tolerances {
    double atol = 1e-10;              // generic absolute comparison tolerance
    double symmetrize = 1e-12;        // max allowed ||A - A^dag||_inf after symmetrization
    double completeness = 1e-9;       // entrywise tolerance for sum(E_a) == I
    double psd = 1e-10;               // allowed negative eigenvalue magnitude
    double sqrt_reject = 1e-8;        // sqrt_psd rejects inputs below -this
    double prob_sum = 1e-9;           // probability vectors must sum to 1 within this
    double zero_prob_guard = 1e-12;   // likelihood guards replace smaller probabilities
};

inline constexpr Tolerances kTol{};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sicsim
