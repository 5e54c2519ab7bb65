// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UCRB_KNOWN_STRUCTURE_HPP
#define UCRB_KNOWN_STRUCTURE_HPP

#include "ucrb/signal_models.hpp"
#include "ucrb/types.hpp"

namespace ucrb {

struct StructureQuantities {
    double rho = 0.0;  // sum g' g over one pulse
    double E_g = 0.0;  // sum g^2 over one pulse
    double G = 0.0;    // sum g'^2 over one pulse
    Vec gamma;         // sum (n delta + tau0 + (q-1) T_p) g^2
    Vec time2;         // sum (n delta + tau0 + (q-1) T_p)^2 g^2
    CVec h;            // sum s' g_q over the synthesized support
    CVec u;            // sum (t + tau0) s g_q
    CVec k;            // sum s g_q
    Mat c;             // sum g_q g_q'
};

StructureQuantities structure_quantities(const PulseTrain& pt, double tau0);

/// Labels (tau0, f0, bR_1, bI_1, ..., bR_Q, bI_Q).
std::vector<std::string> amplitude_labels(int Q, std::vector<std::string> head = {"tau0", "f0"});

/// Information for (tau0, f0, b) with known pulse shape and scale a. The
/// simplified single-pulse sums are used when pt.disjoint_support(),
/// otherwise the general h/u/c sums. include_a prepends the a parameter
/// after f0.
Fim fim_known_structure(const PulseTrain& pt, const Scenario& sc, bool include_a = false);

/// V = A - B C^{-1} B^T from the closed forms (disjoint support only).
/// A known scale a enters as a^2 P. V12 is identically zero.
Mat v_matrix(const PulseTrain& pt, const Scenario& sc);

/// Joint (= separate) bounds for (tau0, f0) with unknown amplitudes.
/// Closed form under disjoint support, numeric Schur elimination
/// otherwise; notes["forms"] records which.
CrbReport jcrb_known_structure(const PulseTrain& pt, const Scenario& sc);

/// Known-signal bounds written out per pulse (disjoint support only).
CrbReport jcrb_known_signal_pulse(const PulseTrain& pt, const Scenario& sc);

/// 2 P^2 rho^2 sum|b|^2 / ((L+P) E_g).
double structure_penalty(const PulseTrain& pt, const Scenario& sc);

} // namespace ucrb

#endif // UCRB_KNOWN_STRUCTURE_HPP
