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

#ifndef UCRB_EXTENSIONS_SCNR_HPP
#define UCRB_EXTENSIONS_SCNR_HPP

#include "ucrb/signal_models.hpp"
#include "ucrb/types.hpp"

namespace ucrb {

/// (L + a^2 P) / (L P); infinity when L or P is zero.
double scaled_look_factor(int L, int P, double a);

/// Known reflected-path scale a. Bounds "tau0", "f0" are joint and
/// "tau0_sep", "f0_sep" separate, each ((L + a^2 P)/(LP)) times the
/// single-look known-signal form for the signal a s.
CrbReport jcrb_scaled_known_a(const SampledSignal& sig, const Scenario& sc);

/// 3x3 single-look known-signal information for (tau0, f0, a).
Fim fim_known_signal_a(const SampledSignal& sig, const Scenario& sc);

/// Unknown a, unknown samples: (tau0, f0, a, sR_0, sI_0, ...).
Fim fim_unknown_a(const SampledSignal& sig, const Scenario& sc);

/// Unknown a, unknown pulse amplitudes: (tau0, f0, a, bR_1, bI_1, ...).
Fim fim_unknown_a(const PulseTrain& pt, const Scenario& sc);

/// 3x3 V for the structure model with unknown a (disjoint support).
Mat v_matrix_unknown_a(const PulseTrain& pt, const Scenario& sc);

/// Joint and separate bounds for (tau0, f0) with a and b unknown.
/// "tau0", "f0" joint; "tau0_sep", "f0_sep" separate (a still unknown).
CrbReport jcrb_unknown_a_structure(const PulseTrain& pt, const Scenario& sc);

/// Separate bounds with a unknown. "tau0" is the single-look baseline
/// sigma^2 E / (2 a^2 (D E - X^2)), X = sum (s_R s_R' + s_I s_I');
/// "tau0_s" applies the look factor. "f0"/"f0_s" keep the known-a form.
CrbReport crb_separate_unknown_a(const SampledSignal& sig, const Scenario& sc);

/// Joint bounds for (tau0, f0) with a and the samples unknown, by
/// numeric elimination of (a, samples).
CrbReport jcrb_unknown_a_signal(const SampledSignal& sig, const Scenario& sc);

} // namespace ucrb

#endif // UCRB_EXTENSIONS_SCNR_HPP
