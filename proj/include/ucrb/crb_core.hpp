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

#ifndef UCRB_CRB_CORE_HPP
#define UCRB_CRB_CORE_HPP

#include "ucrb/signal_models.hpp"
#include "ucrb/types.hpp"

namespace ucrb {

/// Bound labels used throughout: "tau0" and "f0".
inline const std::vector<std::string> kDelayDoppler{"tau0", "f0"};

/// (L + P) / (L P); infinity when either count is zero.
double look_factor(int L, int P);

/// Labels (tau0, f0, sR_0, sI_0, ..., sR_{M-1}, sI_{M-1}).
std::vector<std::string> sample_labels(Index M, std::vector<std::string> head = kDelayDoppler);

/// Single-look known-signal information for (tau0, f0). L and P are
/// ignored.
Fim fim_known_signal(const SampledSignal& sig, const Scenario& sc);

/// Known-signal information for R independent reflected looks.
Fim fim_known_signal_looks(const SampledSignal& sig, const Scenario& sc, int looks);

/// Closed-form joint bounds for a known signal (one look).
CrbReport jcrb_known(const SampledSignal& sig, const Scenario& sc);

/// Separate bounds for a known signal: sigma^2/(2 sum|s'|^2) and
/// sigma^2/(8 pi^2 sum (t+tau0)^2 |s|^2).
CrbReport crb_separate_known(const SampledSignal& sig, const Scenario& sc);

/// Full (2 + 2M) information matrix with the signal samples unknown.
/// Uses L direct looks, P reflected looks and a = 1.
Fim fim_unknown_signal(const SampledSignal& sig, const Scenario& sc);

/// A - B C^{-1} B^T for the leading 2x2 block. Throws std::domain_error
/// when C is singular.
Mat schur_complement_2x2(const Fim& fim);

/// ((L+P)/(LP)) times the known-signal joint bounds.
CrbReport jcrb_unknown(const SampledSignal& sig, const Scenario& sc);

/// Same bounds from the assembled FIM by numeric elimination.
CrbReport jcrb_unknown_schur(const SampledSignal& sig, const Scenario& sc);

/// ((L+P)/(LP)) times the known-signal separate bounds.
CrbReport crb_separate_unknown(const SampledSignal& sig, const Scenario& sc);

} // namespace ucrb

#endif // UCRB_CRB_CORE_HPP
