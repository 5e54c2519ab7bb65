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

#ifndef UCRB_OVERLAP_PATHS_HPP
#define UCRB_OVERLAP_PATHS_HPP

#include "ucrb/signal_models.hpp"
#include "ucrb/types.hpp"

#include <vector>

namespace ucrb {

enum class OverlapRegime { none, total, partial };

std::string to_string(OverlapRegime r);

/// Delay-only information for a real signal observed as s(t) + s(t - tau0)
/// in P looks, with the M samples unknown. Parameters (tau0, s_0..s_{M-1}).
struct OverlapFim {
    double e = 0.0;
    Vec b_vec;
    Mat D;
    Index n0 = 0;
    OverlapRegime regime = OverlapRegime::none;
    double sigma_w2 = 1.0;
    int P = 1;
};

OverlapRegime overlap_regime(Index n0, Index M);

OverlapFim fim_overlap(const SampledSignal& sig, Index n0, const Scenario& sc);

/// Bound "tau0" by dense elimination of the samples. Total overlap and
/// P = 0 are reported singular.
CrbReport crb_overlap(const OverlapFim& fim);

/// Closed form for M/2 <= n0 <= M-1 (pairs (n, n + n0) invert as 2x2
/// blocks, unpaired samples as scalars). Throws outside that range.
double crb_overlap_closed(const OverlapFim& fim, const SampledSignal& sig);

struct OverlapRow {
    Index n0 = 0;
    OverlapRegime regime = OverlapRegime::none;
    BoundValue crb;
    Method method = Method::schur_numeric;
    BoundValue closed;  // finite only where the closed form applies
};

/// CRB(n0) for n0 = 0..M on the triangle wave.
std::vector<OverlapRow> triangle_overlap_curve(int M, const Scenario& sc);

} // namespace ucrb

#endif // UCRB_OVERLAP_PATHS_HPP
