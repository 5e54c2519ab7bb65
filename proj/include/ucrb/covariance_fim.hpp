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

#ifndef UCRB_COVARIANCE_FIM_HPP
#define UCRB_COVARIANCE_FIM_HPP

#include "ucrb/signal_models.hpp"
#include "ucrb/types.hpp"

#include <vector>

namespace ucrb {

/// Zero-mean model x ~ CN(0, C) with C = s s^H + Sigma_cn, where s stacks
/// L direct looks followed by P reflected looks, each of length N.
struct StackedModel {
    CVec s_stack;
    CMat Sigma_cn;
    CMat C;
    Index N = 0;
    int L = 0;
    int P = 0;
};

StackedModel build_stacked(const SampledSignal& sig, const Scenario& sc, const CMat& Sigma_cn);

/// Number of parameters in theta = (tau0, f0, sR_0, sI_0, ...).
inline Index covariance_param_count(const SampledSignal& sig) { return 2 + 2 * sig.size(); }

/// d s_stack / d theta_i.
CVec ds_dtheta(const StackedModel& model, const SampledSignal& sig, const Scenario& sc, Index param_index);

/// dC/dtheta_i = ds s^H + s ds^H.
CMat dC_dtheta(const StackedModel& model, const SampledSignal& sig, const Scenario& sc, Index param_index);

/// All dC/dtheta_i in parameter order.
std::vector<CMat> dC_all(const StackedModel& model, const SampledSignal& sig, const Scenario& sc);

/// I_ij = Re Tr(C^-1 dC_i C^-1 dC_j). Throws std::domain_error when C is
/// singular or the imaginary residue exceeds 1e-10 relative.
Fim fim_trace_form(const StackedModel& model, const std::vector<CMat>& dC);

/// I_ij = vec(dC_i)^H (C^-T kron C^-1) vec(dC_j).
Fim fim_kron_form(const StackedModel& model, const std::vector<CMat>& dC);

/// J_i = (C^-T/2 kron C^-1/2) vec(dC_i), so that I_ij = Re J_i^H J_j.
std::vector<CVec> j_factors(const StackedModel& model, const std::vector<CMat>& dC);

/// (tau0, f0) bounds after eliminating the signal samples. The common
/// phase of s never changes C, so the sample block is eliminated with a
/// pseudo-inverse; the remaining 2x2 is checked for rank.
CrbReport crb_correlated(const StackedModel& model, const std::vector<CMat>& dC,
                         std::vector<std::string> labels = {});

/// Labels for theta.
std::vector<std::string> covariance_labels(const SampledSignal& sig);

} // namespace ucrb

#endif // UCRB_COVARIANCE_FIM_HPP
