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

#ifndef UCRB_VERIFICATION_HPP
#define UCRB_VERIFICATION_HPP

#include "ucrb/signal_models.hpp"
#include "ucrb/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace ucrb {

// ---------------------------------------------------------------------------
// Finite-difference oracle

enum class OracleModel {
    known_signal,        // (tau0, f0); one reflected look
    unknown_signal,      // (tau0, f0, sR_0, sI_0, ...)
    unknown_a_signal,    // (tau0, f0, a, sR_0, sI_0, ...)
    known_structure,     // (tau0, f0, bR_1, bI_1, ...)
    unknown_a_structure  // (tau0, f0, a, bR_1, bI_1, ...)
};

struct OracleSteps {
    double tau_rel = 1e-3;  // h_tau = delta * tau_rel
    double f = 1e-5;
    double s = 1e-6;  // samples, amplitudes and a
};

/// Continuous-time truth around each sample: value(k, dt) = s(k delta + dt).
struct ContinuousSignal {
    std::function<Complex(Index, double)> value;
    Index M = 0;
    double delta = 1.0;
};

/// FIM = (2/sigma^2) Re(J^H J) with J the central-difference Jacobian of
/// the stacked mean of all looks. Signal models take the delay through
/// the continuous truth; structure models rebuild the train from b.
Fim oracle_fim_mean(const ContinuousSignal& truth, const Scenario& sc, OracleModel model,
                    const OracleSteps& steps = {});
Fim oracle_fim_mean(const PulseTrain& pt, const Scenario& sc, OracleModel model, const OracleSteps& steps = {});

/// Largest |F - G|_ij / sqrt(|F_ii G_jj|) over all entries.
double max_scaled_difference(const Mat& f, const Mat& g);

// ---------------------------------------------------------------------------
// Monte Carlo

struct Observations {
    std::vector<CVec> direct;     // L looks, length N
    std::vector<CVec> reflected;  // P looks, length N
};

/// Means plus iid circular complex Gaussian noise, variance sigma_w2 per
/// complex sample. Deterministic in seed.
Observations simulate_observations(const SampledSignal& sig, const Scenario& sc, std::uint64_t seed);

/// Stream seed for one trial, independent of scheduling.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

struct McConfig {
    int trials = 500;
    std::uint64_t seed = 42;
    std::vector<Index> tau_grid;  // candidate n0
    std::vector<double> f_grid;
    bool refine = true;

    void validate() const;
};

/// Grids of +-span samples around n0 and +-half_width around f0.
McConfig default_mc_config(const SampledSignal& sig, const Scenario& sc, int trials, std::uint64_t seed);

struct Estimate {
    double tau = 0.0;
    double f = 0.0;
};

/// Profiled ML for (tau0, f0) with the signal unknown. For candidate
/// (tau, f) the reflected looks are advanced by tau (band-limited shift),
/// derotated, and the samples are profiled out in closed form:
/// s_hat = (D + a R) / (L + a^2 P). Throws unidentifiable_error for L = 0
/// or P = 0.
Estimate profile_ml_estimate(const Observations& obs, const Scenario& sc, double delta, Index M,
                             const McConfig& cfg);

/// ML with the signal known, from the first reflected look only.
Estimate known_signal_ml_estimate(const Observations& obs, const SampledSignal& sig, const Scenario& sc,
                                  const McConfig& cfg);

struct McRow {
    std::string parameter;  // tau0 or f0
    std::string estimator;  // unknown_signal or known_signal
    double mse = 0.0;
    double bias = 0.0;
    double stderr_mse = 0.0;
    BoundValue bound;
    double ratio = 0.0;  // mse / bound
};

struct McReport {
    std::vector<McRow> rows;
    std::vector<std::uint64_t> trial_seeds;
    McConfig config;
    /// unknown-signal MSE over known-signal MSE, per parameter
    double tau_mse_ratio = 0.0;
    double f_mse_ratio = 0.0;
    std::string note;
};

McReport monte_carlo_report(const SampledSignal& sig, const Scenario& sc, const McConfig& cfg);

/// Signal used by the Monte-Carlo acceptance run: one Gaussian pulse,
/// M = 64, delta = 0.125, b = 1 + j.
PulseTrain mc_reference_train();

} // namespace ucrb

#endif // UCRB_VERIFICATION_HPP
