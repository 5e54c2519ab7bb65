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

#ifndef UCRB_SIGNAL_MODELS_HPP
#define UCRB_SIGNAL_MODELS_HPP

#include "ucrb/types.hpp"

#include <functional>

namespace ucrb {

enum class DerivMethod { analytic, central_difference };

/// Complex baseband samples s(n*delta), n = 0..M-1, with the time
/// derivative at the same instants.
class SampledSignal {
public:
    SampledSignal(CVec samples, CVec deriv, double delta, DerivMethod method);

    /// Derivative estimated by central differences (second-order one-sided
    /// stencils at the ends).
    static SampledSignal from_samples(CVec samples, double delta);

    const CVec& samples() const { return samples_; }
    const CVec& deriv() const { return deriv_; }
    double delta() const { return delta_; }
    DerivMethod deriv_method() const { return method_; }
    Index size() const { return samples_.size(); }

    /// True when every imaginary part (samples and derivative) is exactly 0.
    bool is_real() const;

    SampledSignal scaled(Complex c) const;

private:
    CVec samples_;
    CVec deriv_;
    double delta_;
    DerivMethod method_;
};

CVec central_difference(const CVec& x, double delta);

/// Pulse-shape samples g(n*delta), n = 0..n_p, and dg/dt at those
/// instants. `shape`/`slope` are the closed-form continuous functions when
/// known (used by finite-difference oracles); empty for sampled pulses.
struct PulseShape {
    Vec g;
    Vec g_deriv;
    double delta = 1.0;
    DerivMethod deriv_method = DerivMethod::analytic;
    std::function<double(double)> shape;
    std::function<double(double)> slope;

    int n_p() const { return static_cast<int>(g.size()) - 1; }
};

/// g(t) = exp(-(t - center)^2 / width2), sampled for n = 0..n_p, with the
/// analytic derivative. Not renormalized after truncation.
PulseShape gaussian_pulse(int n_p, double delta, double center, double width2);

/// Raised-cosine pulse g(t) = sin^2(pi t / (n_p delta)); symmetric and zero
/// at both ends of its support.
PulseShape hann_pulse(int n_p, double delta);

/// Arbitrary real pulse samples; derivative by central differences.
PulseShape sampled_pulse(Vec g, double delta);

/// Pulse amplitude modulated train: s(t) = sum_q b_q g(t - (q-1) T_p).
struct PulseTrain {
    PulseShape pulse;
    double T_p = 1.0;
    CVec b;

    PulseTrain() = default;
    PulseTrain(PulseShape p, double period, CVec amplitudes);

    int Q() const { return static_cast<int>(b.size()); }
    int n_p() const { return pulse.n_p(); }
    double delta() const { return pulse.delta; }
    /// Pulse period in samples (T_p / delta).
    Index spacing() const;
    /// Synthesized support length, Q * spacing().
    Index M() const { return static_cast<Index>(Q()) * spacing(); }
    /// True when every nonzero sample of g and g' falls inside the first
    /// spacing() samples, so pulses neither collide nor get truncated.
    bool disjoint_support() const;
    /// sum_q |b_q|^2
    double amplitude_energy() const { return b.squaredNorm(); }
};

SampledSignal synthesize_pulse_train(const PulseTrain& pt);

/// s(k*delta + dt) for sample index k of the synthesized train, evaluated
/// with the closed-form pulse of every pulse whose sample window covers k.
/// Smooth in dt around each grid point; requires an analytic pulse.
std::function<Complex(Index, double)> continuous_extension(const PulseTrain& pt);

/// Same, with the amplitude vector supplied per call (for derivatives
/// with respect to b_q).
Complex pulse_train_value(const PulseTrain& pt, const CVec& b, Index k, double dt);

/// Real triangle wave on M samples (delta = 1): slope +1 for n < M/2 and -1
/// afterwards.
SampledSignal triangle_wave(int M);

/// Scenario parameters shared by every bound computation.
struct Scenario {
    double tau0 = 0.0;
    double f0 = 0.0;
    int L = 1;
    int P = 1;
    double sigma_w2 = 1.0;
    double a = 1.0;
    Index N = 0; // record length; 0 means n0 + M

    void validate() const;
    /// n0 = tau0 / delta; throws std::invalid_argument when off-grid.
    Index delay_samples(double delta) const;
    /// Effective record length for a signal of length M.
    Index record_length(double delta, Index M) const;
};

enum class Path { direct, reflected };

/// Noise-free mean of one look, length N.
CVec mean_vector(const SampledSignal& sig, const Scenario& sc, Path path);

/// Delay-Doppler cross term sum_n (t + tau0)(s_I s_R' - s_R s_I') at t = n delta.
double eta(const SampledSignal& sig, double tau0);

/// Finite sums that every closed form is built from.
struct SignalMoments {
    double deriv_energy = 0.0;  // sum |s'|^2
    double time_energy = 0.0;   // sum (t + tau0)^2 |s|^2
    double energy = 0.0;        // sum |s|^2
    double energy_slope = 0.0;  // sum (s_R s_R' + s_I s_I')
    double eta = 0.0;
};

SignalMoments moments(const SampledSignal& sig, double tau0);

/// Discrete convolution h * s on the same grid; support grows by len(h) - 1.
SampledSignal convolve_channel(const SampledSignal& sig, const CVec& h);

} // namespace ucrb

#endif // UCRB_SIGNAL_MODELS_HPP
