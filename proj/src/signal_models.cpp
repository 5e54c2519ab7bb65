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

#include "ucrb/signal_models.hpp"

#include <cmath>
#include <numbers>

namespace ucrb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Integer ratio x / unit, or -1 when x is not (to 1e-9 relative) a
// multiple of unit.
Index integer_ratio(double x, double unit)
{
    const double r = x / unit;
    const double n = std::round(r);
    if (std::abs(r - n) > 1e-9 * std::max(1.0, std::abs(r))) return -1;
    return static_cast<Index>(n);
}

} // namespace

SampledSignal::SampledSignal(CVec samples, CVec deriv, double delta, DerivMethod method)
    : samples_(std::move(samples)), deriv_(std::move(deriv)), delta_(delta), method_(method)
{
    if (samples_.size() < 1) throw std::invalid_argument("SampledSignal: need at least one sample");
    if (deriv_.size() != samples_.size()) throw std::invalid_argument("SampledSignal: derivative length mismatch");
    if (!(delta_ > 0.0)) throw std::invalid_argument("SampledSignal: delta must be positive");
}

SampledSignal SampledSignal::from_samples(CVec samples, double delta)
{
    CVec d = central_difference(samples, delta);
    return SampledSignal(std::move(samples), std::move(d), delta, DerivMethod::central_difference);
}

bool SampledSignal::is_real() const
{
    return samples_.imag().cwiseAbs().maxCoeff() == 0.0 && deriv_.imag().cwiseAbs().maxCoeff() == 0.0;
}

SampledSignal SampledSignal::scaled(Complex c) const
{
    return SampledSignal(samples_ * c, deriv_ * c, delta_, method_);
}

CVec central_difference(const CVec& x, double delta)
{
    const Index n = x.size();
    CVec d = CVec::Zero(n);
    if (n == 2) {
        d(0) = d(1) = (x(1) - x(0)) / delta;
    } else if (n >= 3) {
        for (Index i = 1; i + 1 < n; ++i) d(i) = (x(i + 1) - x(i - 1)) / (2.0 * delta);
        d(0) = (-3.0 * x(0) + 4.0 * x(1) - x(2)) / (2.0 * delta);
        d(n - 1) = (3.0 * x(n - 1) - 4.0 * x(n - 2) + x(n - 3)) / (2.0 * delta);
    }
    return d;
}

PulseShape gaussian_pulse(int n_p, double delta, double center, double width2)
{
    if (n_p < 0) throw std::invalid_argument("gaussian_pulse: n_p must be nonnegative");
    if (!(delta > 0.0) || !(width2 > 0.0)) throw std::invalid_argument("gaussian_pulse: delta and width2 must be positive");
    PulseShape p;
    p.delta = delta;
    p.shape = [center, width2](double t) { return std::exp(-(t - center) * (t - center) / width2); };
    p.slope = [center, width2](double t) {
        return -2.0 * (t - center) / width2 * std::exp(-(t - center) * (t - center) / width2);
    };
    p.g.resize(n_p + 1);
    p.g_deriv.resize(n_p + 1);
    for (int n = 0; n <= n_p; ++n) {
        const double t = n * delta;
        p.g(n) = p.shape(t);
        p.g_deriv(n) = -2.0 * (t - center) / width2 * p.g(n);
    }
    return p;
}

PulseShape hann_pulse(int n_p, double delta)
{
    if (n_p < 2) throw std::invalid_argument("hann_pulse: n_p must be at least 2");
    if (!(delta > 0.0)) throw std::invalid_argument("hann_pulse: delta must be positive");
    const double T = n_p * delta;
    PulseShape p;
    p.delta = delta;
    p.shape = [T](double t) {
        const double s = std::sin(std::numbers::pi * t / T);
        return s * s;
    };
    p.slope = [T](double t) { return std::numbers::pi / T * std::sin(kTwoPi * t / T); };
    p.g.resize(n_p + 1);
    p.g_deriv.resize(n_p + 1);
    for (int n = 0; n <= n_p; ++n) {
        p.g(n) = p.shape(n * delta);
        p.g_deriv(n) = p.slope(n * delta);
    }
    // exact zeros at the support ends
    p.g(0) = p.g(n_p) = 0.0;
    p.g_deriv(0) = p.g_deriv(n_p) = 0.0;
    return p;
}

PulseShape sampled_pulse(Vec g, double delta)
{
    if (g.size() < 1) throw std::invalid_argument("sampled_pulse: empty pulse");
    PulseShape p;
    p.delta = delta;
    p.deriv_method = DerivMethod::central_difference;
    p.g_deriv = central_difference(CVec(g.cast<Complex>()), delta).real();
    p.g = std::move(g);
    return p;
}

PulseTrain::PulseTrain(PulseShape p, double period, CVec amplitudes)
    : pulse(std::move(p)), T_p(period), b(std::move(amplitudes))
{
    if (b.size() < 1) throw std::invalid_argument("PulseTrain: Q must be at least 1");
    if (!(pulse.delta > 0.0)) throw std::invalid_argument("PulseTrain: delta must be positive");
    if (pulse.g_deriv.size() != pulse.g.size()) throw std::invalid_argument("PulseTrain: g/g' length mismatch");
    const Index k = integer_ratio(T_p, pulse.delta);
    if (k < 1) throw std::invalid_argument("PulseTrain: T_p must be a positive multiple of delta");
    if (k < n_p()) throw std::invalid_argument("PulseTrain: T_p shorter than the pulse (n_p * delta)");
}

Index PulseTrain::spacing() const { return integer_ratio(T_p, pulse.delta); }

bool PulseTrain::disjoint_support() const
{
    const Index k = spacing();
    for (Index n = k; n <= n_p(); ++n)
        if (pulse.g(n) != 0.0 || pulse.g_deriv(n) != 0.0) return false;
    return true;
}

SampledSignal synthesize_pulse_train(const PulseTrain& pt)
{
    const Index M = pt.M();
    const Index K = pt.spacing();
    CVec s = CVec::Zero(M);
    CVec d = CVec::Zero(M);
    for (int q = 0; q < pt.Q(); ++q) {
        for (Index k = 0; k <= pt.n_p(); ++k) {
            const Index n = q * K + k;
            if (n >= M) break;
            s(n) += pt.b(q) * pt.pulse.g(k);
            d(n) += pt.b(q) * pt.pulse.g_deriv(k);
        }
    }
    return SampledSignal(std::move(s), std::move(d), pt.delta(), pt.pulse.deriv_method);
}

Complex pulse_train_value(const PulseTrain& pt, const CVec& b, Index k, double dt)
{
    const Index K = pt.spacing();
    Complex v{0.0, 0.0};
    for (int q = 0; q < pt.Q(); ++q) {
        const Index local = k - q * K;
        if (local < 0 || local > pt.n_p()) continue;
        v += b(q) * pt.pulse.shape(local * pt.delta() + dt);
    }
    return v;
}

std::function<Complex(Index, double)> continuous_extension(const PulseTrain& pt)
{
    if (!pt.pulse.shape) throw std::invalid_argument("continuous_extension: pulse has no closed form");
    return [pt](Index k, double dt) { return pulse_train_value(pt, pt.b, k, dt); };
}

SampledSignal triangle_wave(int M)
{
    if (M < 2 || M % 2 != 0) throw std::invalid_argument("triangle_wave: M must be even and >= 2");
    CVec s(M), d(M);
    for (int n = 0; n < M; ++n) {
        s(n) = static_cast<double>(std::min(n, M - n));
        d(n) = n < M / 2 ? 1.0 : -1.0;
    }
    return SampledSignal(std::move(s), std::move(d), 1.0, DerivMethod::analytic);
}

void Scenario::validate() const
{
    if (!(tau0 >= 0.0)) throw std::invalid_argument("Scenario: tau0 must be nonnegative");
    if (L < 0 || P < 0) throw std::invalid_argument("Scenario: look counts must be nonnegative");
    if (!(sigma_w2 > 0.0)) throw std::invalid_argument("Scenario: sigma_w2 must be positive");
    if (!(a > 0.0)) throw std::invalid_argument("Scenario: a must be positive");
    if (N < 0) throw std::invalid_argument("Scenario: N must be nonnegative");
}

Index Scenario::delay_samples(double delta) const
{
    const Index n0 = integer_ratio(tau0, delta);
    if (n0 < 0) throw std::invalid_argument("Scenario: tau0 is not an integer multiple of delta");
    return n0;
}

Index Scenario::record_length(double delta, Index M) const
{
    const Index n0 = delay_samples(delta);
    if (N == 0) return n0 + M;
    if (N < n0 + M) throw std::invalid_argument("Scenario: record length N < n0 + M truncates the signal");
    return N;
}

CVec mean_vector(const SampledSignal& sig, const Scenario& sc, Path path)
{
    sc.validate();
    const Index M = sig.size();
    const Index N = sc.record_length(sig.delta(), M);
    CVec mu = CVec::Zero(N);
    if (path == Path::direct) {
        mu.head(M) = sig.samples();
        return mu;
    }
    const Index n0 = sc.delay_samples(sig.delta());
    for (Index k = 0; k < M; ++k) {
        const Index n = n0 + k;
        mu(n) = sc.a * sig.samples()(k) * std::polar(1.0, kTwoPi * sc.f0 * n * sig.delta());
    }
    return mu;
}

double eta(const SampledSignal& sig, double tau0)
{
    const auto& s = sig.samples();
    const auto& d = sig.deriv();
    double acc = 0.0;
    for (Index n = 0; n < sig.size(); ++n) {
        const double t = n * sig.delta() + tau0;
        acc += t * (s(n).imag() * d(n).real() - s(n).real() * d(n).imag());
    }
    return acc;
}

SignalMoments moments(const SampledSignal& sig, double tau0)
{
    SignalMoments m;
    const auto& s = sig.samples();
    const auto& d = sig.deriv();
    for (Index n = 0; n < sig.size(); ++n) {
        const double t = n * sig.delta() + tau0;
        m.deriv_energy += std::norm(d(n));
        m.time_energy += t * t * std::norm(s(n));
        m.energy += std::norm(s(n));
        m.energy_slope += s(n).real() * d(n).real() + s(n).imag() * d(n).imag();
    }
    m.eta = eta(sig, tau0);
    return m;
}

SampledSignal convolve_channel(const SampledSignal& sig, const CVec& h)
{
    if (h.size() < 1) throw std::invalid_argument("convolve_channel: empty channel");
    const Index M = sig.size();
    const Index out_len = M + h.size() - 1;
    CVec y = CVec::Zero(out_len);
    for (Index n = 0; n < M; ++n)
        for (Index k = 0; k < h.size(); ++k) y(n + k) += h(k) * sig.samples()(n);
    return SampledSignal::from_samples(std::move(y), sig.delta());
}

} // namespace ucrb
