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

#include "ucrb/known_structure.hpp"

#include "ucrb/crb_core.hpp"
#include "ucrb/linalg.hpp"

#include <cmath>
#include <numbers>

namespace ucrb {

namespace {

constexpr double kPi = std::numbers::pi;

std::string looks_note(const Scenario& sc)
{
    return "L=" + std::to_string(sc.L) + ",P=" + std::to_string(sc.P);
}

} // namespace

StructureQuantities structure_quantities(const PulseTrain& pt, double tau0)
{
    const int Q = pt.Q();
    const Index K = pt.spacing();
    const Index M = pt.M();
    const double dt = pt.delta();
    const auto& g = pt.pulse.g;
    const auto& gd = pt.pulse.g_deriv;

    StructureQuantities sq;
    sq.rho = g.dot(gd);
    sq.E_g = g.squaredNorm();
    sq.G = gd.squaredNorm();
    sq.gamma = Vec::Zero(Q);
    sq.time2 = Vec::Zero(Q);
    for (int q = 0; q < Q; ++q) {
        for (Index n = 0; n <= pt.n_p(); ++n) {
            const double t = n * dt + tau0 + q * pt.T_p;
            sq.gamma(q) += t * g(n) * g(n);
            sq.time2(q) += t * t * g(n) * g(n);
        }
    }

    // general sums over the synthesized (possibly colliding, truncated) train
    const SampledSignal s = synthesize_pulse_train(pt);
    Mat gq = Mat::Zero(M, Q);
    for (int q = 0; q < Q; ++q)
        for (Index n = 0; n <= pt.n_p() && q * K + n < M; ++n) gq(q * K + n, q) = g(n);
    sq.h = gq.transpose().cast<Complex>() * s.deriv();
    sq.k = gq.transpose().cast<Complex>() * s.samples();
    CVec ts(M);
    for (Index n = 0; n < M; ++n) ts(n) = (n * dt + tau0) * s.samples()(n);
    sq.u = gq.transpose().cast<Complex>() * ts;
    sq.c = gq.transpose() * gq;
    return sq;
}

std::vector<std::string> amplitude_labels(int Q, std::vector<std::string> head)
{
    for (int q = 1; q <= Q; ++q) {
        head.push_back("bR_" + std::to_string(q));
        head.push_back("bI_" + std::to_string(q));
    }
    return head;
}

Fim fim_known_structure(const PulseTrain& pt, const Scenario& sc, bool include_a)
{
    sc.validate();
    const int Q = pt.Q();
    const Index h0 = include_a ? 3 : 2;
    const double s2 = sc.sigma_w2;
    const double a = sc.a;
    const double a2P = a * a * sc.P;
    const SampledSignal sig = synthesize_pulse_train(pt);
    const SignalMoments m = moments(sig, sc.tau0);
    const StructureQuantities sq = structure_quantities(pt, sc.tau0);
    const bool simple = pt.disjoint_support();

    Fim f;
    f.labels = amplitude_labels(Q, include_a ? std::vector<std::string>{"tau0", "f0", "a"}
                                             : std::vector<std::string>{"tau0", "f0"});
    const Index n = h0 + 2 * Q;
    f.entries = Mat::Zero(n, n);
    Mat& F = f.entries;
    F(0, 0) = 2.0 * a2P / s2 * m.deriv_energy;
    F(1, 1) = 8.0 * kPi * kPi * a2P / s2 * m.time_energy;
    F(0, 1) = F(1, 0) = 4.0 * kPi * a2P / s2 * m.eta;
    if (include_a) {
        F(0, 2) = F(2, 0) = -2.0 * a * sc.P / s2 * m.energy_slope;
        F(2, 2) = 2.0 * sc.P / s2 * m.energy;
    }

    for (int q = 0; q < Q; ++q) {
        const Index jr = h0 + 2 * q;
        const Index ji = jr + 1;
        const Complex b = pt.b(q);
        // simplified forms replace h, u, k by b rho, b gamma, b E_g
        const Complex h = simple ? b * sq.rho : sq.h(q);
        const Complex u = simple ? b * sq.gamma(q) : sq.u(q);
        const Complex k = simple ? b * sq.E_g : sq.k(q);
        F(0, jr) = -2.0 * a2P / s2 * h.real();
        F(0, ji) = -2.0 * a2P / s2 * h.imag();
        F(1, jr) = -4.0 * kPi * a2P / s2 * u.imag();
        F(1, ji) = 4.0 * kPi * a2P / s2 * u.real();
        if (include_a) {
            F(2, jr) = 2.0 * a * sc.P / s2 * k.real();
            F(2, ji) = 2.0 * a * sc.P / s2 * k.imag();
        }
    }
    F.bottomLeftCorner(2 * Q, h0) = F.topRightCorner(h0, 2 * Q).transpose();

    const double cw = 2.0 * (sc.L + a2P) / s2;
    for (int q = 0; q < Q; ++q) {
        for (int r = 0; r < Q; ++r) {
            const double c = simple ? (q == r ? sq.E_g : 0.0) : sq.c(q, r);
            F(h0 + 2 * q, h0 + 2 * r) = cw * c;
            F(h0 + 2 * q + 1, h0 + 2 * r + 1) = cw * c;
        }
    }
    return f;
}

Mat v_matrix(const PulseTrain& pt, const Scenario& sc)
{
    sc.validate();
    if (!pt.disjoint_support()) throw std::invalid_argument("v_matrix: closed form needs disjoint pulse support");
    const StructureQuantities sq = structure_quantities(pt, sc.tau0);
    const double a2P = sc.a * sc.a * sc.P;
    const double w = a2P / (sc.L + a2P);
    double S = 0.0, t2 = 0.0, g2 = 0.0;
    for (int q = 0; q < pt.Q(); ++q) {
        const double b2 = std::norm(pt.b(q));
        S += b2;
        t2 += sq.time2(q) * b2;
        g2 += sq.gamma(q) * sq.gamma(q) * b2;
    }
    Mat v = Mat::Zero(2, 2);
    if (sq.E_g > 0.0) {
        v(0, 0) = 2.0 * a2P / sc.sigma_w2 * (S * sq.G - w * sq.rho * sq.rho * S / sq.E_g);
        v(1, 1) = 8.0 * kPi * kPi * a2P / sc.sigma_w2 * (t2 - w * g2 / sq.E_g);
    }
    return v;
}

CrbReport jcrb_known_structure(const PulseTrain& pt, const Scenario& sc)
{
    sc.validate();
    CrbReport r;
    if (pt.disjoint_support()) {
        const Mat v = v_matrix(pt, sc);
        r.method = Method::closed_form;
        for (int i = 0; i < 2; ++i) {
            const double vi = v(i, i);
            const bool ok = vi > 0.0 && vi > 1e-12 * std::abs(v.diagonal().maxCoeff());
            r.bounds[kDelayDoppler[i]] = ok ? BoundValue::finite(1.0 / vi) : BoundValue::none();
        }
        r.notes["forms"] = "simplified";
    } else {
        const Fim f = fim_known_structure(pt, sc);
        try {
            const Mat v = linalg::schur_complement(f.entries, 2);
            if (linalg::reduction_collapsed(v, f.entries.topLeftCorner(2, 2))) {
                r.method = Method::schur_numeric;
                r.bounds["tau0"] = r.bounds["f0"] = BoundValue::none();
            } else {
                r = bounds_from_information(v, kDelayDoppler, Method::schur_numeric);
            }
        } catch (const std::domain_error&) {
            r.method = Method::schur_numeric;
            r.bounds["tau0"] = r.bounds["f0"] = BoundValue::none();
        }
        r.notes["forms"] = "general";
    }
    if (r.singular()) r.notes["singular"] = "structure information rank deficient";
    r.notes["looks"] = looks_note(sc);
    return r;
}

CrbReport jcrb_known_signal_pulse(const PulseTrain& pt, const Scenario& sc)
{
    if (!pt.disjoint_support())
        throw std::invalid_argument("jcrb_known_signal_pulse: needs disjoint pulse support");
    const StructureQuantities sq = structure_quantities(pt, sc.tau0);
    double S = 0.0, t2 = 0.0;
    for (int q = 0; q < pt.Q(); ++q) {
        S += std::norm(pt.b(q));
        t2 += sq.time2(q) * std::norm(pt.b(q));
    }
    CrbReport r;
    r.method = Method::closed_form;
    r.bounds["tau0"] = S * sq.G > 0.0 ? BoundValue::finite(sc.sigma_w2 / (2.0 * S * sq.G)) : BoundValue::none();
    r.bounds["f0"] = t2 > 0.0 ? BoundValue::finite(sc.sigma_w2 / (8.0 * kPi * kPi * t2)) : BoundValue::none();
    r.notes["looks"] = "1 (known-signal baseline)";
    return r;
}

double structure_penalty(const PulseTrain& pt, const Scenario& sc)
{
    const StructureQuantities sq = structure_quantities(pt, sc.tau0);
    if (sc.L + sc.P == 0 || sq.E_g == 0.0) return 0.0;
    const double P = sc.P;
    return 2.0 * P * P * sq.rho * sq.rho * pt.amplitude_energy() / ((sc.L + P) * sq.E_g);
}

} // namespace ucrb
