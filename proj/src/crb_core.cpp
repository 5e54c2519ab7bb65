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

std::string deriv_note(const SampledSignal& sig)
{
    return sig.deriv_method() == DerivMethod::analytic ? "analytic" : "central_difference";
}

CrbReport singular_report(Method m, const std::string& why)
{
    CrbReport r;
    r.method = m;
    r.bounds["tau0"] = BoundValue::none();
    r.bounds["f0"] = BoundValue::none();
    r.notes["singular"] = why;
    return r;
}

// JCRB pair from the sums; singular when the determinant is not positive.
CrbReport joint_from_moments(const SignalMoments& m, double sigma2, double scale)
{
    const double det = m.deriv_energy * m.time_energy - m.eta * m.eta;
    if (!(m.deriv_energy > 0.0) || !(det > 1e-12 * m.deriv_energy * m.time_energy))
        return singular_report(Method::closed_form, "nonpositive known-signal determinant");
    CrbReport r;
    r.method = Method::closed_form;
    r.bounds["tau0"] = BoundValue::finite(scale * sigma2 * m.time_energy / (2.0 * det));
    r.bounds["f0"] = BoundValue::finite(scale * sigma2 * m.deriv_energy / (8.0 * kPi * kPi * det));
    return r;
}

} // namespace

double look_factor(int L, int P)
{
    if (L <= 0 || P <= 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(L + P) / (static_cast<double>(L) * P);
}

std::vector<std::string> sample_labels(Index M, std::vector<std::string> head)
{
    head.reserve(head.size() + 2 * M);
    for (Index n = 0; n < M; ++n) {
        head.push_back("sR_" + std::to_string(n));
        head.push_back("sI_" + std::to_string(n));
    }
    return head;
}

Fim fim_known_signal(const SampledSignal& sig, const Scenario& sc)
{
    return fim_known_signal_looks(sig, sc, 1);
}

Fim fim_known_signal_looks(const SampledSignal& sig, const Scenario& sc, int looks)
{
    if (!(sc.sigma_w2 > 0.0)) throw std::invalid_argument("fim_known_signal: sigma_w2 must be positive");
    if (looks < 0) throw std::invalid_argument("fim_known_signal: negative look count");
    const SignalMoments m = moments(sig, sc.tau0);
    const double k = looks / sc.sigma_w2;
    Fim f;
    f.labels = kDelayDoppler;
    f.entries.resize(2, 2);
    f.entries(0, 0) = 2.0 * k * m.deriv_energy;
    f.entries(1, 1) = 8.0 * kPi * kPi * k * m.time_energy;
    f.entries(0, 1) = f.entries(1, 0) = 4.0 * kPi * k * m.eta;
    return f;
}

CrbReport jcrb_known(const SampledSignal& sig, const Scenario& sc)
{
    CrbReport r = joint_from_moments(moments(sig, sc.tau0), sc.sigma_w2, 1.0);
    r.notes["looks"] = "1 (known-signal baseline)";
    r.notes["deriv"] = deriv_note(sig);
    return r;
}

CrbReport crb_separate_known(const SampledSignal& sig, const Scenario& sc)
{
    const SignalMoments m = moments(sig, sc.tau0);
    CrbReport r;
    r.method = Method::closed_form;
    r.bounds["tau0"] = m.deriv_energy > 0.0 ? BoundValue::finite(sc.sigma_w2 / (2.0 * m.deriv_energy))
                                            : BoundValue::none();
    r.bounds["f0"] = m.time_energy > 0.0 ? BoundValue::finite(sc.sigma_w2 / (8.0 * kPi * kPi * m.time_energy))
                                         : BoundValue::none();
    r.notes["looks"] = "1 (known-signal baseline)";
    r.notes["deriv"] = deriv_note(sig);
    return r;
}

Fim fim_unknown_signal(const SampledSignal& sig, const Scenario& sc)
{
    sc.validate();
    const Index M = sig.size();
    const double sp = 2.0 * sc.P / sc.sigma_w2;
    const auto& s = sig.samples();
    const auto& d = sig.deriv();

    Fim f;
    f.labels = sample_labels(M);
    f.entries = Mat::Zero(2 + 2 * M, 2 + 2 * M);
    f.entries.topLeftCorner(2, 2) = fim_known_signal_looks(sig, sc, sc.P).entries;
    const double c = (2.0 * sc.L + 2.0 * sc.P) / sc.sigma_w2;
    for (Index n = 0; n < M; ++n) {
        const double t = n * sig.delta() + sc.tau0;
        const Index jr = 2 + 2 * n;
        const Index ji = jr + 1;
        f.entries(0, jr) = -sp * d(n).real();
        f.entries(0, ji) = -sp * d(n).imag();
        f.entries(1, jr) = -2.0 * kPi * sp * t * s(n).imag();
        f.entries(1, ji) = 2.0 * kPi * sp * t * s(n).real();
        f.entries(jr, jr) = f.entries(ji, ji) = c;
    }
    f.entries.bottomLeftCorner(2 * M, 2) = f.entries.topRightCorner(2, 2 * M).transpose();
    return f;
}

Mat schur_complement_2x2(const Fim& fim)
{
    return linalg::schur_complement(fim.entries, 2);
}

CrbReport jcrb_unknown(const SampledSignal& sig, const Scenario& sc)
{
    sc.validate();
    if (sc.L == 0 || sc.P == 0) {
        CrbReport r = singular_report(Method::closed_form, "L=0 or P=0: no unbiased joint estimator");
        r.notes["looks"] = looks_note(sc);
        return r;
    }
    CrbReport r = joint_from_moments(moments(sig, sc.tau0), sc.sigma_w2, look_factor(sc.L, sc.P));
    r.notes["looks"] = looks_note(sc);
    r.notes["deriv"] = deriv_note(sig);
    return r;
}

CrbReport jcrb_unknown_schur(const SampledSignal& sig, const Scenario& sc)
{
    const Fim f = fim_unknown_signal(sig, sc);
    CrbReport r;
    try {
        const Mat v = schur_complement_2x2(f);
        r = linalg::reduction_collapsed(v, f.entries.topLeftCorner(2, 2))
                ? singular_report(Method::schur_numeric, "no information left after elimination")
                : bounds_from_information(v, kDelayDoppler, Method::schur_numeric);
    } catch (const std::domain_error&) {
        r = singular_report(Method::schur_numeric, "signal block singular");
    }
    if (r.singular()) r.notes["singular"] = "Schur complement rank deficient";
    r.notes["looks"] = looks_note(sc);
    r.notes["deriv"] = deriv_note(sig);
    return r;
}

CrbReport crb_separate_unknown(const SampledSignal& sig, const Scenario& sc)
{
    sc.validate();
    if (sc.L == 0 || sc.P == 0) {
        CrbReport r = singular_report(Method::closed_form, "L=0 or P=0: no unbiased estimator");
        r.notes["looks"] = looks_note(sc);
        return r;
    }
    CrbReport r = crb_separate_known(sig, sc);
    const double k = look_factor(sc.L, sc.P);
    for (auto& [name, b] : r.bounds)
        if (!b.singular) b.value *= k;
    r.notes["looks"] = looks_note(sc);
    return r;
}

} // namespace ucrb
