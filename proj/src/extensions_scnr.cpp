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

#include "ucrb/extensions_scnr.hpp"

#include "ucrb/crb_core.hpp"
#include "ucrb/known_structure.hpp"
#include "ucrb/linalg.hpp"

#include <cmath>
#include <numbers>

namespace ucrb {

namespace {

constexpr double kPi = std::numbers::pi;

std::string looks_note(const Scenario& sc)
{
    return "L=" + std::to_string(sc.L) + ",P=" + std::to_string(sc.P) + ",a=" + std::to_string(sc.a);
}

void mark_singular(CrbReport& r, const std::vector<std::string>& names, const std::string& why)
{
    for (const auto& n : names) r.bounds[n] = BoundValue::none();
    r.notes["singular"] = why;
}

// Dense inverse of a small information matrix, nullopt when singular.
std::optional<Mat> marginal_inverse(const Mat& info, double cond_limit = 1e12)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(info, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double hi = ev.cwiseAbs().maxCoeff();
    if (!(hi > 0.0) || ev.minCoeff() <= 0.0 || ev.minCoeff() * cond_limit < hi) return std::nullopt;
    return Mat(info.ldlt().solve(Mat::Identity(info.rows(), info.cols())));
}

} // namespace

double scaled_look_factor(int L, int P, double a)
{
    if (L <= 0 || P <= 0) return std::numeric_limits<double>::infinity();
    return (L + a * a * P) / (static_cast<double>(L) * P);
}

CrbReport jcrb_scaled_known_a(const SampledSignal& sig, const Scenario& sc)
{
    sc.validate();
    CrbReport r;
    r.method = Method::closed_form;
    r.notes["looks"] = looks_note(sc);
    if (sc.L == 0 || sc.P == 0) {
        mark_singular(r, {"tau0", "f0", "tau0_sep", "f0_sep"}, "L=0 or P=0: no unbiased estimator");
        return r;
    }
    const SampledSignal as = sig.scaled(sc.a);
    const double k = scaled_look_factor(sc.L, sc.P, sc.a);
    const CrbReport joint = jcrb_known(as, sc);
    const CrbReport sep = crb_separate_known(as, sc);
    for (const auto& n : kDelayDoppler) {
        const BoundValue j = joint.at(n);
        const BoundValue s = sep.at(n);
        r.bounds[n] = j.singular ? j : BoundValue::finite(k * j.value);
        r.bounds[n + "_sep"] = s.singular ? s : BoundValue::finite(k * s.value);
    }
    return r;
}

Fim fim_known_signal_a(const SampledSignal& sig, const Scenario& sc)
{
    const SignalMoments m = moments(sig, sc.tau0);
    const double a = sc.a;
    const double s2 = sc.sigma_w2;
    Fim f;
    f.labels = {"tau0", "f0", "a"};
    f.entries = Mat::Zero(3, 3);
    f.entries(0, 0) = 2.0 * a * a / s2 * m.deriv_energy;
    f.entries(1, 1) = 8.0 * kPi * kPi * a * a / s2 * m.time_energy;
    f.entries(0, 1) = f.entries(1, 0) = 4.0 * kPi * a * a / s2 * m.eta;
    f.entries(0, 2) = f.entries(2, 0) = -2.0 * a / s2 * m.energy_slope;
    f.entries(2, 2) = 2.0 / s2 * m.energy;
    return f;
}

Fim fim_unknown_a(const SampledSignal& sig, const Scenario& sc)
{
    sc.validate();
    const Index M = sig.size();
    const double a = sc.a;
    const double s2 = sc.sigma_w2;
    const double P = sc.P;
    const auto& s = sig.samples();
    const auto& d = sig.deriv();

    Fim f;
    f.labels = sample_labels(M, {"tau0", "f0", "a"});
    f.entries = Mat::Zero(3 + 2 * M, 3 + 2 * M);
    Mat& F = f.entries;
    F.topLeftCorner(3, 3) = P * fim_known_signal_a(sig, sc).entries;
    const double c = 2.0 * (sc.L + a * a * P) / s2;
    for (Index n = 0; n < M; ++n) {
        const double t = n * sig.delta() + sc.tau0;
        const Index jr = 3 + 2 * n;
        const Index ji = jr + 1;
        F(0, jr) = -2.0 * a * a * P / s2 * d(n).real();
        F(0, ji) = -2.0 * a * a * P / s2 * d(n).imag();
        F(1, jr) = -4.0 * kPi * a * a * P / s2 * t * s(n).imag();
        F(1, ji) = 4.0 * kPi * a * a * P / s2 * t * s(n).real();
        F(2, jr) = 2.0 * a * P / s2 * s(n).real();
        F(2, ji) = 2.0 * a * P / s2 * s(n).imag();
        F(jr, jr) = F(ji, ji) = c;
    }
    F.bottomLeftCorner(2 * M, 3) = F.topRightCorner(3, 2 * M).transpose();
    return f;
}

Fim fim_unknown_a(const PulseTrain& pt, const Scenario& sc)
{
    return fim_known_structure(pt, sc, true);
}

Mat v_matrix_unknown_a(const PulseTrain& pt, const Scenario& sc)
{
    sc.validate();
    Mat v = Mat::Zero(3, 3);
    v.topLeftCorner(2, 2) = v_matrix(pt, sc);
    const StructureQuantities sq = structure_quantities(pt, sc.tau0);
    const double a = sc.a;
    const double P = sc.P;
    const double S = pt.amplitude_energy();
    const double lw = sc.L / (sc.L + a * a * P);
    v(0, 2) = v(2, 0) = -2.0 * a * P / sc.sigma_w2 * S * lw * sq.rho;
    v(2, 2) = 2.0 * P / sc.sigma_w2 * S * lw * sq.E_g;
    return v;
}

CrbReport jcrb_unknown_a_structure(const PulseTrain& pt, const Scenario& sc)
{
    sc.validate();
    const std::vector<std::string> names{"tau0", "f0", "tau0_sep", "f0_sep"};
    CrbReport r;
    r.notes["looks"] = looks_note(sc);
    if (sc.L == 0 || sc.P == 0) {
        r.method = Method::closed_form;
        mark_singular(r, names, "L=0 or P=0: a and the amplitudes are not jointly identifiable");
        return r;
    }

    if (pt.disjoint_support()) {
        r.method = Method::closed_form;
        r.notes["forms"] = "simplified";
        const StructureQuantities sq = structure_quantities(pt, sc.tau0);
        const double S = pt.amplitude_energy();
        const double den = sq.E_g * sq.G - sq.rho * sq.rho;
        if (den > 1e-12 * sq.E_g * sq.G && S > 0.0) {
            const double tb = sc.sigma_w2 / (2.0 * sc.a * sc.a * sc.P * S) * sq.E_g / den;
            r.bounds["tau0"] = r.bounds["tau0_sep"] = BoundValue::finite(tb);
        } else {
            r.bounds["tau0"] = r.bounds["tau0_sep"] = BoundValue::none();
            r.notes["singular"] = "E_g G - rho^2 = 0";
        }
        const double v22 = v_matrix(pt, sc)(1, 1);
        r.bounds["f0"] = r.bounds["f0_sep"] = v22 > 0.0 ? BoundValue::finite(1.0 / v22) : BoundValue::none();
        return r;
    }

    r.method = Method::schur_numeric;
    r.notes["forms"] = "general";
    const Fim f = fim_unknown_a(pt, sc);
    Mat v;
    try {
        v = linalg::schur_complement(f.entries, 3);
    } catch (const std::domain_error&) {
        mark_singular(r, names, "amplitude block singular");
        return r;
    }
    if (linalg::reduction_collapsed(v, f.entries.topLeftCorner(3, 3))) {
        mark_singular(r, names, "no information left after elimination");
        return r;
    }
    const auto inv = marginal_inverse(v);
    if (!inv) {
        mark_singular(r, names, "information rank deficient");
        return r;
    }
    r.bounds["tau0"] = BoundValue::finite((*inv)(0, 0));
    r.bounds["f0"] = BoundValue::finite((*inv)(1, 1));
    for (int i = 0; i < 2; ++i) {
        Mat sub(2, 2);
        sub << v(i, i), v(i, 2), v(2, i), v(2, 2);
        const auto si = marginal_inverse(sub);
        r.bounds[names[2 + i]] = si ? BoundValue::finite((*si)(0, 0)) : BoundValue::none();
    }
    return r;
}

CrbReport crb_separate_unknown_a(const SampledSignal& sig, const Scenario& sc)
{
    sc.validate();
    CrbReport r;
    r.method = Method::closed_form;
    r.notes["looks"] = looks_note(sc);
    r.notes["f0"] = "known-a form retained for f0 with a unknown";
    const SignalMoments m = moments(sig, sc.tau0);
    const double a2 = sc.a * sc.a;
    const double den = m.deriv_energy * m.energy - m.energy_slope * m.energy_slope;
    const double k = scaled_look_factor(sc.L, sc.P, sc.a);
    const bool looks_ok = sc.L > 0 && sc.P > 0;

    if (den > 1e-12 * m.deriv_energy * m.energy) {
        const double base = sc.sigma_w2 * m.energy / (2.0 * a2 * den);
        r.bounds["tau0"] = BoundValue::finite(base);
        r.bounds["tau0_s"] = looks_ok ? BoundValue::finite(k * base) : BoundValue::none();
    } else {
        r.bounds["tau0"] = r.bounds["tau0_s"] = BoundValue::none();
        r.notes["singular"] = "D E - X^2 = 0";
    }
    if (m.time_energy > 0.0) {
        const double base = sc.sigma_w2 / (8.0 * kPi * kPi * a2 * m.time_energy);
        r.bounds["f0"] = BoundValue::finite(base);
        r.bounds["f0_s"] = looks_ok ? BoundValue::finite(k * base) : BoundValue::none();
    } else {
        r.bounds["f0"] = r.bounds["f0_s"] = BoundValue::none();
    }
    if (!looks_ok) r.notes["singular"] = "L=0 or P=0: no unbiased estimator";
    return r;
}

CrbReport jcrb_unknown_a_signal(const SampledSignal& sig, const Scenario& sc)
{
    sc.validate();
    CrbReport r;
    r.method = Method::schur_numeric;
    r.notes["looks"] = looks_note(sc);
    const Fim f = fim_unknown_a(sig, sc);
    Mat v;
    try {
        v = linalg::schur_complement(f.entries, 3);
    } catch (const std::domain_error&) {
        mark_singular(r, kDelayDoppler, "sample block singular");
        return r;
    }
    if (linalg::reduction_collapsed(v, f.entries.topLeftCorner(3, 3))) {
        mark_singular(r, kDelayDoppler, "no information left after elimination");
        return r;
    }
    const auto inv = marginal_inverse(v);
    if (!inv) {
        mark_singular(r, kDelayDoppler, "information rank deficient");
        return r;
    }
    r.bounds["tau0"] = BoundValue::finite((*inv)(0, 0));
    r.bounds["f0"] = BoundValue::finite((*inv)(1, 1));
    return r;
}

} // namespace ucrb
