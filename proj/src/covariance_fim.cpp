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

#include "ucrb/covariance_fim.hpp"

#include "ucrb/crb_core.hpp"
#include "ucrb/linalg.hpp"

#include <cmath>
#include <numbers>

namespace ucrb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CMat checked_inverse(const CMat& c)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(c, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    if (!(ev.minCoeff() > 0.0) || ev.minCoeff() * 1e12 < ev.maxCoeff())
        throw std::domain_error("covariance FIM: C is not positive definite");
    return c.ldlt().solve(CMat::Identity(c.rows(), c.cols()));
}

Fim finish(const CMat& raw, const std::vector<CMat>& dC)
{
    const double scale = raw.cwiseAbs().maxCoeff();
    if (scale > 0.0 && raw.imag().cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::domain_error("covariance FIM: imaginary residue above tolerance");
    Fim f;
    f.entries = raw.real();
    f.entries = 0.5 * (f.entries + f.entries.transpose()).eval();
    f.labels.resize(dC.size());
    for (std::size_t i = 0; i < dC.size(); ++i) f.labels[i] = "theta_" + std::to_string(i);
    return f;
}

} // namespace

StackedModel build_stacked(const SampledSignal& sig, const Scenario& sc, const CMat& Sigma_cn)
{
    sc.validate();
    StackedModel m;
    m.N = sc.record_length(sig.delta(), sig.size());
    m.L = sc.L;
    m.P = sc.P;
    const Index total = m.N * (sc.L + sc.P);
    if (Sigma_cn.rows() != total || Sigma_cn.cols() != total)
        throw std::invalid_argument("build_stacked: Sigma_cn must be N(L+P) square");
    m.s_stack = CVec::Zero(total);
    const CVec direct = mean_vector(sig, sc, Path::direct);
    const CVec reflected = mean_vector(sig, sc, Path::reflected);
    for (int l = 0; l < sc.L; ++l) m.s_stack.segment(l * m.N, m.N) = direct;
    for (int p = 0; p < sc.P; ++p) m.s_stack.segment((sc.L + p) * m.N, m.N) = reflected;
    m.Sigma_cn = Sigma_cn;
    m.C = m.s_stack * m.s_stack.adjoint() + Sigma_cn;
    return m;
}

CVec ds_dtheta(const StackedModel& model, const SampledSignal& sig, const Scenario& sc, Index param_index)
{
    const Index M = sig.size();
    if (param_index < 0 || param_index >= covariance_param_count(sig))
        throw std::out_of_range("ds_dtheta: invalid parameter index");
    const Index n0 = sc.delay_samples(sig.delta());
    const Index N = model.N;
    CVec ds = CVec::Zero(model.s_stack.size());

    auto phase = [&](Index k) { return std::polar(1.0, kTwoPi * sc.f0 * (n0 + k) * sig.delta()); };
    if (param_index < 2) {
        for (int p = 0; p < model.P; ++p) {
            const Index base = (model.L + p) * N + n0;
            for (Index k = 0; k < M; ++k) {
                if (param_index == 0) {
                    ds(base + k) = -sc.a * sig.deriv()(k) * phase(k);
                } else {
                    const double t = (n0 + k) * sig.delta();
                    ds(base + k) = Complex(0.0, kTwoPi * t) * sc.a * sig.samples()(k) * phase(k);
                }
            }
        }
        return ds;
    }
    const Index k = (param_index - 2) / 2;
    const Complex unit = (param_index - 2) % 2 == 0 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    for (int l = 0; l < model.L; ++l) ds(l * N + k) = unit;
    for (int p = 0; p < model.P; ++p) ds((model.L + p) * N + n0 + k) = sc.a * unit * phase(k);
    return ds;
}

CMat dC_dtheta(const StackedModel& model, const SampledSignal& sig, const Scenario& sc, Index param_index)
{
    const CVec ds = ds_dtheta(model, sig, sc, param_index);
    return ds * model.s_stack.adjoint() + model.s_stack * ds.adjoint();
}

std::vector<CMat> dC_all(const StackedModel& model, const SampledSignal& sig, const Scenario& sc)
{
    std::vector<CMat> out;
    out.reserve(covariance_param_count(sig));
    for (Index i = 0; i < covariance_param_count(sig); ++i) out.push_back(dC_dtheta(model, sig, sc, i));
    return out;
}

Fim fim_trace_form(const StackedModel& model, const std::vector<CMat>& dC)
{
    const CMat ci = checked_inverse(model.C);
    std::vector<CMat> w;
    w.reserve(dC.size());
    for (const auto& d : dC) w.push_back(ci * d);
    const Index n = static_cast<Index>(dC.size());
    CMat raw(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j) {
            // Tr(XY) as an elementwise sum of X^T and Y
            raw(i, j) = (w[i].transpose().cwiseProduct(w[j])).sum();
            raw(j, i) = raw(i, j);
        }
    return finish(raw, dC);
}

Fim fim_kron_form(const StackedModel& model, const std::vector<CMat>& dC)
{
    const CMat ci = checked_inverse(model.C);
    const CMat k = linalg::kron(CMat(ci.transpose()), ci);
    const Index n = static_cast<Index>(dC.size());
    std::vector<CVec> v;
    v.reserve(dC.size());
    for (const auto& d : dC) v.push_back(linalg::vec(d));
    CMat raw(n, n);
    for (Index j = 0; j < n; ++j) {
        const CVec kv = k * v[j];
        for (Index i = 0; i < n; ++i) raw(i, j) = v[i].dot(kv);
    }
    return finish(raw, dC);
}

std::vector<CVec> j_factors(const StackedModel& model, const std::vector<CMat>& dC)
{
    const CMat r = linalg::inverse_sqrt_hermitian(model.C);
    std::vector<CVec> out;
    out.reserve(dC.size());
    // (C^-T/2 kron C^-1/2) vec(X) = vec(C^-1/2 X C^-1/2)
    for (const auto& d : dC) out.push_back(linalg::vec(CMat(r * d * r)));
    return out;
}

CrbReport crb_correlated(const StackedModel& model, const std::vector<CMat>& dC, std::vector<std::string> labels)
{
    CrbReport r;
    r.method = Method::schur_numeric;
    r.notes["model"] = "covariance-model CRB";
    r.notes["looks"] = "L=" + std::to_string(model.L) + ",P=" + std::to_string(model.P);
    if (labels.empty()) labels = kDelayDoppler;
    const Fim f = fim_trace_form(model, dC);
    const Mat red = linalg::schur_complement_pinv(f.entries, 2);
    if (linalg::reduction_collapsed(red, f.entries.topLeftCorner(2, 2))) {
        for (const auto& l : labels) r.bounds[l] = BoundValue::none();
    } else {
        r.bounds = bounds_from_information(red, labels, Method::schur_numeric).bounds;
    }
    if (r.singular()) r.notes["singular"] = "delay-Doppler information rank deficient";
    return r;
}

std::vector<std::string> covariance_labels(const SampledSignal& sig) { return sample_labels(sig.size()); }

} // namespace ucrb
