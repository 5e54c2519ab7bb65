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

#include "ucrb/overlap_paths.hpp"

#include "ucrb/linalg.hpp"

#include <cmath>

namespace ucrb {

std::string to_string(OverlapRegime r)
{
    switch (r) {
    case OverlapRegime::none: return "none";
    case OverlapRegime::total: return "total";
    case OverlapRegime::partial: return "partial";
    }
    return "unknown";
}

OverlapRegime overlap_regime(Index n0, Index M)
{
    if (n0 == 0) return OverlapRegime::total;
    return n0 > M - 1 ? OverlapRegime::none : OverlapRegime::partial;
}

OverlapFim fim_overlap(const SampledSignal& sig, Index n0, const Scenario& sc)
{
    if (!sig.is_real()) throw std::invalid_argument("fim_overlap: real signals only");
    if (n0 < 0) throw std::invalid_argument("fim_overlap: n0 must be nonnegative");
    if (!(sc.sigma_w2 > 0.0) || sc.P < 0) throw std::invalid_argument("fim_overlap: bad scenario");
    const Index M = sig.size();
    const Vec d = sig.deriv().real();
    const double w = sc.P / sc.sigma_w2;

    OverlapFim f;
    f.n0 = n0;
    f.regime = overlap_regime(n0, M);
    f.sigma_w2 = sc.sigma_w2;
    f.P = sc.P;
    f.e = w * d.squaredNorm();
    f.b_vec.resize(M);
    for (Index m = 0; m < M; ++m) f.b_vec(m) = -w * (d(m) + (m >= n0 ? d(m - n0) : 0.0));
    f.D = Mat::Zero(M, M);
    for (Index m = 0; m < M; ++m) {
        f.D(m, m) = 2.0 * w;
        if (n0 == 0) f.D(m, m) = 4.0 * w;
        else if (m + n0 < M) f.D(m, m + n0) = f.D(m + n0, m) = w;
    }
    return f;
}

double crb_overlap_closed(const OverlapFim& fim, const SampledSignal& sig)
{
    const Index M = sig.size();
    const Index n0 = fim.n0;
    if (2 * n0 < M || n0 > M - 1) throw std::invalid_argument("crb_overlap_closed: needs M/2 <= n0 <= M-1");
    const Vec d = sig.deriv().real();
    const double w = fim.P / fim.sigma_w2;
    double acc = 0.0;
    // paired samples (m, m + n0): block w [2 1; 1 2]
    for (Index m = 0; m + n0 < M; ++m) {
        const double x = d(m);
        const double y = d(m + n0);
        acc += (x - y) * (x - y) / 3.0;
    }
    // unpaired samples: scalar 2w
    for (Index m = M - n0; m < n0; ++m) acc += 0.5 * d(m) * d(m);
    return 1.0 / (w * acc);
}

CrbReport crb_overlap(const OverlapFim& fim)
{
    CrbReport r;
    r.method = Method::schur_numeric;
    r.notes["regime"] = to_string(fim.regime);
    const auto flag = [&](const std::string& why) {
        r.bounds["tau0"] = BoundValue::none();
        r.notes["singular"] = why;
        return r;
    };
    if (!(fim.e > 0.0)) return flag("zero delay information (P=0 or constant signal)");
    if (fim.regime == OverlapRegime::total) return flag("total overlap: delay confounded with the signal");

    Mat full(fim.D.rows() + 1, fim.D.cols() + 1);
    full(0, 0) = fim.e;
    full.block(0, 1, 1, fim.D.cols()) = fim.b_vec.transpose();
    full.block(1, 0, fim.D.rows(), 1) = fim.b_vec;
    full.bottomRightCorner(fim.D.rows(), fim.D.cols()) = fim.D;
    double red = 0.0;
    try {
        red = linalg::schur_complement(full, 1)(0, 0);
    } catch (const std::domain_error&) {
        return flag("sample block singular");
    }
    if (!(red > 1e-10 * fim.e)) return flag("e - b^T D^-1 b vanishes");
    r.bounds["tau0"] = BoundValue::finite(1.0 / red);
    return r;
}

std::vector<OverlapRow> triangle_overlap_curve(int M, const Scenario& sc)
{
    const SampledSignal tri = triangle_wave(M);
    std::vector<OverlapRow> rows;
    rows.reserve(M + 1);
    for (Index n0 = 0; n0 <= M; ++n0) {
        const OverlapFim f = fim_overlap(tri, n0, sc);
        OverlapRow row;
        row.n0 = n0;
        row.regime = f.regime;
        row.crb = crb_overlap(f).at("tau0");
        row.method = Method::schur_numeric;
        if (2 * n0 >= M && n0 <= M - 1 && sc.P > 0) {
            row.closed = BoundValue::finite(crb_overlap_closed(f, tri));
            row.method = Method::closed_form;
        } else if (f.regime == OverlapRegime::none && sc.P > 0) {
            row.closed = BoundValue::finite(2.0 * sc.sigma_w2 / (sc.P * tri.deriv().squaredNorm()));
            row.method = Method::closed_form;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace ucrb
