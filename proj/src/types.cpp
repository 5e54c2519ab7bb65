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

#include "ucrb/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace ucrb {

bool Fim::is_symmetric(double rel_tol) const
{
    const double scale = entries.cwiseAbs().maxCoeff();
    if (scale == 0.0) return true;
    return (entries - entries.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

bool Fim::is_psd(double rel_tol) const
{
    Eigen::SelfAdjointEigenSolver<Mat> es(entries, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double norm = ev.cwiseAbs().maxCoeff();
    return ev.minCoeff() >= -rel_tol * norm;
}

std::string to_string(Method m)
{
    switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::schur_numeric: return "schur_numeric";
    case Method::oracle: return "oracle";
    case Method::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

bool CrbReport::singular() const
{
    for (const auto& [name, b] : bounds)
        if (b.singular) return true;
    return false;
}

const BoundValue& CrbReport::at(const std::string& name) const
{
    auto it = bounds.find(name);
    if (it == bounds.end()) throw std::out_of_range("CrbReport: no bound named " + name);
    return it->second;
}

CrbReport bounds_from_information(const Mat& info, const std::vector<std::string>& labels, Method method,
                                  double cond_limit)
{
    if (info.rows() != info.cols() || static_cast<std::size_t>(info.rows()) != labels.size())
        throw std::invalid_argument("bounds_from_information: size mismatch");
    CrbReport r;
    r.method = method;
    Eigen::SelfAdjointEigenSolver<Mat> es(info);
    const auto& ev = es.eigenvalues();
    const double hi = ev.cwiseAbs().maxCoeff();
    const bool singular = !(hi > 0.0) || ev.minCoeff() <= 0.0 || ev.minCoeff() * cond_limit < hi;
    if (singular) {
        for (const auto& l : labels) r.bounds[l] = BoundValue::none();
        return r;
    }
    Mat inv;
    if (info.rows() == 2) {
        // adjugate form keeps full precision on the 2x2 delay-Doppler block
        const double det = info(0, 0) * info(1, 1) - info(0, 1) * info(1, 0);
        inv.resize(2, 2);
        inv << info(1, 1) / det, -info(0, 1) / det, -info(1, 0) / det, info(0, 0) / det;
    } else {
        inv = info.ldlt().solve(Mat::Identity(info.rows(), info.cols()));
    }
    for (std::size_t i = 0; i < labels.size(); ++i) r.bounds[labels[i]] = BoundValue::finite(inv(i, i));
    return r;
}

} // namespace ucrb
