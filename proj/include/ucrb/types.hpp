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

#ifndef UCRB_TYPES_HPP
#define UCRB_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ucrb {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

/// Raised when a model is not identifiable and the caller asked for a
/// point estimate rather than a bound (bounds report singularity as data).
class unidentifiable_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Labeled real symmetric Fisher information matrix.
struct Fim {
    Mat entries;
    std::vector<std::string> labels;

    Index size() const { return entries.rows(); }

    /// Symmetric to `rel_tol` relative to the largest magnitude entry.
    bool is_symmetric(double rel_tol = 1e-12) const;

    /// Smallest eigenvalue >= -rel_tol * spectral norm.
    bool is_psd(double rel_tol = 1e-10) const;
};

enum class Method { closed_form, schur_numeric, oracle, monte_carlo };

std::string to_string(Method m);

struct BoundValue {
    double value = std::numeric_limits<double>::infinity();
    bool singular = false;

    static BoundValue finite(double v) { return {v, false}; }
    static BoundValue none() { return {std::numeric_limits<double>::infinity(), true}; }
};

/// Per-parameter bounds (variance units) and where they came from.
struct CrbReport {
    Method method = Method::closed_form;
    std::map<std::string, BoundValue> bounds;
    // free-form provenance: looks, derivative method, dispatch decisions
    std::map<std::string, std::string> notes;

    bool singular() const;
    bool has(const std::string& name) const { return bounds.count(name) != 0; }
    const BoundValue& at(const std::string& name) const;
    double value(const std::string& name) const { return at(name).value; }
};

/// Inverts a small information matrix and reports the diagonal, flagging
/// rank deficiency (condition estimate above 1e12 or a nonpositive pivot).
CrbReport bounds_from_information(const Mat& info, const std::vector<std::string>& labels,
                                  Method method, double cond_limit = 1e12);

} // namespace ucrb

#endif // UCRB_TYPES_HPP
