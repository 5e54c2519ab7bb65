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

#ifndef UCRB_LINALG_HPP
#define UCRB_LINALG_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace ucrb::linalg {

/// True when every off-diagonal entry is exactly zero.
template <typename Derived>
bool is_diagonal(const Eigen::MatrixBase<Derived>& m)
{
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (i != j && m(i, j) != typename Derived::Scalar(0)) return false;
    return true;
}

/// 2-norm condition number of a symmetric (or Hermitian) matrix; infinity
/// when the smallest eigenvalue magnitude is zero.
template <typename Derived>
double symmetric_condition(const Eigen::MatrixBase<Derived>& m)
{
    using Plain = typename Derived::PlainObject;
    Eigen::SelfAdjointEigenSolver<Plain> es(m.eval(), Eigen::EigenvaluesOnly);
    const auto ev = es.eigenvalues().cwiseAbs();
    const double lo = ev.minCoeff();
    const double hi = ev.maxCoeff();
    if (hi == 0.0) return std::numeric_limits<double>::infinity();
    return lo == 0.0 ? std::numeric_limits<double>::infinity() : hi / lo;
}

/// Schur complement of the trailing block: for M = [A B; B^T C] with A of
/// size k x k, returns A - B C^{-1} B^T. A diagonal C is inverted entrywise;
/// otherwise a pivoted LDL^T factorization is used. Throws
/// std::domain_error when C is singular (condition estimate > cond_limit).
template <typename Derived>
typename Derived::PlainObject schur_complement(const Eigen::MatrixBase<Derived>& m, Eigen::Index k,
                                               double cond_limit = 1e12)
{
    using Plain = typename Derived::PlainObject;
    const Eigen::Index n = m.rows();
    if (m.cols() != n || k < 0 || k > n) throw std::invalid_argument("schur_complement: bad block size");
    const Eigen::Index r = n - k;
    Plain a = m.topLeftCorner(k, k);
    if (r == 0) return a;
    const auto b = m.topRightCorner(k, r);
    const auto c = m.bottomRightCorner(r, r);

    if (is_diagonal(c)) {
        const auto d = c.diagonal().cwiseAbs();
        const double hi = d.maxCoeff();
        const double lo = d.minCoeff();
        if (hi == 0.0 || lo * cond_limit < hi) throw std::domain_error("schur_complement: singular trailing block");
        a.noalias() -= b * c.diagonal().cwiseInverse().asDiagonal() * b.transpose();
        return a;
    }
    if (symmetric_condition(c) > cond_limit) throw std::domain_error("schur_complement: singular trailing block");
    Eigen::LDLT<Plain> ldlt(c);
    a.noalias() -= b * ldlt.solve(Plain(b.transpose()));
    return a;
}

/// Same as schur_complement but eliminates with the Moore-Penrose
/// pseudo-inverse of C. Valid when range(B^T) lies in range(C), which holds
/// for any Fisher information matrix whose null directions live entirely in
/// the eliminated block.
template <typename Derived>
typename Derived::PlainObject schur_complement_pinv(const Eigen::MatrixBase<Derived>& m, Eigen::Index k,
                                                    double rel_floor = 1e-10)
{
    using Plain = typename Derived::PlainObject;
    const Eigen::Index n = m.rows();
    const Eigen::Index r = n - k;
    Plain a = m.topLeftCorner(k, k);
    if (r == 0) return a;
    Plain c = m.bottomRightCorner(r, r);
    Plain b = m.topRightCorner(k, r);
    Eigen::SelfAdjointEigenSolver<Plain> es(c);
    const auto& ev = es.eigenvalues();
    const double floor = rel_floor * ev.cwiseAbs().maxCoeff();
    Eigen::VectorXd inv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) inv(i) = std::abs(ev(i)) > floor ? 1.0 / ev(i) : 0.0;
    const Plain bv = b * es.eigenvectors();
    a.noalias() -= bv * inv.asDiagonal() * bv.adjoint();
    return a;
}

/// True when elimination left (numerically) no information: the reduced
/// block, normalized by the diagonal of the leading block before
/// elimination, has an eigenvalue <= rel. Catches cancellation residue
/// that looks well conditioned on its own scale.
inline bool reduction_collapsed(const Eigen::MatrixXd& reduced, const Eigen::MatrixXd& leading, double rel = 1e-10)
{
    const Eigen::VectorXd d = leading.diagonal();
    if (d.size() == 0) return false;
    if (d.minCoeff() <= 0.0) return true;
    const Eigen::VectorXd w = d.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd n = w.asDiagonal() * reduced * w.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(n, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() <= rel;
}

/// Hermitian inverse square root via eigendecomposition; eigenvalues below
/// floor * lambda_max are clamped to that floor.
template <typename Derived>
typename Derived::PlainObject inverse_sqrt_hermitian(const Eigen::MatrixBase<Derived>& m, double floor = 1e-12)
{
    using Plain = typename Derived::PlainObject;
    Eigen::SelfAdjointEigenSolver<Plain> es(m.eval());
    Eigen::VectorXd ev = es.eigenvalues();
    const double lo = floor * ev.maxCoeff();
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = 1.0 / std::sqrt(std::max(ev(i), lo));
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

/// Dense Kronecker product.
template <typename DA, typename DB>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(const Eigen::MatrixBase<DA>& a,
                                                                        const Eigen::MatrixBase<DB>& b)
{
    Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Column-stacking vectorization.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vec(const Eigen::MatrixBase<Derived>& m)
{
    const typename Derived::PlainObject p = m;
    return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>(p.data(), p.size());
}

} // namespace ucrb::linalg

#endif // UCRB_LINALG_HPP
