#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fadoa/core.hpp"
#include "fadoa/scene.hpp"

namespace fadoa {

/// Sample covariance (1/N) D D^H of a P x N data matrix.
template <typename Derived>
auto scm(const Eigen::MatrixBase<Derived>& data) {
    using Scalar = typename Derived::Scalar;
    using Plain = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    detail::require(data.cols() >= 1 && data.rows() >= 1, "scm needs a non-empty data matrix");
    Plain r = Plain::Zero(data.rows(), data.rows());
    r.template selfadjointView<Eigen::Lower>().rankUpdate(data.derived());
    r.template triangularView<Eigen::StrictlyUpper>() = r.adjoint();
    return Plain(r / static_cast<typename Eigen::NumTraits<Scalar>::Real>(data.cols()));
}

/// Replaces every diagonal by its arithmetic mean.
template <typename Derived>
auto toeplitz_rectify(const Eigen::MatrixBase<Derived>& r) {
    using Scalar = typename Derived::Scalar;
    using Real = typename Eigen::NumTraits<Scalar>::Real;
    detail::require(r.rows() == r.cols(), "toeplitz_rectify needs a square matrix");
    const Index n = r.rows();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> t(n, n);
    for (Index off = -(n - 1); off <= n - 1; ++off) {
        const Index len = n - std::abs(off);
        Scalar sum(0);
        for (Index i = 0; i < len; ++i) sum += off >= 0 ? r(i, i + off) : r(i - off, i);
        const Scalar mean = sum / static_cast<Real>(len);
        for (Index i = 0; i < len; ++i) (off >= 0 ? t(i, i + off) : t(i - off, i)) = mean;
    }
    return t;
}

template <typename Real>
struct ShrinkageDiag {
    Real rho_raw = 0;       ///< unclamped weight
    Real rho = 0;           ///< clamped to [0, 1]
    Real trace = 0;         ///< Tr R
    Real trace_sq = 0;      ///< Tr R^2
    Real distance_sq = 0;   ///< Tr (R - R_T)^2
    bool already_toeplitz = false;
};

/// Data-driven weight between a sample covariance and its Toeplitz
/// rectification:
///
///   rho = [(N-3) Tr(R^2) + (N-1) Tr^2(R)] / [(N-2)(N+1) Tr((R - R_T)^2)]
///
/// clamped to [0, 1]. The closed form relies on large-sample trace identities
/// that are undefined below N = 4, so smaller N is refused. An input that is
/// already Toeplitz has a zero denominator; rho is then 1 (any weight yields the
/// same combination).
template <typename DerivedR, typename DerivedT>
auto shrinkage_coefficient(const Eigen::MatrixBase<DerivedR>& r, const Eigen::MatrixBase<DerivedT>& rt, Index n) {
    using Real = typename Eigen::NumTraits<typename DerivedR::Scalar>::Real;
    detail::require(n >= 4, "shrinkage coefficient needs N >= 4 snapshots");
    detail::require(r.rows() == r.cols() && rt.rows() == r.rows() && rt.cols() == r.cols(),
                    "shrinkage coefficient needs matching square matrices");
    ShrinkageDiag<Real> d;
    d.trace = std::real(r.trace());
    d.trace_sq = r.squaredNorm();  // Tr(R R) = ||R||_F^2 for Hermitian R
    d.distance_sq = (r - rt).squaredNorm();
    const Real nn = static_cast<Real>(n);
    const Real num = (nn - 3) * d.trace_sq + (nn - 1) * d.trace * d.trace;
    const Real den = (nn - 2) * (nn + 1) * d.distance_sq;
    if (!(den > std::numeric_limits<Real>::min())) {
        d.already_toeplitz = true;
        d.rho_raw = Real(1);
        d.rho = Real(1);
        return d;
    }
    d.rho_raw = num / den;
    d.rho = std::clamp(d.rho_raw, Real(0), Real(1));
    return d;
}

/// (1 - rho) R + rho R_T.
template <typename DerivedR, typename DerivedT>
auto enhanced_scm(const Eigen::MatrixBase<DerivedR>& r, const Eigen::MatrixBase<DerivedT>& rt,
                  typename Eigen::NumTraits<typename DerivedR::Scalar>::Real rho) {
    using Scalar = typename DerivedR::Scalar;
    detail::require(rho >= 0 && rho <= 1, "shrinkage weight must lie in [0, 1]");
    detail::require(rt.rows() == r.rows() && rt.cols() == r.cols(), "enhanced_scm needs matching shapes");
    if (rho == 0) return Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(r);
    if (rho == 1) return Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(rt);
    return Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>((1 - rho) * r + rho * rt);
}

/// (1/N) X_g X_g^H for every movement state of a NARS snapshot set.
template <typename Real>
std::vector<CMatrix<Real>> sub_covariances(const SnapshotSet<Real>& snapshots) {
    detail::require(snapshots.mode == Mode::NARS, "sub_covariances needs NARS snapshots");
    std::vector<CMatrix<Real>> out;
    out.reserve(snapshots.per_state.size());
    for (const auto& x : snapshots.per_state) out.push_back(scm(x));
    return out;
}

}  // namespace fadoa
