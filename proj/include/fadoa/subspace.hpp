#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fadoa/core.hpp"
#include "fadoa/random.hpp"

namespace fadoa {

enum class SubspaceMethod { Exact, Nystrom };

inline const char* to_string(SubspaceMethod m) { return m == SubspaceMethod::Exact ? "exact" : "nystrom"; }

/// Orthonormal P x KL basis of the estimated signal subspace.
template <typename Real>
struct SubspaceBasis {
    CMatrix<Real> basis;
    SubspaceMethod method = SubspaceMethod::Exact;
    std::vector<Index> subset;   ///< rows/cols used by Nystrom, ascending
    RVector<Real> eigenvalues;   ///< descending; of R (exact) or of the sub-block (Nystrom)

    CMatrix<Real> projector() const { return basis * basis.adjoint(); }
};

/// KL dominant eigenvectors of a Hermitian matrix.
template <typename Real>
SubspaceBasis<Real> exact_signal_subspace(const CMatrix<Real>& r, Index num_paths) {
    detail::require(r.rows() == r.cols(), "subspace extraction needs a square matrix");
    detail::require(num_paths >= 1 && num_paths < r.rows(), "need 1 <= KL < dim(R)");
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> eig(r);
    if (eig.info() != Eigen::Success) throw Error("Hermitian eigen-solver did not converge");
    SubspaceBasis<Real> out;
    out.method = SubspaceMethod::Exact;
    out.eigenvalues = eig.eigenvalues().reverse();
    out.basis = eig.eigenvectors().rightCols(num_paths).rowwise().reverse();
    return out;
}

enum class SubsetSelection { Random, EvenlySpaced };

/// N_a of P indices, ascending. Random draws are seeded and without replacement.
inline std::vector<Index> select_subset(Index size, Index count, std::uint64_t seed,
                                        SubsetSelection how = SubsetSelection::Random) {
    detail::require(count >= 1 && count <= size, "subset size must lie in [1, P]");
    std::vector<Index> out;
    if (how == SubsetSelection::EvenlySpaced) {
        for (Index i = 0; i < count; ++i)
            out.push_back(count == 1 ? 0 : static_cast<Index>(std::llround(double(i) * double(size - 1) / double(count - 1))));
        return out;
    }
    std::vector<Index> all(static_cast<std::size_t>(size));
    std::iota(all.begin(), all.end(), Index(0));
    Substream rng(seed);
    for (Index i = 0; i < count; ++i) {
        std::uniform_int_distribution<Index> pick(i, size - 1);
        std::swap(all[i], all[pick(rng)]);
    }
    out.assign(all.begin(), all.begin() + count);
    std::sort(out.begin(), out.end());
    return out;
}

/// Nystrom approximation of the KL dominant eigenvectors from the rows and
/// columns in `subset`:
///   R_N1 = R[S, S] = sum_i gamma_i u_i u_i^H,   u_ns,i = R[:, S] u_i / gamma_i.
/// The u_ns,i are orthonormalized before use so that I - U U^H is a projector.
/// Sub-block eigenvalues at or below 1e-12 * gamma_max carry no signal energy;
/// if fewer than KL remain, RankDeficiency is thrown.
template <typename Real>
SubspaceBasis<Real> nystrom_signal_subspace(const CMatrix<Real>& r, std::span<const Index> subset, Index num_paths) {
    const Index p = r.rows();
    const Index na = static_cast<Index>(subset.size());
    detail::require(r.cols() == p, "subspace extraction needs a square matrix");
    detail::require(num_paths >= 1 && num_paths < p, "need 1 <= KL < dim(R)");
    detail::require(num_paths <= na && na <= p, "need KL <= N_a <= dim(R)");
    for (Index i = 0; i < na; ++i) {
        detail::require(subset[i] >= 0 && subset[i] < p, "subset index out of range");
        if (i > 0) detail::require(subset[i] > subset[i - 1], "subset must be strictly increasing");
    }

    CMatrix<Real> r_n1(na, na);
    CMatrix<Real> r_n2(p, na);
    for (Index j = 0; j < na; ++j) {
        r_n2.col(j) = r.col(subset[j]);
        for (Index i = 0; i < na; ++i) r_n1(i, j) = r(subset[i], subset[j]);
    }

    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> eig(r_n1);
    if (eig.info() != Eigen::Success) throw Error("Hermitian eigen-solver did not converge");
    const RVector<Real> gamma = eig.eigenvalues().reverse();
    const CMatrix<Real> u = eig.eigenvectors().rowwise().reverse();

    const Real floor = Real(1e-12) * gamma[0];
    if (!(gamma[0] > Real(0)) || !(gamma[num_paths - 1] > floor)) {
        throw RankDeficiency("Nystrom sub-block has rank below KL = " + std::to_string(num_paths));
    }

    CMatrix<Real> approx = r_n2 * u.leftCols(num_paths);
    for (Index i = 0; i < num_paths; ++i) approx.col(i) /= gamma[i];

    Eigen::HouseholderQR<CMatrix<Real>> qr(approx);
    SubspaceBasis<Real> out;
    out.method = SubspaceMethod::Nystrom;
    out.basis = qr.householderQ() * CMatrix<Real>::Identity(p, num_paths);
    out.subset.assign(subset.begin(), subset.end());
    out.eigenvalues = gamma;
    return out;
}

template <typename Real>
SubspaceBasis<Real> nystrom_signal_subspace(const CMatrix<Real>& r, Index subset_size, Index num_paths,
                                            std::uint64_t seed, SubsetSelection how = SubsetSelection::Random) {
    detail::require(num_paths <= subset_size, "need KL <= N_a");
    detail::require(subset_size <= r.rows(), "need N_a <= dim(R)");
    const auto subset = select_subset(r.rows(), subset_size, seed, how);
    return nystrom_signal_subspace<Real>(r, std::span<const Index>(subset), num_paths);
}

}  // namespace fadoa
