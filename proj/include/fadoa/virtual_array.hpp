#pragma once

#include <span>
#include <vector>

#include "fadoa/core.hpp"
#include "fadoa/geometry.hpp"

namespace fadoa {

/// Row p of the virtual ULA data holds the element at p*d. In the stacked
/// input, physical element m of state g sits at row g*M + m and at
/// coordinate m(G+1) + g, so the permutation is p = m(G+1) + g.
template <typename Derived>
auto rearrange_ars(const Eigen::MatrixBase<Derived>& stacked, const ArraySpec& spec) {
    using Scalar = typename Derived::Scalar;
    detail::require(spec.mode == Mode::ARS, "rearrange_ars needs an ARS spec");
    const Index m = spec.num_antennas;
    const Index states = spec.num_states();
    detail::require(stacked.rows() == m * states, "stacked data must have (G+1)M rows");
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> y(stacked.rows(), stacked.cols());
    for (Index g = 0; g < states; ++g)
        for (Index e = 0; e < m; ++e) y.row(e * states + g) = stacked.row(g * m + e);
    return y;
}

/// Inverse of rearrange_ars.
template <typename Derived>
auto unrearrange_ars(const Eigen::MatrixBase<Derived>& virtual_rows, const ArraySpec& spec) {
    using Scalar = typename Derived::Scalar;
    const Index m = spec.num_antennas;
    const Index states = spec.num_states();
    detail::require(virtual_rows.rows() == m * states, "virtual data must have (G+1)M rows");
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> x(virtual_rows.rows(), virtual_rows.cols());
    for (Index g = 0; g < states; ++g)
        for (Index e = 0; e < m; ++e) x.row(g * m + e) = virtual_rows.row(e * states + g);
    return x;
}

/// Spatial correlation sampled at lags -extent..extent (index lag + extent).
template <typename Real>
struct CoarrayVector {
    CVector<Real> values;
    int extent = 0;

    std::complex<Real> at(int lag) const { return values[lag + extent]; }
};

/// Picks, for every lag, the sub-covariance entry named by lag_lookup.
template <typename Real>
CoarrayVector<Real> build_coarray_vector(std::span<const CMatrix<Real>> sub_covs, const ArraySpec& spec) {
    detail::require(spec.mode == Mode::NARS, "build_coarray_vector needs a NARS spec");
    detail::require(static_cast<int>(sub_covs.size()) == spec.num_states(),
                    "need one sub-covariance per movement state");
    for (const auto& r : sub_covs)
        detail::require(r.rows() == spec.num_antennas && r.cols() == spec.num_antennas,
                        "sub-covariances must be M x M");
    CoarrayVector<Real> out;
    out.extent = coarray_extent(spec);
    out.values.resize(2 * out.extent + 1);
    for (int lag = -out.extent; lag <= out.extent; ++lag) {
        const LagSource src = lag_lookup(spec, lag);
        out.values[lag + out.extent] = sub_covs[src.state](src.row, src.col);
    }
    return out;
}

/// Column s is the flipped window of r starting at offset s, so entry (k, s)
/// holds the correlation at lag s - k.
template <typename Real>
CMatrix<Real> build_toeplitz_scm(const CoarrayVector<Real>& r) {
    detail::require(r.values.size() % 2 == 1 && r.values.size() == 2 * r.extent + 1,
                    "coarray vector must have odd length 2*extent + 1");
    const Index size = r.extent + 1;
    CMatrix<Real> rc(size, size);
    for (Index s = 0; s < size; ++s) rc.col(s) = r.values.segment(s, size).reverse();
    return rc;
}

}  // namespace fadoa
