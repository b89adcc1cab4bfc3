#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fadoa/core.hpp"
#include "fadoa/subspace.hpp"

namespace fadoa {

/// MUSIC pseudo-spectrum sampled on an ascending angle grid in (-90, 90].
template <typename Real>
struct SpectrumGrid {
    std::vector<Real> angles_deg;
    std::vector<Real> values;

    Real step() const { return angles_deg.size() > 1 ? angles_deg[1] - angles_deg[0] : Real(0); }
};

/// -90 + step, -90 + 2 step, ..., up to 90.
template <typename Real>
std::vector<Real> angle_grid(Real step_deg) {
    detail::require(step_deg > 0 && step_deg <= 90, "grid step must lie in (0, 90] degrees");
    const auto count = static_cast<Index>(std::floor(Real(180) / step_deg + Real(1e-9)));
    std::vector<Real> grid(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i) grid[i] = Real(-90) + static_cast<Real>(i + 1) * step_deg;
    return grid;
}

/// Uniform phase ramp exp(sign * j * p * 2 pi d sin(theta)), p = 0..size-1.
/// The ARS virtual ULA uses sign -1, matching the physical steering vector.
/// The coarray Toeplitz matrix has entry (k, s) at lag s - k, which makes its
/// manifold the conjugate ramp, sign +1.
template <typename Real>
struct SteeringFamily {
    Index size = 0;
    Real spacing = Real(0.5);
    Real sign = Real(-1);

    static SteeringFamily ars(Index virtual_size, Real spacing) { return {virtual_size, spacing, Real(-1)}; }
    static SteeringFamily nars(Index extent, Real spacing) { return {extent + 1, spacing, Real(1)}; }

    CVector<Real> operator()(Real theta_deg) const {
        const Real phase = sign * Real(2) * std::numbers::pi_v<Real> * spacing * std::sin(detail::deg2rad(theta_deg));
        CVector<Real> v(size);
        for (Index p = 0; p < size; ++p) v[p] = std::polar(Real(1), static_cast<Real>(p) * phase);
        return v;
    }
};

template <typename Real>
CVector<Real> virtual_steering_ars(Real theta_deg, Index virtual_size, Real spacing) {
    return SteeringFamily<Real>::ars(virtual_size, spacing)(theta_deg);
}

template <typename Real>
CVector<Real> virtual_steering_nars(Real theta_deg, Index extent, Real spacing) {
    return SteeringFamily<Real>::nars(extent, spacing)(theta_deg);
}

inline constexpr double kSpectrumCap = 1e15;

/// f(theta) = 1 / (v^H (I - U U^H) v); denominators below 1/cap are capped.
template <typename Real>
SpectrumGrid<Real> music_spectrum(const SubspaceBasis<Real>& subspace, const SteeringFamily<Real>& family,
                                  Real step_deg) {
    const CMatrix<Real>& u = subspace.basis;
    detail::require(u.rows() == family.size, "steering size must match the subspace dimension");
    detail::require(u.cols() >= 1 && u.cols() < u.rows(), "need 1 <= KL < P");

    SpectrumGrid<Real> out;
    out.angles_deg = angle_grid<Real>(step_deg);
    const auto count = static_cast<Index>(out.angles_deg.size());
    CMatrix<Real> steering(family.size, count);
    for (Index i = 0; i < count; ++i) steering.col(i) = family(out.angles_deg[i]);

    // the explicit residual avoids cancellation near the true directions
    const CMatrix<Real> residual = steering - u * (u.adjoint() * steering);
    const Real cap = static_cast<Real>(kSpectrumCap);
    out.values.resize(out.angles_deg.size());
    for (Index i = 0; i < count; ++i) {
        const Real den = residual.col(i).squaredNorm();
        out.values[i] = den < Real(1) / cap ? cap : Real(1) / den;
    }
    return out;
}

/// The KL largest interior local maxima, each refined by a three-point
/// parabola through its grid neighbours, returned in ascending angle order.
/// Equal heights prefer the smaller angle.
template <typename Real>
std::vector<Real> pick_peaks(const SpectrumGrid<Real>& spectrum, Index num_paths) {
    const auto& f = spectrum.values;
    const auto& theta = spectrum.angles_deg;
    detail::require(f.size() == theta.size(), "spectrum angles and values differ in length");
    detail::require(num_paths >= 1, "need KL >= 1");

    std::vector<std::size_t> maxima;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        if (f[i] > f[i - 1] && f[i] >= f[i + 1]) maxima.push_back(i);
    }
    if (maxima.size() < static_cast<std::size_t>(num_paths)) throw ResolutionFailure(maxima.size(), num_paths);

    std::stable_sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });
    maxima.resize(static_cast<std::size_t>(num_paths));

    const Real step = spectrum.step();
    std::vector<Real> out;
    for (std::size_t i : maxima) {
        const Real a = f[i - 1], b = f[i], c = f[i + 1];
        const Real curv = a - Real(2) * b + c;
        Real shift = curv < Real(0) ? Real(0.5) * (a - c) / curv : Real(0);
        shift = std::clamp(shift, Real(-0.5), Real(0.5));
        out.push_back(theta[i] + shift * step);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace fadoa
