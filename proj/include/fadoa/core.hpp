#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fadoa {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

using CMatrixXd = CMatrix<double>;
using CVectorXd = CVector<double>;

/// Signal alignment across movement states within one coherence block.
enum class Mode { ARS, NARS };

inline const char* to_string(Mode mode) { return mode == Mode::ARS ? "ARS" : "NARS"; }

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument or configuration was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The MUSIC spectrum did not contain enough local maxima.
class ResolutionFailure : public Error {
public:
    ResolutionFailure(std::size_t found, std::size_t wanted)
        : Error("resolution failure: found " + std::to_string(found) + " local maxima, need " +
                std::to_string(wanted)),
          found_(found), wanted_(wanted) {}

    std::size_t found() const noexcept { return found_; }
    std::size_t wanted() const noexcept { return wanted_; }

private:
    std::size_t found_;
    std::size_t wanted_;
};

/// The Nystrom sub-block did not carry enough signal energy.
class RankDeficiency : public Error {
public:
    using Error::Error;
};

namespace detail {

template <typename Real>
constexpr Real deg2rad(Real deg) {
    return deg * std::numbers::pi_v<Real> / Real(180);
}

template <typename Real>
constexpr Real rad2deg(Real rad) {
    return rad * Real(180) / std::numbers::pi_v<Real>;
}

inline void require(bool cond, const std::string& what) {
    if (!cond) throw InvalidArgument(what);
}

}  // namespace detail
}  // namespace fadoa
