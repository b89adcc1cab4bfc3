#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fadoa/core.hpp"
#include "fadoa/geometry.hpp"
#include "fadoa/random.hpp"

namespace fadoa {

/// Far-field multipath scene: K users with L paths each. `doas_deg` holds the
/// K*L path directions user-major (all paths of user 0, then user 1, ...).
struct Scene {
    int num_users = 1;
    int paths_per_user = 1;
    std::vector<double> doas_deg;
    double path_gain_var = 1.0;
    double signal_power = 1.0;
    double noise_var = 1.0;

    int num_paths() const { return num_users * paths_per_user; }

    /// Per-path receive power over per-element noise power, in dB.
    double snr_db() const { return 10.0 * std::log10(path_gain_var * signal_power / noise_var); }

    /// Sets noise_var so that snr_db() == snr.
    void set_snr_db(double snr) { noise_var = path_gain_var * signal_power * std::pow(10.0, -snr / 10.0); }

    /// Zero variances are accepted so degenerate noise-free or gain-free scenes
    /// can be simulated; pipelines reject them separately where needed.
    void validate() const {
        detail::require(num_users >= 1 && paths_per_user >= 1, "scene needs K >= 1 and L >= 1");
        detail::require(static_cast<int>(doas_deg.size()) == num_paths(),
                        "scene needs exactly K*L directions");
        for (std::size_t i = 0; i < doas_deg.size(); ++i) {
            const double t = doas_deg[i];
            detail::require(std::isfinite(t) && t > -90.0 && t <= 90.0,
                            "direction " + std::to_string(t) + " outside (-90, 90]");
            for (std::size_t j = 0; j < i; ++j)
                detail::require(doas_deg[j] != t, "directions must be distinct");
        }
        detail::require(path_gain_var >= 0 && signal_power >= 0 && noise_var >= 0,
                        "scene powers must be non-negative");
    }
};

/// exp(-j 2 pi x_m sin(theta)) for element coordinates x_m in wavelengths.
template <typename Real>
CVector<Real> steering_vector(std::span<const Real> coords, Real theta_deg) {
    const Real phase = Real(2) * std::numbers::pi_v<Real> * std::sin(detail::deg2rad(theta_deg));
    CVector<Real> a(static_cast<Index>(coords.size()));
    for (Index m = 0; m < a.size(); ++m) a[m] = std::polar(Real(1), -coords[m] * phase);
    return a;
}

/// Element coordinates in wavelengths for one movement state.
template <typename Real>
std::vector<Real> state_coords(const ArraySpec& spec, int g) {
    std::vector<Real> out;
    for (int p : positions(spec, g)) out.push_back(static_cast<Real>(p) * static_cast<Real>(spec.step));
    return out;
}

/// Manifold A_g = [a_g(theta_1), ..., a_g(theta_KL)].
template <typename Real>
CMatrix<Real> manifold(std::span<const Real> coords, std::span<const double> doas_deg) {
    CMatrix<Real> a(static_cast<Index>(coords.size()), static_cast<Index>(doas_deg.size()));
    for (Index k = 0; k < a.cols(); ++k) a.col(k) = steering_vector<Real>(coords, static_cast<Real>(doas_deg[k]));
    return a;
}

/// Per-state manifolds of one array/scene pair, built once per dataset.
template <typename Real>
struct ArrayManifold {
    ArraySpec spec;
    std::vector<CMatrix<Real>> states;

    ArrayManifold(const ArraySpec& s, const Scene& scene) : spec(s) {
        for (int g = 0; g <= spec.num_movements; ++g) {
            const auto coords = state_coords<Real>(spec, g);
            states.push_back(manifold<Real>(coords, scene.doas_deg));
        }
    }
};

/// Raw receiver output. ARS: one (G+1)M x N matrix stacked state-major
/// (rows gM..gM+M-1 hold state g). NARS: G+1 matrices of size M x N.
template <typename Real>
struct SnapshotSet {
    Mode mode = Mode::ARS;
    CMatrix<Real> stacked;
    std::vector<CMatrix<Real>> per_state;

    Index num_blocks() const {
        return mode == Mode::ARS ? stacked.cols() : (per_state.empty() ? 0 : per_state.front().cols());
    }

    bool operator==(const SnapshotSet& other) const {
        if (mode != other.mode || per_state.size() != other.per_state.size()) return false;
        if (stacked.rows() != other.stacked.rows() || stacked.cols() != other.stacked.cols()) return false;
        if (stacked != other.stacked) return false;
        for (std::size_t g = 0; g < per_state.size(); ++g) {
            if (per_state[g].rows() != other.per_state[g].rows() ||
                per_state[g].cols() != other.per_state[g].cols() || per_state[g] != other.per_state[g])
                return false;
        }
        return true;
    }
};

namespace stream_tag {
inline constexpr std::uint64_t gains = 1;
inline constexpr std::uint64_t symbols = 2;
inline constexpr std::uint64_t noise = 3;
}  // namespace stream_tag

/// One block of i.i.d. CN(0, sigma_alpha^2) path gains, K x L.
template <typename Real, typename Engine>
CMatrix<Real> draw_block_gains(const Scene& scene, Engine& rng) {
    ComplexGaussian<Real> cn(static_cast<Real>(scene.path_gain_var));
    CMatrix<Real> gains(scene.num_users, scene.paths_per_user);
    for (Index k = 0; k < gains.rows(); ++k)
        for (Index l = 0; l < gains.cols(); ++l) gains(k, l) = cn(rng);
    return gains;
}

namespace detail {

/// s' = D s: every path of user k carries that user's symbol times its own gain.
template <typename Real, typename Engine>
CVector<Real> effective_signal(const Scene& scene, const CMatrix<Real>& gains, Engine& rng) {
    ComplexGaussian<Real> cn(static_cast<Real>(scene.signal_power));
    CVector<Real> s(scene.num_paths());
    for (int k = 0; k < scene.num_users; ++k) {
        const auto symbol = cn(rng);
        for (int l = 0; l < scene.paths_per_user; ++l) s[k * scene.paths_per_user + l] = gains(k, l) * symbol;
    }
    return s;
}

template <typename Real, typename Engine>
CVector<Real> noise_vector(Index size, Real variance, Engine& rng) {
    ComplexGaussian<Real> cn(variance);
    CVector<Real> e(size);
    for (Index i = 0; i < size; ++i) e[i] = cn(rng);
    return e;
}

}  // namespace detail

/// ARS block: one effective signal vector shared by all G+1 states.
/// Symbols come from rng.child(symbols); the noise of state g from
/// rng.child(noise).child(g).
template <typename Real>
CVector<Real> simulate_block_ars(const Scene& scene, const ArrayManifold<Real>& am, const CMatrix<Real>& gains,
                                 const Substream& rng) {
    detail::require(am.spec.mode == Mode::ARS, "simulate_block_ars needs an ARS array");
    const Index m = am.spec.num_antennas;
    auto sym_rng = rng.child(stream_tag::symbols);
    const CVector<Real> s = detail::effective_signal<Real>(scene, gains, sym_rng);
    CVector<Real> x(m * am.spec.num_states());
    const auto noise_root = rng.child(stream_tag::noise);
    for (int g = 0; g < am.spec.num_states(); ++g) {
        auto nrng = noise_root.child(static_cast<std::uint64_t>(g));
        x.segment(g * m, m) = am.states[g] * s + detail::noise_vector<Real>(m, static_cast<Real>(scene.noise_var), nrng);
    }
    return x;
}

/// NARS block: fresh symbols per state, gains shared across states.
template <typename Real>
std::vector<CVector<Real>> simulate_block_nars(const Scene& scene, const ArrayManifold<Real>& am,
                                               const CMatrix<Real>& gains, const Substream& rng) {
    detail::require(am.spec.mode == Mode::NARS, "simulate_block_nars needs a NARS array");
    const Index m = am.spec.num_antennas;
    std::vector<CVector<Real>> out;
    const auto sym_root = rng.child(stream_tag::symbols);
    const auto noise_root = rng.child(stream_tag::noise);
    for (int g = 0; g < am.spec.num_states(); ++g) {
        auto srng = sym_root.child(static_cast<std::uint64_t>(g));
        auto nrng = noise_root.child(static_cast<std::uint64_t>(g));
        const CVector<Real> s = detail::effective_signal<Real>(scene, gains, srng);
        out.push_back(am.states[g] * s + detail::noise_vector<Real>(m, static_cast<Real>(scene.noise_var), nrng));
    }
    return out;
}

/// N blocks; block n draws everything from Substream(seed).child(n).
template <typename Real = double>
SnapshotSet<Real> simulate_dataset(const Scene& scene, const ArraySpec& spec, Index num_blocks, std::uint64_t seed) {
    detail::require(num_blocks >= 1, "need at least one time block");
    scene.validate();
    spec.validate();
    const ArrayManifold<Real> am(spec, scene);
    const Substream root(seed);
    const Index m = spec.num_antennas;

    SnapshotSet<Real> out;
    out.mode = spec.mode;
    if (spec.mode == Mode::ARS) {
        out.stacked.resize(m * spec.num_states(), num_blocks);
    } else {
        out.per_state.assign(static_cast<std::size_t>(spec.num_states()), CMatrix<Real>(m, num_blocks));
    }
    for (Index n = 0; n < num_blocks; ++n) {
        const auto block = root.child(static_cast<std::uint64_t>(n));
        auto grng = block.child(stream_tag::gains);
        const CMatrix<Real> gains = draw_block_gains<Real>(scene, grng);
        if (spec.mode == Mode::ARS) {
            out.stacked.col(n) = simulate_block_ars<Real>(scene, am, gains, block);
        } else {
            const auto xs = simulate_block_nars<Real>(scene, am, gains, block);
            for (std::size_t g = 0; g < xs.size(); ++g) out.per_state[g].col(n) = xs[g];
        }
    }
    return out;
}

/// Covariance of s' (paths are uncorrelated because gains are independent).
template <typename Real>
CMatrix<Real> signal_covariance(const Scene& scene) {
    const auto n = static_cast<Index>(scene.num_paths());
    return CMatrix<Real>::Identity(n, n) * static_cast<Real>(scene.path_gain_var * scene.signal_power);
}

/// Expected covariance of the rearranged virtual-ULA data, B R_S B^H + sigma_e^2 I.
template <typename Real>
CMatrix<Real> ars_expected_covariance(const Scene& scene, const ArraySpec& spec) {
    const Index size = virtual_size(spec);
    std::vector<Real> coords(static_cast<std::size_t>(size));
    for (Index p = 0; p < size; ++p) coords[p] = static_cast<Real>(p) * static_cast<Real>(spec.step);
    const CMatrix<Real> b = manifold<Real>(coords, scene.doas_deg);
    return b * signal_covariance<Real>(scene) * b.adjoint() +
           static_cast<Real>(scene.noise_var) * CMatrix<Real>::Identity(size, size);
}

/// Expected per-state covariances A_g R_S A_g^H + sigma_e^2 I.
template <typename Real>
std::vector<CMatrix<Real>> nars_expected_subcovariances(const Scene& scene, const ArraySpec& spec) {
    const ArrayManifold<Real> am(spec, scene);
    const CMatrix<Real> rs = signal_covariance<Real>(scene);
    std::vector<CMatrix<Real>> out;
    for (const auto& a : am.states)
        out.push_back(a * rs * a.adjoint() +
                      static_cast<Real>(scene.noise_var) * CMatrix<Real>::Identity(a.rows(), a.rows()));
    return out;
}

}  // namespace fadoa
