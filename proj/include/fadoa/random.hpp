#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>

namespace fadoa {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: output i is a pure function of (key, i), and
/// child(tag) derives an independent stream keyed by the parent key and tag.
/// Any (trial, block, state) tuple therefore maps to a fixed stream no matter
/// which thread draws it or in which order.
class Substream {
public:
    using result_type = std::uint64_t;

    explicit Substream(std::uint64_t key = 0) : key_(mix64(key ^ kKeySalt)) {}

    Substream child(std::uint64_t tag) const {
        Substream s;
        s.key_ = mix64(key_ ^ mix64(tag + kGolden));
        return s;
    }

    result_type operator()() { return mix64(key_ + (++counter_) * kGolden); }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    std::uint64_t key() const { return key_; }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kKeySalt = 0x6a09e667f3bcc909ULL;

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

/// Circularly-symmetric complex Gaussian CN(0, variance).
template <typename Real>
class ComplexGaussian {
public:
    explicit ComplexGaussian(Real variance = Real(1))
        : normal_(Real(0), variance > Real(0) ? std::sqrt(variance / Real(2)) : Real(1)),
          zero_(!(variance > Real(0))) {}

    template <typename Engine>
    std::complex<Real> operator()(Engine& eng) {
        if (zero_) return {};
        const Real re = normal_(eng);
        const Real im = normal_(eng);
        return {re, im};
    }

private:
    std::normal_distribution<Real> normal_;
    bool zero_;
};

}  // namespace fadoa
