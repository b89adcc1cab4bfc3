#include "fadoa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <string>

namespace fadoa {

namespace {

void check_state(const ArraySpec& spec, int g) {
    detail::require(g >= 0 && g <= spec.num_movements,
                    "state index " + std::to_string(g) + " outside [0, " +
                        std::to_string(spec.num_movements) + "]");
}

}  // namespace

void ArraySpec::validate() const {
    detail::require(num_movements >= 0, "num_movements must be non-negative");
    if (mode == Mode::ARS) {
        detail::require(num_antennas >= 1, "ARS needs at least one antenna");
    } else {
        detail::require(num_antennas >= 2,
                        "NARS needs a fixed reference plus at least one movable antenna");
    }
    detail::require(std::isfinite(step) && step > 0.0 && step <= 0.5,
                    "step must lie in (0, 0.5] wavelengths");
}

int virtual_size(const ArraySpec& spec) {
    if (spec.mode == Mode::ARS) return spec.num_antennas * spec.num_states();
    return coarray_extent(spec) + 1;
}

int coarray_extent(const ArraySpec& spec) { return (spec.num_antennas - 1) * spec.num_states(); }

int max_resolvable(const ArraySpec& spec) { return virtual_size(spec) - 1; }

std::vector<int> ars_positions(const ArraySpec& spec, int g) {
    detail::require(spec.mode == Mode::ARS, "ars_positions needs an ARS spec");
    check_state(spec, g);
    std::vector<int> pos(static_cast<std::size_t>(spec.num_antennas));
    for (int m = 0; m < spec.num_antennas; ++m) pos[m] = m * spec.num_states() + g;
    return pos;
}

std::vector<int> nars_positions(const ArraySpec& spec, int g) {
    detail::require(spec.mode == Mode::NARS, "nars_positions needs a NARS spec");
    detail::require(spec.num_antennas >= 2, "NARS needs at least two antennas");
    check_state(spec, g);
    std::vector<int> pos(static_cast<std::size_t>(spec.num_antennas));
    pos[0] = 0;
    for (int m = 1; m < spec.num_antennas; ++m) pos[m] = (m - 1) * spec.num_states() + g + 1;
    return pos;
}

std::vector<int> positions(const ArraySpec& spec, int g) {
    return spec.mode == Mode::ARS ? ars_positions(spec, g) : nars_positions(spec, g);
}

std::vector<int> ars_lag_set(const ArraySpec& spec) {
    std::set<int> lags;
    for (int g = 0; g <= spec.num_movements; ++g) {
        for (int p : ars_positions(spec, g)) lags.insert(p);
    }
    return {lags.begin(), lags.end()};
}

std::vector<int> nars_lag_set(const ArraySpec& spec) {
    std::set<int> lags;
    for (int g = 0; g <= spec.num_movements; ++g) {
        const auto pos = nars_positions(spec, g);
        for (int a : pos)
            for (int b : pos) lags.insert(a - b);
    }
    return {lags.begin(), lags.end()};
}

LagSource lag_lookup(const ArraySpec& spec, int lag) {
    detail::require(spec.mode == Mode::NARS, "lag_lookup needs a NARS spec");
    const int extent = coarray_extent(spec);
    detail::require(std::abs(lag) <= extent,
                    "lag " + std::to_string(lag) + " outside coverage [-" + std::to_string(extent) +
                        ", " + std::to_string(extent) + "]");
    if (lag == 0) return {0, 0, 0};
    // d_{m,g} = (m-1)(G+1) + g + 1 for movable m >= 1 (0-based)
    const int k = std::abs(lag) - 1;
    const int movable = k / spec.num_states() + 1;
    const int state = k % spec.num_states();
    if (lag > 0) return {state, movable, 0};
    return {state, 0, movable};
}

}  // namespace fadoa
