#pragma once

#include <vector>

#include "fadoa/core.hpp"

namespace fadoa {

/// Fluid-antenna array: M physical elements, G movements per coherence block,
/// movement step d (in carrier wavelengths). Element coordinates are integer
/// multiples of d; the coordinate reference point sits at 0.
struct ArraySpec {
    Mode mode = Mode::ARS;
    int num_antennas = 1;
    int num_movements = 0;
    double step = 0.5;

    int num_states() const { return num_movements + 1; }

    /// Throws InvalidArgument when the array is not physically meaningful.
    void validate() const;
};

/// ARS: number of consecutive virtual elements M(G+1).
/// NARS: one-sided coarray extent plus one, (M-1)(G+1)+1.
int virtual_size(const ArraySpec& spec);

/// (M-1)(G+1), the largest difference lag of a NARS array.
int coarray_extent(const ArraySpec& spec);

/// Largest number of paths the matching pipeline can separate
/// (one eigenvector is always left for the noise subspace).
int max_resolvable(const ArraySpec& spec);

/// Element coordinates (units of d) in state g, ascending in m.
std::vector<int> ars_positions(const ArraySpec& spec, int g);
std::vector<int> nars_positions(const ArraySpec& spec, int g);
std::vector<int> positions(const ArraySpec& spec, int g);

/// All first-order positions pooled over every state, sorted and unique.
std::vector<int> ars_lag_set(const ArraySpec& spec);

/// All pairwise differences over every state, sorted and unique.
std::vector<int> nars_lag_set(const ArraySpec& spec);

/// Covariance entry that observes a given difference lag.
/// Antenna indices are 0-based; index 0 is the fixed reference element.
struct LagSource {
    int state;
    int row;
    int col;

    bool operator==(const LagSource&) const = default;
};

/// Positive lags come from (m, 0) of some state, negative lags from (0, m),
/// and lag 0 from (0, 0) of state 0.
LagSource lag_lookup(const ArraySpec& spec, int lag);

}  // namespace fadoa
