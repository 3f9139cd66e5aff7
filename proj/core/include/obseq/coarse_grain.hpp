#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "obseq/dynamics.hpp"
#include "obseq/partitions.hpp"
#include "obseq/processes.hpp"

namespace obseq {

/// Observed symbols Phi(p) of a list of states.
SymbolSequence coarse_grain(std::span<const PhasePoint> points, const Partition& part);

/// Observes `len` states of one orbit started from an invariant-measure
/// sample. Baker orbits run on StreamingBakerOrbit, so they stay exact for
/// any length; rotation orbits run in double precision.
SymbolSequence coarse_grain(const System& sys, const Partition& part, std::size_t len, std::uint64_t seed);

/// Transition matrix of the coarse-grained baker process, from the images of
/// cells under the map: each cell is subdivided into squares of side
/// 2^-resolution whose midpoints are pushed through one baker step, and
/// P(i -> j) is the fraction of cell i landing in cell j. Exact for dyadic
/// grid partitions of level n whenever resolution >= n + 1.
SquareMatrix baker_image_chain(const Partition& part, int resolution);

/// Transition matrix of the coarse-grained rotation process: P(i -> j) is
/// the length of (cell_i + alpha mod 1) inside cell_j over the length of
/// cell_i, computed in closed form.
SquareMatrix rotation_image_chain(const Partition& part, double alpha);

/// Length of ([a0, a1) + shift mod 1) intersected with [b0, b1) on the circle.
double arc_overlap(double a0, double a1, double shift, double b0, double b1);

}  // namespace obseq
