#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "brt/kernels.hpp"
#include "brt/tessellation.hpp"

namespace brt {

struct RunSeed {
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;
};

struct SimulateOptions {
    double t_end = 1.0;
    std::uint64_t event_cap = 10'000'000;
};

// Samples the cell-division jump process on the initial tessellation's
// window: each living cell carries an exponential clock at its dominating
// rate sup_density(c) * Lambda(<c>); a tentative event at (s, c, H) with
// H ~ Lambda( . | <c>) is accepted with probability
// psi(s, T_{s-}, c, H) * Lambda(<c>) / bound. Deterministic given the seed:
// every cell draws from its own stream derived from (seed, replicate, id).
BranchingTessellation simulate(const Tessellation& initial, const Kernel& kernel,
                               const DrivingMeasure& lambda, const RunSeed& seed,
                               const SimulateOptions& opts = {});

// Immigration of cells created inside W by the evolution of
// boundary-crossing cells (jump times of the inner window).
struct BoundaryPath {
    std::vector<std::pair<double, Cell>> immigrants;  // strictly increasing times
};

// Extracts the immigration schedule that `history` induces on the
// subwindow W: whenever an outer cell splits and one piece falls entirely
// inside int(W), that piece immigrates at the division time.
BoundaryPath outer_boundary_path(const BranchingTessellation& history, const Polytope& w);

// Cells of `history`'s initial tessellation contained in int(W).
Tessellation initial_inner(const BranchingTessellation& history, const Polytope& w);

// Runs the conditional evolution of the inner cells of W: the inner
// population (initial inner cells plus immigrants at their arrival times)
// divides under the kernel evaluated on inner-union-outer states, where the
// outer cells are replayed from outer_history. Returns the inner process
// only (immigrations recorded in the result).
BranchingTessellation simulate_conditional(const Polytope& w, const BoundaryPath& boundary,
                                           const Tessellation& inner_initial,
                                           const Kernel& kernel, const DrivingMeasure& lambda,
                                           const BranchingTessellation& outer_history,
                                           const RunSeed& seed,
                                           const SimulateOptions& opts = {});

// Convenience wrapper for the Gibbs-invariance experiment: decomposes
// `full` relative to W and redraws the inner evolution conditionally on
// (initial inner cells, outer evolution).
BranchingTessellation resample_inner(const BranchingTessellation& full, const Polytope& w,
                                     const Kernel& kernel, const DrivingMeasure& lambda,
                                     const RunSeed& seed, const SimulateOptions& opts = {});

// Leaf statistics of an inner (or plain) history at its final time.
struct LeafStats {
    std::size_t count = 0;
    double total_boundary = 0.0;
};
LeafStats leaf_stats(const BranchingTessellation& bt, double s = 1.0);

} // namespace brt
