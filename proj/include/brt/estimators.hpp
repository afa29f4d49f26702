#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "brt/driving.hpp"
#include "brt/kernels.hpp"
#include "brt/simulator.hpp"
#include "brt/tessellation.hpp"

namespace brt {

// rho(a) = 1 - a + a log a, the non-negative convex integrand of relative
// entropy; rho(0) = 1 by the a log a -> 0 limit, rho(a) = 0 iff a = 1.
double rho(double a);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::map<std::string, double> breakdown;
};

// Central observation window plus the margin separating it from the
// simulation-window boundary; estimators only read cells whose centroid
// falls inside the observation window.
struct ObservationScheme {
    Polytope observation;
    double margin = 0.0;

    void validate(const Window& simulation) const;  // InsufficientMargin
};

// One draw of the empirical extended Palm measure: a uniform time, a
// replicate handle, and a cell alive at that time with centroid inside the
// observation window.
struct PalmSample {
    double s = 0.0;
    std::size_t replicate = 0;
    CellId cell = 0;
};

struct EstimatorOptions {
    std::size_t time_strata = 32;
    std::size_t n_mc = 64;  // hyperplane draws per cell integral
    // divergence guard: fraction of draws allowed at ratio < ratio_floor
    // with per-draw contribution above contribution_cap
    double ratio_floor = 1e-12;
    double contribution_cap = 10.0;
    double divergence_fraction = 1e-3;
};

using DensityFn = std::function<double(double s, const Tessellation& state,
                                       const Cell& cell, const BicolouredHyperplane& cut)>;

DensityFn density_of(const Kernel& kernel);
DensityFn density_of(KernelPtr kernel);

// Monte Carlo value of H(Phi(s,T_s,c, .); Psi(s,T_s,c, .)) =
// integral over <c> of Lambda(dH) psi(H) rho(phi(H)/psi(H)), from n_mc
// draws H ~ Lambda( . | <c>); exact when both densities are constant on <c>.
Estimate cell_rel_entropy(const DensityFn& phi, const DensityFn& psi, const Cell& cell,
                          double s, const Tessellation& state, const DrivingMeasure& lambda,
                          std::size_t n_mc, RngStream& rng);

// Inner entropy density of the replicates' law relative to the STIT
// reference: Palm average of H(Phi; restricted Lambda) per unit volume.
// `phi` must be the division-kernel density of the law that generated the
// replicates. Throws Diverged when the guard in `opts` trips.
Estimate estimate_entropy_density(const std::vector<BranchingTessellation>& replicates,
                                  const DensityFn& phi, const DrivingMeasure& lambda,
                                  const ObservationScheme& scheme,
                                  const EstimatorOptions& opts, std::uint64_t seed);

// Inner energy: mean of sum over division events with parent centroid in
// the observation window of log psi(s, T_{s-}, parent, H), per unit volume.
Estimate estimate_u_in(const std::vector<BranchingTessellation>& replicates,
                       const DensityFn& psi, const ObservationScheme& scheme);

// Inner pressure: Palm average of the integral of (psi - 1) over <c>.
Estimate estimate_v_in(const std::vector<BranchingTessellation>& replicates,
                       const DensityFn& psi, const DrivingMeasure& lambda,
                       const ObservationScheme& scheme, const EstimatorOptions& opts,
                       std::uint64_t seed);

// Inner excess free energy of the replicates' law for the target kernel:
// value is the three-term combination h - u + v; the breakdown carries the
// components and the direct per-cell relative-entropy form ("direct",
// "direct_se"), which must agree within joint error bars.
Estimate estimate_free_energy(const std::vector<BranchingTessellation>& replicates,
                              const DensityFn& phi_generator, const DensityFn& psi_target,
                              const DrivingMeasure& lambda, const ObservationScheme& scheme,
                              const EstimatorOptions& opts, std::uint64_t seed);

// Mean count of terminal cells hitting the observation window.
Estimate hitting_intensity(const std::vector<BranchingTessellation>& replicates,
                           const ObservationScheme& scheme, double s = 1.0);

} // namespace brt
