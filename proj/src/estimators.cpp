#include "brt/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "brt/stats.hpp"

namespace brt {

double rho(double a) {
    if (a < 0.0)
        throw NegativeInput("rho is defined on [0,inf)");
    if (a == 0.0)
        return 1.0;
    return 1.0 - a + a * std::log(a);
}

void ObservationScheme::validate(const Window& simulation) const {
    if (margin < 0.0)
        throw InsufficientMargin("margin must be non-negative");
    auto [mn, mx] = brt::bounding_box(observation);
    Polytope expanded;
    if (observation.dim == 1) {
        expanded = Polytope::interval(mn.x - margin, mx.x + margin);
    } else {
        expanded =
            Polytope::box(mn.x - margin, mn.y - margin, mx.x + margin, mx.y + margin);
    }
    for (const Polytope& part : simulation.parts)
        if (contains(part, expanded, 0.0))
            return;
    throw InsufficientMargin(
        "observation window plus margin must fit inside the simulation window");
}

DensityFn density_of(const Kernel& kernel) {
    return [&kernel](double s, const Tessellation& state, const Cell& cell,
                     const BicolouredHyperplane& cut) {
        return kernel.density(s, state, cell, cut);
    };
}

DensityFn density_of(KernelPtr kernel) {
    return [kernel = std::move(kernel)](double s, const Tessellation& state,
                                        const Cell& cell, const BicolouredHyperplane& cut) {
        return kernel->density(s, state, cell, cut);
    };
}

Estimate cell_rel_entropy(const DensityFn& phi, const DensityFn& psi, const Cell& cell,
                          double s, const Tessellation& state, const DrivingMeasure& lambda,
                          std::size_t n_mc, RngStream& rng) {
    HyperplaneSampler sampler(lambda, cell.poly);
    std::vector<double> draws(n_mc);
    for (std::size_t j = 0; j < n_mc; ++j) {
        const BicolouredHyperplane cut = sampler.sample(rng);
        const double p = phi(s, state, cell, cut);
        const double q = psi(s, state, cell, cut);
        draws[j] = sampler.mass() * q * rho(p / q);
    }
    const MeanStdErr m = mean_std_error(draws);
    Estimate e;
    e.value = m.mean;
    e.std_error = m.std_error;
    e.n = n_mc;
    return e;
}

namespace {

struct DivergenceGuard {
    const EstimatorOptions* opts;
    std::size_t draws = 0;
    std::size_t flagged = 0;

    void record(double ratio, double contribution) {
        ++draws;
        if (ratio < opts->ratio_floor && contribution > opts->contribution_cap)
            ++flagged;
    }
    void check() const {
        if (draws > 0 &&
            static_cast<double>(flagged) >
                opts->divergence_fraction * static_cast<double>(draws))
            throw Diverged("entropy estimator hit the infinite-entropy guard");
    }
};

// Visits every (stratified time, cell with centroid in the observation
// window) pair of one replicate; the cell integrals of h, v and the direct
// free-energy form all run off this single scan with shared draws.
template <typename Visitor>
void palm_time_scan(const BranchingTessellation& bt, const ObservationScheme& scheme,
                    std::size_t strata, RngStream& rng, Visitor&& visit) {
    StateCursor cursor(bt);
    for (std::size_t k = 0; k < strata; ++k) {
        const double s =
            (static_cast<double>(k) + rng.next_double()) / static_cast<double>(strata);
        const Tessellation& state = cursor.advance(s);
        for (const Cell& cell : state.cells) {
            const Vec2 m = centroid(cell.poly);
            if (contains_point(scheme.observation, m))
                visit(s, state, cell);
        }
    }
}

Estimate summarise(const std::vector<double>& per_replicate) {
    const MeanStdErr m = mean_std_error(per_replicate);
    Estimate e;
    e.value = m.mean;
    e.std_error = m.std_error;
    e.n = m.n;
    return e;
}

double u_in_replicate(const BranchingTessellation& bt, const DensityFn& psi,
                      const ObservationScheme& scheme) {
    double total = 0.0;
    StateCursor cursor(bt);
    for (const DivisionEvent& ev : bt.events) {
        // state just before the division (event times are strictly
        // increasing, so stepping one ulp below ev.s keeps the cursor
        // monotone and leaves the parent alive)
        const Tessellation& before = cursor.advance(std::nextafter(ev.s, 0.0));
        const Cell& parent = bt.arena[ev.parent];
        if (!contains_point(scheme.observation, centroid(parent.poly)))
            continue;
        total += std::log(psi(ev.s, before, parent, ev.cut));
    }
    return total / area(scheme.observation);
}

} // namespace

Estimate estimate_entropy_density(const std::vector<BranchingTessellation>& replicates,
                                  const DensityFn& phi, const DrivingMeasure& lambda,
                                  const ObservationScheme& scheme,
                                  const EstimatorOptions& opts, std::uint64_t seed) {
    DivergenceGuard guard{&opts};
    std::vector<double> per_rep;
    per_rep.reserve(replicates.size());
    const double vol = area(scheme.observation);
    for (std::size_t r = 0; r < replicates.size(); ++r) {
        scheme.validate(replicates[r].window);
        RngStream rng = RngStream::derive(seed, {r, stream_tag::estimator_cut});
        double total = 0.0;
        palm_time_scan(replicates[r], scheme, opts.time_strata, rng,
                       [&](double s, const Tessellation& state, const Cell& cell) {
                           HyperplaneSampler sampler(lambda, cell.poly);
                           double acc = 0.0;
                           for (std::size_t j = 0; j < opts.n_mc; ++j) {
                               const BicolouredHyperplane cut = sampler.sample(rng);
                               const double p = phi(s, state, cell, cut);
                               const double contrib = rho(p);
                               guard.record(p, contrib);
                               acc += contrib;
                           }
                           total += sampler.mass() * acc / static_cast<double>(opts.n_mc);
                       });
        per_rep.push_back(total / (static_cast<double>(opts.time_strata) * vol));
    }
    guard.check();
    return summarise(per_rep);
}

Estimate estimate_u_in(const std::vector<BranchingTessellation>& replicates,
                       const DensityFn& psi, const ObservationScheme& scheme) {
    std::vector<double> per_rep;
    per_rep.reserve(replicates.size());
    for (const BranchingTessellation& bt : replicates) {
        scheme.validate(bt.window);
        per_rep.push_back(u_in_replicate(bt, psi, scheme));
    }
    return summarise(per_rep);
}

Estimate estimate_v_in(const std::vector<BranchingTessellation>& replicates,
                       const DensityFn& psi, const DrivingMeasure& lambda,
                       const ObservationScheme& scheme, const EstimatorOptions& opts,
                       std::uint64_t seed) {
    std::vector<double> per_rep;
    per_rep.reserve(replicates.size());
    const double vol = area(scheme.observation);
    for (std::size_t r = 0; r < replicates.size(); ++r) {
        scheme.validate(replicates[r].window);
        RngStream rng = RngStream::derive(seed, {r, stream_tag::estimator_cut});
        double total = 0.0;
        palm_time_scan(replicates[r], scheme, opts.time_strata, rng,
                       [&](double s, const Tessellation& state, const Cell& cell) {
                           HyperplaneSampler sampler(lambda, cell.poly);
                           double acc = 0.0;
                           for (std::size_t j = 0; j < opts.n_mc; ++j) {
                               const BicolouredHyperplane cut = sampler.sample(rng);
                               acc += psi(s, state, cell, cut) - 1.0;
                           }
                           total += sampler.mass() * acc / static_cast<double>(opts.n_mc);
                       });
        per_rep.push_back(total / (static_cast<double>(opts.time_strata) * vol));
    }
    return summarise(per_rep);
}

Estimate estimate_free_energy(const std::vector<BranchingTessellation>& replicates,
                              const DensityFn& phi_generator, const DensityFn& psi_target,
                              const DrivingMeasure& lambda, const ObservationScheme& scheme,
                              const EstimatorOptions& opts, std::uint64_t seed) {
    DivergenceGuard guard{&opts};
    std::vector<double> combo, hs, us, vs, directs;
    const double vol = area(scheme.observation);
    for (std::size_t r = 0; r < replicates.size(); ++r) {
        scheme.validate(replicates[r].window);
        RngStream rng = RngStream::derive(seed, {r, stream_tag::estimator_cut});
        double h_total = 0.0, v_total = 0.0, direct_total = 0.0;
        palm_time_scan(replicates[r], scheme, opts.time_strata, rng,
                       [&](double s, const Tessellation& state, const Cell& cell) {
                           HyperplaneSampler sampler(lambda, cell.poly);
                           double h_acc = 0.0, v_acc = 0.0, d_acc = 0.0;
                           for (std::size_t j = 0; j < opts.n_mc; ++j) {
                               const BicolouredHyperplane cut = sampler.sample(rng);
                               const double p = phi_generator(s, state, cell, cut);
                               const double q = psi_target(s, state, cell, cut);
                               guard.record(p, rho(p));
                               h_acc += rho(p);
                               v_acc += q - 1.0;
                               if (q > 0.0) {
                                   const double d = q * rho(p / q);
                                   guard.record(p / q, d);
                                   d_acc += d;
                               } else if (p > opts.ratio_floor) {
                                   // generator mass where the target
                                   // vanishes: infinite relative entropy
                                   guard.record(0.0, 2.0 * opts.contribution_cap);
                               }
                           }
                           const double w =
                               sampler.mass() / static_cast<double>(opts.n_mc);
                           h_total += w * h_acc;
                           v_total += w * v_acc;
                           direct_total += w * d_acc;
                       });
        const double scale = static_cast<double>(opts.time_strata) * vol;
        const double h_r = h_total / scale;
        const double v_r = v_total / scale;
        const double d_r = direct_total / scale;
        const double u_r = u_in_replicate(replicates[r], psi_target, scheme);
        hs.push_back(h_r);
        vs.push_back(v_r);
        us.push_back(u_r);
        directs.push_back(d_r);
        combo.push_back(h_r - u_r + v_r);
    }
    guard.check();
    Estimate e = summarise(combo);
    const MeanStdErr mh = mean_std_error(hs);
    const MeanStdErr mu = mean_std_error(us);
    const MeanStdErr mv = mean_std_error(vs);
    const MeanStdErr md = mean_std_error(directs);
    e.breakdown = {{"h", mh.mean},        {"h_se", mh.std_error},
                   {"u", mu.mean},        {"u_se", mu.std_error},
                   {"v", mv.mean},        {"v_se", mv.std_error},
                   {"direct", md.mean},   {"direct_se", md.std_error}};
    return e;
}

Estimate hitting_intensity(const std::vector<BranchingTessellation>& replicates,
                           const ObservationScheme& scheme, double s) {
    std::vector<double> per_rep;
    per_rep.reserve(replicates.size());
    for (const BranchingTessellation& bt : replicates) {
        const Tessellation t = state_at(bt, s);
        per_rep.push_back(static_cast<double>(hitting_count(t, scheme.observation)));
    }
    return summarise(per_rep);
}

} // namespace brt
