#include "brt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>

#include "brt/rng.hpp"

namespace brt {

namespace {

struct Tentative {
    double t;
    CellId id;
    bool operator>(const Tentative& o) const { return t > o.t; }
};

using ClockQueue = std::priority_queue<Tentative, std::vector<Tentative>, std::greater<>>;

constexpr CellId kEnvFlag = 0x80000000u;
constexpr std::size_t kNpos = static_cast<std::size_t>(-1);

// Cells currently alive, as the tessellation view handed to interacting
// kernels. Main cells are indexed by their arena id; environment cells of
// conditional runs (replayed, clockless) carry kEnvFlag-tagged ids.
struct Population {
    Tessellation view;
    std::vector<std::size_t> slot_main;
    std::vector<std::size_t> slot_env;

    std::vector<std::size_t>& table(CellId tagged) {
        return (tagged & kEnvFlag) ? slot_env : slot_main;
    }

    void insert(CellId tagged, const Cell& cell) {
        auto& slots = table(tagged);
        const CellId raw = tagged & ~kEnvFlag;
        if (slots.size() <= raw)
            slots.resize(raw + 1, kNpos);
        slots[raw] = view.cells.size();
        view.cells.push_back(cell);
        view.ids.push_back(tagged);
    }

    void remove(CellId tagged) {
        auto& slots = table(tagged);
        const std::size_t i = slots[tagged & ~kEnvFlag];
        const std::size_t last = view.cells.size() - 1;
        if (i != last) {
            view.cells[i] = std::move(view.cells[last]);
            view.ids[i] = view.ids[last];
            table(view.ids[i])[view.ids[i] & ~kEnvFlag] = i;
        }
        view.cells.pop_back();
        view.ids.pop_back();
        slots[tagged & ~kEnvFlag] = kNpos;
    }

    const Cell& cell_of(CellId tagged) {
        return view.cells[table(tagged)[tagged & ~kEnvFlag]];
    }
};

// Per-cell bookkeeping: a private random stream, the dominating rate, and
// the cached hyperplane sampler.
struct CellDriver {
    RngStream rng;
    double bound = 0.0;
    std::unique_ptr<HyperplaneSampler> sampler;
};

class Engine {
public:
    Engine(const Window& window, const Kernel& kernel, const DrivingMeasure& lambda,
           const RunSeed& seed, const SimulateOptions& opts)
        : kernel_(kernel), lambda_(lambda), seed_(seed), opts_(opts) {
        if (!(opts.t_end >= 0.0 && opts.t_end <= 1.0))
            throw ConfigError("t_end must lie in [0,1]");
        result_.window = window;
        population_.view.window = window;
    }

    // Registers a simulated cell: recorded in the arena, clocked, with its
    // own random stream derived from (seed, replicate, arena id).
    CellId add_cell(const Cell& cell) {
        const CellId id = static_cast<CellId>(result_.arena.size());
        result_.arena.push_back(cell);
        population_.insert(id, cell);
        if (drivers_.size() <= id)
            drivers_.resize(id + 1);
        CellDriver& d = drivers_[id];
        d.rng = RngStream::derive(seed_.seed, {seed_.replicate, stream_tag::cell_clock, id});
        d.sampler = std::make_unique<HyperplaneSampler>(lambda_, cell.poly);
        const double sup = kernel_.sup_density(cell);
        if (!std::isfinite(sup))
            throw NonModerate("kernel admits no finite thinning envelope");
        d.bound = sup * d.sampler->mass();
        if (d.bound > 0.0)
            clocks_.push({cell.birth_time + d.rng.next_exponential(d.bound), id});
        return id;
    }

    void add_env_cell(CellId raw_id, const Cell& cell) {
        population_.insert(raw_id | kEnvFlag, cell);
    }

    void remove_env_cell(CellId raw_id) { population_.remove(raw_id | kEnvFlag); }

    // Processes the next tentative division if it happens by `horizon`;
    // returns false when none fires before then.
    bool step(double horizon) {
        while (!clocks_.empty()) {
            const Tentative tent = clocks_.top();
            if (tent.t > horizon)
                return false;
            clocks_.pop();
            if (++tentatives_ > opts_.event_cap * 256)
                throw BudgetExceeded("tentative-event budget exhausted");
            CellDriver& d = drivers_[tent.id];
            const Cell cell = population_.cell_of(tent.id);
            const BicolouredHyperplane cut = d.sampler->sample(d.rng);
            const double psi = kernel_.density(tent.t, population_.view, cell, cut);
            const double accept = psi * d.sampler->mass() / d.bound;
            if (accept > 1.0 + 1e-9)
                throw Error("thinning envelope violated: density exceeds its bound");
            if (d.rng.next_double() < accept) {
                try {
                    apply_division(tent.t, tent.id, cut);
                    return true;
                } catch (const NotHitting&) {
                    // tolerance-band miss: treat as rejection and resample
                } catch (const DegenerateChild&) {
                    // measure-zero degenerate split: resample
                }
            }
            clocks_.push({tent.t + d.rng.next_exponential(d.bound), tent.id});
        }
        return false;
    }

    void run_until(double horizon) {
        while (step(horizon)) {
        }
    }

    BranchingTessellation take_result() { return std::move(result_); }
    Population& population() { return population_; }

private:
    void apply_division(double s, CellId parent, const BicolouredHyperplane& cut) {
        const Cell& pc = population_.cell_of(parent);
        auto [plus, minus] = split(pc.poly, cut.spatial);
        if (result_.events.size() >= opts_.event_cap)
            throw BudgetExceeded("division-event budget exhausted");
        population_.remove(parent);
        drivers_[parent].sampler.reset();
        const CellId cp = add_cell({std::move(plus), cut.colour_plus, s});
        const CellId cm = add_cell({std::move(minus), cut.colour_minus, s});
        result_.events.push_back({s, parent, cut, cp, cm});
    }

    const Kernel& kernel_;
    const DrivingMeasure& lambda_;
    RunSeed seed_;
    SimulateOptions opts_;
    BranchingTessellation result_;
    Population population_;
    std::vector<CellDriver> drivers_;
    ClockQueue clocks_;
    std::uint64_t tentatives_ = 0;
};

} // namespace

BranchingTessellation simulate(const Tessellation& initial, const Kernel& kernel,
                               const DrivingMeasure& lambda, const RunSeed& seed,
                               const SimulateOptions& opts) {
    Engine engine(initial.window, kernel, lambda, seed, opts);
    std::vector<CellId> initial_ids;
    initial_ids.reserve(initial.cells.size());
    for (const Cell& c : initial.cells)
        initial_ids.push_back(engine.add_cell(c));
    engine.run_until(opts.t_end);
    BranchingTessellation result = engine.take_result();
    result.initial_ids = std::move(initial_ids);
    return result;
}

BoundaryPath outer_boundary_path(const BranchingTessellation& history, const Polytope& w) {
    BoundaryPath path;
    std::vector<bool> inner(history.arena.size(), false);
    for (std::size_t id = 0; id < history.arena.size(); ++id)
        inner[id] = contains(w, history.arena[id].poly, kTolGeom);
    for (const DivisionEvent& ev : history.events) {
        if (inner[ev.parent])
            continue;  // inner divisions are not immigration
        for (CellId child : {ev.child_plus, ev.child_minus})
            if (inner[child])
                path.immigrants.emplace_back(ev.s, history.arena[child]);
    }
    return path;
}

Tessellation initial_inner(const BranchingTessellation& history, const Polytope& w) {
    Tessellation t;
    t.window = Window(w);
    for (CellId id : history.initial_ids) {
        if (contains(w, history.arena[id].poly, kTolGeom)) {
            t.cells.push_back(history.arena[id]);
            t.ids.push_back(static_cast<CellId>(t.cells.size() - 1));
        }
    }
    return t;
}

BranchingTessellation simulate_conditional(const Polytope& w, const BoundaryPath& boundary,
                                           const Tessellation& inner_initial,
                                           const Kernel& kernel, const DrivingMeasure& lambda,
                                           const BranchingTessellation& outer_history,
                                           const RunSeed& seed,
                                           const SimulateOptions& opts) {
    Engine engine(Window(w), kernel, lambda, seed, opts);
    // interacting kernels see the union of inner and outer cells on the
    // full outer window
    engine.population().view.window = outer_history.window;

    std::vector<CellId> initial_ids;
    for (const Cell& c : inner_initial.cells)
        initial_ids.push_back(engine.add_cell(c));

    std::vector<bool> is_outer(outer_history.arena.size(), false);
    for (std::size_t id = 0; id < outer_history.arena.size(); ++id)
        is_outer[id] = !contains(w, outer_history.arena[id].poly, kTolGeom);
    for (CellId id : outer_history.initial_ids)
        if (is_outer[id])
            engine.add_env_cell(id, outer_history.arena[id]);

    std::vector<Immigration> immigration_log;
    std::size_t next_outer = 0;
    std::size_t next_imm = 0;
    for (;;) {
        // outer events with inner parents belong to the resampled region
        while (next_outer < outer_history.events.size() &&
               !is_outer[outer_history.events[next_outer].parent])
            ++next_outer;
        const double t_outer = next_outer < outer_history.events.size()
                                   ? outer_history.events[next_outer].s
                                   : 2.0;
        const double t_imm = next_imm < boundary.immigrants.size()
                                 ? boundary.immigrants[next_imm].first
                                 : 2.0;
        const double horizon = std::min({t_outer, t_imm, opts.t_end});
        engine.run_until(horizon);
        if (horizon >= opts.t_end)
            break;
        // at ties the generating outer division is applied first, so the
        // immigrant's parent has left the environment before it arrives
        if (t_outer <= t_imm) {
            const DivisionEvent& ev = outer_history.events[next_outer];
            engine.remove_env_cell(ev.parent);
            for (CellId child : {ev.child_plus, ev.child_minus})
                if (is_outer[child])
                    engine.add_env_cell(child, outer_history.arena[child]);
            ++next_outer;
        } else {
            const Cell& c = boundary.immigrants[next_imm].second;
            for (const Cell& alive : engine.population().view.cells) {
                Polytope overlap;
                if (try_intersect_convex(alive.poly, c.poly, &overlap) &&
                    area(overlap) > 1e-9 * std::max(1.0, area(c.poly)))
                    throw InconsistentBoundary("immigrant overlaps a living cell");
            }
            const CellId id = engine.add_cell(c);
            immigration_log.push_back({t_imm, id});
            ++next_imm;
        }
    }
    BranchingTessellation result = engine.take_result();
    result.window = Window(w);
    result.initial_ids = std::move(initial_ids);
    result.immigrations = std::move(immigration_log);
    return result;
}

BranchingTessellation resample_inner(const BranchingTessellation& full, const Polytope& w,
                                     const Kernel& kernel, const DrivingMeasure& lambda,
                                     const RunSeed& seed, const SimulateOptions& opts) {
    return simulate_conditional(w, outer_boundary_path(full, w), initial_inner(full, w),
                                kernel, lambda, full, seed, opts);
}

LeafStats leaf_stats(const BranchingTessellation& bt, double s) {
    const Tessellation t = state_at(bt, s);
    LeafStats st;
    st.count = t.cells.size();
    for (const Cell& c : t.cells)
        st.total_boundary += perimeter(c.poly);
    return st;
}

} // namespace brt
