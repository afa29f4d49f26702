#pragma once

#include <cstdint>
#include <vector>

#include "brt/geometry.hpp"

namespace brt {

using CellId = std::uint32_t;

// Simulation window: a polytope or a finite union of interior-disjoint
// polytopes (conditional runs use disconnected inner regions).
struct Window {
    std::vector<Polytope> parts;

    Window() = default;
    explicit Window(Polytope p) { parts.push_back(std::move(p)); }
    int dim() const { return parts.empty() ? 0 : parts.front().dim; }
    double total_area() const;
    std::pair<Vec2, Vec2> bounding_box() const;
};

// Snapshot of the cell population at one instant. ids[i] is the stable
// identifier of cells[i] within the generating history's arena; histories
// built by hand may leave ids empty (then ids are positional).
struct Tessellation {
    Window window;
    std::vector<Cell> cells;
    std::vector<CellId> ids;

    CellId id_at(std::size_t i) const {
        return ids.empty() ? static_cast<CellId>(i) : ids[i];
    }
};

struct DivisionEvent {
    double s = 0.0;
    CellId parent = 0;
    BicolouredHyperplane cut;
    CellId child_plus = 0;
    CellId child_minus = 0;
};

// Cell joining the population of a conditional run at time s (created by
// the outer evolution; Definition of the boundary-driven immigration).
struct Immigration {
    double s = 0.0;
    CellId id = 0;
};

// Initial tessellation plus the time-ordered division-event log; the full
// history is reconstructible at any time. arena holds every cell ever
// alive, indexed by id.
struct BranchingTessellation {
    Window window;
    std::vector<Cell> arena;
    std::vector<CellId> initial_ids;
    std::vector<Immigration> immigrations;
    std::vector<DivisionEvent> events;

    const Cell& cell(CellId id) const;
    Tessellation initial() const;
    std::size_t leaf_count() const;
};

// Replays all events with time <= s (right-continuous in s).
Tessellation state_at(const BranchingTessellation& bt, double s);

// Incremental replay cursor for estimators that visit many time points.
class StateCursor {
public:
    explicit StateCursor(const BranchingTessellation& bt);
    // advance to time s (s must not decrease between calls)
    const Tessellation& advance(double s);

private:
    const BranchingTessellation* bt_;
    Tessellation state_;
    std::vector<std::size_t> index_of_;  // arena id -> slot in state_
    std::size_t next_event_ = 0;
    std::size_t next_immigration_ = 0;
    double time_ = -1.0;

    void insert_cell(CellId id);
    void remove_cell(CellId id);
};

// Cells of T lying strictly inside int(W) (tol_geom margin).
std::vector<std::size_t> inner_projection(const Tessellation& t, const Polytope& w);

// Count of cells whose intersection with int(W) is non-empty.
std::size_t hitting_count(const Tessellation& t, const Polytope& w);

struct Subtree {
    CellId root = 0;
    std::vector<CellId> nodes;   // root first, then discovery order
    std::vector<CellId> leaves;  // alive descendants at the final time
    std::size_t divisions = 0;
};

Subtree descendants(const BranchingTessellation& bt, CellId root);

// Age of cell `id` at time s (s minus its birth time).
double age(const BranchingTessellation& bt, CellId id, double s);

// Checks interior-disjointness and window coverage of a replayed state;
// used by tests and the validation suites.
bool tessellation_valid(const Tessellation& t, double rel_tol = 1e-9);

} // namespace brt
