#include "brt/tessellation.hpp"

#include <algorithm>
#include <cmath>

namespace brt {

double Window::total_area() const {
    double a = 0.0;
    for (const Polytope& p : parts)
        a += area(p);
    return a;
}

std::pair<Vec2, Vec2> Window::bounding_box() const {
    auto bb = brt::bounding_box(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i) {
        auto [mn, mx] = brt::bounding_box(parts[i]);
        bb.first.x = std::min(bb.first.x, mn.x);
        bb.first.y = std::min(bb.first.y, mn.y);
        bb.second.x = std::max(bb.second.x, mx.x);
        bb.second.y = std::max(bb.second.y, mx.y);
    }
    return bb;
}

const Cell& BranchingTessellation::cell(CellId id) const {
    if (id >= arena.size())
        throw UnknownCell("cell id outside the arena");
    return arena[id];
}

Tessellation BranchingTessellation::initial() const {
    Tessellation t;
    t.window = window;
    t.cells.reserve(initial_ids.size());
    for (CellId id : initial_ids) {
        t.cells.push_back(arena[id]);
        t.ids.push_back(id);
    }
    return t;
}

std::size_t BranchingTessellation::leaf_count() const {
    return initial_ids.size() + immigrations.size() + events.size();
}

Tessellation state_at(const BranchingTessellation& bt, double s) {
    StateCursor cursor(bt);
    return cursor.advance(s);
}

StateCursor::StateCursor(const BranchingTessellation& bt) : bt_(&bt) {
    state_.window = bt.window;
    index_of_.assign(bt.arena.size(), static_cast<std::size_t>(-1));
    for (CellId id : bt.initial_ids)
        insert_cell(id);
    time_ = 0.0;
}

void StateCursor::insert_cell(CellId id) {
    index_of_[id] = state_.cells.size();
    state_.cells.push_back(bt_->arena[id]);
    state_.ids.push_back(id);
}

void StateCursor::remove_cell(CellId id) {
    const std::size_t i = index_of_[id];
    const std::size_t last = state_.cells.size() - 1;
    if (i != last) {
        state_.cells[i] = std::move(state_.cells[last]);
        state_.ids[i] = state_.ids[last];
        index_of_[state_.ids[i]] = i;
    }
    state_.cells.pop_back();
    state_.ids.pop_back();
    index_of_[id] = static_cast<std::size_t>(-1);
}

const Tessellation& StateCursor::advance(double s) {
    // merge the immigration and event schedules in time order
    for (;;) {
        const double ti = next_immigration_ < bt_->immigrations.size()
                              ? bt_->immigrations[next_immigration_].s
                              : 2.0;
        const double te =
            next_event_ < bt_->events.size() ? bt_->events[next_event_].s : 2.0;
        if (ti <= te) {
            if (ti > s)
                break;
            insert_cell(bt_->immigrations[next_immigration_].id);
            ++next_immigration_;
        } else {
            if (te > s)
                break;
            const DivisionEvent& ev = bt_->events[next_event_];
            remove_cell(ev.parent);
            insert_cell(ev.child_plus);
            insert_cell(ev.child_minus);
            ++next_event_;
        }
    }
    time_ = s;
    return state_;
}

std::vector<std::size_t> inner_projection(const Tessellation& t, const Polytope& w) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < t.cells.size(); ++i)
        if (contains(w, t.cells[i].poly, kTolGeom))
            out.push_back(i);
    return out;
}

std::size_t hitting_count(const Tessellation& t, const Polytope& w) {
    std::size_t n = 0;
    for (const Cell& c : t.cells) {
        Polytope dummy;
        if (try_intersect_convex(c.poly, w, &dummy))
            ++n;
    }
    return n;
}

Subtree descendants(const BranchingTessellation& bt, CellId root) {
    if (root >= bt.arena.size())
        throw UnknownCell("descendants: unknown root id");
    // children lookup
    std::vector<std::pair<CellId, CellId>> child(bt.arena.size(), {0, 0});
    std::vector<bool> divided(bt.arena.size(), false);
    for (const DivisionEvent& ev : bt.events) {
        divided[ev.parent] = true;
        child[ev.parent] = {ev.child_plus, ev.child_minus};
    }
    Subtree tree;
    tree.root = root;
    std::vector<CellId> stack{root};
    while (!stack.empty()) {
        const CellId id = stack.back();
        stack.pop_back();
        tree.nodes.push_back(id);
        if (divided[id]) {
            ++tree.divisions;
            stack.push_back(child[id].second);
            stack.push_back(child[id].first);
        } else {
            tree.leaves.push_back(id);
        }
    }
    return tree;
}

double age(const BranchingTessellation& bt, CellId id, double s) {
    const Cell& c = bt.cell(id);
    if (c.birth_time > s)
        throw CellNotAlive("cell not yet born");
    for (const DivisionEvent& ev : bt.events) {
        if (ev.parent == id && ev.s <= s)
            throw CellNotAlive("cell already divided");
        if (ev.s > s)
            break;
    }
    return s - c.birth_time;
}

bool tessellation_valid(const Tessellation& t, double rel_tol) {
    const double total = t.window.total_area();
    double covered = 0.0;
    for (const Cell& c : t.cells) {
        if (!polytope_valid(c.poly))
            return false;
        covered += area(c.poly);
    }
    if (std::abs(covered - total) > rel_tol * std::max(1.0, total))
        return false;
    // pairwise interior disjointness via bounding-box prefilter
    const std::size_t n = t.cells.size();
    std::vector<std::pair<Vec2, Vec2>> boxes(n);
    for (std::size_t i = 0; i < n; ++i)
        boxes[i] = bounding_box(t.cells[i].poly);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (boxes[i].first.x > boxes[j].second.x - kTolGeom ||
                boxes[j].first.x > boxes[i].second.x - kTolGeom ||
                (t.window.dim() == 2 &&
                 (boxes[i].first.y > boxes[j].second.y - kTolGeom ||
                  boxes[j].first.y > boxes[i].second.y - kTolGeom)))
                continue;
            Polytope overlap;
            if (try_intersect_convex(t.cells[i].poly, t.cells[j].poly, &overlap) &&
                area(overlap) > 1e-9 * std::max(1.0, total))
                return false;
        }
    }
    return true;
}

} // namespace brt
