#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "brt/errors.hpp"

namespace brt {

// Absolute coordinate tolerance; coordinates are O(1)..O(10) at desk scale.
inline constexpr double kTolGeom = 1e-12;
// Offsets closer than this to the support boundary count as non-hitting.
inline constexpr double kTolSplit = 1e-10;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double t) const { return {x * t, y * t}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
double norm(const Vec2& a);

// Convex polytope in dimension 1 (an interval) or 2 (a strictly convex
// counter-clockwise polygon). Immutable after construction.
struct Polytope {
    int dim = 2;
    double lo = 0.0, hi = 0.0;  // d=1 only
    std::vector<Vec2> verts;    // d=2 only, CCW

    static Polytope interval(double a, double b);
    static Polytope polygon(std::vector<Vec2> vs);
    static Polytope box(double x0, double y0, double x1, double y1);
};

// Hyperplane {x : <x,u> = r} with unit normal u in the upper half-circle,
// parameterised by theta in [0,pi) so that u = (cos theta, sin theta).
// In d=1 the direction is fixed (u = 1) and the hyperplane is the point r.
struct Hyperplane {
    int dim = 2;
    double theta = 0.0;
    double r = 0.0;

    Vec2 normal() const;
    static Hyperplane line(double theta, double r);
    static Hyperplane point(double r);
};

using Colour = int;

struct Cell {
    Polytope poly;
    Colour colour = 0;
    double birth_time = 0.0;
};

// A cutting hyperplane whose half-spaces {<x,u> >= r} / {<x,u> <= r} carry
// the colours inherited by the two daughter cells.
struct BicolouredHyperplane {
    Hyperplane spatial;
    Colour colour_plus = 0;
    Colour colour_minus = 0;
};

// --- validity -------------------------------------------------------------

bool polytope_valid(const Polytope& p);
void require_valid(const Polytope& p);

// --- basic measurements ---------------------------------------------------

double area(const Polytope& p);       // length in d=1
double perimeter(const Polytope& p);  // boundary Hausdorff measure: 2 in d=1
Vec2 centroid(const Polytope& p);     // d=1 result in .x
double radius(const Polytope& p);

// (min, max) of <x,u> over p for the direction given by theta (ignored in d=1).
std::pair<double, double> directional_support(const Polytope& p, double theta);
double directional_width(const Polytope& p, double theta);

// Axis-aligned bounding box as (min, max) corners; d=1 uses .x only.
std::pair<Vec2, Vec2> bounding_box(const Polytope& p);

// --- predicates -----------------------------------------------------------

// True when eta passes through the interior of p with clearance kTolSplit.
bool hits_interior(const Polytope& p, const Hyperplane& eta);
bool contains(const Polytope& outer, const Polytope& inner, double margin = 0.0);
bool contains_point(const Polytope& p, const Vec2& x);

// --- transforms -----------------------------------------------------------

Polytope translate(const Polytope& p, const Vec2& x);
Hyperplane translate(const Hyperplane& eta, const Vec2& x);
Polytope retract(const Polytope& p, double eps);

// Intersection of p with the half-plane <x,u> >= r (keep_plus) or <= r.
// Throws DegenerateChild when the result has an empty interior.
Polytope clip_halfplane(const Polytope& p, const Hyperplane& eta, bool keep_plus);

// Convex intersection p ∩ q (q convex); DegenerateChild if empty interior.
Polytope intersect_convex(const Polytope& p, const Polytope& q);
// Like intersect_convex but reports emptiness instead of throwing.
bool try_intersect_convex(const Polytope& p, const Polytope& q, Polytope* out);

// Splits p along eta into the (plus, minus) half-space pieces.
// Throws NotHitting when eta misses int(p), DegenerateChild when a piece
// violates the polytope invariants (callers resample; measure-zero event).
std::pair<Polytope, Polytope> split(const Polytope& p, const Hyperplane& eta);

// Length of the shared boundary of two interior-disjoint polytopes
// (d=2: summed overlap of collinear edge segments; d=1: 1 per shared endpoint).
double shared_boundary_length(const Polytope& p, const Polytope& q);

double normalize_theta(double theta);

// Strict CCW convex hull (collinear points dropped); needs >= 3
// non-collinear points to produce a valid polygon vertex list.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

} // namespace brt
