#include "brt/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace brt {

double norm(const Vec2& a) { return std::sqrt(a.x * a.x + a.y * a.y); }

double normalize_theta(double theta) {
    const double pi = std::acos(-1.0);
    double t = std::fmod(theta, pi);
    if (t < 0.0)
        t += pi;
    if (t >= pi)
        t = 0.0;
    return t;
}

Polytope Polytope::interval(double a, double b) {
    Polytope p;
    p.dim = 1;
    p.lo = a;
    p.hi = b;
    require_valid(p);
    return p;
}

Polytope Polytope::polygon(std::vector<Vec2> vs) {
    Polytope p;
    p.dim = 2;
    p.verts = std::move(vs);
    require_valid(p);
    return p;
}

Polytope Polytope::box(double x0, double y0, double x1, double y1) {
    return polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Vec2 Hyperplane::normal() const {
    if (dim == 1)
        return {1.0, 0.0};
    return {std::cos(theta), std::sin(theta)};
}

Hyperplane Hyperplane::line(double theta, double r) {
    Hyperplane h;
    h.dim = 2;
    h.theta = normalize_theta(theta);
    h.r = r;
    return h;
}

Hyperplane Hyperplane::point(double r) {
    Hyperplane h;
    h.dim = 1;
    h.r = r;
    return h;
}

bool polytope_valid(const Polytope& p) {
    if (p.dim == 1)
        return p.hi - p.lo > kTolGeom;
    if (p.dim != 2 || p.verts.size() < 3)
        return false;
    const std::size_t n = p.verts.size();
    double a2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& u = p.verts[i];
        const Vec2& v = p.verts[(i + 1) % n];
        const Vec2& w = p.verts[(i + 2) % n];
        if (norm(v - u) <= kTolGeom)
            return false;
        if (cross(v - u, w - v) <= 0.0)  // strict convexity, CCW
            return false;
        a2 += cross(u, v);
    }
    return 0.5 * a2 > kTolGeom;
}

void require_valid(const Polytope& p) {
    if (!polytope_valid(p))
        throw InvalidPolytope("polytope violates its invariants");
}

double area(const Polytope& p) {
    if (p.dim == 1)
        return p.hi - p.lo;
    double a2 = 0.0;
    const std::size_t n = p.verts.size();
    for (std::size_t i = 0; i < n; ++i)
        a2 += cross(p.verts[i], p.verts[(i + 1) % n]);
    return 0.5 * a2;
}

double perimeter(const Polytope& p) {
    if (p.dim == 1)
        return 2.0;  // H^0 of the two endpoints
    double s = 0.0;
    const std::size_t n = p.verts.size();
    for (std::size_t i = 0; i < n; ++i)
        s += norm(p.verts[(i + 1) % n] - p.verts[i]);
    return s;
}

Vec2 centroid(const Polytope& p) {
    if (p.dim == 1)
        return {0.5 * (p.lo + p.hi), 0.0};
    // area-weighted fan decomposition
    double a2 = 0.0;
    Vec2 c{0.0, 0.0};
    const std::size_t n = p.verts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& u = p.verts[i];
        const Vec2& v = p.verts[(i + 1) % n];
        const double w = cross(u, v);
        a2 += w;
        c.x += (u.x + v.x) * w;
        c.y += (u.y + v.y) * w;
    }
    return {c.x / (3.0 * a2), c.y / (3.0 * a2)};
}

double radius(const Polytope& p) {
    const Vec2 m = centroid(p);
    if (p.dim == 1)
        return 0.5 * (p.hi - p.lo);
    double r = 0.0;
    for (const Vec2& v : p.verts)
        r = std::max(r, norm(v - m));
    return r;
}

std::pair<double, double> directional_support(const Polytope& p, double theta) {
    if (p.dim == 1)
        return {p.lo, p.hi};
    const Vec2 u{std::cos(theta), std::sin(theta)};
    double lo = dot(p.verts[0], u), hi = lo;
    for (std::size_t i = 1; i < p.verts.size(); ++i) {
        const double d = dot(p.verts[i], u);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

double directional_width(const Polytope& p, double theta) {
    auto [lo, hi] = directional_support(p, theta);
    return hi - lo;
}

std::pair<Vec2, Vec2> bounding_box(const Polytope& p) {
    if (p.dim == 1)
        return {{p.lo, 0.0}, {p.hi, 0.0}};
    Vec2 mn = p.verts[0], mx = p.verts[0];
    for (const Vec2& v : p.verts) {
        mn.x = std::min(mn.x, v.x);
        mn.y = std::min(mn.y, v.y);
        mx.x = std::max(mx.x, v.x);
        mx.y = std::max(mx.y, v.y);
    }
    return {mn, mx};
}

bool hits_interior(const Polytope& p, const Hyperplane& eta) {
    auto [lo, hi] = directional_support(p, eta.theta);
    return lo + kTolSplit < eta.r && eta.r < hi - kTolSplit;
}

bool contains(const Polytope& outer, const Polytope& inner, double margin) {
    if (outer.dim == 1)
        return inner.lo >= outer.lo + margin && inner.hi <= outer.hi - margin;
    const std::size_t n = outer.verts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = outer.verts[i];
        const Vec2& b = outer.verts[(i + 1) % n];
        const Vec2 e = b - a;
        const double len = norm(e);
        for (const Vec2& v : inner.verts)
            if (cross(e, v - a) < margin * len)
                return false;
    }
    return true;
}

bool contains_point(const Polytope& p, const Vec2& x) {
    if (p.dim == 1)
        return x.x > p.lo && x.x < p.hi;
    const std::size_t n = p.verts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = p.verts[i];
        const Vec2& b = p.verts[(i + 1) % n];
        if (cross(b - a, x - a) <= 0.0)
            return false;
    }
    return true;
}

Polytope translate(const Polytope& p, const Vec2& x) {
    Polytope q = p;
    if (p.dim == 1) {
        q.lo += x.x;
        q.hi += x.x;
    } else {
        for (Vec2& v : q.verts)
            v = v + x;
    }
    return q;
}

Hyperplane translate(const Hyperplane& eta, const Vec2& x) {
    Hyperplane h = eta;
    h.r += dot(eta.normal(), x);
    return h;
}

Polytope retract(const Polytope& p, double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw Error("retraction factor must lie in (0,1]");
    const Vec2 m = centroid(p);
    Polytope q = p;
    if (p.dim == 1) {
        q.lo = m.x + eps * (p.lo - m.x);
        q.hi = m.x + eps * (p.hi - m.x);
    } else {
        for (Vec2& v : q.verts)
            v = m + (v - m) * eps;
    }
    if (!polytope_valid(q))
        throw DegenerateChild("retraction collapsed the polytope");
    return q;
}

namespace {

// Collapse near-duplicate and near-collinear vertices after clipping, then
// re-check the invariants.
Polytope canonicalise(std::vector<Vec2> vs) {
    std::vector<Vec2> out;
    out.reserve(vs.size());
    for (const Vec2& v : vs) {
        if (!out.empty() && norm(v - out.back()) <= kTolGeom)
            continue;
        out.push_back(v);
    }
    while (out.size() >= 2 && norm(out.front() - out.back()) <= kTolGeom)
        out.pop_back();
    // drop middle vertices of collinear triples
    bool changed = true;
    while (changed && out.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const Vec2& a = out[(i + out.size() - 1) % out.size()];
            const Vec2& b = out[i];
            const Vec2& c = out[(i + 1) % out.size()];
            if (cross(b - a, c - b) <= kTolGeom) {
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    Polytope q;
    q.dim = 2;
    q.verts = std::move(out);
    if (!polytope_valid(q))
        throw DegenerateChild("clipped polygon violates the polytope invariants");
    return q;
}

} // namespace

Polytope clip_halfplane(const Polytope& p, const Hyperplane& eta, bool keep_plus) {
    const double sgn = keep_plus ? 1.0 : -1.0;
    if (p.dim == 1) {
        double lo = p.lo, hi = p.hi;
        if (keep_plus)
            lo = std::max(lo, eta.r);
        else
            hi = std::min(hi, eta.r);
        if (hi - lo <= kTolGeom)
            throw DegenerateChild("clipped interval has empty interior");
        Polytope q;
        q.dim = 1;
        q.lo = lo;
        q.hi = hi;
        return q;
    }
    const Vec2 u = eta.normal();
    const std::size_t n = p.verts.size();
    std::vector<Vec2> out;
    out.reserve(n + 2);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = p.verts[i];
        const Vec2& b = p.verts[(i + 1) % n];
        const double da = sgn * (dot(a, u) - eta.r);
        const double db = sgn * (dot(b, u) - eta.r);
        if (da >= 0.0)
            out.push_back(a);
        if ((da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0)) {
            const double t = da / (da - db);
            out.push_back(a + (b - a) * t);
        }
    }
    if (out.size() < 3)
        throw DegenerateChild("clipped polygon has empty interior");
    return canonicalise(std::move(out));
}

namespace {

// Rewrites {<x,n> >= r} with an arbitrary unit normal n as a canonical
// Hyperplane (theta in [0,pi)) plus the side to keep.
std::pair<Hyperplane, bool> halfplane_ge(const Vec2& n, double r) {
    const double pi = std::acos(-1.0);
    double phi = std::atan2(n.y, n.x);
    bool keep_plus = true;
    if (phi < 0.0 || phi >= pi) {
        phi += phi < 0.0 ? pi : -pi;
        r = -r;
        keep_plus = false;
    }
    Hyperplane h;
    h.dim = 2;
    h.theta = phi;
    h.r = r;
    return {h, keep_plus};
}

} // namespace

Polytope intersect_convex(const Polytope& p, const Polytope& q) {
    if (p.dim == 1) {
        const double lo = std::max(p.lo, q.lo);
        const double hi = std::min(p.hi, q.hi);
        if (hi - lo <= kTolGeom)
            throw DegenerateChild("empty interval intersection");
        Polytope r;
        r.dim = 1;
        r.lo = lo;
        r.hi = hi;
        return r;
    }
    Polytope r = p;
    const std::size_t n = q.verts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = q.verts[i];
        const Vec2& b = q.verts[(i + 1) % n];
        // interior of the CCW polygon q lies left of a->b
        Vec2 nrm{-(b.y - a.y), b.x - a.x};
        nrm = nrm * (1.0 / norm(nrm));
        auto [h, keep_plus] = halfplane_ge(nrm, dot(a, nrm));
        r = clip_halfplane(r, h, keep_plus);
    }
    return r;
}

bool try_intersect_convex(const Polytope& p, const Polytope& q, Polytope* out) {
    try {
        Polytope r = intersect_convex(p, q);
        if (out)
            *out = std::move(r);
        return true;
    } catch (const DegenerateChild&) {
        return false;
    }
}

std::pair<Polytope, Polytope> split(const Polytope& p, const Hyperplane& eta) {
    auto [lo, hi] = directional_support(p, eta.theta);
    if (!(lo + kTolSplit < eta.r && eta.r < hi - kTolSplit))
        throw NotHitting("hyperplane misses the polytope interior");
    return {clip_halfplane(p, eta, true), clip_halfplane(p, eta, false)};
}

namespace {

// Overlap length of collinear segments [a,b] and [c,d].
double segment_overlap(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const Vec2 dir = b - a;
    const double len = norm(dir);
    if (len <= kTolGeom)
        return 0.0;
    const Vec2 u = dir * (1.0 / len);
    // reject non-collinear segments
    if (std::abs(cross(u, c - a)) > 1e-9 || std::abs(cross(u, d - a)) > 1e-9)
        return 0.0;
    double t0 = 0.0, t1 = len;
    double s0 = dot(c - a, u), s1 = dot(d - a, u);
    if (s0 > s1)
        std::swap(s0, s1);
    const double lo = std::max(t0, s0), hi = std::min(t1, s1);
    return hi > lo ? hi - lo : 0.0;
}

} // namespace

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3)
        return pts;
    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= kTolGeom)
            --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
        while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= kTolGeom)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double shared_boundary_length(const Polytope& p, const Polytope& q) {
    if (p.dim == 1) {
        double n = 0.0;
        if (std::abs(p.lo - q.hi) <= kTolGeom || std::abs(p.lo - q.lo) <= kTolGeom)
            n += 1.0;
        if (std::abs(p.hi - q.lo) <= kTolGeom || std::abs(p.hi - q.hi) <= kTolGeom)
            n += 1.0;
        return n;
    }
    auto [pmn, pmx] = bounding_box(p);
    auto [qmn, qmx] = bounding_box(q);
    if (pmn.x > qmx.x + kTolGeom || qmn.x > pmx.x + kTolGeom ||
        pmn.y > qmx.y + kTolGeom || qmn.y > pmx.y + kTolGeom)
        return 0.0;
    double total = 0.0;
    const std::size_t np = p.verts.size(), nq = q.verts.size();
    for (std::size_t i = 0; i < np; ++i) {
        const Vec2& a = p.verts[i];
        const Vec2& b = p.verts[(i + 1) % np];
        for (std::size_t j = 0; j < nq; ++j) {
            const Vec2& c = q.verts[j];
            const Vec2& d = q.verts[(j + 1) % nq];
            total += segment_overlap(a, b, c, d);
        }
    }
    return total;
}

} // namespace brt
