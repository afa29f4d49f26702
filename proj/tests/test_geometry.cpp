#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "brt/geometry.hpp"
#include "brt/rng.hpp"

using namespace brt;

namespace {

const double kPi = std::acos(-1.0);

// independent shoelace, used as the area oracle for clipped vertex lists
double shoelace(const std::vector<Vec2>& vs) {
    double a2 = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const Vec2& u = vs[i];
        const Vec2& v = vs[(i + 1) % vs.size()];
        a2 += u.x * v.y - u.y * v.x;
    }
    return 0.5 * a2;
}

// fan-decomposition centroid oracle: triangulate from vertex 0 and average
// triangle centroids weighted by signed area
Vec2 fan_centroid(const std::vector<Vec2>& vs) {
    double total = 0.0;
    Vec2 c{0.0, 0.0};
    for (std::size_t i = 1; i + 1 < vs.size(); ++i) {
        const Vec2 &a = vs[0], &b = vs[i], &d = vs[i + 1];
        const double w = 0.5 * ((b.x - a.x) * (d.y - a.y) - (b.y - a.y) * (d.x - a.x));
        total += w;
        c.x += w * (a.x + b.x + d.x) / 3.0;
        c.y += w * (a.y + b.y + d.y) / 3.0;
    }
    return {c.x / total, c.y / total};
}

Polytope random_polygon(RngStream& rng) {
    for (;;) {
        const std::size_t k = 4 + rng.next_u64() % 13;
        std::vector<Vec2> pts(k);
        for (Vec2& p : pts)
            p = {rng.next_uniform(-2.0, 2.0), rng.next_uniform(-2.0, 2.0)};
        auto hull = convex_hull(std::move(pts));
        if (hull.size() >= 3) {
            Polytope poly;
            poly.dim = 2;
            poly.verts = std::move(hull);
            if (polytope_valid(poly))
                return poly;
        }
    }
}

const Polytope kSquare = Polytope::box(0.0, 0.0, 1.0, 1.0);

} // namespace

TEST_CASE("centroid") {
    CHECK(centroid(kSquare).x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(centroid(kSquare).y == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(centroid(Polytope::interval(2.0, 5.0)).x == doctest::Approx(3.5));
    const Polytope tri = Polytope::polygon({{0, 0}, {3, 0}, {0, 3}});
    const Vec2 m = centroid(tri);
    CHECK(m.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.y == doctest::Approx(1.0).epsilon(1e-12));
    const Vec2 oracle = fan_centroid(tri.verts);
    CHECK(m.x == doctest::Approx(oracle.x).epsilon(1e-12));
    CHECK(m.y == doctest::Approx(oracle.y).epsilon(1e-12));
}

TEST_CASE("radius") {
    CHECK(radius(kSquare) == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(radius(Polytope::interval(0.0, 4.0)) == doctest::Approx(2.0));
    const Polytope tri = Polytope::polygon({{0, 0}, {3, 0}, {0, 3}});
    double oracle = 0.0;
    for (const Vec2& v : tri.verts)
        oracle = std::max(oracle, norm(v - centroid(tri)));
    CHECK(radius(tri) == doctest::Approx(std::sqrt(5.0)));
    CHECK(radius(tri) == doctest::Approx(oracle));
}

TEST_CASE("directional support") {
    auto [lo, hi] = directional_support(kSquare, kPi / 2.0);
    CHECK(lo == doctest::Approx(0.0));
    CHECK(hi == doctest::Approx(1.0));
    auto [dlo, dhi] = directional_support(kSquare, kPi / 4.0);
    CHECK(dlo == doctest::Approx(0.0));
    CHECK(dhi == doctest::Approx(std::sqrt(2.0)));
    auto [ilo, ihi] = directional_support(Polytope::interval(2.0, 5.0), 0.0);
    CHECK(ilo == doctest::Approx(2.0));
    CHECK(ihi == doctest::Approx(5.0));
    CHECK(directional_width(Polytope::interval(2.0, 5.0), 0.0) == doctest::Approx(3.0));
}

TEST_CASE("area and perimeter") {
    CHECK(area(kSquare) == doctest::Approx(1.0));
    CHECK(perimeter(kSquare) == doctest::Approx(4.0));
    CHECK(area(Polytope::interval(0.0, 3.0)) == doctest::Approx(3.0));
    const Polytope tri = Polytope::polygon({{0, 0}, {1, 0}, {0, 1}});
    CHECK(area(tri) == doctest::Approx(0.5));
    CHECK(area(tri) == doctest::Approx(shoelace(tri.verts)));
    CHECK(perimeter(tri) == doctest::Approx(2.0 + std::sqrt(2.0)));
}

TEST_CASE("split") {
    SUBCASE("square bisection") {
        auto [plus, minus] = split(kSquare, Hyperplane::line(0.0, 0.5));
        CHECK(area(plus) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(area(minus) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("triangle clip areas against the shoelace oracle") {
        const Polytope tri = Polytope::polygon({{0, 0}, {1, 0}, {0, 1}});
        auto [plus, minus] = split(tri, Hyperplane::line(0.0, 0.5));
        CHECK(area(plus) == doctest::Approx(0.125).epsilon(1e-12));
        CHECK(area(minus) == doctest::Approx(0.375).epsilon(1e-12));
        CHECK(area(plus) == doctest::Approx(shoelace(plus.verts)));
        CHECK(area(minus) == doctest::Approx(shoelace(minus.verts)));
    }
    SUBCASE("miss") {
        CHECK_THROWS_AS((void)split(kSquare, Hyperplane::line(0.0, 2.0)), NotHitting);
        CHECK_THROWS_AS((void)split(Polytope::interval(0, 1), Hyperplane::point(1.5)),
                        NotHitting);
    }
    SUBCASE("interval") {
        auto [plus, minus] = split(Polytope::interval(0.0, 4.0), Hyperplane::point(1.0));
        CHECK(minus.lo == doctest::Approx(0.0));
        CHECK(minus.hi == doctest::Approx(1.0));
        CHECK(plus.lo == doctest::Approx(1.0));
        CHECK(plus.hi == doctest::Approx(4.0));
    }
}

TEST_CASE("retract") {
    const Polytope same = retract(kSquare, 1.0);
    CHECK(area(same) == doctest::Approx(1.0));
    const Polytope half = retract(kSquare, 0.5);
    CHECK(area(half) == doctest::Approx(0.25));
    CHECK(centroid(half).x == doctest::Approx(0.5));
    const Polytope r = retract(Polytope::interval(0.0, 4.0), 0.25);
    CHECK(r.lo == doctest::Approx(1.5));
    CHECK(r.hi == doctest::Approx(2.5));
    CHECK_THROWS_AS((void)retract(Polytope::interval(0.0, 1e-10 + 1e-12), 1e-3),
                    DegenerateChild);
}

TEST_CASE("shared boundary length") {
    const Polytope right = Polytope::box(1.0, 0.0, 2.0, 1.0);
    CHECK(shared_boundary_length(kSquare, right) == doctest::Approx(1.0));
    const Polytope far = Polytope::box(2.0, 2.0, 3.0, 3.0);
    CHECK(shared_boundary_length(kSquare, far) == doctest::Approx(0.0));
    const Polytope offset = Polytope::box(1.0, 0.5, 2.0, 1.5);
    CHECK(shared_boundary_length(kSquare, offset) == doctest::Approx(0.5));
    // d=1: shared endpoints count, disjoint intervals do not
    CHECK(shared_boundary_length(Polytope::interval(0, 1), Polytope::interval(1, 2)) ==
          doctest::Approx(1.0));
    CHECK(shared_boundary_length(Polytope::interval(0, 1), Polytope::interval(3, 4)) ==
          doctest::Approx(0.0));
}

TEST_CASE("split conservation and convexity over random polygons") {
    RngStream rng(11);
    for (int i = 0; i < 1000; ++i) {
        const Polytope p = random_polygon(rng);
        const double theta = rng.next_double() * kPi;
        auto [lo, hi] = directional_support(p, theta);
        const double r = lo + (0.02 + 0.96 * rng.next_double()) * (hi - lo);
        auto [plus, minus] = split(p, Hyperplane::line(theta, r));
        CHECK(polytope_valid(plus));
        CHECK(polytope_valid(minus));
        CHECK(std::abs(area(plus) + area(minus) - area(p)) <= 1e-9 * area(p));
    }
}

TEST_CASE("support interval decides hitting") {
    RngStream rng(12);
    for (int i = 0; i < 300; ++i) {
        const Polytope p = random_polygon(rng);
        const double theta = rng.next_double() * kPi;
        auto [lo, hi] = directional_support(p, theta);
        const double inside = lo + (0.05 + 0.9 * rng.next_double()) * (hi - lo);
        CHECK(hits_interior(p, Hyperplane::line(theta, inside)));
        CHECK_NOTHROW((void)split(p, Hyperplane::line(theta, inside)));
        const double outside = rng.next_double() < 0.5 ? lo - 0.1 : hi + 0.1;
        CHECK(!hits_interior(p, Hyperplane::line(theta, outside)));
        CHECK_THROWS_AS((void)split(p, Hyperplane::line(theta, outside)), NotHitting);
    }
}

TEST_CASE("translation covariance") {
    RngStream rng(13);
    for (int i = 0; i < 300; ++i) {
        const Polytope p = random_polygon(rng);
        const Vec2 x{rng.next_uniform(-3, 3), rng.next_uniform(-3, 3)};
        const Vec2 a = centroid(p), b = centroid(translate(p, x));
        CHECK(std::abs(b.x - a.x - x.x) <= 1e-12);
        CHECK(std::abs(b.y - a.y - x.y) <= 1e-12);
        const double theta = rng.next_double() * kPi;
        auto [lo, hi] = directional_support(p, theta);
        const Hyperplane eta = Hyperplane::line(theta, 0.5 * (lo + hi));
        auto [p1, m1] = split(p, eta);
        auto [p2, m2] = split(translate(p, x), translate(eta, x));
        REQUIRE(p1.verts.size() == p2.verts.size());
        for (std::size_t v = 0; v < p1.verts.size(); ++v) {
            CHECK(std::abs(p2.verts[v].x - p1.verts[v].x - x.x) <= 1e-9);
            CHECK(std::abs(p2.verts[v].y - p1.verts[v].y - x.y) <= 1e-9);
        }
        (void)m1;
        (void)m2;
    }
}

TEST_CASE("convex intersection") {
    const Polytope a = Polytope::box(0, 0, 2, 2);
    const Polytope b = Polytope::box(1, 1, 3, 3);
    const Polytope c = intersect_convex(a, b);
    CHECK(area(c) == doctest::Approx(1.0));
    Polytope out;
    CHECK(!try_intersect_convex(a, Polytope::box(5, 5, 6, 6), &out));
    CHECK(try_intersect_convex(a, b, &out));
    const Polytope i = intersect_convex(Polytope::interval(0, 2), Polytope::interval(1, 5));
    CHECK(i.lo == doctest::Approx(1.0));
    CHECK(i.hi == doctest::Approx(2.0));
}

TEST_CASE("containment") {
    CHECK(contains(Polytope::box(0, 0, 4, 4), kSquare));
    CHECK(!contains(kSquare, Polytope::box(0, 0, 4, 4)));
    CHECK(!contains(Polytope::box(0, 0, 1, 1), Polytope::box(0.5, 0.5, 1.5, 1.5)));
    CHECK(contains_point(kSquare, {0.5, 0.5}));
    CHECK(!contains_point(kSquare, {1.5, 0.5}));
    CHECK(contains_point(Polytope::interval(0, 1), {0.5, 0}));
}

TEST_CASE("polytope invariants") {
    Polytope empty_interval;
    empty_interval.dim = 1;
    CHECK(!polytope_valid(empty_interval));
    CHECK_THROWS_AS((void)Polytope::interval(1.0, 1.0), InvalidPolytope);
    // collinear vertex list is rejected
    Polytope degenerate;
    degenerate.dim = 2;
    degenerate.verts = {{0, 0}, {1, 0}, {2, 0}};
    CHECK(!polytope_valid(degenerate));
    // clockwise ordering is rejected
    Polytope cw;
    cw.dim = 2;
    cw.verts = {{0, 0}, {0, 1}, {1, 0}};
    CHECK(!polytope_valid(cw));
}
