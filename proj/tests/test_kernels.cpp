#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "brt/kernels.hpp"
#include "brt/rng.hpp"

using namespace brt;

namespace {

const double kPi = std::acos(-1.0);

DrivingMeasure iso_uniform2() {
    DrivingMeasure m;
    m.directional = DirectionalMeasure::isotropic();
    m.colour = ColourKernel::product({0.5, 0.5});
    return m;
}

// 3x3 block of unit squares with chosen colours, cells listed row-major
Tessellation block3x3(const std::array<Colour, 9>& colours) {
    Tessellation t;
    t.window = Window(Polytope::box(0, 0, 3, 3));
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) {
            t.ids.push_back(static_cast<CellId>(t.cells.size()));
            t.cells.push_back({Polytope::box(x, y, x + 1, y + 1),
                               colours[static_cast<std::size_t>(3 * y + x)], 0.0});
        }
    return t;
}

BicolouredHyperplane through_centroid(const Cell& c, double theta) {
    const Vec2 m = centroid(c.poly);
    const Vec2 u{std::cos(theta), std::sin(theta)};
    BicolouredHyperplane H;
    H.spatial = c.poly.dim == 1 ? Hyperplane::point(m.x) : Hyperplane::line(theta, dot(m, u));
    H.colour_plus = 0;
    H.colour_minus = 1;
    return H;
}

const Tessellation kEmptyState;

} // namespace

TEST_CASE("stit density is one") {
    StitKernel k;
    const Cell c{Polytope::box(0, 0, 1, 1), 0, 0.0};
    CHECK(k.density(0.5, kEmptyState, c, through_centroid(c, 0.3)) == 1.0);
    CHECK(k.kappa() == 0.0);
    CHECK(k.kappa_prime() == 0.0);
}

TEST_CASE("size balance density") {
    SizeBalanceKernel k(0.05);
    const Cell c{Polytope::box(0, 0, 1, 1), 0, 0.0};
    CHECK(k.density(0.0, kEmptyState, c, through_centroid(c, 1.1)) ==
          doctest::Approx(20.05));
    // hits the cell but misses the 0.05-retraction around (0.5, 0.5)
    BicolouredHyperplane far;
    far.spatial = Hyperplane::line(0.0, 0.9);
    CHECK(k.density(0.0, kEmptyState, c, far) == doctest::Approx(0.05));
    CHECK(k.sup_density(c) == doctest::Approx(20.05));
}

TEST_CASE("unit rate density inverts the cell mass") {
    DrivingMeasure m;
    m.directional = DirectionalMeasure::one_dimensional();
    m.colour = ColourKernel::product({1.0});
    UnitRateKernel k(m);
    const Cell c{Polytope::interval(0, 4), 0, 0.0};
    CHECK(k.density(0.0, kEmptyState, c, through_centroid(c, 0.0)) == doctest::Approx(0.25));
    CHECK(proposal_bound(k, m, c) == doctest::Approx(1.0));
}

TEST_CASE("surface fraction") {
    SUBCASE("checkerboard interior cell sees only opposite neighbours") {
        const Tessellation t = block3x3({0, 1, 0, 1, 0, 1, 0, 1, 0});
        CHECK(surface_fraction(t, t.cells[4]) == doctest::Approx(1.0));
    }
    SUBCASE("uniform colouring gives zero") {
        const Tessellation t = block3x3({0, 0, 0, 0, 0, 0, 0, 0, 0});
        CHECK(surface_fraction(t, t.cells[4]) == doctest::Approx(0.0));
    }
    SUBCASE("two of four opposite neighbours give one half") {
        // neighbours of the centre: left+right opposite, top+bottom same
        const Tessellation t = block3x3({0, 0, 0, 1, 0, 1, 0, 0, 0});
        CHECK(surface_fraction(t, t.cells[4]) == doctest::Approx(0.5));
    }
    SUBCASE("window edge counts only towards the perimeter") {
        // corner cell: two window edges, two neighbours, one opposite
        const Tessellation t = block3x3({0, 1, 0, 0, 0, 0, 0, 0, 0});
        CHECK(surface_fraction(t, t.cells[0]) == doctest::Approx(0.25));
    }
    SUBCASE("neighbours-only rule ignores the window edge") {
        const Tessellation t = block3x3({0, 1, 0, 0, 0, 0, 0, 0, 0});
        CHECK(surface_fraction(t, t.cells[0], EdgeRule::NeighboursOnly) ==
              doctest::Approx(0.5));
        // interior cells see no difference
        const Tessellation c = block3x3({0, 0, 0, 1, 0, 1, 0, 0, 0});
        CHECK(surface_fraction(c, c.cells[4], EdgeRule::NeighboursOnly) ==
              doctest::Approx(surface_fraction(c, c.cells[4])));
    }
    SUBCASE("a detached copy of the cell is not its own neighbour") {
        const Tessellation t = block3x3({0, 1, 0, 1, 0, 1, 0, 1, 0});
        const Cell copy = t.cells[4];
        CHECK(surface_fraction(t, copy, EdgeRule::NeighboursOnly) == doctest::Approx(1.0));
    }
}

TEST_CASE("beta tables") {
    const BetaTable c = BetaTable::constant(0.7);
    CHECK(c(0.3, 0.9) == doctest::Approx(0.7));
    const BetaTable fig = BetaTable::half_one_plus_s();
    CHECK(fig(0.0, 0.0) == doctest::Approx(0.5));
    CHECK(fig(0.9, 1.0) == doctest::Approx(1.0));
    CHECK(fig(0.2, 0.5) == doctest::Approx(0.75));
    const BetaTable g = BetaTable::grid({{1.0, 2.0}, {3.0, 4.0}});
    CHECK(g(0.0, 0.0) == doctest::Approx(1.0));
    CHECK(g(1.0, 1.0) == doctest::Approx(4.0));
    CHECK(g(0.5, 0.5) == doctest::Approx(2.5));  // bilinear midpoint
    CHECK_THROWS_AS((void)BetaTable::constant(0.0), ConfigError);
}

TEST_CASE("mutation colour weight") {
    const DrivingMeasure m = iso_uniform2();
    MutationKernel k(0.5, BetaTable::constant(0.5), m.colour.nu);
    const Tessellation t = block3x3({0, 0, 0, 0, 0, 0, 0, 0, 0});
    const Cell& c = t.cells[4];
    CHECK(k.colour_weight(0.3, t, c, c.colour) == doctest::Approx(1.0));
    CHECK(k.colour_weight(0.3, t, c, 1 - c.colour) == doctest::Approx(0.5));
}

TEST_CASE("mutation density reduces to size balance at beta one") {
    const DrivingMeasure m = iso_uniform2();
    MutationKernel mut(0.05, BetaTable::constant(1.0), m.colour.nu);
    SizeBalanceKernel sb(0.05);
    const Tessellation t = block3x3({0, 1, 1, 0, 0, 1, 0, 1, 0});
    RngStream rng(41);
    for (int i = 0; i < 200; ++i) {
        const Cell& c = t.cells[rng.next_u64() % t.cells.size()];
        const double theta = rng.next_double() * kPi;
        auto [lo, hi] = directional_support(c.poly, theta);
        BicolouredHyperplane H;
        H.spatial = Hyperplane::line(theta, rng.next_uniform(lo, hi));
        H.colour_plus = static_cast<Colour>(rng.next_u64() % 2);
        H.colour_minus = static_cast<Colour>(rng.next_u64() % 2);
        const double s = rng.next_double();
        CHECK(mut.density(s, t, c, H) == doctest::Approx(sb.density(s, t, c, H)));
    }
}

TEST_CASE("mutation density matches the per-halfspace factorisation") {
    const DrivingMeasure m = iso_uniform2();
    MutationKernel k(0.5, BetaTable::half_one_plus_s(), m.colour.nu);
    const Tessellation t = block3x3({0, 1, 0, 1, 0, 1, 0, 1, 0});
    const Cell& c = t.cells[4];
    const double s = 0.4;
    const double b = k.beta()(s - c.birth_time, surface_fraction(t, c));
    const double z = 1.0 + b;
    for (Colour cp = 0; cp < 2; ++cp)
        for (Colour cm = 0; cm < 2; ++cm) {
            BicolouredHyperplane H = through_centroid(c, 0.2);
            H.colour_plus = cp;
            H.colour_minus = cm;
            const double wp = (cp == c.colour ? 1.0 : b) / (0.5 * z);
            const double wm = (cm == c.colour ? 1.0 : b) / (0.5 * z);
            CHECK(k.density(s, t, c, H) == doctest::Approx((0.5 + 2.0) * wp * wm));
        }
}

TEST_CASE("mutation colour normalisation sums to the geometric factor") {
    // summing psi over colour pairs against nu x nu recovers phi_geom
    const DrivingMeasure m = iso_uniform2();
    MutationKernel k(0.5, BetaTable::half_one_plus_s(), m.colour.nu);
    const Tessellation t = block3x3({0, 1, 0, 1, 0, 1, 0, 1, 0});
    const Cell& c = t.cells[4];
    const BicolouredHyperplane base = through_centroid(c, 1.0);
    double total = 0.0;
    for (Colour cp = 0; cp < 2; ++cp)
        for (Colour cm = 0; cm < 2; ++cm) {
            BicolouredHyperplane H = base;
            H.colour_plus = cp;
            H.colour_minus = cm;
            total += 0.25 * k.density(0.4, t, c, H);
        }
    CHECK(total == doctest::Approx(2.5));
}

TEST_CASE("kernel ages read the birth time") {
    BranchingTessellation bt;
    bt.window = Window(Polytope::interval(0, 2));
    bt.arena = {{Polytope::interval(0, 2), 0, 0.0},
                {Polytope::interval(0, 1), 0, 0.25},
                {Polytope::interval(1, 2), 0, 0.25}};
    bt.initial_ids = {0};
    DivisionEvent ev;
    ev.s = 0.25;
    ev.parent = 0;
    ev.cut.spatial = Hyperplane::point(1.0);
    ev.child_plus = 2;
    ev.child_minus = 1;
    bt.events.push_back(ev);
    CHECK(age(bt, 0, 0.2) == doctest::Approx(0.2));
    CHECK(age(bt, 1, 0.25) == doctest::Approx(0.0));
    CHECK(age(bt, 1, 0.9) == doctest::Approx(0.65));
    CHECK_THROWS_AS((void)age(bt, 0, 0.5), CellNotAlive);   // already divided
    CHECK_THROWS_AS((void)age(bt, 1, 0.1), CellNotAlive);   // not yet born
}

TEST_CASE("proposal bounds") {
    const DrivingMeasure iso = iso_uniform2();
    const Cell square{Polytope::box(0, 0, 1, 1), 0, 0.0};
    CHECK(proposal_bound(StitKernel(), iso, square) ==
          doctest::Approx(4.0 / kPi).epsilon(1e-6));
    CHECK(proposal_bound(SizeBalanceKernel(0.05), iso, square) ==
          doctest::Approx(20.05 * 4.0 / kPi).epsilon(1e-6));
    DrivingMeasure oned;
    oned.directional = DirectionalMeasure::one_dimensional();
    oned.colour = ColourKernel::product({1.0});
    const Cell interval{Polytope::interval(0, 3), 0, 0.0};
    CHECK(proposal_bound(ConstantDensityKernel(2.0), oned, interval) ==
          doctest::Approx(6.0));
}

TEST_CASE("density bounded by its envelope on random probes") {
    const DrivingMeasure iso = iso_uniform2();
    MutationKernel mut(0.5, BetaTable::half_one_plus_s(), iso.colour.nu);
    SizeBalanceKernel sb(0.2);
    const Tessellation t = block3x3({0, 1, 1, 0, 1, 0, 1, 0, 0});
    RngStream rng(42);
    for (int i = 0; i < 100000; ++i) {
        const Cell& c = t.cells[rng.next_u64() % t.cells.size()];
        const double theta = rng.next_double() * kPi;
        auto [lo, hi] = directional_support(c.poly, theta);
        BicolouredHyperplane H;
        H.spatial = Hyperplane::line(theta, rng.next_uniform(lo, hi));
        H.colour_plus = static_cast<Colour>(rng.next_u64() % 2);
        H.colour_minus = static_cast<Colour>(rng.next_u64() % 2);
        const double s = rng.next_double();
        const double dm = mut.density(s, t, c, H);
        CHECK(dm <= mut.sup_density(c) * (1.0 + 1e-12));
        CHECK(dm >= std::exp(-mut.kappa()) * (1.0 - 1e-12));
        CHECK(dm <= std::exp(mut.kappa()) * (1.0 + 1e-12));
        const double ds = sb.density(s, t, c, H);
        CHECK(ds <= sb.sup_density(c));
        CHECK(ds >= std::exp(-sb.kappa()) * (1.0 - 1e-12));
    }
}

TEST_CASE("translation covariance of densities") {
    const DrivingMeasure iso = iso_uniform2();
    MutationKernel mut(0.5, BetaTable::half_one_plus_s(), iso.colour.nu);
    SizeBalanceKernel sb(0.3);
    const Tessellation t = block3x3({0, 1, 0, 1, 0, 1, 0, 1, 0});
    RngStream rng(43);
    for (int i = 0; i < 200; ++i) {
        const Vec2 x{rng.next_uniform(-4, 4), rng.next_uniform(-4, 4)};
        Tessellation shifted = t;
        for (Cell& c : shifted.cells)
            c.poly = translate(c.poly, x);
        shifted.window = Window(translate(t.window.parts[0], x));
        const Cell& c = t.cells[rng.next_u64() % 9];
        const Cell cs{translate(c.poly, x), c.colour, c.birth_time};
        const double theta = rng.next_double() * kPi;
        auto [lo, hi] = directional_support(c.poly, theta);
        BicolouredHyperplane H;
        H.spatial = Hyperplane::line(theta, rng.next_uniform(lo, hi));
        H.colour_plus = 1;
        H.colour_minus = 0;
        BicolouredHyperplane Hs = H;
        Hs.spatial = translate(H.spatial, x);
        const double s = rng.next_double();
        CHECK(std::abs(mut.density(s, shifted, cs, Hs) - mut.density(s, t, c, H)) <= 1e-10);
        CHECK(std::abs(sb.density(s, shifted, cs, Hs) - sb.density(s, t, c, H)) <= 1e-10);
    }
}

TEST_CASE("bounded range: distant cells do not change the density") {
    const DrivingMeasure iso = iso_uniform2();
    MutationKernel mut(0.5, BetaTable::half_one_plus_s(), iso.colour.nu);
    StitKernel stit;
    ConstantDensityKernel cst(2.0);
    Tessellation t = block3x3({0, 1, 0, 1, 0, 1, 0, 1, 0});
    const Cell c = t.cells[4];
    const BicolouredHyperplane H = through_centroid(c, 0.7);
    const double before_mut = mut.density(0.5, t, c, H);
    const double before_stit = stit.density(0.5, t, c, H);
    const double before_cst = cst.density(0.5, t, c, H);
    // drop in far-away cells of both colours
    t.cells.push_back({Polytope::box(50, 50, 51, 51), 0, 0.1});
    t.cells.push_back({Polytope::box(52, 50, 53, 51), 1, 0.1});
    t.ids.push_back(9);
    t.ids.push_back(10);
    CHECK(mut.density(0.5, t, c, H) == before_mut);  // bit-equal
    CHECK(stit.density(0.5, t, c, H) == before_stit);
    CHECK(cst.density(0.5, t, c, H) == before_cst);
}

TEST_CASE("directional kernel") {
    DrivingMeasure m;
    m.directional = DirectionalMeasure::atoms({0.0, kPi / 2.0}, {1.0, 1.0});
    m.colour = ColourKernel::product({1.0});
    DirectionalKernel k(m);
    CHECK(k.kappa() == kInf);
    // horizontal cells dominate: wide cells
    Tessellation hor;
    hor.window = Window(Polytope::box(0, 0, 4, 2));
    hor.cells = {{Polytope::box(0, 0, 4, 1), 0, 0.0}, {Polytope::box(0, 1, 4, 2), 0, 0.0}};
    hor.ids = {0, 1};
    const Cell& c = hor.cells[0];
    BicolouredHyperplane horizontal_cut;
    horizontal_cut.spatial = Hyperplane::line(kPi / 2.0, 0.5);
    BicolouredHyperplane vertical_cut;
    vertical_cut.spatial = Hyperplane::line(0.0, 2.0);
    CHECK(k.density(0.5, hor, c, horizontal_cut) == doctest::Approx(1.0));
    CHECK(k.density(0.5, hor, c, vertical_cut) == 0.0);
    // vertical cells dominate after transposing
    Tessellation vert;
    vert.window = Window(Polytope::box(0, 0, 2, 4));
    vert.cells = {{Polytope::box(0, 0, 1, 4), 0, 0.0}, {Polytope::box(1, 0, 2, 4), 0, 0.0}};
    vert.ids = {0, 1};
    BicolouredHyperplane vcut;
    vcut.spatial = Hyperplane::line(0.0, 0.5);
    CHECK(k.density(0.5, vert, vert.cells[0], vcut) == doctest::Approx(1.0));
    CHECK(k.density(0.5, vert, vert.cells[0], horizontal_cut) == 0.0);
    // needs both axis atoms
    DrivingMeasure bad;
    bad.directional = DirectionalMeasure::isotropic();
    bad.colour = ColourKernel::product({1.0});
    CHECK_THROWS_AS((void)DirectionalKernel(bad), NonModerate);
}

TEST_CASE("horizontal cell classification and density") {
    CHECK(is_horizontal_cell(Polytope::box(0, 0, 3, 1)));
    CHECK(!is_horizontal_cell(Polytope::box(0, 0, 1, 3)));
    CHECK(!is_horizontal_cell(Polytope::box(0, 0, 1, 1)));  // ties are vertical
    Tessellation t;
    t.window = Window(Polytope::box(0, 0, 4, 4));
    t.cells = {{Polytope::box(0, 0, 4, 1), 0, 0.0},
               {Polytope::box(0, 1, 1, 4), 0, 0.0},
               {Polytope::box(1, 1, 4, 4), 0, 0.0}};
    t.ids = {0, 1, 2};
    CHECK(horizontal_cell_density(t, Polytope::box(0, 0, 4, 4)) ==
          doctest::Approx(1.0 / 16.0));
}

TEST_CASE("block kernel") {
    const auto inner = std::make_shared<SizeBalanceKernel>(0.05);
    // boxes of side 4 centred on a pitch-5 grid: [-2,2], [3,7], ...
    BlockKernel k(inner, 4.0, 1.0);
    const Cell inside{Polytope::box(-1, -1, 1, 1), 0, 0.0};
    const Cell straddling{Polytope::box(1.5, -1, 3.5, 1), 0, 0.0};
    CHECK(k.inside_box(inside.poly));
    CHECK(!k.inside_box(straddling.poly));
    CHECK(k.density(0.2, kEmptyState, inside, through_centroid(inside, 0.4)) ==
          doctest::Approx(20.05));
    CHECK(k.density(0.2, kEmptyState, straddling, through_centroid(straddling, 0.4)) ==
          doctest::Approx(1.0));
    // off-origin box
    const Cell in_next{Polytope::box(3.5, 3.5, 6.5, 6.5), 0, 0.0};
    CHECK(k.inside_box(in_next.poly));
    // stit inside gives one everywhere
    BlockKernel trivial(std::make_shared<StitKernel>(), 4.0, 1.0);
    CHECK(trivial.density(0.2, kEmptyState, inside, through_centroid(inside, 0.4)) == 1.0);
    CHECK(trivial.density(0.2, kEmptyState, straddling,
                          through_centroid(straddling, 0.4)) == 1.0);
}

TEST_CASE("density_at checks aliveness") {
    BranchingTessellation bt;
    bt.window = Window(Polytope::interval(0, 2));
    bt.arena = {{Polytope::interval(0, 2), 0, 0.0},
                {Polytope::interval(0, 1), 0, 0.25},
                {Polytope::interval(1, 2), 1, 0.25}};
    bt.initial_ids = {0};
    DivisionEvent ev;
    ev.s = 0.25;
    ev.parent = 0;
    ev.cut.spatial = Hyperplane::point(1.0);
    ev.cut.colour_plus = 1;
    ev.child_plus = 2;
    ev.child_minus = 1;
    bt.events.push_back(ev);
    StitKernel k;
    BicolouredHyperplane H;
    H.spatial = Hyperplane::point(0.5);
    CHECK(density_at(k, 0.1, bt, 0, H) == 1.0);
    CHECK_THROWS_AS((void)density_at(k, 0.5, bt, 0, H), CellNotAlive);
    CHECK(density_at(k, 0.5, bt, 1, H) == 1.0);
}
