#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "brt/driving.hpp"
#include "brt/stats.hpp"

using namespace brt;

namespace {

const double kPi = std::acos(-1.0);

DrivingMeasure iso_uniform2() {
    DrivingMeasure m;
    m.directional = DirectionalMeasure::isotropic();
    m.colour = ColourKernel::product({0.5, 0.5});
    return m;
}

DrivingMeasure one_d() {
    DrivingMeasure m;
    m.directional = DirectionalMeasure::one_dimensional();
    m.colour = ColourKernel::product({1.0});
    return m;
}

Polytope random_polygon(RngStream& rng) {
    for (;;) {
        std::vector<Vec2> pts(5 + rng.next_u64() % 9);
        for (Vec2& p : pts)
            p = {rng.next_uniform(-2, 2), rng.next_uniform(-2, 2)};
        auto hull = convex_hull(std::move(pts));
        Polytope poly;
        poly.dim = 2;
        poly.verts = std::move(hull);
        if (poly.verts.size() >= 3 && polytope_valid(poly))
            return poly;
    }
}

} // namespace

TEST_CASE("cell mass") {
    const Polytope square = Polytope::box(0, 0, 1, 1);
    CHECK(lambda_cell_mass(iso_uniform2(), square) ==
          doctest::Approx(4.0 / kPi).epsilon(1e-6));
    DrivingMeasure atoms;
    atoms.directional = DirectionalMeasure::atoms({kPi / 2.0}, {1.0});
    atoms.colour = ColourKernel::product({0.5, 0.5});
    CHECK(lambda_cell_mass(atoms, square) == doctest::Approx(1.0));
    CHECK(lambda_cell_mass(one_d(), Polytope::interval(2, 5)) == doctest::Approx(3.0));
}

TEST_CASE("cauchy identity for random polygons") {
    RngStream rng(21);
    const DrivingMeasure iso = iso_uniform2();
    for (int i = 0; i < 200; ++i) {
        const Polytope p = random_polygon(rng);
        const double target = perimeter(p) / kPi;
        CHECK(std::abs(lambda_cell_mass(iso, p) - target) <= 1e-6 * std::max(1.0, target));
    }
}

TEST_CASE("intensity scales the mass") {
    DrivingMeasure m = iso_uniform2();
    m.intensity = 2.5;
    const Polytope square = Polytope::box(0, 0, 1, 1);
    CHECK(lambda_cell_mass(m, square) ==
          doctest::Approx(2.5 * 4.0 / kPi).epsilon(1e-6));
}

TEST_CASE("mass additivity in one dimension is exact") {
    RngStream rng(22);
    const DrivingMeasure m = one_d();
    const double total = lambda_cell_mass(m, Polytope::interval(0.0, 10.0));
    // random partition of [0,10]
    std::vector<double> cuts{0.0, 10.0};
    for (int i = 0; i < 37; ++i)
        cuts.push_back(rng.next_uniform(0.0, 10.0));
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] - cuts[i] > kTolGeom)
            sum += lambda_cell_mass(m, Polytope::interval(cuts[i], cuts[i + 1]));
    CHECK(std::abs(sum - total) <= 1e-12 * total);
}

TEST_CASE("mass is translation covariant") {
    RngStream rng(23);
    const DrivingMeasure iso = iso_uniform2();
    for (int i = 0; i < 50; ++i) {
        const Polytope p = random_polygon(rng);
        const Vec2 x{rng.next_uniform(-5, 5), rng.next_uniform(-5, 5)};
        CHECK(std::abs(lambda_cell_mass(iso, translate(p, x)) - lambda_cell_mass(iso, p)) <=
              1e-10);
    }
}

TEST_CASE("sampler: single horizontal atom on the unit square") {
    DrivingMeasure m;
    m.directional = DirectionalMeasure::atoms({kPi / 2.0}, {1.0});
    m.colour = ColourKernel::product({0.5, 0.5});
    const Cell cell{Polytope::box(0, 0, 1, 1), 0, 0.0};
    HyperplaneSampler sampler(m, cell.poly);
    RngStream rng(24);
    const std::size_t n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    std::size_t plus_a = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const BicolouredHyperplane H = sampler.sample(rng);
        CHECK(H.spatial.theta == doctest::Approx(kPi / 2.0));
        REQUIRE(hits_interior(cell.poly, H.spatial));
        sum += H.spatial.r;
        sum_sq += H.spatial.r * H.spatial.r;
        plus_a += H.colour_plus == 0 ? 1 : 0;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum_sq / n - mean * mean);
    CHECK(std::abs(mean - 0.5) <= 3.0 * sd / std::sqrt(static_cast<double>(n)));
    const double p_hat = static_cast<double>(plus_a) / n;
    CHECK(std::abs(p_hat - 0.5) <= 3.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("sampler law: direction chi-square and offset ks") {
    // two atoms with unequal weights on a rectangle
    DrivingMeasure m;
    m.directional = DirectionalMeasure::atoms({0.0, kPi / 2.0}, {1.0, 3.0});
    m.colour = ColourKernel::product({1.0});
    const Polytope rect = Polytope::box(0, 0, 2, 1);
    HyperplaneSampler sampler(m, rect);
    // direction masses: vertical-normal atom 1*2, horizontal-normal atom 3*1
    const double w0 = 1.0 * 2.0, w1 = 3.0 * 1.0;
    RngStream rng(25);
    const std::size_t n = 100000;
    std::size_t n0 = 0;
    std::vector<double> offsets0;
    for (std::size_t i = 0; i < n; ++i) {
        const BicolouredHyperplane H = sampler.sample(rng);
        if (H.spatial.theta == doctest::Approx(0.0)) {
            ++n0;
            offsets0.push_back(H.spatial.r / 2.0);  // normalised to [0,1]
        }
    }
    const double expect0 = n * w0 / (w0 + w1);
    const double chi2 = (n0 - expect0) * (n0 - expect0) / expect0 +
                        (static_cast<double>(n - n0) - (n - expect0)) *
                            (static_cast<double>(n - n0) - (n - expect0)) /
                            (n - expect0);
    CHECK(chi2_sf(chi2, 1) > 0.01);
    // offsets uniform on the support interval
    std::vector<double> uniform_ref(offsets0.size());
    RngStream ref_rng(26);
    for (double& u : uniform_ref)
        u = ref_rng.next_double();
    CHECK(two_sample_ks(offsets0, uniform_ref) > 0.01);
}

TEST_CASE("sampler law: isotropic directions follow the width integral") {
    const DrivingMeasure iso = iso_uniform2();
    const Polytope rect = Polytope::box(0, 0, 3, 1);
    HyperplaneSampler sampler(iso, rect);
    RngStream rng(27);
    const std::size_t n = 100000;
    std::vector<double> thetas;
    thetas.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        thetas.push_back(sampler.sample(rng).spatial.theta);
    // oracle: inverse-cdf draws from a fine independently-built table
    const std::size_t grid = 20000;
    std::vector<double> cum(grid + 1, 0.0);
    for (std::size_t i = 1; i <= grid; ++i) {
        const double a = kPi * static_cast<double>(i - 1) / grid;
        const double b = kPi * static_cast<double>(i) / grid;
        cum[i] = cum[i - 1] +
                 0.5 * (directional_width(rect, a) + directional_width(rect, b)) * (b - a);
    }
    RngStream oracle_rng(28);
    std::vector<double> oracle;
    oracle.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double target = oracle_rng.next_double() * cum.back();
        const auto it = std::lower_bound(cum.begin(), cum.end(), target);
        const std::size_t hi = std::max<std::size_t>(1, it - cum.begin());
        const double t = (target - cum[hi - 1]) / (cum[hi] - cum[hi - 1]);
        oracle.push_back(kPi * (static_cast<double>(hi - 1) + t) / grid);
    }
    CHECK(two_sample_ks(thetas, oracle) > 0.01);
}

TEST_CASE("colour kernels") {
    SUBCASE("matrix must sum to one") {
        CHECK_THROWS_AS((void)ColourKernel::matrix({{0.5, 0.5}, {0.5, 0.5}}), ConfigError);
        CHECK_NOTHROW((void)ColourKernel::matrix({{0.25, 0.25}, {0.25, 0.25}}));
    }
    SUBCASE("joint matrix sampling matches the entries") {
        DrivingMeasure m;
        m.directional = DirectionalMeasure::one_dimensional();
        m.colour = ColourKernel::matrix({{0.6, 0.1}, {0.1, 0.2}});
        const Cell cell{Polytope::interval(0, 1), 0, 0.0};
        RngStream rng(29);
        const std::size_t n = 100000;
        std::size_t counts[2][2] = {{0, 0}, {0, 0}};
        for (std::size_t i = 0; i < n; ++i) {
            const auto H = sample_hyperplane(m, cell, rng);
            counts[H.colour_plus][H.colour_minus]++;
        }
        const double probs[2][2] = {{0.6, 0.1}, {0.1, 0.2}};
        double chi2 = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const double e = n * probs[i][j];
                chi2 += (counts[i][j] - e) * (counts[i][j] - e) / e;
            }
        CHECK(chi2_sf(chi2, 3) > 0.01);
    }
    SUBCASE("reference vector must be a distribution") {
        CHECK_THROWS_AS((void)ColourKernel::product({0.5, 0.4}), ConfigError);
        CHECK_THROWS_AS((void)ColourKernel::product({1.5, -0.5}), ConfigError);
    }
}

TEST_CASE("sampling log density ratio is zero") {
    const DrivingMeasure m = one_d();
    const Cell cell{Polytope::interval(0, 1), 0, 0.0};
    RngStream rng(30);
    const auto H = sample_hyperplane(m, cell, rng);
    CHECK(lambda_log_density_ratio(m, cell, H) == 0.0);
    const DrivingMeasure iso = iso_uniform2();
    const Cell sq{Polytope::box(0, 0, 1, 1), 0, 0.0};
    const auto H2 = sample_hyperplane(iso, sq, rng);
    CHECK(lambda_log_density_ratio(iso, sq, H2) == 0.0);
}

TEST_CASE("zero-mass guard") {
    DrivingMeasure m = one_d();
    Polytope tiny;
    tiny.dim = 1;
    tiny.lo = 0.0;
    tiny.hi = 0.0;  // constructed directly to bypass the validity check
    CHECK_THROWS_AS((void)HyperplaneSampler(m, tiny), ZeroMass);
}

TEST_CASE("directional measure validation") {
    CHECK_THROWS_AS((void)DirectionalMeasure::atoms({0.0, 0.0}, {1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS((void)DirectionalMeasure::atoms({0.5}, {-1.0}), ConfigError);
    CHECK_THROWS_AS((void)DirectionalMeasure::atoms({3.5}, {1.0}), ConfigError);
}
