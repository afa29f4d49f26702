#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "brt/rng.hpp"
#include "brt/stats.hpp"

using namespace brt;

namespace {

std::size_t draw_poisson(RngStream& rng, double mean) {
    // Knuth product method; fine for the means used here
    const double limit = std::exp(-mean);
    std::size_t k = 0;
    double prod = 1.0;
    do {
        ++k;
        prod *= rng.next_double_open();
    } while (prod > limit);
    return k - 1;
}

std::size_t draw_geometric(RngStream& rng, double mean) {
    const double q = 1.0 / mean;  // success probability, support {1,2,...}
    return 1 + static_cast<std::size_t>(std::floor(std::log(rng.next_double_open()) /
                                                   std::log(1.0 - q)));
}

} // namespace

TEST_CASE("chi-square survival") {
    // dof 2: sf(x) = exp(-x/2) in closed form
    CHECK(chi2_sf(0.0, 2) == doctest::Approx(1.0));
    CHECK(chi2_sf(2.0 * std::log(2.0), 2) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(chi2_sf(100.0, 2) == doctest::Approx(std::exp(-50.0)).epsilon(1e-8));
    CHECK(chi2_sf(5.0, 5) > chi2_sf(10.0, 5));
}

TEST_CASE("kolmogorov tail") {
    CHECK(kolmogorov_sf(0.0) == doctest::Approx(1.0));
    CHECK(kolmogorov_sf(0.5) > kolmogorov_sf(1.0));
    CHECK(kolmogorov_sf(1.0) > kolmogorov_sf(2.0));
    CHECK(kolmogorov_sf(3.0) < 1e-6);
    // lambda = 0.82757 is the median of the kolmogorov distribution
    CHECK(kolmogorov_sf(0.82757) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("poisson goodness of fit") {
    RngStream rng(71);
    std::vector<std::size_t> counts(10000);
    for (auto& c : counts)
        c = draw_poisson(rng, 10.0);
    CHECK(chi_square_poisson(counts, 10.0) > 0.01);
    // power: the same sample against a doubled mean must be rejected
    CHECK(chi_square_poisson(counts, 20.0) < 0.01);
}

TEST_CASE("geometric goodness of fit") {
    RngStream rng(72);
    const double e = std::exp(1.0);
    std::vector<std::size_t> counts(10000);
    for (auto& c : counts)
        c = draw_geometric(rng, e);
    CHECK(ks_geometric(counts, e) > 0.01);
    CHECK(chi_square_geometric(counts, e) > 0.01);
    CHECK(ks_geometric(counts, 2.0 * e) < 0.01);
    CHECK(chi_square_geometric(counts, 2.0 * e) < 0.01);
}

TEST_CASE("p-values look uniform under the null") {
    // coarse calibration: across independent draws the p-values spread out
    RngStream rng(73);
    int below_half = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::size_t> counts(2000);
        for (auto& c : counts)
            c = draw_poisson(rng, 10.0);
        const double p = chi_square_poisson(counts, 10.0);
        CHECK(p > 1e-4);
        below_half += p < 0.5 ? 1 : 0;
    }
    CHECK(below_half >= 3);
    CHECK(below_half <= 17);
}

TEST_CASE("two-sample ks") {
    RngStream rng(74);
    std::vector<double> xs(5000), ys(5000), zs(5000);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = rng.next_double();
        ys[i] = rng.next_double();
        zs[i] = rng.next_double() + 0.1;
    }
    CHECK(two_sample_ks(xs, ys) > 0.01);
    CHECK(two_sample_ks(xs, zs) < 1e-6);
}

TEST_CASE("sample-size guards") {
    std::vector<std::size_t> tiny(50, 3);
    CHECK_THROWS_AS((void)chi_square_poisson(tiny, 3.0), InsufficientSamples);
    CHECK_THROWS_AS((void)ks_geometric(tiny, 3.0), InsufficientSamples);
    std::vector<double> small(50, 0.5);
    CHECK_THROWS_AS((void)two_sample_ks(small, small), InsufficientSamples);
}

TEST_CASE("mean and standard error") {
    const MeanStdErr m = mean_std_error({1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == doctest::Approx(2.5));
    CHECK(m.n == 4);
    // sd = sqrt(5/3), se = sd/2
    CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
    CHECK(mean_std_error({}).n == 0);
    CHECK(mean_std_error({7.0}).std_error == 0.0);
}
