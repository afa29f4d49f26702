#include "brt/validation.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>

#include "brt/config.hpp"
#include "brt/estimators.hpp"
#include "brt/event_log.hpp"
#include "brt/parallel.hpp"
#include "brt/simulator.hpp"
#include "brt/stats.hpp"

namespace brt {

namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

DrivingMeasure lambda_1d() {
    DrivingMeasure m;
    m.directional = DirectionalMeasure::one_dimensional();
    m.colour = ColourKernel::product({1.0});
    return m;
}

DrivingMeasure lambda_iso(std::size_t n_colours = 2) {
    DrivingMeasure m;
    m.directional = DirectionalMeasure::isotropic();
    m.colour = ColourKernel::product(
        std::vector<double>(n_colours, 1.0 / static_cast<double>(n_colours)));
    return m;
}

Tessellation single_cell(const Polytope& w, Colour col = 0) {
    Tessellation t;
    t.window = Window(w);
    t.cells.push_back({w, col, 0.0});
    t.ids.push_back(0);
    return t;
}

// Unit-interval cells on a uniformly shifted lattice, clipped to the
// window; the whole-line analogue is translation invariant, so estimators
// with a margin of at least one cell see no truncation bias.
Tessellation lattice_1d(const Polytope& w, RngStream& rng) {
    Tessellation t;
    t.window = Window(w);
    const double shift = rng.next_double();
    const long k0 = static_cast<long>(std::floor(w.lo - shift)) - 1;
    const long k1 = static_cast<long>(std::ceil(w.hi - shift)) + 1;
    for (long k = k0; k <= k1; ++k) {
        const double lo = std::max(shift + static_cast<double>(k), w.lo);
        const double hi = std::min(shift + static_cast<double>(k) + 1.0, w.hi);
        if (hi - lo > kTolGeom) {
            t.ids.push_back(static_cast<CellId>(t.cells.size()));
            t.cells.push_back({Polytope::interval(lo, hi), 0, 0.0});
        }
    }
    return t;
}

std::vector<BranchingTessellation> simulate_lattice_1d(const Polytope& window,
                                                       const Kernel& k,
                                                       const DrivingMeasure& lambda,
                                                       std::uint64_t seed, std::size_t n) {
    std::vector<BranchingTessellation> out(n);
    parallel_replicates(n, [&](std::size_t i) {
        RngStream init_rng =
            RngStream::derive(seed, {i, stream_tag::initial_tessellation});
        out[i] = simulate(lattice_1d(window, init_rng), k, lambda, {seed, i});
    });
    return out;
}

Polytope random_convex_polygon(RngStream& rng) {
    for (;;) {
        const std::size_t k = 4 + rng.next_u64() % 13;
        const double scale = 0.3 + 2.7 * rng.next_double();
        const Vec2 shift{rng.next_uniform(-4.0, 4.0), rng.next_uniform(-4.0, 4.0)};
        std::vector<Vec2> pts(k);
        for (Vec2& p : pts)
            p = {shift.x + scale * rng.next_double(), shift.y + scale * rng.next_double()};
        auto hull = convex_hull(std::move(pts));
        if (hull.size() < 3)
            continue;
        Polytope poly;
        poly.dim = 2;
        poly.verts = std::move(hull);
        if (polytope_valid(poly))
            return poly;
    }
}

std::vector<BranchingTessellation> simulate_many(const Tessellation& init, const Kernel& k,
                                                 const DrivingMeasure& lambda,
                                                 std::uint64_t seed, std::size_t n,
                                                 const SimulateOptions& opts = {}) {
    std::vector<BranchingTessellation> out(n);
    parallel_replicates(n, [&](std::size_t i) {
        out[i] = simulate(init, k, lambda, {seed, i}, opts);
    });
    return out;
}

// --- criterion checks -------------------------------------------------------

CheckResult check_geometry(std::uint64_t seed) {
    CheckResult r{"geometry-exactness", true, "", 0.0};
    RngStream rng = RngStream::derive(seed, {stream_tag::validation, 1});
    double worst_area = 0.0;
    for (int i = 0; i < 10000 && r.pass; ++i) {
        const Polytope p = random_convex_polygon(rng);
        const double theta = rng.next_double() * std::acos(-1.0);
        auto [lo, hi] = directional_support(p, theta);
        const double off = lo + (0.05 + 0.9 * rng.next_double()) * (hi - lo);
        auto [plus, minus] = split(p, Hyperplane::line(theta, off));
        const double drift = std::abs(area(plus) + area(minus) - area(p));
        worst_area = std::max(worst_area, drift / area(p));
        if (drift > 1e-9 * area(p))
            r.pass = false;
        // translation covariance of the same split
        const Vec2 x{rng.next_uniform(-3.0, 3.0), rng.next_uniform(-3.0, 3.0)};
        const Vec2 mc = centroid(p);
        const Vec2 mt = centroid(translate(p, x));
        if (std::abs(mt.x - mc.x - x.x) > 1e-12 || std::abs(mt.y - mc.y - x.y) > 1e-12)
            r.pass = false;
        auto [plus_t, minus_t] =
            split(translate(p, x), translate(Hyperplane::line(theta, off), x));
        if (plus_t.verts.size() == plus.verts.size()) {
            for (std::size_t v = 0; v < plus.verts.size(); ++v) {
                const Vec2 d = plus_t.verts[v] - (plus.verts[v] + x);
                if (std::abs(d.x) > 1e-9 || std::abs(d.y) > 1e-9)
                    r.pass = false;
            }
        }
    }
    const DrivingMeasure iso = lambda_iso();
    double worst_cauchy = 0.0;
    for (int i = 0; i < 300; ++i) {
        const Polytope p = random_convex_polygon(rng);
        const double mass = lambda_cell_mass(iso, p);
        const double target = perimeter(p) / std::acos(-1.0);
        const double err = std::abs(mass - target) / std::max(1.0, target);
        worst_cauchy = std::max(worst_cauchy, err);
        if (err > 1e-6)
            r.pass = false;
    }
    r.detail = fmt("area drift %.2e (tol 1e-9), cauchy err %.2e (tol 1e-6)", worst_area,
                   worst_cauchy);
    return r;
}

CheckResult check_poisson_1d(std::uint64_t seed) {
    CheckResult r{"poisson-counts-1d", true, "", 0.0};
    const std::size_t n = 10000;
    const Tessellation init = single_cell(Polytope::interval(0.0, 10.0));
    const StitKernel kernel;
    const DrivingMeasure lambda = lambda_1d();
    std::vector<std::size_t> counts(n);
    parallel_replicates(n, [&](std::size_t i) {
        counts[i] = simulate(init, kernel, lambda, {seed, i}).events.size();
    });
    std::vector<double> values(counts.begin(), counts.end());
    const MeanStdErr m = mean_std_error(values);
    const double p = chi_square_poisson(counts, 10.0);
    const bool mean_ok = std::abs(m.mean - 10.0) <= 3.0 * m.std_error;
    r.pass = p > 0.01 && mean_ok;
    r.detail = fmt("chi2 p=%.3f (>0.01), mean %.3f +- %.3f (target 10)", p, m.mean,
                   m.std_error);
    return r;
}

CheckResult check_furry_yule(std::uint64_t seed) {
    CheckResult r{"furry-yule-offspring", true, "", 0.0};
    const std::size_t n = 10000;
    const DrivingMeasure lambda = lambda_1d();
    const UnitRateKernel kernel(lambda);
    const Tessellation init = single_cell(Polytope::interval(0.0, 1.0));
    std::vector<std::size_t> leaves(n);
    parallel_replicates(n, [&](std::size_t i) {
        leaves[i] = simulate(init, kernel, lambda, {seed, i}).events.size() + 1;
    });
    const double e = std::exp(1.0);
    const double p_chi = chi_square_geometric(leaves, e);
    const double p_ks = ks_geometric(leaves, e);
    std::vector<double> values(leaves.begin(), leaves.end());
    const MeanStdErr m = mean_std_error(values);
    r.pass = p_chi > 0.01 && p_ks > 0.01;
    r.detail = fmt("chi2 p=%.3f, ks p=%.3f (both >0.01), mean %.3f (target %.3f)", p_chi,
                   p_ks, m.mean, e);
    return r;
}

CheckResult check_window_consistency(std::uint64_t seed) {
    CheckResult r{"window-consistency", true, "", 0.0};
    const std::size_t n = 1000;
    const DrivingMeasure lambda = lambda_iso();
    const StitKernel kernel;
    const Polytope big = Polytope::box(0.0, 0.0, 4.0, 4.0);
    const Polytope sub = Polytope::box(1.0, 1.0, 3.0, 3.0);
    std::vector<double> projected(n), direct(n);
    parallel_replicates(n, [&](std::size_t i) {
        const auto bt = simulate(single_cell(big), kernel, lambda, {seed, i});
        projected[i] = static_cast<double>(hitting_count(state_at(bt, 1.0), sub));
    });
    parallel_replicates(n, [&](std::size_t i) {
        const auto bt = simulate(single_cell(sub), kernel, lambda, {seed + 1, i});
        direct[i] = static_cast<double>(hitting_count(state_at(bt, 1.0), sub));
    });
    const double p = two_sample_ks(projected, direct);
    r.pass = p > 0.01;
    r.detail = fmt("two-sample ks p=%.3f (>0.01)", p);
    return r;
}

CheckResult check_variational_zero(std::uint64_t seed) {
    CheckResult r{"variational-zero-2d", true, "", 0.0};
    const std::size_t n = 200;
    const DrivingMeasure lambda = lambda_iso();
    const auto kernel = std::make_shared<SizeBalanceKernel>(0.5);
    const Polytope window = Polytope::box(0.0, 0.0, 8.0, 8.0);
    const auto reps = simulate_many(single_cell(window), *kernel, lambda, seed, n);
    ObservationScheme scheme{Polytope::box(3.0, 3.0, 5.0, 5.0), 3.0};
    EstimatorOptions opts;
    const DensityFn psi = density_of(kernel);
    const Estimate fe = estimate_free_energy(reps, psi, psi, lambda, scheme, opts, seed);
    r.pass = std::abs(fe.value) <= 3.0 * fe.std_error;
    r.detail = fmt("free energy %.4f +- %.4f (|value| <= 3 se)", fe.value, fe.std_error);
    return r;
}

CheckResult check_free_energy_1d(std::uint64_t seed) {
    CheckResult r{"free-energy-analytic-1d", true, "", 0.0};
    const std::size_t n = 2000;
    const DrivingMeasure lambda = lambda_1d();
    const StitKernel generator;
    const auto target = std::make_shared<ConstantDensityKernel>(2.0);
    const Polytope window = Polytope::interval(0.0, 12.0);
    const auto reps = simulate_lattice_1d(window, generator, lambda, seed, n);
    ObservationScheme scheme{Polytope::interval(2.0, 10.0), 2.0};
    EstimatorOptions opts;
    const Estimate fe = estimate_free_energy(reps, density_of(generator), density_of(target),
                                             lambda, scheme, opts, seed);
    const double ln2 = std::log(2.0);
    const double target_value = 1.0 - ln2;
    const auto& b = fe.breakdown;
    const bool total_ok = std::abs(fe.value - target_value) <= 3.0 * fe.std_error;
    const bool u_ok = std::abs(b.at("u") - ln2) <= 3.0 * b.at("u_se");
    const bool v_ok = std::abs(b.at("v") - 1.0) <= 3.0 * b.at("v_se");
    const bool h_ok = std::abs(b.at("h")) <= std::max(3.0 * b.at("h_se"), 1e-12);
    r.pass = total_ok && u_ok && v_ok && h_ok;
    r.detail = fmt("free %.4f+-%.4f (target %.4f), u %.4f (ln2), v %.4f (1), h %.1e (0)",
                   fe.value, fe.std_error, target_value, b.at("u"), b.at("v"), b.at("h"));
    return r;
}

CheckResult check_entropy_tilted_1d(std::uint64_t seed) {
    CheckResult r{"entropy-tilted-1d", true, "", 0.0};
    const std::size_t n = 2000;
    const DrivingMeasure lambda = lambda_1d();
    const auto kernel = std::make_shared<ConstantDensityKernel>(2.0);
    const Polytope window = Polytope::interval(0.0, 12.0);
    const auto reps = simulate_lattice_1d(window, *kernel, lambda, seed, n);
    ObservationScheme scheme{Polytope::interval(2.0, 10.0), 2.0};
    EstimatorOptions opts;
    const Estimate h =
        estimate_entropy_density(reps, density_of(kernel), lambda, scheme, opts, seed);
    const double target = rho(2.0);
    r.pass = std::abs(h.value - target) <= 3.0 * h.std_error;
    r.detail =
        fmt("entropy %.4f +- %.4f (target %.4f)", h.value, h.std_error, target);
    return r;
}

CheckResult check_gibbs_resampling(std::uint64_t seed) {
    CheckResult r{"gibbs-resampling", true, "", 0.0};
    const std::size_t n = 1000;
    DrivingMeasure lambda = lambda_iso();
    lambda.intensity = 1.5;  // ~20 inner cells per replicate, so the test has power
    const auto kernel =
        std::make_shared<MutationKernel>(0.5, BetaTable::half_one_plus_s(), lambda.colour.nu);
    const Polytope window = Polytope::box(0.0, 0.0, 6.0, 6.0);
    const Polytope sub = Polytope::box(1.0, 1.0, 5.0, 5.0);
    const Tessellation init = single_cell(window);
    std::vector<double> count_a(n), count_b(n), len_a(n), len_b(n);
    parallel_replicates(n, [&](std::size_t i) {
        const auto full = simulate(init, *kernel, lambda, {seed, i});
        const Tessellation t1 = state_at(full, 1.0);
        LeafStats sa;
        for (std::size_t c : inner_projection(t1, sub)) {
            ++sa.count;
            sa.total_boundary += perimeter(t1.cells[c].poly);
        }
        const auto redrawn = resample_inner(full, sub, *kernel, lambda, {seed ^ 0x5bd1e995, i});
        const Tessellation t2 = state_at(redrawn, 1.0);
        LeafStats sb;
        for (std::size_t c : inner_projection(t2, sub)) {
            ++sb.count;
            sb.total_boundary += perimeter(t2.cells[c].poly);
        }
        count_a[i] = static_cast<double>(sa.count);
        count_b[i] = static_cast<double>(sb.count);
        len_a[i] = sa.total_boundary;
        len_b[i] = sb.total_boundary;
    });
    const double p_count = two_sample_ks(count_a, count_b);
    const double p_len = two_sample_ks(len_a, len_b);
    r.pass = p_count > 0.01 && p_len > 0.01;
    r.detail = fmt("ks p: leaf count %.3f, boundary length %.3f (both >0.01)", p_count,
                   p_len);
    return r;
}

CheckResult check_determinism(std::uint64_t seed) {
    CheckResult r{"determinism", true, "", 0.0};
    // byte-identical event logs
    RunConfig cfg;
    cfg.dimension = 1;
    cfg.window = Polytope::interval(0.0, 10.0);
    cfg.colours = {"0"};
    cfg.lambda_spec = nlohmann::json::object();
    cfg.kernel_spec = {{"type", "stit"}};
    cfg.seed = seed;
    const DrivingMeasure l1 = lambda_1d();
    const StitKernel stit;
    const Tessellation init1 = single_cell(Polytope::interval(0.0, 10.0));
    const auto log_a = serialise_log(cfg, simulate(init1, stit, l1, {seed, 0}), 0);
    const auto log_b = serialise_log(cfg, simulate(init1, stit, l1, {seed, 0}), 0);
    const bool logs_ok = log_a == log_b;
    // planar interacting run
    const DrivingMeasure l2 = lambda_iso();
    const MutationKernel mutation(0.5, BetaTable::half_one_plus_s(), l2.colour.nu);
    const Tessellation init2 = single_cell(Polytope::box(0.0, 0.0, 3.0, 3.0));
    RunConfig cfg2 = cfg;
    cfg2.dimension = 2;
    cfg2.window = init2.cells[0].poly;
    cfg2.colours = {"-1", "+1"};
    const auto log_c = serialise_log(cfg2, simulate(init2, mutation, l2, {seed, 1}), 1);
    const auto log_d = serialise_log(cfg2, simulate(init2, mutation, l2, {seed, 1}), 1);
    const bool logs2_ok = log_c == log_d;
    // bit-identical estimates
    const auto kernel = std::make_shared<ConstantDensityKernel>(2.0);
    const auto reps = simulate_many(single_cell(Polytope::interval(0.0, 8.0)), *kernel,
                                    l1, seed, 64);
    ObservationScheme scheme{Polytope::interval(1.0, 7.0), 1.0};
    EstimatorOptions opts;
    const Estimate e1 = estimate_free_energy(reps, density_of(kernel), density_of(kernel),
                                             l1, scheme, opts, seed);
    const Estimate e2 = estimate_free_energy(reps, density_of(kernel), density_of(kernel),
                                             l1, scheme, opts, seed);
    const bool est_ok = e1.value == e2.value && e1.std_error == e2.std_error &&
                        e1.breakdown == e2.breakdown;
    r.pass = logs_ok && logs2_ok && est_ok;
    r.detail = fmt("logs %s/%s, estimates %s", logs_ok ? "identical" : "differ",
                   logs2_ok ? "identical" : "differ", est_ok ? "bit-equal" : "differ");
    return r;
}

CheckResult check_nonnegativity(std::uint64_t seed) {
    CheckResult r{"non-negativity-sweep", true, "", 0.0};
    struct Config {
        KernelPtr generator;
        KernelPtr target;
        int dim;
    };
    const auto stit = std::make_shared<StitKernel>();
    const auto c2 = std::make_shared<ConstantDensityKernel>(2.0);
    const auto c05 = std::make_shared<ConstantDensityKernel>(0.5);
    const auto sb = std::make_shared<SizeBalanceKernel>(0.5);
    const std::vector<Config> grid = {
        {stit, c2, 1}, {stit, c05, 1},  {c2, stit, 1},
        {c2, c05, 1},  {sb, c2, 1},     {stit, sb, 2},
    };
    std::string parts;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto& cfg = grid[g];
        Estimate fe;
        if (cfg.dim == 1) {
            const DrivingMeasure lambda = lambda_1d();
            const auto reps = simulate_many(single_cell(Polytope::interval(0.0, 12.0)),
                                            *cfg.generator, lambda, seed + g, 400);
            ObservationScheme scheme{Polytope::interval(2.0, 10.0), 2.0};
            fe = estimate_free_energy(reps, density_of(cfg.generator),
                                      density_of(cfg.target), lambda, scheme, {}, seed + g);
        } else {
            const DrivingMeasure lambda = lambda_iso();
            const auto reps = simulate_many(single_cell(Polytope::box(0, 0, 6, 6)),
                                            *cfg.generator, lambda, seed + g, 150);
            ObservationScheme scheme{Polytope::box(2.0, 2.0, 4.0, 4.0), 2.0};
            fe = estimate_free_energy(reps, density_of(cfg.generator),
                                      density_of(cfg.target), lambda, scheme, {}, seed + g);
        }
        const bool ok = fe.value >= -3.0 * fe.std_error;
        if (!ok)
            r.pass = false;
        parts += fmt("%s%s->%s %.3f+-%.3f", g ? "; " : "", cfg.generator->name().c_str(),
                     cfg.target->name().c_str(), fe.value, fe.std_error);
    }
    r.detail = parts;
    return r;
}

using CheckFn = std::function<CheckResult(std::uint64_t)>;

CheckResult timed(const CheckFn& fn, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r = fn(seed);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

} // namespace

std::vector<CheckResult> validate_suite(const std::string& suite, std::uint64_t seed) {
    std::vector<std::pair<std::string, CheckFn>> checks;
    const bool all = suite == "all";
    if (all || suite == "geometry")
        checks.emplace_back("geometry", check_geometry);
    if (all || suite == "laws") {
        checks.emplace_back("laws", check_poisson_1d);
        checks.emplace_back("laws", check_furry_yule);
        checks.emplace_back("laws", check_window_consistency);
    }
    if (all || suite == "thermo") {
        checks.emplace_back("thermo", check_variational_zero);
        checks.emplace_back("thermo", check_free_energy_1d);
        checks.emplace_back("thermo", check_entropy_tilted_1d);
        checks.emplace_back("thermo", check_nonnegativity);
    }
    if (all || suite == "gibbs")
        checks.emplace_back("gibbs", check_gibbs_resampling);
    if (all || suite == "determinism")
        checks.emplace_back("determinism", check_determinism);
    if (checks.empty())
        throw ConfigError("unknown validation suite: " + suite);
    std::vector<CheckResult> results;
    results.reserve(checks.size());
    for (const auto& [group, fn] : checks)
        results.push_back(timed(fn, seed));
    return results;
}

} // namespace brt
