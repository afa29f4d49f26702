#include "brt/config.hpp"

#include <cmath>
#include <fstream>

namespace brt {

using nlohmann::json;

nlohmann::json polytope_to_json(const Polytope& p) {
    if (p.dim == 1)
        return json{{"interval", {p.lo, p.hi}}};
    json verts = json::array();
    for (const Vec2& v : p.verts)
        verts.push_back({v.x, v.y});
    return json{{"vertices", verts}};
}

Polytope polytope_from_json(const json& j, int dimension) {
    if (j.contains("interval")) {
        if (dimension != 1)
            throw ConfigError("interval window in a planar configuration");
        return Polytope::interval(j["interval"][0].get<double>(),
                                  j["interval"][1].get<double>());
    }
    if (j.contains("box")) {
        const auto& b = j["box"];
        if (dimension == 1)
            return Polytope::interval(b[0].get<double>(), b[1].get<double>());
        return Polytope::box(b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                             b[3].get<double>());
    }
    if (j.contains("vertices")) {
        if (dimension != 2)
            throw ConfigError("polygon window in a one-dimensional configuration");
        std::vector<Vec2> vs;
        for (const auto& v : j["vertices"])
            vs.push_back({v[0].get<double>(), v[1].get<double>()});
        return Polytope::polygon(std::move(vs));
    }
    throw ConfigError("window spec needs one of: interval, box, vertices");
}

namespace {

DirectionalMeasure directional_from_json(const json& j, int dimension) {
    if (dimension == 1)
        return DirectionalMeasure::one_dimensional();
    const std::string type = j.value("type", "isotropic");
    std::vector<double> thetas, weights;
    if (j.contains("atoms")) {
        for (const auto& a : j["atoms"]) {
            thetas.push_back(a.at("theta").get<double>());
            weights.push_back(a.at("weight").get<double>());
        }
    }
    if (type == "isotropic")
        return DirectionalMeasure::isotropic();
    if (type == "atoms")
        return DirectionalMeasure::atoms(std::move(thetas), std::move(weights));
    if (type == "mixture")
        return DirectionalMeasure::mixture(j.value("iso_weight", 1.0), std::move(thetas),
                                           std::move(weights));
    throw ConfigError("unknown directional type: " + type);
}

ColourKernel colour_kernel_from_json(const json& j, std::size_t n_colours) {
    if (!j.is_object() || !j.contains("type"))
        throw ConfigError("colour_kernel needs a type");
    const std::string type = j["type"].get<std::string>();
    if (type == "product") {
        auto nu = j.at("nu").get<std::vector<double>>();
        if (nu.size() != n_colours)
            throw ConfigError("colour vector length differs from the colour alphabet");
        return ColourKernel::product(std::move(nu));
    }
    if (type == "matrix") {
        auto rows = j.at("rows").get<std::vector<std::vector<double>>>();
        if (rows.size() != n_colours)
            throw ConfigError("colour matrix size differs from the colour alphabet");
        ColourKernel k = ColourKernel::matrix(std::move(rows));
        if (j.contains("per_atom")) {
            for (const auto& m : j["per_atom"])
                k.per_atom.push_back(m.get<std::vector<std::vector<double>>>());
            k.validate();
        }
        return k;
    }
    throw ConfigError("unknown colour_kernel type: " + type);
}

BetaTable beta_from_json(const json& j) {
    if (!j.is_object())
        return BetaTable::constant(1.0);
    const std::string type = j.value("type", "constant");
    if (type == "constant")
        return BetaTable::constant(j.value("value", 1.0));
    if (type == "figure2")
        return BetaTable::half_one_plus_s();
    if (type == "grid")
        return BetaTable::grid(j.at("values").get<std::vector<std::vector<double>>>());
    throw ConfigError("unknown beta type: " + type);
}

} // namespace

DrivingMeasure RunConfig::driving() const {
    DrivingMeasure m;
    m.directional = directional_from_json(lambda_spec.value("directional", json::object()),
                                          dimension);
    if (lambda_spec.contains("colour_kernel")) {
        m.colour = colour_kernel_from_json(lambda_spec["colour_kernel"], colours.size());
    } else {
        m.colour = ColourKernel::product(
            std::vector<double>(colours.size(), 1.0 / static_cast<double>(colours.size())));
    }
    m.intensity = lambda_spec.value("intensity", 1.0);
    m.validate();
    return m;
}

KernelPtr RunConfig::kernel_from(const json& spec) const {
    if (!spec.is_object() || !spec.contains("type"))
        throw ConfigError("kernel spec needs a type");
    const std::string type = spec["type"].get<std::string>();
    if (type == "stit")
        return std::make_shared<StitKernel>();
    if (type == "constant")
        return std::make_shared<ConstantDensityKernel>(spec.value("a", 1.0));
    if (type == "size_balance")
        return std::make_shared<SizeBalanceKernel>(spec.value("epsilon", 0.1));
    if (type == "unit_rate")
        return std::make_shared<UnitRateKernel>(driving());
    if (type == "mutation") {
        const DrivingMeasure lambda = driving();
        if (lambda.colour.kind != ColourKernel::Kind::Product)
            throw ConfigError("mutation kernel needs a product colour kernel");
        const std::string edge = spec.value("edge", "neutral");
        if (edge != "neutral" && edge != "neighbours")
            throw ConfigError("mutation edge rule must be neutral or neighbours");
        return std::make_shared<MutationKernel>(
            spec.value("epsilon", 0.1), beta_from_json(spec.value("beta", json())),
            lambda.colour.nu,
            edge == "neutral" ? EdgeRule::WindowNeutral : EdgeRule::NeighboursOnly);
    }
    if (type == "directional")
        return std::make_shared<DirectionalKernel>(driving());
    if (type == "block") {
        if (!spec.contains("inner"))
            throw ConfigError("block kernel needs an inner kernel");
        return std::make_shared<BlockKernel>(kernel_from(spec["inner"]),
                                             spec.value("n", 1.0),
                                             spec.value("corridor", 0.0));
    }
    throw ConfigError("unknown kernel type: " + type);
}

KernelPtr RunConfig::kernel() const { return kernel_from(kernel_spec); }

namespace {

Colour initial_colour(const InitialSpec& spec, long ix, long iy, std::size_t n_colours,
                      RngStream& rng) {
    switch (spec.colour_rule) {
    case InitialSpec::ColourRule::Checkerboard:
        return static_cast<Colour>(((ix + iy) % 2 + 2) % 2 % static_cast<long>(n_colours));
    case InitialSpec::ColourRule::Random:
        return static_cast<Colour>(rng.next_u64() % n_colours);
    case InitialSpec::ColourRule::Fixed:
    default:
        return spec.colour;
    }
}

} // namespace

Tessellation RunConfig::build_initial(RngStream& rng) const {
    Tessellation t;
    t.window = Window(window);
    switch (initial.kind) {
    case InitialSpec::Kind::SingleCell: {
        Colour col = initial.colour_rule == InitialSpec::ColourRule::Random
                         ? static_cast<Colour>(rng.next_u64() % colours.size())
                         : initial.colour;
        t.cells.push_back({window, col, 0.0});
        break;
    }
    case InitialSpec::Kind::Lattice: {
        const double a = initial.spacing;
        auto [mn, mx] = brt::bounding_box(window);
        const double shift_x = rng.next_double() * a;
        if (dimension == 1) {
            const long k0 = static_cast<long>(std::floor((mn.x - shift_x) / a)) - 1;
            const long k1 = static_cast<long>(std::ceil((mx.x - shift_x) / a)) + 1;
            for (long k = k0; k <= k1; ++k) {
                const double lo = shift_x + a * static_cast<double>(k);
                const double clo = std::max(lo, window.lo);
                const double chi = std::min(lo + a, window.hi);
                if (chi - clo > kTolGeom)
                    t.cells.push_back({Polytope::interval(clo, chi),
                                       initial_colour(initial, k, 0, colours.size(), rng),
                                       0.0});
            }
        } else {
            const double shift_y = rng.next_double() * a;
            const long kx0 = static_cast<long>(std::floor((mn.x - shift_x) / a)) - 1;
            const long kx1 = static_cast<long>(std::ceil((mx.x - shift_x) / a)) + 1;
            const long ky0 = static_cast<long>(std::floor((mn.y - shift_y) / a)) - 1;
            const long ky1 = static_cast<long>(std::ceil((mx.y - shift_y) / a)) + 1;
            for (long kx = kx0; kx <= kx1; ++kx) {
                for (long ky = ky0; ky <= ky1; ++ky) {
                    const double x0 = shift_x + a * static_cast<double>(kx);
                    const double y0 = shift_y + a * static_cast<double>(ky);
                    Polytope box = Polytope::box(x0, y0, x0 + a, y0 + a);
                    Polytope clipped;
                    if (try_intersect_convex(box, window, &clipped))
                        t.cells.push_back(
                            {std::move(clipped),
                             initial_colour(initial, kx, ky, colours.size(), rng), 0.0});
                }
            }
        }
        break;
    }
    case InitialSpec::Kind::Cells:
        t.cells = initial.cells;
        break;
    }
    for (std::size_t i = 0; i < t.cells.size(); ++i)
        t.ids.push_back(static_cast<CellId>(i));
    return t;
}

ObservationScheme RunConfig::observation_scheme() const {
    if (!observation)
        throw ConfigError("this command needs an observation block in the config");
    ObservationScheme s;
    s.observation = observation->window;
    s.margin = observation->margin;
    s.validate(Window(window));
    return s;
}

EstimatorOptions RunConfig::estimator_options() const {
    EstimatorOptions o;
    o.time_strata = time_strata;
    o.n_mc = n_mc;
    return o;
}

RunConfig parse_config(const json& j) {
    RunConfig c;
    try {
        c.dimension = j.at("dimension").get<int>();
        if (c.dimension != 1 && c.dimension != 2)
            throw ConfigError("dimension must be 1 or 2");
        c.window = polytope_from_json(j.at("window"), c.dimension);
        if (j.contains("colours"))
            c.colours = j["colours"].get<std::vector<std::string>>();
        else
            c.colours = {"0"};
        if (c.colours.empty())
            throw ConfigError("colour alphabet must not be empty");
        c.lambda_spec = j.value("lambda", json::object());
        c.kernel_spec = j.value("kernel", json{{"type", "stit"}});
        if (j.contains("initial")) {
            const json& init = j["initial"];
            const std::string type = init.value("type", "single_cell");
            if (type == "single_cell") {
                c.initial.kind = InitialSpec::Kind::SingleCell;
            } else if (type == "lattice") {
                c.initial.kind = InitialSpec::Kind::Lattice;
                c.initial.spacing = init.value("spacing", 1.0);
                if (c.initial.spacing <= 0.0)
                    throw ConfigError("lattice spacing must be positive");
            } else if (type == "cells") {
                c.initial.kind = InitialSpec::Kind::Cells;
                for (const auto& cj : init.at("cells"))
                    c.initial.cells.push_back({polytope_from_json(cj, c.dimension),
                                               cj.value("colour", 0), 0.0});
            } else {
                throw ConfigError("unknown initial type: " + type);
            }
            if (init.contains("colour")) {
                const json& col = init["colour"];
                if (col.is_string()) {
                    const std::string rule = col.get<std::string>();
                    if (rule == "checkerboard")
                        c.initial.colour_rule = InitialSpec::ColourRule::Checkerboard;
                    else if (rule == "random")
                        c.initial.colour_rule = InitialSpec::ColourRule::Random;
                    else
                        throw ConfigError("unknown colour rule: " + rule);
                } else {
                    c.initial.colour = col.get<Colour>();
                    if (c.initial.colour < 0 ||
                        static_cast<std::size_t>(c.initial.colour) >= c.colours.size())
                        throw ConfigError("initial colour outside the alphabet");
                }
            }
        }
        c.t_end = j.value("t_end", 1.0);
        if (!(c.t_end >= 0.0 && c.t_end <= 1.0))
            throw ConfigError("t_end must lie in [0,1]");
        c.seed = j.value("seed", std::uint64_t{0});
        c.replicates = j.value("replicates", std::size_t{1});
        c.event_cap = j.value("event_cap", std::uint64_t{10'000'000});
        if (j.contains("observation")) {
            ObservationSpec obs;
            obs.window = polytope_from_json(j["observation"].at("window"), c.dimension);
            obs.margin = j["observation"].value("margin", 0.0);
            c.observation = obs;
        }
        if (j.contains("estimator")) {
            c.time_strata = j["estimator"].value("time_strata", std::size_t{32});
            c.n_mc = j["estimator"].value("n_mc", std::size_t{64});
        }
        if (j.contains("output")) {
            c.log_path = j["output"].value("log", "");
            c.csv_path = j["output"].value("csv", "");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
    // constructing the measure and kernel validates their fragments
    const DrivingMeasure lambda = c.driving();
    const KernelPtr kernel = c.kernel();
    if (c.observation && c.observation->margin < kernel->range() &&
        std::isfinite(kernel->range()))
        throw ConfigError("observation margin must be at least the kernel range");
    (void)lambda;
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

nlohmann::json serialise_config(const RunConfig& c) {
    json j;
    j["dimension"] = c.dimension;
    j["window"] = polytope_to_json(c.window);
    j["colours"] = c.colours;
    j["lambda"] = c.lambda_spec;
    j["kernel"] = c.kernel_spec;
    json init;
    switch (c.initial.kind) {
    case InitialSpec::Kind::SingleCell:
        init["type"] = "single_cell";
        break;
    case InitialSpec::Kind::Lattice:
        init["type"] = "lattice";
        init["spacing"] = c.initial.spacing;
        break;
    case InitialSpec::Kind::Cells: {
        init["type"] = "cells";
        json cells = json::array();
        for (const Cell& cell : c.initial.cells) {
            json cj = polytope_to_json(cell.poly);
            cj["colour"] = cell.colour;
            cells.push_back(cj);
        }
        init["cells"] = cells;
        break;
    }
    }
    switch (c.initial.colour_rule) {
    case InitialSpec::ColourRule::Checkerboard:
        init["colour"] = "checkerboard";
        break;
    case InitialSpec::ColourRule::Random:
        init["colour"] = "random";
        break;
    case InitialSpec::ColourRule::Fixed:
        init["colour"] = c.initial.colour;
        break;
    }
    j["initial"] = init;
    j["t_end"] = c.t_end;
    j["seed"] = c.seed;
    j["replicates"] = c.replicates;
    j["event_cap"] = c.event_cap;
    if (c.observation) {
        j["observation"] = {{"window", polytope_to_json(c.observation->window)},
                            {"margin", c.observation->margin}};
    }
    j["estimator"] = {{"time_strata", c.time_strata}, {"n_mc", c.n_mc}};
    if (!c.log_path.empty() || !c.csv_path.empty())
        j["output"] = {{"log", c.log_path}, {"csv", c.csv_path}};
    return j;
}

} // namespace brt
