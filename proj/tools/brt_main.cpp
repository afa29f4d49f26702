#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "brt/config.hpp"
#include "brt/estimators.hpp"
#include "brt/event_log.hpp"
#include "brt/parallel.hpp"
#include "brt/render.hpp"
#include "brt/simulator.hpp"
#include "brt/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;
constexpr int kExitDiverged = 4;

std::string replicate_path(const std::string& base, std::size_t replicate,
                           std::size_t total) {
    if (total <= 1)
        return base;
    const std::size_t dot = base.rfind('.');
    if (dot == std::string::npos || dot == 0)
        return base + "." + std::to_string(replicate);
    return base.substr(0, dot) + "." + std::to_string(replicate) + base.substr(dot);
}

std::vector<brt::BranchingTessellation> run_replicates(const brt::RunConfig& cfg) {
    const brt::DrivingMeasure lambda = cfg.driving();
    const brt::KernelPtr kernel = cfg.kernel();
    brt::SimulateOptions opts;
    opts.t_end = cfg.t_end;
    opts.event_cap = cfg.event_cap;
    std::vector<brt::BranchingTessellation> reps(cfg.replicates);
    brt::parallel_replicates(cfg.replicates, [&](std::size_t i) {
        brt::RngStream init_rng =
            brt::RngStream::derive(cfg.seed, {i, brt::stream_tag::initial_tessellation});
        const brt::Tessellation initial = cfg.build_initial(init_rng);
        reps[i] = brt::simulate(initial, *kernel, lambda, {cfg.seed, i}, opts);
    });
    return reps;
}

int cmd_simulate(const std::string& config_path, std::int64_t seed_override,
                 const std::string& out_override) {
    brt::RunConfig cfg = brt::load_config(config_path);
    if (seed_override >= 0)
        cfg.seed = static_cast<std::uint64_t>(seed_override);
    std::string out = !out_override.empty() ? out_override : cfg.log_path;
    if (out.empty())
        throw brt::ConfigError("no output log path (config output.log or --out)");
    const auto reps = run_replicates(cfg);
    for (std::size_t i = 0; i < reps.size(); ++i)
        brt::write_log(replicate_path(out, i, reps.size()), cfg, reps[i], i);
    return kExitOk;
}

void write_csv(std::ostream& out,
               const std::vector<std::tuple<std::string, brt::Estimate, std::string>>& rows) {
    out << "name,value,std_error,n,notes\n";
    for (const auto& [name, est, notes] : rows) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%zu,%s\n", name.c_str(), est.value,
                      est.std_error, est.n, notes.c_str());
        out << buf;
    }
}

int cmd_estimate(const std::string& config_path, const std::string& functional,
                 const std::string& target_kernel_json, std::int64_t seed_override,
                 const std::string& out_override) {
    brt::RunConfig cfg = brt::load_config(config_path);
    if (seed_override >= 0)
        cfg.seed = static_cast<std::uint64_t>(seed_override);
    const brt::DrivingMeasure lambda = cfg.driving();
    const brt::KernelPtr generator = cfg.kernel();
    brt::KernelPtr target = generator;
    if (!target_kernel_json.empty())
        target = cfg.kernel_from(nlohmann::json::parse(target_kernel_json));
    const brt::ObservationScheme scheme = cfg.observation_scheme();
    const brt::EstimatorOptions opts = cfg.estimator_options();
    const auto reps = run_replicates(cfg);
    const brt::DensityFn phi = brt::density_of(generator);
    const brt::DensityFn psi = brt::density_of(target);

    std::vector<std::tuple<std::string, brt::Estimate, std::string>> rows;
    const std::string note = "target=" + target->name();
    if (functional == "h") {
        rows.emplace_back("entropy_density",
                          brt::estimate_entropy_density(reps, phi, lambda, scheme, opts,
                                                        cfg.seed),
                          "generator=" + generator->name());
    } else if (functional == "u") {
        rows.emplace_back("inner_energy", brt::estimate_u_in(reps, psi, scheme), note);
    } else if (functional == "v") {
        rows.emplace_back("inner_pressure",
                          brt::estimate_v_in(reps, psi, lambda, scheme, opts, cfg.seed),
                          note);
    } else if (functional == "free") {
        brt::Estimate fe =
            brt::estimate_free_energy(reps, phi, psi, lambda, scheme, opts, cfg.seed);
        const auto& b = fe.breakdown;
        rows.emplace_back("free_energy", fe, note);
        brt::Estimate part;
        part.n = fe.n;
        part.value = b.at("h");
        part.std_error = b.at("h_se");
        rows.emplace_back("entropy_density", part, note);
        part.value = b.at("u");
        part.std_error = b.at("u_se");
        rows.emplace_back("inner_energy", part, note);
        part.value = b.at("v");
        part.std_error = b.at("v_se");
        rows.emplace_back("inner_pressure", part, note);
        part.value = b.at("direct");
        part.std_error = b.at("direct_se");
        rows.emplace_back("free_energy_direct", part, note);
    } else if (functional == "intensity") {
        rows.emplace_back("hitting_intensity", brt::hitting_intensity(reps, scheme), "");
    } else {
        throw brt::ConfigError("unknown functional: " + functional +
                               " (expected h|u|v|free|intensity)");
    }
    std::string out = !out_override.empty() ? out_override : cfg.csv_path;
    if (out.empty()) {
        write_csv(std::cout, rows);
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f)
            throw brt::Error("cannot open csv output: " + out);
        write_csv(f, rows);
    }
    return kExitOk;
}

int cmd_render(const std::string& log_path, double time, const std::string& out_path,
               bool allow_1d, double stroke, bool stamp) {
    const brt::EventLog log = brt::load_log(log_path);
    const int dim = log.history.window.dim();
    if (dim == 1 && !allow_1d) {
        std::cerr << "error: log is one-dimensional; pass --allow-1d for a bar rendering\n";
        return kExitConfig;
    }
    const brt::Tessellation t = brt::state_at(log.history, time);
    std::size_t n_colours = 1;
    if (log.header.contains("colours"))
        n_colours = log.header["colours"].size();
    brt::RenderStyle style = brt::RenderStyle::defaults(n_colours);
    style.stroke_width = stroke;
    style.time_stamp = stamp;
    const std::string svg = brt::render_svg(t, style, time);
    std::ofstream f(out_path, std::ios::binary);
    if (!f)
        throw brt::Error("cannot open svg output: " + out_path);
    f << svg;
    return kExitOk;
}

int cmd_validate(const std::string& suite, std::uint64_t seed) {
    const auto results = brt::validate_suite(suite, seed);
    bool all_pass = true;
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        std::printf("[%s] %-24s %s  [%.1fs]\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str(), r.seconds);
    }
    std::printf("%zu checks, %s\n", results.size(), all_pass ? "all passed" : "FAILURES");
    return all_pass ? kExitOk : kExitValidationFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"branching random tessellation simulator and estimator"};
    app.require_subcommand(1);

    std::string config_path, out_path, functional = "free", target_kernel, log_path;
    std::string suite = "all";
    std::int64_t seed_override = -1;
    std::uint64_t validate_seed = 20240901;
    double time = 1.0, stroke = 0.01;
    bool allow_1d = false, stamp = false;

    auto* sim = app.add_subcommand("simulate", "run replicates and write event logs");
    sim->add_option("--config", config_path, "config JSON path")->required();
    sim->add_option("--seed", seed_override, "override the config seed");
    sim->add_option("--out", out_path, "output log path (JSONL)");

    auto* est = app.add_subcommand("estimate", "estimate thermodynamic functionals");
    est->add_option("--config", config_path, "config JSON path")->required();
    est->add_option("--functional", functional, "h|u|v|free|intensity");
    est->add_option("--target-kernel", target_kernel, "kernel fragment JSON");
    est->add_option("--seed", seed_override, "override the config seed");
    est->add_option("--out", out_path, "output CSV path");

    auto* ren = app.add_subcommand("render", "render a tessellation frame to SVG");
    ren->add_option("--log", log_path, "event log path")->required();
    ren->add_option("--time", time, "frame time in [0,1]");
    ren->add_option("--out", out_path, "output SVG path")->required();
    ren->add_flag("--allow-1d", allow_1d, "render 1d logs as interval bars");
    ren->add_option("--stroke-width", stroke, "edge stroke width");
    ren->add_flag("--time-stamp", stamp, "overlay the frame time");

    auto* val = app.add_subcommand("validate", "run a validation suite");
    val->add_option("--suite", suite, "geometry|laws|gibbs|thermo|determinism|all");
    val->add_option("--seed", validate_seed, "suite seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(config_path, seed_override, out_path);
        if (est->parsed())
            return cmd_estimate(config_path, functional, target_kernel, seed_override,
                                out_path);
        if (ren->parsed())
            return cmd_render(log_path, time, out_path, allow_1d, stroke, stamp);
        if (val->parsed())
            return cmd_validate(suite, validate_seed);
    } catch (const brt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const brt::InsufficientMargin& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const brt::BudgetExceeded& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const brt::Diverged& e) {
        std::cerr << "diverged: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidationFailure;
    }
    return kExitOk;
}
