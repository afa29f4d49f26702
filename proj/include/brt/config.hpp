#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "brt/driving.hpp"
#include "brt/estimators.hpp"
#include "brt/kernels.hpp"
#include "brt/tessellation.hpp"

namespace brt {

inline constexpr const char* kSchemaVersion = "1.0";

// Initial-tessellation specification: a single cell filling the window, a
// unit lattice with a uniform random shift, or an explicit cell list.
struct InitialSpec {
    enum class Kind { SingleCell, Lattice, Cells } kind = Kind::SingleCell;
    double spacing = 1.0;                    // Lattice
    enum class ColourRule { Fixed, Checkerboard, Random } colour_rule = ColourRule::Fixed;
    Colour colour = 0;
    std::vector<Cell> cells;                 // Cells
};

struct ObservationSpec {
    Polytope window;
    double margin = 0.0;
};

struct RunConfig {
    int dimension = 2;
    Polytope window;
    std::vector<std::string> colours;
    nlohmann::json lambda_spec;
    nlohmann::json kernel_spec;
    InitialSpec initial;
    double t_end = 1.0;
    std::uint64_t seed = 0;
    std::size_t replicates = 1;
    std::optional<ObservationSpec> observation;
    std::uint64_t event_cap = 10'000'000;
    std::size_t time_strata = 32;
    std::size_t n_mc = 64;
    std::string log_path;
    std::string csv_path;

    DrivingMeasure driving() const;
    KernelPtr kernel() const;
    KernelPtr kernel_from(const nlohmann::json& spec) const;
    Tessellation build_initial(RngStream& rng) const;
    ObservationScheme observation_scheme() const;
    EstimatorOptions estimator_options() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json serialise_config(const RunConfig& c);

// JSON <-> geometry helpers shared with the event log.
nlohmann::json polytope_to_json(const Polytope& p);
Polytope polytope_from_json(const nlohmann::json& j, int dimension);

} // namespace brt
