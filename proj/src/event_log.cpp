#include "brt/event_log.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace brt {

using nlohmann::json;

std::string serialise_log(const RunConfig& config, const BranchingTessellation& bt,
                          std::uint64_t replicate) {
    std::ostringstream out;
    json header{{"schema_version", kSchemaVersion},
                {"dimension", config.dimension},
                {"window", polytope_to_json(config.window)},
                {"colours", config.colours},
                {"seed", config.seed},
                {"replicate", replicate},
                {"kernel", config.kernel_spec},
                {"lambda", config.lambda_spec}};
    out << header.dump() << "\n";
    json cells = json::array();
    for (CellId id : bt.initial_ids) {
        json cj = polytope_to_json(bt.arena[id].poly);
        cj["id"] = id;
        cj["colour"] = bt.arena[id].colour;
        cj["birth_time"] = 0.0;
        cells.push_back(cj);
    }
    out << json{{"cells", cells}}.dump() << "\n";
    for (const DivisionEvent& ev : bt.events) {
        const Hyperplane& eta = ev.cut.spatial;
        json u = eta.dim == 1 ? json::array({1.0})
                              : json::array({std::cos(eta.theta), std::sin(eta.theta)});
        json line{{"s", ev.s},
                  {"parent", ev.parent},
                  {"u", u},
                  {"r", eta.r},
                  {"col_plus", ev.cut.colour_plus},
                  {"col_minus", ev.cut.colour_minus},
                  {"child_plus", ev.child_plus},
                  {"child_minus", ev.child_minus}};
        out << line.dump() << "\n";
    }
    return out.str();
}

void write_log(const std::string& path, const RunConfig& config,
               const BranchingTessellation& bt, std::uint64_t replicate) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open log for writing: " + path);
    out << serialise_log(config, bt, replicate);
}

EventLog parse_log(std::istream& in) {
    EventLog log;
    std::string line;
    if (!std::getline(in, line))
        throw LogFormatError("empty log");
    try {
        log.header = json::parse(line);
        const std::string version = log.header.value("schema_version", "");
        const std::string major = version.substr(0, version.find('.'));
        const std::string expected =
            std::string(kSchemaVersion).substr(0, std::string(kSchemaVersion).find('.'));
        if (major != expected)
            throw LogFormatError("unsupported log schema version: " + version);
        const int dim = log.header.at("dimension").get<int>();
        log.history.window = Window(polytope_from_json(log.header.at("window"), dim));

        if (!std::getline(in, line))
            throw LogFormatError("log ends before the initial tessellation");
        const json initial = json::parse(line);
        for (const auto& cj : initial.at("cells")) {
            const CellId id = cj.at("id").get<CellId>();
            if (log.history.arena.size() <= id)
                log.history.arena.resize(id + 1);
            log.history.arena[id] = {polytope_from_json(cj, dim),
                                     cj.value("colour", 0), 0.0};
            log.history.initial_ids.push_back(id);
        }
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            const json ej = json::parse(line);
            DivisionEvent ev;
            ev.s = ej.at("s").get<double>();
            ev.parent = ej.at("parent").get<CellId>();
            const auto u = ej.at("u").get<std::vector<double>>();
            ev.cut.spatial = dim == 1
                                 ? Hyperplane::point(ej.at("r").get<double>())
                                 : Hyperplane::line(std::atan2(u.at(1), u.at(0)),
                                                    ej.at("r").get<double>());
            ev.cut.colour_plus = ej.at("col_plus").get<Colour>();
            ev.cut.colour_minus = ej.at("col_minus").get<Colour>();
            ev.child_plus = ej.at("child_plus").get<CellId>();
            ev.child_minus = ej.at("child_minus").get<CellId>();
            // rebuild the children by replaying the split
            const Cell& parent = log.history.cell(ev.parent);
            auto [plus, minus] = split(parent.poly, ev.cut.spatial);
            const CellId top = std::max(ev.child_plus, ev.child_minus);
            if (log.history.arena.size() <= top)
                log.history.arena.resize(top + 1);
            log.history.arena[ev.child_plus] = {std::move(plus), ev.cut.colour_plus, ev.s};
            log.history.arena[ev.child_minus] = {std::move(minus), ev.cut.colour_minus, ev.s};
            log.history.events.push_back(ev);
        }
    } catch (const json::exception& e) {
        throw LogFormatError(std::string("malformed log: ") + e.what());
    }
    return log;
}

EventLog load_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw LogFormatError("cannot open log: " + path);
    return parse_log(in);
}

} // namespace brt
