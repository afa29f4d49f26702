#pragma once

#include <iosfwd>
#include <string>

#include "brt/config.hpp"
#include "brt/tessellation.hpp"

namespace brt {

// JSONL event-log format: header line, initial-tessellation line, then one
// line per division event in time order.
struct EventLog {
    nlohmann::json header;
    BranchingTessellation history;
};

std::string serialise_log(const RunConfig& config, const BranchingTessellation& bt,
                          std::uint64_t replicate);
void write_log(const std::string& path, const RunConfig& config,
               const BranchingTessellation& bt, std::uint64_t replicate);

EventLog parse_log(std::istream& in);
EventLog load_log(const std::string& path);

} // namespace brt
