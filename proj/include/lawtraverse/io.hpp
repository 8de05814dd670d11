#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lawtraverse/lawcore.hpp"
#include "lawtraverse/lawfit.hpp"
#include "lawtraverse/trajectory.hpp"
#include "lawtraverse/traverse.hpp"

namespace lawtraverse::io {

using nlohmann::json;

// Law family:
//   {"cost_unit": s, "shape_parameter": s, "laws": [{"shape": s, "a": x, "b": x, "c": x, "d": x}, ...]}
// plus an optional "shape_order": [s, ...]. Any other key is rejected.
LawFamily family_from_json(const json& j);
json to_json(const LawFamily& family);
LawFamily read_family(const std::filesystem::path& path);

// Run series: CSV with header `compute,error`, or
// {"shape": s, "cost_unit": s, "points": [[C, E], ...]}.
// CSV series take their shape label from the file stem.
RunSeries series_from_csv(std::string_view text, std::string shape, CostUnit unit = CostUnit::flops);
RunSeries series_from_json(const json& j);
RunSeries read_series(const std::filesystem::path& path);
std::string series_to_csv(const RunSeries& series);
json to_json(const RunSeries& series);

json to_json(const PowerLaw& law);
json to_json(const FitReport& report);

json to_json(const ErrorPartition& partition);
ErrorPartition partition_from_json(const json& j);
json to_json(const Schedule& schedule);
Schedule schedule_from_json(const json& j);

json to_json(const Trajectory& trajectory);
std::string trajectory_to_csv(const Trajectory& trajectory);

json to_json(const Frontier& frontier);
std::string frontier_to_csv(const Frontier& frontier);

json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Round-trip formatting for CSV cells.
std::string format_number(double v);

}  // namespace lawtraverse::io
