#pragma once

#include <string>

#include "fraccap/geometry.hpp"
#include "json.hpp"

namespace fraccap {

// Region JSON: {"shape":"halfspace"}, {"shape":"ball","r":1.0,"c":[0,0]},
// {"shape":"sector","alpha":0.0,"beta":1.57,"apex":[0,0]}, and combinators
// {"op":"complement"|"intersect"|"union","args":[...]}.
Region region_from_json(const nlohmann::json& j);
nlohmann::json region_to_json(const Region& region);
Region load_region(const std::string& path);

// GridSet file: one-line JSON header, '\n', then the occupancy bits packed
// row major (axis 0 slowest), LSB first within each byte.
void save_gridset(const GridSet& set, const std::string& path);
GridSet load_gridset(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace fraccap
