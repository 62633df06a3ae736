#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "schwartz/schwartz.hpp"

namespace schwartz::cli {

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

/// CSV with header x0[,x1...],re,im, one row per node in flat order.
std::string to_csv(const GridDistribution<double>& u);
void write_csv(const std::filesystem::path& path, const GridDistribution<double>& u);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Box, resolution and the matching dual grid.
nlohmann::json grid_json(const Grid<double>& g);
nlohmann::json policy_json(const DivisionPolicy& p);
nlohmann::json location_json(const IndexLocation& loc);

}  // namespace schwartz::cli
