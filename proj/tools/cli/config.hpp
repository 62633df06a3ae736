#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "schwartz/schwartz.hpp"

namespace schwartz::cli {

/// Raised for anything wrong with the run configuration itself (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operator A diagonal in a basis v with eigenvalue system a.
struct OperatorChoice {
  std::string kind;
  SchwartzFamily<double> family;
  SymbolFunction<double> symbol;
  std::string description;
};

struct RunConfig {
  Grid<double> grid;
  std::optional<OperatorChoice> op;
  std::optional<GridDistribution<double>> datum;
  std::string datum_description;
  DivisionPolicy policy;
  std::filesystem::path output_dir;
};

/// Half extent: a number, or a string such as "pi", "2*pi", "pi/2", "3.5".
double parse_extent(const nlohmann::json& j);

std::complex<double> parse_complex(const nlohmann::json& j);

Grid<double> parse_grid(const nlohmann::json& j);
SymbolFunction<double> parse_symbol(const nlohmann::json& j, std::size_t arity);
DifferentialOperatorSpec<double> parse_differential(const nlohmann::json& terms, std::size_t dim);
OperatorChoice parse_operator(const nlohmann::json& j, const Grid<double>& grid);
GridDistribution<double> parse_datum(const nlohmann::json& j, const Grid<double>& grid,
                                     const std::filesystem::path& base, std::string& description);
DivisionPolicy parse_policy(const nlohmann::json& j);

/// Relative output directories resolve against `base` (the config file's directory).
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base);
RunConfig load_config(const std::filesystem::path& file);

}  // namespace schwartz::cli
