#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace schwartz::cli {

/// One invariant evaluated at desk scale: passes when value <= tolerance.
struct Check {
  std::string suite;
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool passed = false;
};

/// identity, homomorphism, eigen, green, solver.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Runs one suite, or every suite for "all". Random probes are drawn from `seed`.
std::vector<Check> run_suite(const std::string& name, std::uint64_t seed);

std::string format_table(const std::vector<Check>& checks);
nlohmann::json checks_json(const std::vector<Check>& checks, std::uint64_t seed);

}  // namespace schwartz::cli
