#include "cli/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace schwartz::cli {

using nlohmann::json;

std::string format_double(double x) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw std::runtime_error("format_double: buffer too small");
  return {buf.data(), ptr};
}

std::string to_csv(const GridDistribution<double>& u) {
  const Grid<double>& g = u.grid();
  std::string out;
  for (std::size_t i = 0; i < g.dim(); ++i) out += "x" + std::to_string(i) + ",";
  out += "re,im\n";
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Point<double> x = g.point(k);
    for (Eigen::Index i = 0; i < x.size(); ++i) out += format_double(x[i]) + ",";
    // Print -0 as 0 so that outputs do not depend on the sign of zero.
    out += format_double(u[k].real() + 0.0) + "," + format_double(u[k].imag() + 0.0) + "\n";
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const GridDistribution<double>& u) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << to_csv(u);
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

json grid_json(const Grid<double>& g) {
  json j;
  j["dim"] = g.dim();
  j["counts"] = g.counts();
  j["half_extents"] = g.half_extents();
  json spacing = json::array(), dual = json::array();
  for (std::size_t i = 0; i < g.dim(); ++i) {
    spacing.push_back(g.spacing(i));
    dual.push_back(g.dual_spacing(i));
  }
  j["spacing"] = spacing;
  j["dual_spacing"] = dual;
  j["dual_half_extents"] = dual_grid(g).half_extents();
  return j;
}

json policy_json(const DivisionPolicy& p) {
  json j;
  if (std::isinf(p.zero_threshold))
    j["zero_threshold"] = "inf";
  else
    j["zero_threshold"] = p.zero_threshold;
  j["relative_zero_threshold"] = p.relative_zero_threshold;
  j["residual_threshold"] = p.residual_threshold;
  return j;
}

json location_json(const IndexLocation& loc) {
  return {{"flat", loc.flat}, {"p", loc.point}};
}

}  // namespace schwartz::cli
